#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "relaynet/search.hpp"

using namespace relaynet;

namespace {

Route route_of(std::initializer_list<int> ids) { return Route{std::vector<int>(ids)}; }

// Naive enumeration oracle: all ordered relay subsets via next_permutation.
std::set<std::vector<int>> enumerate_naive(int d) {
    std::set<std::vector<int>> out;
    std::vector<int> relays;
    for (int id = 2; id < d; ++id)
        relays.push_back(id);
    const int n = static_cast<int>(relays.size());
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> subset;
        for (int k = 0; k < n; ++k)
            if (mask & (1u << k))
                subset.push_back(relays[static_cast<std::size_t>(k)]);
        std::sort(subset.begin(), subset.end());
        do {
            std::vector<int> route = {1};
            route.insert(route.end(), subset.begin(), subset.end());
            route.push_back(d);
            out.insert(route);
        } while (std::next_permutation(subset.begin(), subset.end()));
    }
    return out;
}

}  // namespace

TEST_CASE("route enumeration matches the closed form and the naive oracle") {
    CHECK(route_count(2) == 1);
    CHECK(route_count(4) == 5);
    CHECK(route_count(8) == 1957);

    for (int d = 2; d <= 8; ++d) {
        std::set<std::vector<int>> seen;
        std::uint64_t emitted = 0;
        for_each_route(d, [&](const Route &r) {
            ++emitted;
            CHECK(seen.insert(r.nodes).second);  // no duplicates
        });
        CHECK(emitted == route_count(d));
        CHECK(seen == enumerate_naive(d));
    }
}

TEST_CASE("enumeration of the 4-node fixture lists all five routes") {
    const std::vector<Route> routes = enumerate_routes(fixtures::net_a());
    std::set<std::vector<int>> seen;
    for (const Route &r : routes)
        seen.insert(r.nodes);
    CHECK(seen == std::set<std::vector<int>>{
                      {1, 4}, {1, 2, 4}, {1, 3, 4}, {1, 2, 3, 4}, {1, 3, 2, 4}});
}

TEST_CASE("brute force on the 4-node fixture") {
    const Network net = fixtures::net_a();

    const SearchResult ind =
        brute_force_optimum(net, Strategy::DF, CodewordMode::independent);
    CHECK(ind.max_rate == doctest::Approx(1.16295).epsilon(1e-4));
    CHECK(std::find(ind.best_routes.begin(), ind.best_routes.end(), route_of({1, 2, 4})) !=
          ind.best_routes.end());
    CHECK(ind.routes_evaluated == 5);

    const SearchResult corr =
        brute_force_optimum(net, Strategy::DF, CodewordMode::correlated);
    CHECK(corr.max_rate == doctest::Approx(1.31576).epsilon(1e-3));
    REQUIRE(corr.best_routes.size() == 1);
    CHECK(corr.best_routes[0] == route_of({1, 2, 3, 4}));

    const SearchResult sh = brute_force_optimum(net, Strategy::SH, CodewordMode::independent);
    CHECK(sh.best_routes == std::vector<Route>{route_of({1, 4})});
    CHECK(sh.max_rate == rate_sh(net).supported_rate);
}

TEST_CASE("brute force guard refuses large networks without an override") {
    Network net;
    for (int id = 1; id <= 13; ++id)
        net.nodes.push_back({id, static_cast<double>(id), 0.0, 1.0, 1.0});
    net = validate_network(std::move(net));
    CHECK_THROWS_AS(brute_force_optimum(net, Strategy::MH, CodewordMode::independent),
                    TooLargeError);
}

TEST_CASE("prefix-cached DF-independent brute force is bit-identical to naive evaluation") {
    std::mt19937_64 rng(55);
    for (int rep = 0; rep < 25; ++rep) {
        const int d = 3 + static_cast<int>(rng() % 4);
        const Network net = gen_square_network(d, rng());
        const PowerMatrix pm = power_matrix(net);
        const SearchResult fast =
            brute_force_optimum(net, Strategy::DF, CodewordMode::independent);

        double naive_max = -1.0;
        std::vector<Route> naive_best;
        for_each_route(d, [&](const Route &r) {
            const double rate = rate_df_independent(net, pm, r).supported_rate;
            if (rate > naive_max) {
                naive_max = rate;
                naive_best = {r};
            } else if (rate == naive_max) {
                naive_best.push_back(r);
            }
        });
        std::sort(naive_best.begin(), naive_best.end());
        CHECK(fast.max_rate == naive_max);  // exact, not approximate
        CHECK(fast.best_routes == naive_best);
    }
}

TEST_CASE("nearest neighbor sets on the fixtures") {
    const Network a = fixtures::net_a();
    CHECK(nearest_neighbor_set(a, Route{{1}}) == std::vector<int>{2});
    CHECK(nearest_neighbor_set(a, Route{{1, 2}}) == std::vector<int>{3, 4});

    const Network b = fixtures::net_b();
    CHECK(nearest_neighbor_set(b, Route{{1, 2}}) == std::vector<int>{3});
}

TEST_CASE("NNA on the fixtures") {
    const NnaOutcome a = run_nna(fixtures::net_a());
    CHECK_FALSE(a.completed);
    CHECK(a.route == Route{{1, 2}});
    CHECK(a.tie_set == std::vector<int>{3, 4});

    const NnaOutcome b = run_nna(fixtures::net_b());
    CHECK(b.completed);
    CHECK(b.route == fixtures::full_route(fixtures::net_b()));

    Network two;
    two.nodes = {{1, 0, 0, 1, 1}, {2, 1, 0, 1, 1}};
    const NnaOutcome direct = run_nna(validate_network(two));
    CHECK(direct.completed);
    CHECK(direct.route == Route{{1, 2}});
}

TEST_CASE("NNSA candidates on the fixtures") {
    const CandidateSet a = run_nnsa(fixtures::net_a());
    REQUIRE(a.candidates.size() == 2);
    CHECK(a.candidates[0] == route_of({1, 2, 3, 4}));
    CHECK(a.candidates[1] == route_of({1, 2, 4}));

    const CandidateSet b = run_nnsa(fixtures::net_b());
    REQUIRE(b.candidates.size() == 1);
    CHECK(b.candidates[0] == fixtures::full_route(fixtures::net_b()));

    Network two;
    two.nodes = {{1, 0, 0, 1, 1}, {2, 1, 0, 1, 1}};
    const CandidateSet direct = run_nnsa(validate_network(two));
    REQUIRE(direct.candidates.size() == 1);
    CHECK(direct.candidates[0] == Route{{1, 2}});
}

TEST_CASE("every NNSA candidate prefix respects nearest-neighbor-set membership") {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 30; ++rep) {
        const int d = 4 + static_cast<int>(rng() % 4);
        const Network net = gen_square_network(d, rng());
        const PowerMatrix pm = power_matrix(net);
        const CandidateSet cands = run_nnsa(net, pm);

        std::map<std::vector<int>, std::vector<int>> branchings;
        for (const auto &rec : cands.provenance)
            branchings[rec.prefix.nodes] = rec.neighbors;
        for (const Route &cand : cands.candidates) {
            for (int pos = 1; pos < cand.length(); ++pos) {
                const std::vector<int> prefix(cand.nodes.begin(), cand.nodes.begin() + pos);
                const auto it = branchings.find(prefix);
                REQUIRE(it != branchings.end());
                const int appended = cand.nodes[static_cast<std::size_t>(pos)];
                CHECK(std::find(it->second.begin(), it->second.end(), appended) !=
                      it->second.end());
                // Provenance must match an independent recomputation.
                CHECK(it->second == nearest_neighbor_set(net, pm, Route{prefix}));
            }
        }
    }
}

TEST_CASE("best_candidates on the 4-node fixture") {
    const Network net = fixtures::net_a();
    const CandidateSet cands = run_nnsa(net);

    const SearchResult corr = best_candidates(net, cands, CodewordMode::correlated);
    REQUIRE(corr.best_routes.size() == 1);
    CHECK(corr.best_routes[0] == route_of({1, 2, 3, 4}));
    CHECK(corr.max_rate == doctest::Approx(1.31576).epsilon(1e-3));

    const SearchResult ind = best_candidates(net, cands, CodewordMode::independent);
    REQUIRE(ind.best_routes.size() == 1);
    CHECK(ind.best_routes[0] == route_of({1, 2, 4}));
    CHECK(ind.max_rate == doctest::Approx(1.16295).epsilon(1e-4));

    CandidateSet single;
    single.candidates = {route_of({1, 4})};
    const SearchResult only = best_candidates(net, single, CodewordMode::independent);
    CHECK(only.best_routes == std::vector<Route>{route_of({1, 4})});

    CHECK_THROWS_AS(best_candidates(net, CandidateSet{}, CodewordMode::independent),
                    std::invalid_argument);
}

TEST_CASE("MSPA routes and update-count scaling") {
    CHECK(run_mspa(fixtures::net_a()).route == route_of({1, 2, 4}));
    CHECK(run_mspa(fixtures::net_b()).route == fixtures::full_route(fixtures::net_b()));

    Network two;
    two.nodes = {{1, 0, 0, 1, 1}, {2, 1, 0, 1, 1}};
    CHECK(run_mspa(validate_network(two)).route == Route{{1, 2}});

    // Update counts grow quadratically: u(D)/D^2 stays within a narrow band.
    std::vector<double> normalized;
    for (int d : {8, 16, 32}) {
        const Network net = gen_square_network(d, 9001);
        normalized.push_back(static_cast<double>(run_mspa(net).update_count) /
                             static_cast<double>(d * d));
    }
    const double lo = *std::min_element(normalized.begin(), normalized.end());
    const double hi = *std::max_element(normalized.begin(), normalized.end());
    CHECK(hi / lo <= 2.5);
}

TEST_CASE("MSPA ties break to the smallest node id") {
    // Nodes 2 and 3 are mirror images across the source-destination line.
    Network net;
    net.nodes = {{1, 0, 0, 1, 1},
                 {2, 1, 1, 1, 1},
                 {3, 1, -1, 1, 1},
                 {4, 3, 0, 1, 1}};
    net = validate_network(std::move(net));
    const Route route = run_mspa(net).route;
    REQUIRE(route.length() >= 2);
    CHECK(route.nodes[1] == 2);
}

TEST_CASE("pruning drops removable relays and keeps the target rate") {
    const Network net = fixtures::net_a();
    const double target = rate_df_independent(net, route_of({1, 2, 3, 4})).supported_rate;
    const Route pruned = prune_shortest(net, route_of({1, 2, 3, 4}), target,
                                        CodewordMode::independent);
    CHECK(pruned == route_of({1, 2, 4}));
    CHECK(rate_df_independent(net, pruned).supported_rate >= target);

    CHECK(prune_shortest(net, route_of({1, 4}), 0.1, CodewordMode::independent) ==
          route_of({1, 4}));
    CHECK_THROWS_AS(prune_shortest(net, route_of({1, 4}), 10.0, CodewordMode::independent),
                    TargetUnreachableError);
}

TEST_CASE("pruned routes are single-removal minimal") {
    std::mt19937_64 rng(88);
    for (int rep = 0; rep < 30; ++rep) {
        const int d = 5 + static_cast<int>(rng() % 3);
        const Network net = gen_square_network(d, rng());
        const Route full = fixtures::full_route(net);
        const double target = rate_df_independent(net, full).supported_rate;
        const Route pruned =
            prune_shortest(net, full, target, CodewordMode::independent);
        CHECK(rate_df_independent(net, pruned).supported_rate >= target);
        for (int pos = 2; pos < pruned.length(); ++pos) {
            Route shorter = pruned;
            shorter.nodes.erase(shorter.nodes.begin() + (pos - 1));
            CHECK(rate_df_independent(net, shorter).supported_rate < target);
        }
    }
}

TEST_CASE("appending the dominant node is never worse than any alternative") {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 100; ++rep) {
        const int d = 4 + static_cast<int>(rng() % 4);
        const Network net = gen_square_network(d, rng());
        const PowerMatrix pm = power_matrix(net);
        const int prefix_len = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(d - 2));
        Route partial;
        partial.nodes.push_back(1);
        std::vector<int> pool;
        for (int id = 2; id <= d; ++id)
            pool.push_back(id);
        std::shuffle(pool.begin(), pool.end(), rng);
        for (int k = 0; k < prefix_len - 1; ++k)
            partial.nodes.push_back(pool[static_cast<std::size_t>(k)]);

        const std::vector<int> neighbors = nearest_neighbor_set(net, pm, partial);
        if (neighbors.size() != 1)
            continue;  // the claim needs a unique dominant node

        // With a shared prefix only the appended node's reception rate
        // differs, so comparing those rates compares the supported rates.
        auto reception_rate = [&](int appended) {
            double sum = 0.0;
            for (int m : partial.nodes)
                sum += pm.at(m, appended);
            return awgn_rate(sum / net.node(appended).noise_power);
        };
        const double best_rate = reception_rate(neighbors[0]);
        for (int id = 2; id <= d; ++id) {
            if (id == neighbors[0] ||
                std::find(partial.nodes.begin(), partial.nodes.end(), id) !=
                    partial.nodes.end())
                continue;
            CHECK(best_rate >= reception_rate(id) - 1e-15);
        }
    }
}
