#ifndef RELAYNET_SEARCH_HPP
#define RELAYNET_SEARCH_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relaynet/network.hpp"
#include "relaynet/rate.hpp"

namespace relaynet {

class TooLargeError : public std::runtime_error {
  public:
    explicit TooLargeError(const std::string &msg) : std::runtime_error(msg) {}
};

class TargetUnreachableError : public std::runtime_error {
  public:
    explicit TargetUnreachableError(const std::string &msg) : std::runtime_error(msg) {}
};

// Relative tolerance for received-power dominance comparisons. Exact ties in
// symmetric topologies must compare deterministically.
inline constexpr double kDominanceTol = 1e-12;

// Full enumeration is refused above this size unless explicitly overridden.
inline constexpr int kBruteForceGuard = 12;

// |Pi(S)|: sum over k of (D-2)!/(D-2-k)! ordered relay selections.
inline std::uint64_t route_count(int d) {
    std::uint64_t total = 0;
    std::uint64_t perms = 1;
    for (int k = 0; k <= d - 2; ++k) {
        total += perms;
        perms *= static_cast<std::uint64_t>(d - 2 - k);
    }
    return total;
}

// Visits every route in Pi(S) exactly once: the source, an ordered selection
// of relays, then the destination. Relays branch in ascending id order.
template <class Fn>
void for_each_route(int d, Fn &&fn) {
    Route route;
    route.nodes = {1};
    std::vector<bool> used(static_cast<std::size_t>(d) + 1, false);
    auto recurse = [&](auto &&self) -> void {
        route.nodes.push_back(d);
        fn(static_cast<const Route &>(route));
        route.nodes.pop_back();
        for (int relay = 2; relay < d; ++relay) {
            if (used[static_cast<std::size_t>(relay)])
                continue;
            used[static_cast<std::size_t>(relay)] = true;
            route.nodes.push_back(relay);
            self(self);
            route.nodes.pop_back();
            used[static_cast<std::size_t>(relay)] = false;
        }
    };
    recurse(recurse);
}

inline std::vector<Route> enumerate_routes(const Network &net) {
    std::vector<Route> out;
    out.reserve(route_count(net.size()));
    for_each_route(net.size(), [&](const Route &r) { out.push_back(r); });
    return out;
}

struct SearchResult {
    std::vector<Route> best_routes;  // every argmax, lexicographically sorted
    double max_rate = 0.0;
    Strategy strategy = Strategy::DF;
    CodewordMode mode = CodewordMode::independent;
    std::uint64_t routes_evaluated = 0;
};

namespace detail {

inline void collect_argmax(SearchResult &result, const Route &route, double rate) {
    if (rate > result.max_rate * (1.0 + kDominanceTol) || result.best_routes.empty()) {
        if (rate > result.max_rate)
            result.max_rate = rate;
        result.best_routes.clear();
        result.best_routes.push_back(route);
    } else if (rate >= result.max_rate * (1.0 - kDominanceTol)) {
        result.best_routes.push_back(route);
        if (rate > result.max_rate)
            result.max_rate = rate;
    }
}

// DF-independent brute force over the route prefix tree. Reception rates
// depend only on the set of upstream transmitters, so per-node power sums are
// extended incrementally as the prefix grows. Accumulation order matches the
// direct per-route evaluation, keeping results bit-identical to it.
inline void brute_force_df_independent(const Network &net, const PowerMatrix &pm,
                                       SearchResult &result) {
    const int d = net.size();
    Route route;
    route.nodes = {1};
    std::vector<bool> used(static_cast<std::size_t>(d) + 1, false);
    std::vector<double> sums(static_cast<std::size_t>(d) + 1, 0.0);
    for (int t = 2; t <= d; ++t)
        sums[static_cast<std::size_t>(t)] = pm.at(1, t);

    auto recurse = [&](auto &&self, double min_rate) -> void {
        const double dest_rate = std::min(
            min_rate, awgn_rate(sums[static_cast<std::size_t>(d)] / net.node(d).noise_power));
        route.nodes.push_back(d);
        ++result.routes_evaluated;
        collect_argmax(result, route, dest_rate);
        route.nodes.pop_back();
        for (int relay = 2; relay < d; ++relay) {
            if (used[static_cast<std::size_t>(relay)])
                continue;
            const double relay_rate =
                awgn_rate(sums[static_cast<std::size_t>(relay)] / net.node(relay).noise_power);
            used[static_cast<std::size_t>(relay)] = true;
            route.nodes.push_back(relay);
            std::vector<std::pair<int, double>> undo;
            for (int t = 2; t <= d; ++t)
                if (t != relay && !used[static_cast<std::size_t>(t)]) {
                    undo.emplace_back(t, sums[static_cast<std::size_t>(t)]);
                    sums[static_cast<std::size_t>(t)] += pm.at(relay, t);
                }
            self(self, std::min(min_rate, relay_rate));
            for (auto &[t, v] : undo)
                sums[static_cast<std::size_t>(t)] = v;
            route.nodes.pop_back();
            used[static_cast<std::size_t>(relay)] = false;
        }
    };
    recurse(recurse, std::numeric_limits<double>::infinity());
}

}  // namespace detail

inline SearchResult brute_force_optimum(const Network &net, Strategy strategy,
                                        CodewordMode mode, bool allow_large = false) {
    const int d = net.size();
    if (d > kBruteForceGuard && !allow_large)
        throw TooLargeError("refusing full enumeration for D = " + std::to_string(d) +
                            " without an override");
    SearchResult result;
    result.strategy = strategy;
    result.mode = mode;
    result.max_rate = -std::numeric_limits<double>::infinity();

    if (strategy == Strategy::SH) {
        Route direct;
        direct.nodes = {1, d};
        result.best_routes = {direct};
        result.max_rate = rate_sh(net).supported_rate;
        result.routes_evaluated = 1;
        return result;
    }

    const PowerMatrix pm = power_matrix(net);
    if (strategy == Strategy::DF && mode == CodewordMode::independent) {
        detail::brute_force_df_independent(net, pm, result);
    } else {
        for_each_route(d, [&](const Route &route) {
            const double rate = (strategy == Strategy::MH)
                                    ? rate_mh(net, pm, route).supported_rate
                                    : optimize_splits(net, pm, route).report.supported_rate;
            ++result.routes_evaluated;
            detail::collect_argmax(result, route, rate);
        });
    }
    std::sort(result.best_routes.begin(), result.best_routes.end());
    return result;
}

namespace detail {

inline bool dominates(const PowerMatrix &pm, const std::vector<int> &members, int n, int a) {
    bool strict = false;
    for (int m : members) {
        const double pn = pm.at(m, n);
        const double pa = pm.at(m, a);
        if (pn < pa * (1.0 - kDominanceTol))
            return false;
        if (pn > pa * (1.0 + kDominanceTol))
            strict = true;
    }
    return strict;
}

}  // namespace detail

// Smallest set of unused nodes whose received-power vectors from the partial
// route dominate every other unused node. Every valid set must contain the
// Pareto-maximal candidates, and any node some member fails to dominate is
// forced in as well; closing over that rule yields the unique minimal set
// (the intersection of two valid sets is again valid and nonempty).
inline std::vector<int> nearest_neighbor_set(const Network &net, const PowerMatrix &pm,
                                             const Route &partial) {
    std::vector<int> candidates;
    for (int id = 2; id <= net.size(); ++id)
        if (std::find(partial.nodes.begin(), partial.nodes.end(), id) == partial.nodes.end())
            candidates.push_back(id);
    if (candidates.empty())
        throw NetworkError(NetworkError::Kind::UnknownId, "no nodes left to extend the route");

    std::vector<int> members, outside;
    for (int x : candidates) {
        bool maximal = true;
        for (int y : candidates)
            if (y != x && detail::dominates(pm, partial.nodes, y, x)) {
                maximal = false;
                break;
            }
        (maximal ? members : outside).push_back(x);
    }
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::size_t k = 0; k < outside.size(); ++k) {
            const int y = outside[k];
            for (int n : members)
                if (!detail::dominates(pm, partial.nodes, n, y)) {
                    members.push_back(y);
                    outside.erase(outside.begin() + static_cast<std::ptrdiff_t>(k));
                    grew = true;
                    break;
                }
            if (grew)
                break;
        }
    }
    std::sort(members.begin(), members.end());
    return members;
}

inline std::vector<int> nearest_neighbor_set(const Network &net, const Route &partial) {
    return nearest_neighbor_set(net, power_matrix(net), partial);
}

struct NnaOutcome {
    bool completed = false;
    Route route;                // completed route, or the partial route at the tie
    std::vector<int> tie_set;   // nonempty iff premature
};

// Appends the unique nearest neighbor until the destination is reached.
// A non-singleton neighbor set terminates the algorithm prematurely.
inline NnaOutcome run_nna(const Network &net, const PowerMatrix &pm) {
    NnaOutcome out;
    out.route.nodes = {1};
    while (out.route.nodes.back() != net.size()) {
        std::vector<int> neighbors = nearest_neighbor_set(net, pm, out.route);
        if (neighbors.size() != 1) {
            out.tie_set = std::move(neighbors);
            return out;
        }
        out.route.nodes.push_back(neighbors.front());
    }
    out.completed = true;
    return out;
}

inline NnaOutcome run_nna(const Network &net) { return run_nna(net, power_matrix(net)); }

struct CandidateSet {
    struct BranchRecord {
        Route prefix;
        std::vector<int> neighbors;
    };
    std::vector<Route> candidates;       // lexicographically sorted
    std::vector<BranchRecord> provenance;
};

// Branches on the full nearest neighbor set at every step; a branch completes
// when it appends the destination. Distinct prefixes never merge, so no
// deduplication pass is needed.
inline CandidateSet run_nnsa(const Network &net, const PowerMatrix &pm) {
    CandidateSet out;
    std::vector<Route> open;
    open.push_back(Route{{1}});
    while (!open.empty()) {
        Route prefix = std::move(open.back());
        open.pop_back();
        std::vector<int> neighbors = nearest_neighbor_set(net, pm, prefix);
        out.provenance.push_back({prefix, neighbors});
        for (int n : neighbors) {
            Route next = prefix;
            next.nodes.push_back(n);
            if (n == net.size())
                out.candidates.push_back(std::move(next));
            else
                open.push_back(std::move(next));
        }
    }
    std::sort(out.candidates.begin(), out.candidates.end());
    return out;
}

inline CandidateSet run_nnsa(const Network &net) { return run_nnsa(net, power_matrix(net)); }

// Candidate count only; used by the statistics harness where the candidate
// routes themselves are not needed.
inline std::uint64_t nnsa_candidate_count(const Network &net, const PowerMatrix &pm) {
    std::uint64_t count = 0;
    std::vector<Route> open;
    open.push_back(Route{{1}});
    while (!open.empty()) {
        Route prefix = std::move(open.back());
        open.pop_back();
        for (int n : nearest_neighbor_set(net, pm, prefix)) {
            if (n == net.size()) {
                ++count;
            } else {
                Route next = prefix;
                next.nodes.push_back(n);
                open.push_back(std::move(next));
            }
        }
    }
    return count;
}

inline SearchResult best_candidates(const Network &net, const PowerMatrix &pm,
                                    const CandidateSet &cands, CodewordMode mode) {
    if (cands.candidates.empty())
        throw std::invalid_argument("empty candidate set");
    SearchResult result;
    result.strategy = Strategy::DF;
    result.mode = mode;
    result.max_rate = -std::numeric_limits<double>::infinity();
    for (const Route &route : cands.candidates) {
        const double rate = rate_df(net, pm, route, mode).supported_rate;
        ++result.routes_evaluated;
        detail::collect_argmax(result, route, rate);
    }
    std::sort(result.best_routes.begin(), result.best_routes.end());
    return result;
}

inline SearchResult best_candidates(const Network &net, const CandidateSet &cands,
                                    CodewordMode mode) {
    return best_candidates(net, power_matrix(net), cands, mode);
}

struct MspaResult {
    Route route;
    std::uint64_t update_count = 0;  // incremental power-sum updates performed
};

// Greedy heuristic: append the unused node with the highest sum of received
// power from the current route; ties break to the smallest id. Cached sums are
// extended by one term per remaining node on each append.
inline MspaResult run_mspa(const Network &net, const PowerMatrix &pm) {
    const int d = net.size();
    MspaResult out;
    out.route.nodes = {1};
    std::vector<bool> used(static_cast<std::size_t>(d) + 1, false);
    used[1] = true;
    std::vector<double> sums(static_cast<std::size_t>(d) + 1, 0.0);
    for (int t = 2; t <= d; ++t) {
        sums[static_cast<std::size_t>(t)] = pm.at(1, t);
        ++out.update_count;
    }
    while (out.route.nodes.back() != d) {
        int best = 0;
        for (int t = 2; t <= d; ++t)
            if (!used[static_cast<std::size_t>(t)] &&
                (best == 0 || sums[static_cast<std::size_t>(t)] > sums[static_cast<std::size_t>(best)]))
                best = t;
        used[static_cast<std::size_t>(best)] = true;
        out.route.nodes.push_back(best);
        if (best == d)
            break;
        for (int t = 2; t <= d; ++t)
            if (!used[static_cast<std::size_t>(t)]) {
                sums[static_cast<std::size_t>(t)] += pm.at(best, t);
                ++out.update_count;
            }
    }
    return out;
}

inline MspaResult run_mspa(const Network &net) { return run_mspa(net, power_matrix(net)); }

// Greedy single-removal pruning: repeatedly drop any relay whose removal keeps
// the supported rate at or above the target, until no single relay is
// removable. Source and destination are fixed.
inline Route prune_shortest(const Network &net, const PowerMatrix &pm, Route route,
                            double target_rate, CodewordMode mode) {
    validate_route(net, route);
    if (rate_df(net, pm, route, mode).supported_rate < target_rate)
        throw TargetUnreachableError("route does not support the target rate");
    bool removed = true;
    while (removed && route.length() > 2) {
        removed = false;
        for (int pos = 2; pos < route.length(); ++pos) {
            Route candidate = route;
            candidate.nodes.erase(candidate.nodes.begin() + (pos - 1));
            if (rate_df(net, pm, candidate, mode).supported_rate >= target_rate) {
                route = std::move(candidate);
                removed = true;
                break;
            }
        }
    }
    return route;
}

inline Route prune_shortest(const Network &net, Route route, double target_rate,
                            CodewordMode mode) {
    return prune_shortest(net, power_matrix(net), std::move(route), target_rate, mode);
}

}  // namespace relaynet

#endif
