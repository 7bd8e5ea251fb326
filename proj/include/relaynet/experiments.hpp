#ifndef RELAYNET_EXPERIMENTS_HPP
#define RELAYNET_EXPERIMENTS_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaynet/network.hpp"
#include "relaynet/rate.hpp"
#include "relaynet/search.hpp"

namespace relaynet {

enum class DistanceCase {
    fixed_ten,    // d_1D = 10 regardless of route length
    unit_spacing  // d_1D = |M| - 1
};

struct ExperimentConfig {
    std::vector<int> sizes;
    int trials = 100;
    std::uint64_t seed = 1;
    DistanceCase distance_case = DistanceCase::fixed_ten;
    CodewordMode mode = CodewordMode::independent;
};

// Per-trial seed derivation: splitmix64 finalizer over the config seed, the
// network size, and the trial index. Reproducible within this implementation;
// cross-implementation bit equality is not a contract.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t size, std::uint64_t trial) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (size + 1) +
                      0xBF58476D1CE4E5B9ULL * (trial + 1);
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// d nodes i.i.d. uniform on the unit square, P = N = kappa = 1, eta = 2.
// Node 1 is the source and node d the destination by labeling, not placement.
inline Network gen_square_network(int d, std::uint64_t seed) {
    if (d < 2)
        throw std::invalid_argument("need at least 2 nodes");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < 100; ++attempt) {
        Network net;
        net.nodes.resize(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            NodeSpec &n = net.nodes[static_cast<std::size_t>(i)];
            n.id = i + 1;
            n.x = unit(rng);
            n.y = unit(rng);
        }
        bool ok = true;
        for (int i = 0; ok && i < d; ++i)
            for (int j = i + 1; ok && j < d; ++j) {
                const auto &a = net.nodes[static_cast<std::size_t>(i)];
                const auto &b = net.nodes[static_cast<std::size_t>(j)];
                if (std::hypot(a.x - b.x, a.y - b.y) < kMinNodeDistance)
                    ok = false;
            }
        if (ok)
            return validate_network(std::move(net));
    }
    throw std::runtime_error("could not place " + std::to_string(d) +
                             " distinct nodes in 100 attempts");
}

// Line network with explicit interior x positions; endpoints at 0 and d_1d.
// Interior nodes are ordered by x and numbered 2..n-1.
inline std::pair<Network, Route> line_network(std::vector<double> interior_xs, double d_1d) {
    std::sort(interior_xs.begin(), interior_xs.end());
    Network net;
    const int n = static_cast<int>(interior_xs.size()) + 2;
    net.nodes.resize(static_cast<std::size_t>(n));
    net.nodes[0] = NodeSpec{1, 0.0, 0.0, 1.0, 1.0};
    for (int i = 0; i < n - 2; ++i)
        net.nodes[static_cast<std::size_t>(i + 1)] =
            NodeSpec{i + 2, interior_xs[static_cast<std::size_t>(i)], 0.0, 1.0, 1.0};
    net.nodes[static_cast<std::size_t>(n - 1)] = NodeSpec{n, d_1d, 0.0, 1.0, 1.0};
    Route route;
    for (int id = 1; id <= n; ++id)
        route.nodes.push_back(id);
    return {validate_network(std::move(net)), std::move(route)};
}

// n-node line: endpoints at (0,0) and (d_1d,0), n-2 interior nodes uniform on
// the segment, route order given by position along the line.
inline std::pair<Network, Route> gen_line_route(int n, double d_1d, std::uint64_t seed) {
    if (n < 2)
        throw std::invalid_argument("need at least 2 nodes");
    if (!(d_1d > 0.0))
        throw std::invalid_argument("d_1D must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> along(0.0, d_1d);
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<double> xs(static_cast<std::size_t>(n - 2));
        for (double &x : xs)
            x = along(rng);
        std::sort(xs.begin(), xs.end());
        bool ok = true;
        double prev = 0.0;
        for (double x : xs) {
            if (x - prev < kMinNodeDistance) {
                ok = false;
                break;
            }
            prev = x;
        }
        if (ok && !xs.empty() && d_1d - xs.back() < kMinNodeDistance)
            ok = false;
        if (ok)
            return line_network(std::move(xs), d_1d);
    }
    throw std::runtime_error("could not place distinct nodes on the line in 100 attempts");
}

struct RatioRow {
    int route_length = 0;
    int trials = 0;
    double mean_r_sh = 0.0;
    double mean_r_mh = 0.0;
    double mean_r_df = 0.0;
    double df_over_sh = 0.0;  // ratios of averages
    double df_over_mh = 0.0;
    double mh_over_sh = 0.0;
};

// Rate-ratio sweep over random line routes. Independent codewords only; per
// trial the SH, MH and DF rates are computed analytically and the row reports
// ratios of the per-size averages.
inline std::vector<RatioRow> ratio_sweep(const ExperimentConfig &cfg) {
    if (cfg.mode != CodewordMode::independent)
        throw std::invalid_argument("ratio_sweep runs in independent mode only");
    if (cfg.trials < 1)
        throw std::invalid_argument("need at least one trial");
    std::vector<RatioRow> rows;
    for (int m : cfg.sizes) {
        if (m < 2)
            throw std::invalid_argument("route length must be >= 2");
        const double d_1d =
            cfg.distance_case == DistanceCase::fixed_ten ? 10.0 : static_cast<double>(m - 1);
        RatioRow row;
        row.route_length = m;
        row.trials = cfg.trials;
        for (int trial = 0; trial < cfg.trials; ++trial) {
            auto [net, route] = gen_line_route(
                m, d_1d, mix_seed(cfg.seed, static_cast<std::uint64_t>(m),
                                  static_cast<std::uint64_t>(trial)));
            const PowerMatrix pm = power_matrix(net);
            row.mean_r_sh += rate_sh(net).supported_rate;
            row.mean_r_mh += rate_mh(net, pm, route).supported_rate;
            row.mean_r_df += rate_df_independent(net, pm, route).supported_rate;
        }
        row.mean_r_sh /= cfg.trials;
        row.mean_r_mh /= cfg.trials;
        row.mean_r_df /= cfg.trials;
        row.df_over_sh = row.mean_r_df / row.mean_r_sh;
        row.df_over_mh = row.mean_r_df / row.mean_r_mh;
        row.mh_over_sh = row.mean_r_mh / row.mean_r_sh;
        rows.push_back(row);
    }
    return rows;
}

struct SummaryStats {
    int size = 0;
    int trials = 0;
    std::uint64_t route_space = 0;  // |Pi(S)| denominator
    double mean = 0.0;
    double median = 0.0;  // lower-median convention
    double min = 0.0;
    double max = 0.0;
};

inline double lower_median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return values[(values.size() - 1) / 2];
}

// Distribution of |NNSA candidate set| / |Pi(S)| over random square networks.
inline std::vector<SummaryStats> nnsa_size_stats(const ExperimentConfig &cfg) {
    if (cfg.trials < 1)
        throw std::invalid_argument("need at least one trial");
    std::vector<SummaryStats> out;
    for (int d : cfg.sizes) {
        if (d > kBruteForceGuard)
            throw TooLargeError("route-space denominator overflows usefulness for D = " +
                                std::to_string(d));
        SummaryStats stats;
        stats.size = d;
        stats.trials = cfg.trials;
        stats.route_space = route_count(d);
        std::vector<double> ratios;
        ratios.reserve(static_cast<std::size_t>(cfg.trials));
        for (int trial = 0; trial < cfg.trials; ++trial) {
            Network net = gen_square_network(
                d, mix_seed(cfg.seed, static_cast<std::uint64_t>(d),
                            static_cast<std::uint64_t>(trial)));
            const PowerMatrix pm = power_matrix(net);
            ratios.push_back(static_cast<double>(nnsa_candidate_count(net, pm)) /
                             static_cast<double>(stats.route_space));
        }
        stats.mean = 0.0;
        for (double r : ratios)
            stats.mean += r;
        stats.mean /= static_cast<double>(ratios.size());
        stats.median = lower_median(ratios);
        stats.min = *std::min_element(ratios.begin(), ratios.end());
        stats.max = *std::max_element(ratios.begin(), ratios.end());
        out.push_back(stats);
    }
    return out;
}

struct Disagreement {
    int size = 0;
    int trial = 0;
    std::string algorithm;  // "nnsa", "mspa", or "nna"
    Network network;        // full counterexample topology
    double algorithm_rate = 0.0;
    double brute_force_rate = 0.0;
};

struct AgreementReport {
    int trials = 0;
    int nna_completed = 0;
    int nnsa_disagreements = 0;
    int mspa_disagreements = 0;
    int nna_disagreements = 0;
    std::vector<Disagreement> details;
};

// Checks NNSA-best, MSPA (independent only) and NNA-when-complete against the
// brute-force optimum on random square networks. Disagreements are findings,
// reported with the offending topology.
inline AgreementReport oracle_agreement_trials(const ExperimentConfig &cfg) {
    const double tol_rel = 1e-12;
    const double tol_abs_corr = 1e-4;
    AgreementReport report;
    for (int d : cfg.sizes) {
        for (int trial = 0; trial < cfg.trials; ++trial) {
            Network net = gen_square_network(
                d, mix_seed(cfg.seed, static_cast<std::uint64_t>(d),
                            static_cast<std::uint64_t>(trial)));
            const PowerMatrix pm = power_matrix(net);
            ++report.trials;
            const SearchResult oracle = brute_force_optimum(net, Strategy::DF, cfg.mode);
            auto agrees = [&](double rate) {
                if (cfg.mode == CodewordMode::independent)
                    return rate >= oracle.max_rate * (1.0 - tol_rel);
                return rate >= oracle.max_rate - tol_abs_corr;
            };
            auto record = [&](const char *algo, double rate, int &counter) {
                if (!agrees(rate)) {
                    ++counter;
                    report.details.push_back(
                        {d, trial, algo, net, rate, oracle.max_rate});
                }
            };

            const SearchResult nnsa_best = best_candidates(net, pm, run_nnsa(net, pm), cfg.mode);
            record("nnsa", nnsa_best.max_rate, report.nnsa_disagreements);

            if (cfg.mode == CodewordMode::independent) {
                const MspaResult mspa = run_mspa(net, pm);
                record("mspa", rate_df_independent(net, pm, mspa.route).supported_rate,
                       report.mspa_disagreements);
            }

            const NnaOutcome nna = run_nna(net, pm);
            if (nna.completed) {
                ++report.nna_completed;
                record("nna", rate_df(net, pm, nna.route, cfg.mode).supported_rate,
                       report.nna_disagreements);
            }
        }
    }
    return report;
}

}  // namespace relaynet

#endif
