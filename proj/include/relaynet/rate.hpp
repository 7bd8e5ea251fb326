#ifndef RELAYNET_RATE_HPP
#define RELAYNET_RATE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaynet/network.hpp"

namespace relaynet {

enum class Strategy { SH, MH, DF };
enum class CodewordMode { independent, correlated };

class RouteError : public std::runtime_error {
  public:
    enum class Kind { BadRoute, PositionOutOfRange, InvalidSplit };

    RouteError(Kind kind, const std::string &msg)
        : std::runtime_error(msg), kind_(kind) {}

    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

// Ordered, duplicate-free node sequence from source (node 1) to destination
// (node D).
struct Route {
    std::vector<int> nodes;

    int length() const { return static_cast<int>(nodes.size()); }
    int at(int pos) const { return nodes[static_cast<std::size_t>(pos - 1)]; }  // 1-based

    bool operator==(const Route &other) const { return nodes == other.nodes; }
    bool operator<(const Route &other) const { return nodes < other.nodes; }
};

inline void validate_route(const Network &net, const Route &route) {
    const int len = route.length();
    if (len < 2 || route.nodes.front() != 1 || route.nodes.back() != net.size())
        throw RouteError(RouteError::Kind::BadRoute,
                         "route must run from node 1 to node D with length >= 2");
    std::vector<bool> seen(static_cast<std::size_t>(net.size()) + 1, false);
    for (int id : route.nodes) {
        if (id < 1 || id > net.size())
            throw RouteError(RouteError::Kind::BadRoute,
                             "route contains unknown node " + std::to_string(id));
        if (seen[static_cast<std::size_t>(id)])
            throw RouteError(RouteError::Kind::BadRoute,
                             "route repeats node " + std::to_string(id));
        seen[static_cast<std::size_t>(id)] = true;
    }
}

// Power-split coefficients for a route of length L. rows[i][k] is the fraction
// of transmitter position i's power (0-based, i <= L-2) spent on the
// sub-codeword decoded at position i+1+k. Each row sums to at most 1.
struct PowerSplit {
    std::vector<std::vector<double>> rows;

    double alpha(int i, int j) const {  // 1-based route positions, i < j
        return rows[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - i - 1)];
    }
};

inline PowerSplit independent_splits(int route_length) {
    PowerSplit s;
    s.rows.resize(static_cast<std::size_t>(route_length - 1));
    for (int i = 0; i < route_length - 1; ++i) {
        s.rows[static_cast<std::size_t>(i)].assign(
            static_cast<std::size_t>(route_length - 1 - i), 0.0);
        s.rows[static_cast<std::size_t>(i)][0] = 1.0;
    }
    return s;
}

inline void validate_splits(const PowerSplit &splits, int route_length) {
    if (static_cast<int>(splits.rows.size()) != route_length - 1)
        throw RouteError(RouteError::Kind::InvalidSplit, "split row count mismatch");
    for (int i = 0; i < route_length - 1; ++i) {
        const auto &row = splits.rows[static_cast<std::size_t>(i)];
        if (static_cast<int>(row.size()) != route_length - 1 - i)
            throw RouteError(RouteError::Kind::InvalidSplit, "split row size mismatch");
        double sum = 0.0;
        for (double a : row) {
            if (a < 0.0)
                throw RouteError(RouteError::Kind::InvalidSplit, "negative split coefficient");
            sum += a;
        }
        if (sum > 1.0 + 1e-9)
            throw RouteError(RouteError::Kind::InvalidSplit,
                             "split row " + std::to_string(i + 1) + " sums to " +
                                 std::to_string(sum));
    }
}

struct RateReport {
    std::vector<double> per_node_rate;  // index k holds the rate of route position k+2
    int bottleneck = 0;                 // 1-based route position attaining the minimum
    double supported_rate = 0.0;
    Strategy strategy = Strategy::DF;
    CodewordMode mode = CodewordMode::independent;
    std::optional<PowerSplit> splits;
    bool converged = true;

    double rate_at(int pos) const {  // 1-based route position, 2..L
        return per_node_rate[static_cast<std::size_t>(pos - 2)];
    }
};

inline double awgn_rate(double snr) { return 0.5 * std::log2(1.0 + snr); }

namespace detail {

// Per-route view of the power matrix: received power between route positions
// plus per-position noise. Positions are 0-based here.
struct RouteTable {
    int len = 0;
    std::vector<double> p;      // p[i*len + t]: power from position i at position t
    std::vector<double> noise;  // noise[t]

    double at(int i, int t) const { return p[static_cast<std::size_t>(i * len + t)]; }
};

inline RouteTable make_route_table(const Network &net, const PowerMatrix &pm,
                                   const Route &route) {
    RouteTable tab;
    tab.len = route.length();
    tab.p.assign(static_cast<std::size_t>(tab.len) * static_cast<std::size_t>(tab.len), 0.0);
    tab.noise.resize(static_cast<std::size_t>(tab.len));
    for (int t = 0; t < tab.len; ++t) {
        tab.noise[static_cast<std::size_t>(t)] =
            net.node(route.nodes[static_cast<std::size_t>(t)]).noise_power;
        for (int i = 0; i < tab.len; ++i)
            if (i != t)
                tab.p[static_cast<std::size_t>(i * tab.len + t)] =
                    pm.at(route.nodes[static_cast<std::size_t>(i)],
                          route.nodes[static_cast<std::size_t>(t)]);
    }
    return tab;
}

// MH SNR at 0-based receiver position t. Interference comes from every route
// transmitter except the desired one (t-1) and the receiver itself.
inline double mh_snr(const RouteTable &tab, int t) {
    double denom = tab.noise[static_cast<std::size_t>(t)];
    for (int i = 0; i < tab.len - 1; ++i)
        if (i != t - 1 && i != t)
            denom += tab.at(i, t);
    return tab.at(t - 1, t) / denom;
}

// DF SNR at 0-based receiver position t: energy from every sub-codeword block
// j <= t combines coherently across its transmitters.
inline double df_snr(const RouteTable &tab, const PowerSplit &splits, int t) {
    double gamma = 0.0;
    for (int j = 1; j <= t; ++j) {
        double s = 0.0;
        for (int i = 0; i < j; ++i) {
            const double a =
                splits.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - i - 1)];
            if (a > 0.0)
                s += std::sqrt(a * tab.at(i, t));
        }
        gamma += s * s;
    }
    return gamma / tab.noise[static_cast<std::size_t>(t)];
}

inline double df_snr_independent(const RouteTable &tab, int t) {
    double sum = 0.0;
    for (int i = 0; i < t; ++i)
        sum += tab.at(i, t);
    return sum / tab.noise[static_cast<std::size_t>(t)];
}

inline RateReport report_from_rates(std::vector<double> rates, Strategy strategy,
                                    CodewordMode mode) {
    RateReport rep;
    rep.per_node_rate = std::move(rates);
    rep.strategy = strategy;
    rep.mode = mode;
    rep.bottleneck = 2;
    rep.supported_rate = rep.per_node_rate.front();
    for (std::size_t k = 1; k < rep.per_node_rate.size(); ++k)
        if (rep.per_node_rate[k] < rep.supported_rate) {
            rep.supported_rate = rep.per_node_rate[k];
            rep.bottleneck = static_cast<int>(k) + 2;
        }
    return rep;
}

}  // namespace detail

inline RateReport rate_sh(const Network &net) {
    const double gamma =
        received_power(net, 1, net.size()) / net.node(net.size()).noise_power;
    RateReport rep;
    rep.per_node_rate = {awgn_rate(gamma)};
    rep.bottleneck = 2;
    rep.supported_rate = rep.per_node_rate[0];
    rep.strategy = Strategy::SH;
    return rep;
}

inline double mh_snr(const Network &net, const PowerMatrix &pm, const Route &route, int t) {
    if (t < 2 || t > route.length())
        throw RouteError(RouteError::Kind::PositionOutOfRange,
                         "route position " + std::to_string(t) + " out of range");
    return detail::mh_snr(detail::make_route_table(net, pm, route), t - 1);
}

inline double mh_snr(const Network &net, const Route &route, int t) {
    return mh_snr(net, power_matrix(net), route, t);
}

inline RateReport rate_mh(const Network &net, const PowerMatrix &pm, const Route &route) {
    validate_route(net, route);
    const detail::RouteTable tab = detail::make_route_table(net, pm, route);
    std::vector<double> rates(static_cast<std::size_t>(route.length() - 1));
    for (int t = 1; t < route.length(); ++t)
        rates[static_cast<std::size_t>(t - 1)] = awgn_rate(detail::mh_snr(tab, t));
    return detail::report_from_rates(std::move(rates), Strategy::MH,
                                     CodewordMode::independent);
}

inline RateReport rate_mh(const Network &net, const Route &route) {
    return rate_mh(net, power_matrix(net), route);
}

inline double df_snr(const Network &net, const PowerMatrix &pm, const Route &route,
                     const PowerSplit &splits, int t) {
    if (t < 2 || t > route.length())
        throw RouteError(RouteError::Kind::PositionOutOfRange,
                         "route position " + std::to_string(t) + " out of range");
    validate_splits(splits, route.length());
    return detail::df_snr(detail::make_route_table(net, pm, route), splits, t - 1);
}

inline double df_snr(const Network &net, const Route &route, const PowerSplit &splits,
                     int t) {
    return df_snr(net, power_matrix(net), route, splits, t);
}

inline RateReport rate_df_independent(const Network &net, const PowerMatrix &pm,
                                      const Route &route) {
    validate_route(net, route);
    const detail::RouteTable tab = detail::make_route_table(net, pm, route);
    std::vector<double> rates(static_cast<std::size_t>(route.length() - 1));
    for (int t = 1; t < route.length(); ++t)
        rates[static_cast<std::size_t>(t - 1)] = awgn_rate(detail::df_snr_independent(tab, t));
    RateReport rep = detail::report_from_rates(std::move(rates), Strategy::DF,
                                               CodewordMode::independent);
    rep.splits = independent_splits(route.length());
    return rep;
}

inline RateReport rate_df_independent(const Network &net, const Route &route) {
    return rate_df_independent(net, power_matrix(net), route);
}

struct OptimizeResult {
    PowerSplit splits;
    RateReport report;
};

namespace detail {

inline double min_rate_objective(const RouteTable &tab, const PowerSplit &splits) {
    double worst = std::numeric_limits<double>::infinity();
    for (int t = 1; t < tab.len; ++t)
        worst = std::min(worst, awgn_rate(df_snr(tab, splits, t)));
    return worst;
}

// Evaluation workspace for the max-min objective. Square roots of the route
// powers are cached; per call only the split coefficients are re-rooted.
class DfObjective {
  public:
    explicit DfObjective(const RouteTable &tab) : tab_(tab), len_(tab.len) {
        sqrtp_.resize(static_cast<std::size_t>(len_) * static_cast<std::size_t>(len_), 0.0);
        for (int i = 0; i < len_; ++i)
            for (int t = 0; t < len_; ++t)
                if (i != t)
                    sqrtp_[static_cast<std::size_t>(i * len_ + t)] = std::sqrt(tab.at(i, t));
        sa_.resize(sqrtp_.size(), 0.0);
    }

    double operator()(const PowerSplit &splits) {
        for (int i = 0; i < len_ - 1; ++i) {
            const auto &row = splits.rows[static_cast<std::size_t>(i)];
            for (std::size_t k = 0; k < row.size(); ++k)
                sa_[static_cast<std::size_t>(i * len_) + static_cast<std::size_t>(i) + 1 + k] =
                    std::sqrt(row[k]);
        }
        double worst = std::numeric_limits<double>::infinity();
        for (int t = 1; t < len_; ++t) {
            double gamma = 0.0;
            for (int j = 1; j <= t; ++j) {
                double s = 0.0;
                for (int i = 0; i < j; ++i)
                    s += sa_[static_cast<std::size_t>(i * len_ + j)] *
                         sqrtp_[static_cast<std::size_t>(i * len_ + t)];
                gamma += s * s;
            }
            worst = std::min(worst,
                             awgn_rate(gamma / tab_.noise[static_cast<std::size_t>(t)]));
        }
        return worst;
    }

  private:
    const RouteTable &tab_;
    int len_;
    std::vector<double> sqrtp_;
    std::vector<double> sa_;  // sa_[i*len + j] = sqrt(alpha of positions i -> j)
};

// Golden-section maximization of f over [lo, hi]; also probes the endpoints
// and zero. Returns the best abscissa found.
template <class F>
double golden_max(F &&f, double lo, double hi) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 60 && b - a > 1e-11; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    double best_x = (f1 > f2) ? x1 : x2;
    double best_f = std::max(f1, f2);
    for (double cand : {lo, hi, 0.0}) {
        if (cand < lo || cand > hi)
            continue;
        const double fc = f(cand);
        if (fc > best_f) {
            best_f = fc;
            best_x = cand;
        }
    }
    return best_x;
}

// Deterministic start points: next-hop, uniform, destination-concentrated,
// and fixed blends of those.
inline std::vector<PowerSplit> optimizer_starts(int len) {
    PowerSplit next_hop = independent_splits(len);
    PowerSplit uniform, dest;
    uniform.rows.resize(static_cast<std::size_t>(len - 1));
    dest.rows.resize(static_cast<std::size_t>(len - 1));
    for (int i = 0; i < len - 1; ++i) {
        const std::size_t slots = static_cast<std::size_t>(len - 1 - i);
        uniform.rows[static_cast<std::size_t>(i)].assign(slots, 1.0 / static_cast<double>(slots));
        dest.rows[static_cast<std::size_t>(i)].assign(slots, 0.0);
        dest.rows[static_cast<std::size_t>(i)].back() = 1.0;
    }
    auto blend = [len](const PowerSplit &a, const PowerSplit &b, double lam) {
        PowerSplit out = a;
        for (int i = 0; i < len - 1; ++i)
            for (std::size_t k = 0; k < out.rows[static_cast<std::size_t>(i)].size(); ++k)
                out.rows[static_cast<std::size_t>(i)][k] =
                    lam * a.rows[static_cast<std::size_t>(i)][k] +
                    (1.0 - lam) * b.rows[static_cast<std::size_t>(i)][k];
        return out;
    };
    return {next_hop,
            uniform,
            blend(uniform, next_hop, 0.25),
            blend(uniform, next_hop, 0.5),
            blend(uniform, next_hop, 0.75),
            dest,
            blend(uniform, dest, 0.5),
            blend(next_hop, dest, 0.5)};
}

}  // namespace detail

// Max-min optimization of the DF power splits on the per-transmitter
// probability simplex (full power: each row sums to 1). Multi-start projected
// coordinate ascent: for every pair of slots of a transmitter, a golden-section
// line search over the mass transferred between them, iterated to convergence,
// then a small fixed-step pattern polish. Deterministic for identical inputs.
inline OptimizeResult optimize_splits(const Network &net, const PowerMatrix &pm,
                                      const Route &route, double tol = 1e-9) {
    validate_route(net, route);
    if (!(tol > 0.0))
        throw RouteError(RouteError::Kind::InvalidSplit, "tolerance must be positive");
    const int len = route.length();
    const detail::RouteTable tab = detail::make_route_table(net, pm, route);

    PowerSplit best;
    double best_obj = -std::numeric_limits<double>::infinity();
    bool converged_all = true;

    if (len == 2) {
        best = independent_splits(len);
        best_obj = detail::min_rate_objective(tab, best);
    } else {
        detail::DfObjective objective(tab);

        // One coordinate-ascent pass over all slot pairs of one start point.
        auto ascent = [&](PowerSplit &splits, double obj) {
            for (int i = 0; i <= len - 3; ++i) {
                auto &row = splits.rows[static_cast<std::size_t>(i)];
                const int slots = static_cast<int>(row.size());
                for (int j = 0; j < slots; ++j) {
                    for (int k = j + 1; k < slots; ++k) {
                        // Transfer x from slot j to slot k; the row sum is
                        // invariant on the simplex.
                        const double lo = -row[static_cast<std::size_t>(k)];
                        const double hi = row[static_cast<std::size_t>(j)];
                        if (hi - lo < 1e-15)
                            continue;
                        auto eval = [&](double x) {
                            const double oj = row[static_cast<std::size_t>(j)];
                            const double ok = row[static_cast<std::size_t>(k)];
                            row[static_cast<std::size_t>(j)] = oj - x;
                            row[static_cast<std::size_t>(k)] = ok + x;
                            const double v = objective(splits);
                            row[static_cast<std::size_t>(j)] = oj;
                            row[static_cast<std::size_t>(k)] = ok;
                            return v;
                        };
                        const double x = detail::golden_max(eval, lo, hi);
                        const double cand = eval(x);
                        if (cand > obj) {
                            row[static_cast<std::size_t>(j)] -= x;
                            row[static_cast<std::size_t>(k)] += x;
                            obj = cand;
                        }
                    }
                }
            }
            return obj;
        };

        for (PowerSplit splits : detail::optimizer_starts(len)) {
            double obj = objective(splits);
            bool converged = false;
            for (int sweep = 0; sweep < 300; ++sweep) {
                const double before = obj;
                obj = ascent(splits, obj);
                if (obj - before < tol) {
                    converged = true;
                    break;
                }
            }
            if (obj > best_obj) {
                best_obj = obj;
                best = splits;
            }
            converged_all = converged_all && converged;
        }

        // Pattern polish of the best point with fixed steps shrinking to 1e-4,
        // then one final ascent pass.
        for (double step : {1e-2, 1e-3, 1e-4}) {
            bool moved = true;
            for (int pass = 0; pass < 200 && moved; ++pass) {
                moved = false;
                for (int i = 0; i <= len - 3; ++i) {
                    auto &row = best.rows[static_cast<std::size_t>(i)];
                    const int slots = static_cast<int>(row.size());
                    for (int j = 0; j < slots; ++j)
                        for (int k = j + 1; k < slots; ++k)
                            for (double sgn : {1.0, -1.0}) {
                                double x = sgn * step;
                                if (x > row[static_cast<std::size_t>(j)])
                                    x = row[static_cast<std::size_t>(j)];
                                if (-x > row[static_cast<std::size_t>(k)])
                                    x = -row[static_cast<std::size_t>(k)];
                                if (x == 0.0)
                                    continue;
                                row[static_cast<std::size_t>(j)] -= x;
                                row[static_cast<std::size_t>(k)] += x;
                                const double cand = objective(best);
                                if (cand > best_obj) {
                                    best_obj = cand;
                                    moved = true;
                                } else {
                                    row[static_cast<std::size_t>(j)] += x;
                                    row[static_cast<std::size_t>(k)] -= x;
                                }
                            }
                }
            }
        }
        best_obj = ascent(best, best_obj);
    }

    std::vector<double> rates(static_cast<std::size_t>(len - 1));
    for (int t = 1; t < len; ++t)
        rates[static_cast<std::size_t>(t - 1)] = awgn_rate(detail::df_snr(tab, best, t));
    RateReport rep = detail::report_from_rates(std::move(rates), Strategy::DF,
                                               CodewordMode::correlated);
    rep.splits = best;
    rep.converged = converged_all;
    return {best, std::move(rep)};
}

inline OptimizeResult optimize_splits(const Network &net, const Route &route,
                                      double tol = 1e-9) {
    return optimize_splits(net, power_matrix(net), route, tol);
}

inline RateReport rate_df(const Network &net, const PowerMatrix &pm, const Route &route,
                          CodewordMode mode) {
    if (mode == CodewordMode::independent)
        return rate_df_independent(net, pm, route);
    return optimize_splits(net, pm, route).report;
}

inline RateReport rate_df(const Network &net, const Route &route, CodewordMode mode) {
    return rate_df(net, power_matrix(net), route, mode);
}

}  // namespace relaynet

#endif
