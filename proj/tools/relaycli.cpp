// Command-line front end: network file I/O, single rate computations, route
// searches, and experiment sweeps with CSV/JSON output.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relaynet/experiments.hpp"
#include "relaynet/io.hpp"
#include "relaynet/network.hpp"
#include "relaynet/rate.hpp"
#include "relaynet/search.hpp"

namespace {

using namespace relaynet;

Route parse_route_arg(const std::string &arg) {
    Route route;
    std::istringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ','))
        route.nodes.push_back(std::stoi(tok));
    return route;
}

std::vector<int> parse_sizes_arg(const std::string &arg) {
    std::vector<int> sizes;
    std::istringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ','))
        sizes.push_back(std::stoi(tok));
    return sizes;
}

void emit(const std::string &text, const std::string &out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open output file: " + out_path);
        out << text;
    }
}

int cmd_rate(const std::string &net_path, const std::string &route_arg,
             const std::string &strategy, const std::string &mode_arg) {
    const Network net = load_network(net_path);
    const CodewordMode mode =
        mode_arg == "corr" ? CodewordMode::correlated : CodewordMode::independent;
    RateReport rep;
    if (strategy == "sh") {
        if (!route_arg.empty()) {
            Route route = parse_route_arg(route_arg);
            if (route.nodes != std::vector<int>{1, net.size()})
                throw RouteError(RouteError::Kind::BadRoute,
                                 "sh takes no route beyond the default {1,D}");
        }
        rep = rate_sh(net);
    } else {
        Route route = route_arg.empty() ? Route{{1, net.size()}} : parse_route_arg(route_arg);
        validate_route(net, route);
        rep = strategy == "mh" ? rate_mh(net, route) : rate_df(net, route, mode);
    }
    std::cout << to_json(rep).dump(2) << "\n";
    return 0;
}

int cmd_search(const std::string &net_path, const std::string &algo,
               const std::string &mode_arg, bool allow_large) {
    const Network net = load_network(net_path);
    const CodewordMode mode =
        mode_arg == "corr" ? CodewordMode::correlated : CodewordMode::independent;
    const PowerMatrix pm = power_matrix(net);
    nlohmann::json doc;
    if (algo == "brute") {
        doc = to_json(brute_force_optimum(net, Strategy::DF, mode, allow_large));
        doc["algorithm"] = "brute";
    } else if (algo == "nna") {
        const NnaOutcome outcome = run_nna(net, pm);
        doc["schema_version"] = kSchemaVersion;
        doc["kind"] = "nna_outcome";
        doc["algorithm"] = "nna";
        doc["completed"] = outcome.completed;
        if (outcome.completed) {
            doc["route"] = to_json(outcome.route);
            doc["rate_report"] = to_json(rate_df(net, pm, outcome.route, mode));
        } else {
            doc["partial_route"] = to_json(outcome.route);
            doc["tie_set"] = outcome.tie_set;
        }
    } else if (algo == "nnsa") {
        const CandidateSet cands = run_nnsa(net, pm);
        doc = to_json(best_candidates(net, pm, cands, mode));
        doc["algorithm"] = "nnsa";
        nlohmann::json cand_routes = nlohmann::json::array();
        for (const Route &r : cands.candidates)
            cand_routes.push_back(to_json(r));
        doc["candidates"] = cand_routes;
        doc["candidate_count"] = cands.candidates.size();
    } else {  // mspa
        const MspaResult mspa = run_mspa(net, pm);
        doc["schema_version"] = kSchemaVersion;
        doc["kind"] = "mspa_result";
        doc["algorithm"] = "mspa";
        doc["route"] = to_json(mspa.route);
        doc["update_count"] = mspa.update_count;
        doc["rate_report"] = to_json(rate_df(net, pm, mspa.route, mode));
    }
    std::cout << doc.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Relay-network route optimization: SH/MH/DF rates, exact and "
                 "heuristic route search, and Monte Carlo experiments"};
    app.require_subcommand(1);

    std::string net_path, route_arg, strategy = "df", mode_arg = "ind";
    std::string algo = "brute", out_path, sizes_arg = "8";
    int trials = 100, dcase = 1;
    std::uint64_t seed = 1;
    bool allow_large = false;

    auto *rate = app.add_subcommand("rate", "Rate report for one route");
    rate->add_option("netfile", net_path, "network file")->required();
    rate->add_option("--route", route_arg, "comma-separated node ids, e.g. 1,2,4");
    rate->add_option("--strategy", strategy, "sh|mh|df")
        ->check(CLI::IsMember({"sh", "mh", "df"}));
    rate->add_option("--mode", mode_arg, "ind|corr")->check(CLI::IsMember({"ind", "corr"}));

    auto *search = app.add_subcommand("search", "Route search");
    search->add_option("netfile", net_path, "network file")->required();
    search->add_option("--algo", algo, "brute|nna|nnsa|mspa")
        ->check(CLI::IsMember({"brute", "nna", "nnsa", "mspa"}));
    search->add_option("--mode", mode_arg, "ind|corr")->check(CLI::IsMember({"ind", "corr"}));
    search->add_flag("--allow-large", allow_large, "lift the D <= 12 brute-force guard");

    auto *sweep = app.add_subcommand("sweep", "Rate-ratio sweep over random line routes");
    sweep->add_option("--sizes", sizes_arg, "comma-separated route lengths")->required();
    sweep->add_option("--trials", trials, "trials per size")->check(CLI::PositiveNumber);
    sweep->add_option("--seed", seed, "RNG seed");
    sweep->add_option("--case", dcase, "1: d_1D = 10, 2: d_1D = |M|-1")
        ->check(CLI::IsMember({1, 2}));
    sweep->add_option("--out", out_path, "write CSV to file instead of stdout");

    auto *stats = app.add_subcommand("stats", "NNSA candidate-set statistics");
    stats->add_option("--d", sizes_arg, "comma-separated network sizes")->required();
    stats->add_option("--trials", trials, "trials per size")->check(CLI::PositiveNumber);
    stats->add_option("--seed", seed, "RNG seed");
    stats->add_option("--out", out_path, "write CSV to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (rate->parsed())
            return cmd_rate(net_path, route_arg, strategy, mode_arg);
        if (search->parsed())
            return cmd_search(net_path, algo, mode_arg, allow_large);

        ExperimentConfig cfg;
        cfg.sizes = parse_sizes_arg(sizes_arg);
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.distance_case = dcase == 1 ? DistanceCase::fixed_ten : DistanceCase::unit_spacing;
        if (sweep->parsed()) {
            emit(ratio_sweep_csv(ratio_sweep(cfg), cfg.distance_case), out_path);
        } else {
            emit(nnsa_stats_csv(nnsa_size_stats(cfg)), out_path);
        }
        return 0;
    } catch (const TooLargeError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NetworkError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const RouteError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
