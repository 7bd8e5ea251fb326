#ifndef RELAYNET_IO_HPP
#define RELAYNET_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "relaynet/experiments.hpp"
#include "relaynet/network.hpp"
#include "relaynet/rate.hpp"
#include "relaynet/search.hpp"

namespace relaynet {

inline constexpr int kSchemaVersion = 1;

class ParseError : public std::runtime_error {
  public:
    ParseError(int line, const std::string &msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

    int line() const { return line_; }

  private:
    int line_;
};

// Line-oriented network file:
//   kappa <v>
//   eta <v>
//   node <id> <x> <y> <transmit_power> <noise_power>
// with '#' comments and blank lines ignored. Unknown keys are rejected.
inline Network parse_network(std::istream &in) {
    Network net;
    std::string line;
    int lineno = 0;
    bool any = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key))
            continue;
        any = true;
        if (key == "kappa" || key == "eta") {
            double v;
            if (!(ls >> v))
                throw ParseError(lineno, "expected a number after '" + key + "'");
            (key == "kappa" ? net.kappa : net.eta) = v;
        } else if (key == "node") {
            NodeSpec n;
            if (!(ls >> n.id >> n.x >> n.y >> n.transmit_power >> n.noise_power))
                throw ParseError(lineno, "expected 'node <id> <x> <y> <P> <N>'");
            net.nodes.push_back(n);
        } else {
            throw ParseError(lineno, "unknown key '" + key + "'");
        }
        std::string extra;
        if (ls >> extra)
            throw ParseError(lineno, "trailing content '" + extra + "'");
    }
    if (!any)
        throw ParseError(lineno == 0 ? 1 : lineno, "empty network file");
    return validate_network(std::move(net));
}

inline Network load_network(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open network file: " + path);
    return parse_network(in);
}

// Shortest-round-trip double formatting for CSV cells; always uses '.' as the
// decimal separator.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline const char *strategy_name(Strategy s) {
    switch (s) {
        case Strategy::SH: return "sh";
        case Strategy::MH: return "mh";
        default: return "df";
    }
}

inline const char *mode_name(CodewordMode m) {
    return m == CodewordMode::independent ? "independent" : "correlated";
}

inline nlohmann::json to_json(const Route &route) { return route.nodes; }

inline nlohmann::json to_json(const PowerSplit &splits) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &row : splits.rows)
        rows.push_back(row);
    return rows;
}

inline nlohmann::json to_json(const RateReport &rep) {
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = "rate_report";
    doc["strategy"] = strategy_name(rep.strategy);
    doc["mode"] = mode_name(rep.mode);
    nlohmann::json per_node = nlohmann::json::object();
    for (std::size_t k = 0; k < rep.per_node_rate.size(); ++k)
        per_node[std::to_string(k + 2)] = rep.per_node_rate[k];
    doc["per_node_rate"] = per_node;
    doc["bottleneck_position"] = rep.bottleneck;
    doc["supported_rate"] = rep.supported_rate;
    doc["converged"] = rep.converged;
    if (rep.splits && rep.mode == CodewordMode::correlated)
        doc["splits"] = to_json(*rep.splits);
    return doc;
}

inline nlohmann::json to_json(const SearchResult &result) {
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = "search_result";
    doc["strategy"] = strategy_name(result.strategy);
    doc["mode"] = mode_name(result.mode);
    nlohmann::json routes = nlohmann::json::array();
    for (const Route &r : result.best_routes)
        routes.push_back(to_json(r));
    doc["best_routes"] = routes;
    doc["max_rate"] = result.max_rate;
    doc["routes_evaluated"] = result.routes_evaluated;
    return doc;
}

inline std::string ratio_sweep_csv(const std::vector<RatioRow> &rows, DistanceCase dcase) {
    std::string out =
        "route_length,trials,distance_case,mean_r_sh,mean_r_mh,mean_r_df,"
        "df_over_sh,df_over_mh,mh_over_sh\n";
    const char *dc = dcase == DistanceCase::fixed_ten ? "1" : "2";
    for (const RatioRow &row : rows) {
        out += std::to_string(row.route_length) + "," + std::to_string(row.trials) + "," +
               dc + "," + format_double(row.mean_r_sh) + "," + format_double(row.mean_r_mh) +
               "," + format_double(row.mean_r_df) + "," + format_double(row.df_over_sh) +
               "," + format_double(row.df_over_mh) + "," + format_double(row.mh_over_sh) +
               "\n";
    }
    return out;
}

inline std::string nnsa_stats_csv(const std::vector<SummaryStats> &stats) {
    // median_lower: lower-median convention over the per-trial ratios.
    std::string out =
        "size,trials,route_space,mean_ratio,median_lower_ratio,min_ratio,max_ratio\n";
    for (const SummaryStats &s : stats) {
        out += std::to_string(s.size) + "," + std::to_string(s.trials) + "," +
               std::to_string(s.route_space) + "," + format_double(s.mean) + "," +
               format_double(s.median) + "," + format_double(s.min) + "," +
               format_double(s.max) + "\n";
    }
    return out;
}

}  // namespace relaynet

#endif
