#ifndef RELAYNET_NETWORK_HPP
#define RELAYNET_NETWORK_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace relaynet {

// Nodes closer than this are rejected: the path-loss model diverges at d = 0.
inline constexpr double kMinNodeDistance = 1e-9;

struct NodeSpec {
    int id = 0;             // 1 = source, D = destination
    double x = 0.0;         // meters
    double y = 0.0;         // meters
    double transmit_power = 1.0;  // watts
    double noise_power = 1.0;     // watts
};

class NetworkError : public std::runtime_error {
  public:
    enum class Kind {
        TooFewNodes,
        DuplicateId,
        BadIdRange,
        CoincidentNodes,
        NonPositivePower,
        EtaTooSmall,
        BadKappa,
        UnknownId,
        SameNode,
    };

    NetworkError(Kind kind, const std::string &msg)
        : std::runtime_error(msg), kind_(kind) {}

    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

// Static network description: node positions and powers plus the propagation
// constants of the path-loss model. Immutable after validation.
struct Network {
    std::vector<NodeSpec> nodes;  // sorted by id after validate_network
    double kappa = 1.0;           // path-loss scale constant
    double eta = 2.0;             // path-loss exponent, >= 2

    int size() const { return static_cast<int>(nodes.size()); }

    const NodeSpec &node(int id) const {
        if (id < 1 || id > size() || nodes[static_cast<std::size_t>(id - 1)].id != id)
            throw NetworkError(NetworkError::Kind::UnknownId,
                               "unknown node id " + std::to_string(id));
        return nodes[static_cast<std::size_t>(id - 1)];
    }
};

inline double pairwise_distance(const Network &net, int i, int t) {
    if (i == t)
        throw NetworkError(NetworkError::Kind::SameNode,
                           "distance of node " + std::to_string(i) + " to itself");
    const NodeSpec &a = net.node(i);
    const NodeSpec &b = net.node(t);
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Validates all network invariants and returns the network with nodes ordered
// by id. Ids must form exactly {1, ..., D}.
inline Network validate_network(Network net) {
    if (net.nodes.size() < 2)
        throw NetworkError(NetworkError::Kind::TooFewNodes,
                           "network needs at least a source and a destination");
    if (net.eta < 2.0)
        throw NetworkError(NetworkError::Kind::EtaTooSmall,
                           "path-loss exponent must be >= 2, got " + std::to_string(net.eta));
    if (!(net.kappa > 0.0))
        throw NetworkError(NetworkError::Kind::BadKappa, "kappa must be positive");

    std::sort(net.nodes.begin(), net.nodes.end(),
              [](const NodeSpec &a, const NodeSpec &b) { return a.id < b.id; });
    const int d = net.size();
    for (int k = 0; k < d; ++k) {
        const NodeSpec &n = net.nodes[static_cast<std::size_t>(k)];
        if (n.id != k + 1) {
            if (k > 0 && n.id == net.nodes[static_cast<std::size_t>(k - 1)].id)
                throw NetworkError(NetworkError::Kind::DuplicateId,
                                   "duplicate node id " + std::to_string(n.id));
            throw NetworkError(NetworkError::Kind::BadIdRange,
                               "node ids must form {1, ..., D}; missing id " +
                                   std::to_string(k + 1));
        }
        if (!(n.transmit_power > 0.0) || !(n.noise_power > 0.0))
            throw NetworkError(NetworkError::Kind::NonPositivePower,
                               "node " + std::to_string(n.id) +
                                   " has non-positive transmit or noise power");
    }
    for (int i = 1; i <= d; ++i)
        for (int t = i + 1; t <= d; ++t)
            if (pairwise_distance(net, i, t) < kMinNodeDistance)
                throw NetworkError(NetworkError::Kind::CoincidentNodes,
                                   "nodes " + std::to_string(i) + " and " +
                                       std::to_string(t) + " coincide");
    return net;
}

// Received power at node t from node i: kappa * d^(-eta) * P_i.
inline double received_power(const Network &net, int i, int t) {
    const double d = pairwise_distance(net, i, t);
    return net.kappa * std::pow(d, -net.eta) * net.node(i).transmit_power;
}

// Dense cache of received powers for all ordered node pairs. The diagonal is
// NaN; the path-loss model has no self-reception.
struct PowerMatrix {
    int dim = 0;
    std::vector<double> entries;  // row-major, dim x dim

    double at(int i, int t) const {
        return entries[static_cast<std::size_t>((i - 1) * dim + (t - 1))];
    }
};

inline PowerMatrix power_matrix(const Network &net) {
    const int d = net.size();
    PowerMatrix m;
    m.dim = d;
    m.entries.assign(static_cast<std::size_t>(d) * static_cast<std::size_t>(d),
                     std::numeric_limits<double>::quiet_NaN());
    for (int i = 1; i <= d; ++i)
        for (int t = 1; t <= d; ++t)
            if (i != t)
                m.entries[static_cast<std::size_t>((i - 1) * d + (t - 1))] =
                    received_power(net, i, t);
    return m;
}

}  // namespace relaynet

#endif
