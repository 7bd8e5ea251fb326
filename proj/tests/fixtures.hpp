#ifndef RELAYNET_TEST_FIXTURES_HPP
#define RELAYNET_TEST_FIXTURES_HPP

#include <random>
#include <vector>

#include "relaynet/experiments.hpp"
#include "relaynet/network.hpp"
#include "relaynet/rate.hpp"

namespace fixtures {

// 4-node planar network where NNA terminates prematurely and MSPA is
// suboptimal under correlated codewords.
inline relaynet::Network net_a() {
    relaynet::Network net;
    net.nodes = {
        {1, 0.0, 0.0, 1.0, 1.0},
        {2, 0.418, 0.0, 1.0, 1.0},
        {3, 0.209, 0.6755, 1.0, 1.0},
        {4, 0.995, 0.0, 1.0, 1.0},
    };
    return relaynet::validate_network(std::move(net));
}

// 5-node line network at x = 0, 0.5, 2, 3, 4.
inline relaynet::Network net_b() {
    return relaynet::line_network({0.5, 2.0, 3.0}, 4.0).first;
}

inline relaynet::Route full_route(const relaynet::Network &net) {
    relaynet::Route route;
    for (int id = 1; id <= net.size(); ++id)
        route.nodes.push_back(id);
    return route;
}

// Random route of the given length through a random planar network of at
// least the same size.
inline std::pair<relaynet::Network, relaynet::Route>
random_net_and_route(std::mt19937_64 &rng, int route_len, int net_size) {
    relaynet::Network net =
        relaynet::gen_square_network(net_size, rng());
    relaynet::Route route;
    route.nodes.push_back(1);
    std::vector<int> relays;
    for (int id = 2; id < net_size; ++id)
        relays.push_back(id);
    std::shuffle(relays.begin(), relays.end(), rng);
    for (int k = 0; k < route_len - 2; ++k)
        route.nodes.push_back(relays[static_cast<std::size_t>(k)]);
    route.nodes.push_back(net_size);
    return {std::move(net), std::move(route)};
}

}  // namespace fixtures

#endif
