#pragma once

#include <cstdint>

#include "ising/types.hpp"

namespace ising {

/// Four-connected two-dimensional torus of size side x side with every
/// coupling equal to `coupling`. Nodes are indexed row-major over the grid.
/// For side = 2 the wrap-around neighbour coincides with the direct one and
/// the duplicate edge collapses, so degrees drop to 2.
ConnectivityMatrix lattice_topology(int side, double coupling);

/// Random graph where every node has degree exactly `degree` and edge weights
/// are uniform on [weight_low, weight_high]. Uses the pairing model with
/// rejection of self-loops and multi-edges; throws after 1000 failed pairings.
ConnectivityMatrix random_regular_topology(int p, int degree, double weight_low,
                                           double weight_high, std::uint64_t seed);

}  // namespace ising
