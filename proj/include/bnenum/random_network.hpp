#pragma once

#include <cstddef>
#include <cstdint>

#include "bnenum/model.hpp"

namespace bnenum {

struct RandomNetworkParams {
  std::size_t nodes = 1;
  std::size_t max_states = 2;
  std::size_t max_degree = 1;
  std::uint64_t seed = 1;
};

/// Random singly connected network, deterministic for a given seed.
///
/// Node i > 0 attaches to a uniformly chosen earlier node whose degree is
/// still below max_degree; each tree edge is then oriented by a fair coin,
/// each node draws its state count uniformly from [2, max_states], and every
/// CPT row is a normalized vector of independent uniform(0,1) draws. Node ids
/// are X0, X1, ...; state names s0, s1, ...
///
/// Throws PreconditionError for nodes < 1, max_states < 2, max_degree < 1, or
/// max_degree = 1 with more than two nodes.
BayesianNetwork generate_random_polytree(const RandomNetworkParams& params);

}  // namespace bnenum
