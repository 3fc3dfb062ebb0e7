#pragma once

// Brute-force reference enumeration. Deliberately naive: every full
// instantiation is scored by the chain rule and the list is sorted with the
// same ordering the lazy engine uses (heavier first, then lexicographically
// smaller state vector).

#include <cstddef>
#include <vector>

#include "bnenum/model.hpp"
#include "bnenum/streams.hpp"

namespace bnenum {

constexpr std::size_t kDefaultOracleCap = std::size_t{1} << 20;

struct OracleEntry {
  Instantiation instantiation;  // log_weight from joint_log_probability
  LogWeight weight;             // the sort key
};

using OracleResult = std::vector<OracleEntry>;

/// Every full instantiation consistent with `evidence`, best first. Throws
/// CapExceededError when more than `cap` instantiations would be scored.
OracleResult brute_force_enumerate(const BayesianNetwork& net, const Evidence& evidence = {},
                                   std::size_t cap = kDefaultOracleCap);

Instantiation brute_force_mpe(const BayesianNetwork& net, const Evidence& evidence = {},
                              std::size_t cap = kDefaultOracleCap);

}  // namespace bnenum
