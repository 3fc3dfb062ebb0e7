#include "bnenum/oracle.hpp"

#include <algorithm>

#include "bnenum/errors.hpp"

namespace bnenum {

OracleResult brute_force_enumerate(const BayesianNetwork& net, const Evidence& evidence, std::size_t cap) {
  require_valid(net);
  const std::size_t n = net.size();
  std::vector<StateIndex> lo(n, 0), hi(n, 0);
  for (std::size_t v = 0; v < n; ++v) hi[v] = static_cast<StateIndex>(net.cardinality(static_cast<VarIndex>(v)));
  for (const auto& [v, s] : evidence) {
    if (v < 0 || static_cast<std::size_t>(v) >= n || s < 0 || s >= hi[static_cast<std::size_t>(v)])
      throw PreconditionError("evidence does not resolve against the network");
    lo[static_cast<std::size_t>(v)] = s;
    hi[static_cast<std::size_t>(v)] = s + 1;
  }
  std::size_t count = 1;
  for (std::size_t v = 0; v < n; ++v) {
    count *= static_cast<std::size_t>(hi[v] - lo[v]);
    if (count > cap)
      throw CapExceededError("brute-force enumeration exceeds the cap of " + std::to_string(cap) + " instantiations");
  }

  OracleResult out;
  out.reserve(count);
  std::vector<StateIndex> states(lo);
  std::vector<StateIndex> parent_states;
  for (bool more = true; more;) {
    LogWeight w;
    for (std::size_t v = 0; v < n; ++v) {
      parent_states.clear();
      for (VarIndex p : net.parents(static_cast<VarIndex>(v))) parent_states.push_back(states[static_cast<std::size_t>(p)]);
      w += LogWeight::from_probability(net.probability(static_cast<VarIndex>(v), states[v], parent_states));
    }
    out.push_back({Instantiation{states, joint_log_probability(net, states)}, w});

    more = false;
    for (std::size_t i = n; i-- > 0;) {
      if (++states[i] < hi[i]) {
        more = true;
        break;
      }
      states[i] = lo[i];
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const OracleEntry& a, const OracleEntry& b) {
    if (heavier(a.weight, b.weight)) return true;
    if (heavier(b.weight, a.weight)) return false;
    return a.instantiation.states < b.instantiation.states;
  });
  return out;
}

Instantiation brute_force_mpe(const BayesianNetwork& net, const Evidence& evidence, std::size_t cap) {
  return brute_force_enumerate(net, evidence, cap).front().instantiation;
}

}  // namespace bnenum
