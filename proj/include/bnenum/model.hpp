#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bnenum {

using VarIndex = int;
using StateIndex = int;

struct Variable {
  std::string id;
  std::vector<std::string> states;
  std::vector<std::string> parents;

  bool operator==(const Variable&) const = default;
};

/// Conditional probability table in row-major layout: parents in declared
/// order with the first parent varying slowest, the owner's own state fastest.
struct Cpt {
  std::string owner;
  std::vector<double> table;

  bool operator==(const Cpt&) const = default;
};

/// Observed states keyed by variable index.
using Evidence = std::map<VarIndex, StateIndex>;

/// A discrete Bayesian network. Construction never throws on semantic
/// problems (dangling parents, cycles, bad tables); validate_network reports
/// them. Every algorithm entry point validates before it relies on structure.
class BayesianNetwork {
 public:
  BayesianNetwork() = default;
  BayesianNetwork(std::string name, std::vector<Variable> variables, std::vector<Cpt> cpts);

  const std::string& name() const { return name_; }
  std::size_t size() const { return variables_.size(); }
  bool empty() const { return variables_.empty(); }

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Cpt>& cpts() const { return cpts_; }
  const Variable& variable(VarIndex v) const { return variables_[static_cast<std::size_t>(v)]; }
  std::size_t cardinality(VarIndex v) const { return variable(v).states.size(); }

  std::optional<VarIndex> find(std::string_view id) const;
  /// Throws PreconditionError for unknown ids.
  VarIndex index_of(std::string_view id) const;
  std::optional<StateIndex> find_state(VarIndex v, std::string_view state) const;

  /// Resolved parents in declared order; unresolvable references are skipped.
  std::span<const VarIndex> parents(VarIndex v) const { return parents_[static_cast<std::size_t>(v)]; }
  /// Children in ascending index order.
  std::span<const VarIndex> children(VarIndex v) const { return children_[static_cast<std::size_t>(v)]; }

  /// Table for v, or nullptr when no CPT names v as owner.
  const std::vector<double>* table(VarIndex v) const;

  /// Row-major offset of P(v = state | parents = parent_states).
  std::size_t cpt_offset(VarIndex v, StateIndex state, std::span<const StateIndex> parent_states) const;
  /// P(v = state | parents = parent_states); parent_states in declared order.
  double probability(VarIndex v, StateIndex state, std::span<const StateIndex> parent_states) const;

  bool operator==(const BayesianNetwork& other) const {
    return name_ == other.name_ && variables_ == other.variables_ && cpts_ == other.cpts_;
  }

 private:
  std::string name_;
  std::vector<Variable> variables_;
  std::vector<Cpt> cpts_;
  std::unordered_map<std::string, VarIndex> index_;
  std::vector<std::vector<VarIndex>> parents_;
  std::vector<std::vector<VarIndex>> children_;
  std::vector<int> cpt_of_;  // variable -> position in cpts_, -1 if missing
};

/// A full assignment over a network's variables, aligned with declaration order.
struct Instantiation {
  std::vector<StateIndex> states;
  double log_weight = 0.0;

  bool operator==(const Instantiation&) const = default;
};

struct ValidationReport {
  std::vector<std::string> problems;

  bool ok() const { return problems.empty(); }
};

struct NetworkStats {
  std::vector<std::size_t> size_per_node;
  std::size_t total_size = 0;
  std::vector<std::size_t> degree_per_node;
  std::size_t max_degree = 0;
};

ValidationReport validate_network(const BayesianNetwork& net);
/// Throws ValidationError when validate_network reports problems.
void require_valid(const BayesianNetwork& net);

/// True iff the underlying undirected graph is a forest.
bool is_singly_connected(const BayesianNetwork& net);

/// Sum of log CPT factors; -inf when any factor is zero.
double joint_log_probability(const BayesianNetwork& net, std::span<const StateIndex> states);
inline double joint_log_probability(const BayesianNetwork& net, const Instantiation& inst) {
  return joint_log_probability(net, inst.states);
}

NetworkStats network_stats(const BayesianNetwork& net);

/// Nodes reachable from y once the arc between y and x is removed. Requires
/// an arc in either direction and a singly connected component.
std::vector<VarIndex> subnetwork_side(const BayesianNetwork& net, VarIndex y, VarIndex x);

/// Connected components of the undirected graph, each sorted ascending and
/// ordered by their smallest member.
std::vector<std::vector<VarIndex>> connected_components(const BayesianNetwork& net);

/// Total number of full instantiations, saturating at SIZE_MAX.
std::size_t instantiation_count(const BayesianNetwork& net);

}  // namespace bnenum
