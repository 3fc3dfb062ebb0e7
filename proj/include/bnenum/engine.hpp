#pragma once

// Ordered enumeration of instantiations of singly connected networks by
// lazy message passing.
//
// A message from Y to a neighbour X is a vector of ranked streams over the
// nodes on Y's side of the Y-X arc. When Y is a parent of X the vector is
// indexed by Y's states and ordered by the prior of the sub-instantiation
// (a "pi" message); when Y is a child of X it is indexed by X's states and
// ordered by the probability conditional on X (a "lambda" message). A
// dummy single-state parent attached to a root node turns the root's lambda
// message into the ordered stream of all instantiations.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bnenum/model.hpp"
#include "bnenum/streams.hpp"

namespace bnenum {

enum class MessageKind { pi, lambda };

struct MessageScope {
  VarIndex from = -1;
  VarIndex to = -1;
  NodeSetPtr nodes;  // subnetwork_side(from, to)
};

struct Message {
  MessageKind kind = MessageKind::pi;
  MessageScope scope;
  /// Indexed by the states of `from` (pi) or of `to` (lambda).
  std::vector<StreamPtr> entries;
};

/// Keep only the observed state of each evidence variable. CPT rows are
/// sliced, never renormalized, so instance weights stay prior probabilities.
BayesianNetwork apply_evidence(const BayesianNetwork& net, const Evidence& evidence);

/// Adds a single-state root D (prior 1) as the last parent of r.
std::pair<BayesianNetwork, VarIndex> attach_dummy_root(const BayesianNetwork& net, VarIndex r);

/// Memoized message computation over one network. The network must be
/// singly connected; it need not have normalized rows (evidence slices).
///
/// Payload leaves are written with labels: variable v in state s is reported
/// as (label_var[v], label_state[v][s]); variables with label -1 contribute
/// nothing to payloads.
class EnumerationSession {
 public:
  explicit EnumerationSession(BayesianNetwork net);
  EnumerationSession(BayesianNetwork net, std::vector<VarIndex> label_var,
                     std::vector<std::vector<StateIndex>> label_state);

  const BayesianNetwork& network() const { return net_; }

  /// Dispatches by arc direction after recursively requesting the messages
  /// of every other neighbour of `from`. Memoized per directed arc.
  const Message& compute_message(VarIndex from, VarIndex to);
  const Message& compute_pi_message(VarIndex from, VarIndex to);
  const Message& compute_lambda_message(VarIndex from, VarIndex to);

  const Message* find_message(VarIndex from, VarIndex to) const;
  const std::map<std::pair<VarIndex, VarIndex>, Message>& messages() const { return memo_; }

  /// compute_message invocations, including memo hits.
  std::size_t requests() const { return requests_; }
  /// Messages actually built.
  std::size_t computed() const { return memo_.size(); }

 private:
  void require_others(VarIndex from, VarIndex to);
  StreamPtr lambda_product(VarIndex y, StateIndex state, VarIndex excluded_child, const NodeSetPtr& nodes);
  NodeSetPtr lambda_nodes(VarIndex y, VarIndex excluded_child);
  PayloadPtr label(VarIndex v, StateIndex s) const;

  BayesianNetwork net_;
  std::vector<VarIndex> label_var_;
  std::vector<std::vector<StateIndex>> label_state_;
  std::map<std::pair<VarIndex, VarIndex>, Message> memo_;
  std::vector<char> active_;
  std::size_t requests_ = 0;
};

struct EnumerationOptions {
  /// Root node for the dummy parent (per connected component it belongs to);
  /// defaults to the lowest index of each component.
  std::optional<VarIndex> root;
};

/// Lazy stream of full instantiations of the original network.
class InstantiationStream {
 public:
  InstantiationStream(StreamPtr root, std::size_t variable_count,
                      std::vector<std::shared_ptr<EnumerationSession>> sessions);

  std::optional<Instantiation> next();
  /// True if another instantiation exists (forces it).
  bool has_next() { return cursor_.peek() != nullptr; }
  std::size_t position() const { return cursor_.position(); }

  const StreamPtr& stream() const { return cursor_.stream(); }
  const std::vector<std::shared_ptr<EnumerationSession>>& sessions() const { return sessions_; }

  /// Flattens a payload whose labels are original variable indices.
  static Instantiation materialize(const WeightedItem& item, std::size_t variable_count);

 private:
  Cursor cursor_;
  std::size_t variable_count_;
  std::vector<std::shared_ptr<EnumerationSession>> sessions_;
};

/// Evidence, validation and polytree check, then enumeration in
/// non-increasing probability. Throws ValidationError or StructureError.
InstantiationStream enumerate_instances(const BayesianNetwork& net, const Evidence& evidence = {},
                                        const EnumerationOptions& options = {});

namespace detail {

/// Enumerates `derived` (singly connected) and reports payloads in terms of
/// an original network with `original_size` variables. `origin[v]` is the
/// original index of derived variable v, or -1 to drop it; states map by
/// name onto `original`.
struct PolytreeEnumeration {
  StreamPtr stream;  // over `original` indices
  std::vector<std::shared_ptr<EnumerationSession>> sessions;
};

PolytreeEnumeration enumerate_polytree(const BayesianNetwork& derived, const BayesianNetwork& original,
                                       std::span<const VarIndex> origin, std::optional<VarIndex> root);

/// Restricts every variable in `keep` to its single listed state, slicing
/// its own CPT and the CPTs of its children. CPTs come out in variable order.
BayesianNetwork restrict_states(const BayesianNetwork& net, const std::map<VarIndex, StateIndex>& keep);

}  // namespace detail

}  // namespace bnenum
