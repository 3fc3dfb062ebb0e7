#pragma once

// Loop-cutset conditioning for multiply connected networks.
//
// For each joint state of the cutset the network is turned into a polytree:
// every cutset member keeps its parents and its CPT restricted to the chosen
// state, and each of its outgoing arcs that still lies on an undirected cycle
// is moved to a fresh single-state root clone with prior 1. The chain rule
// of the result reproduces the original joint probability of every
// consistent instantiation, so the per-state streams can be merged directly.

#include <cstddef>
#include <vector>

#include "bnenum/engine.hpp"
#include "bnenum/model.hpp"

namespace bnenum {

constexpr std::size_t kDefaultCutsetCap = 4096;

struct Cutset {
  std::vector<VarIndex> members;
  std::size_t joint_size = 1;
};

/// States of the cutset members, aligned with Cutset::members.
struct CutsetInstance {
  std::vector<StateIndex> states;
};

struct ConditionedNetwork {
  BayesianNetwork network;
  /// For each variable of `network`, the original variable it stands for.
  std::vector<VarIndex> origin;
  /// True for split clones (the original keeps its own assignment).
  std::vector<bool> is_clone;
};

/// Greedy: while the residual graph has a cycle, split the node with the
/// highest residual degree (ties to the lowest index) among nodes with an
/// outgoing arc on a cycle. Not necessarily minimal.
Cutset find_loop_cutset(const BayesianNetwork& net);

ConditionedNetwork condition_network(const BayesianNetwork& net, const Cutset& cutset, const CutsetInstance& c);

/// Cutset instances in iteration order: members in cutset order, states in
/// declared order, last member fastest.
std::vector<CutsetInstance> cutset_instances(const BayesianNetwork& net, const Cutset& cutset);

struct GeneralOptions {
  std::size_t cutset_cap = kDefaultCutsetCap;
  std::optional<VarIndex> root;  // forwarded to the polytree path
};

/// Any valid network. Polytrees go straight to enumerate_instances.
InstantiationStream enumerate_general(const BayesianNetwork& net, const Evidence& evidence = {},
                                      const GeneralOptions& options = {});

}  // namespace bnenum
