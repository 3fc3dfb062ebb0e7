#include "bnenum/conditioning.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "bnenum/errors.hpp"

namespace bnenum {

namespace {

struct Arc {
  VarIndex parent;
  VarIndex child;
  bool alive = true;
};

std::vector<Arc> arcs_of(const BayesianNetwork& net) {
  std::vector<Arc> arcs;
  for (std::size_t c = 0; c < net.size(); ++c)
    for (VarIndex p : net.parents(static_cast<VarIndex>(c))) arcs.push_back({p, static_cast<VarIndex>(c)});
  return arcs;
}

// Bridges of the undirected graph formed by the live arcs (Tarjan low-link,
// iterative). An arc lies on an undirected cycle iff it is not a bridge.
std::vector<bool> find_bridges(std::size_t n, const std::vector<Arc>& arcs) {
  std::vector<std::vector<std::pair<VarIndex, std::size_t>>> adj(n);
  for (std::size_t e = 0; e < arcs.size(); ++e) {
    if (!arcs[e].alive) continue;
    adj[static_cast<std::size_t>(arcs[e].parent)].push_back({arcs[e].child, e});
    adj[static_cast<std::size_t>(arcs[e].child)].push_back({arcs[e].parent, e});
  }
  std::vector<bool> bridge(arcs.size(), false);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;
  struct Frame {
    VarIndex v;
    std::size_t via;  // arc used to enter v
    std::size_t next = 0;
  };
  for (std::size_t s = 0; s < n; ++s) {
    if (disc[s] >= 0) continue;
    std::vector<Frame> stack{{static_cast<VarIndex>(s), std::numeric_limits<std::size_t>::max()}};
    disc[s] = low[s] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto v = static_cast<std::size_t>(f.v);
      if (f.next < adj[v].size()) {
        auto [w, e] = adj[v][f.next++];
        if (e == f.via) continue;
        const auto wi = static_cast<std::size_t>(w);
        if (disc[wi] < 0) {
          disc[wi] = low[wi] = timer++;
          stack.push_back({w, e});
        } else {
          low[v] = std::min(low[v], disc[wi]);
        }
      } else {
        const std::size_t via = f.via;
        stack.pop_back();
        if (!stack.empty()) {
          const auto u = static_cast<std::size_t>(stack.back().v);
          low[u] = std::min(low[u], low[v]);
          if (low[v] > disc[u]) bridge[via] = true;
        }
      }
    }
  }
  return bridge;
}

// Kills W's outgoing arcs that currently lie on a cycle; returns them.
std::vector<std::size_t> split_outgoing(VarIndex w, std::size_t n, std::vector<Arc>& arcs) {
  const auto bridge = find_bridges(n, arcs);
  std::vector<std::size_t> split;
  for (std::size_t e = 0; e < arcs.size(); ++e) {
    if (arcs[e].alive && arcs[e].parent == w && !bridge[e]) split.push_back(e);
  }
  for (auto e : split) arcs[e].alive = false;
  return split;
}

std::size_t joint_size_of(const BayesianNetwork& net, const std::vector<VarIndex>& members) {
  std::size_t size = 1;
  for (VarIndex m : members) {
    const std::size_t c = net.cardinality(m);
    size = size > std::numeric_limits<std::size_t>::max() / c ? std::numeric_limits<std::size_t>::max() : size * c;
  }
  return size;
}

}  // namespace

Cutset find_loop_cutset(const BayesianNetwork& net) {
  const std::size_t n = net.size();
  auto arcs = arcs_of(net);
  Cutset cutset;
  for (;;) {
    const auto bridge = find_bridges(n, arcs);
    std::vector<std::size_t> degree(n, 0);
    std::vector<bool> candidate(n, false);
    bool cyclic = false;
    for (std::size_t e = 0; e < arcs.size(); ++e) {
      if (!arcs[e].alive) continue;
      ++degree[static_cast<std::size_t>(arcs[e].parent)];
      ++degree[static_cast<std::size_t>(arcs[e].child)];
      if (!bridge[e]) {
        cyclic = true;
        candidate[static_cast<std::size_t>(arcs[e].parent)] = true;
      }
    }
    if (!cyclic) break;
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v)
      if (candidate[v] && (best == n || degree[v] > degree[best])) best = v;
    cutset.members.push_back(static_cast<VarIndex>(best));
    split_outgoing(static_cast<VarIndex>(best), n, arcs);
  }
  cutset.joint_size = joint_size_of(net, cutset.members);
  return cutset;
}

std::vector<CutsetInstance> cutset_instances(const BayesianNetwork& net, const Cutset& cutset) {
  std::vector<CutsetInstance> out;
  CutsetInstance c{std::vector<StateIndex>(cutset.members.size(), 0)};
  for (;;) {
    out.push_back(c);
    std::size_t i = c.states.size();
    while (i > 0) {
      --i;
      if (static_cast<std::size_t>(++c.states[i]) < net.cardinality(cutset.members[i])) break;
      c.states[i] = 0;
      if (i == 0) return out;
    }
    if (c.states.empty()) return out;
  }
}

ConditionedNetwork condition_network(const BayesianNetwork& net, const Cutset& cutset, const CutsetInstance& c) {
  if (c.states.size() != cutset.members.size())
    throw PreconditionError("cutset instance assigns " + std::to_string(c.states.size()) + " of " +
                            std::to_string(cutset.members.size()) + " members");
  std::map<VarIndex, StateIndex> keep;
  for (std::size_t i = 0; i < cutset.members.size(); ++i) {
    const VarIndex m = cutset.members[i];
    if (m < 0 || static_cast<std::size_t>(m) >= net.size())
      throw PreconditionError("cutset member #" + std::to_string(m) + " outside the network");
    if (c.states[i] < 0 || static_cast<std::size_t>(c.states[i]) >= net.cardinality(m))
      throw PreconditionError("cutset instance gives '" + net.variable(m).id + "' a state it does not have");
    if (!keep.emplace(m, c.states[i]).second)
      throw PreconditionError("cutset lists '" + net.variable(m).id + "' twice");
  }

  // Replay the splits in member order against the shrinking residual graph.
  auto arcs = arcs_of(net);
  std::vector<std::size_t> split;
  for (VarIndex m : cutset.members) {
    auto s = split_outgoing(m, net.size(), arcs);
    split.insert(split.end(), s.begin(), s.end());
  }

  const BayesianNetwork restricted = detail::restrict_states(net, keep);
  std::vector<Variable> vars = restricted.variables();
  std::vector<Cpt> cpts = restricted.cpts();
  ConditionedNetwork out;
  out.origin.resize(vars.size());
  for (std::size_t v = 0; v < vars.size(); ++v) out.origin[v] = static_cast<VarIndex>(v);
  out.is_clone.assign(vars.size(), false);

  auto taken = [&](const std::string& id) {
    return std::any_of(vars.begin(), vars.end(), [&](const Variable& v) { return v.id == id; });
  };
  for (std::size_t e : split) {
    const Arc& arc = arcs[e];
    const Variable& w = vars[static_cast<std::size_t>(arc.parent)];
    std::string id = w.id + "~" + vars[static_cast<std::size_t>(arc.child)].id;
    for (int k = 1; taken(id); ++k) id = w.id + "~" + vars[static_cast<std::size_t>(arc.child)].id + "#" + std::to_string(k);
    // Both the member and its clone have one state, so the child's table
    // layout is unchanged by the substitution.
    for (auto& p : vars[static_cast<std::size_t>(arc.child)].parents)
      if (p == w.id) p = id;
    Variable clone{id, w.states, {}};
    vars.push_back(std::move(clone));
    cpts.push_back(Cpt{id, {1.0}});
    out.origin.push_back(arc.parent);
    out.is_clone.push_back(true);
  }
  out.network = BayesianNetwork(net.name(), std::move(vars), std::move(cpts));
  if (!is_singly_connected(out.network))
    throw PreconditionError("cutset does not render the network singly connected");
  return out;
}

InstantiationStream enumerate_general(const BayesianNetwork& net, const Evidence& evidence,
                                      const GeneralOptions& options) {
  require_valid(net);
  if (is_singly_connected(net)) return enumerate_instances(net, evidence, EnumerationOptions{options.root});

  const BayesianNetwork reduced = apply_evidence(net, evidence);
  const Cutset cutset = find_loop_cutset(reduced);
  if (cutset.joint_size > options.cutset_cap)
    throw CapExceededError("loop cutset joint size " + std::to_string(cutset.joint_size) + " exceeds the cap of " +
                           std::to_string(options.cutset_cap));

  std::vector<StreamPtr> arms;
  std::vector<std::shared_ptr<EnumerationSession>> sessions;
  for (const auto& c : cutset_instances(reduced, cutset)) {
    ConditionedNetwork cn = condition_network(reduced, cutset, c);
    std::vector<VarIndex> origin = cn.origin;
    for (std::size_t v = 0; v < origin.size(); ++v)
      if (cn.is_clone[v]) origin[v] = -1;
    auto e = detail::enumerate_polytree(cn.network, net, origin, std::nullopt);
    arms.push_back(std::move(e.stream));
    sessions.insert(sessions.end(), e.sessions.begin(), e.sessions.end());
  }
  StreamPtr merged = merge_streams(std::move(arms));
  return InstantiationStream(std::move(merged), net.size(), std::move(sessions));
}

}  // namespace bnenum
