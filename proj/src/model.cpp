#include "bnenum/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include "bnenum/errors.hpp"

namespace bnenum {

namespace {

constexpr double kRowTolerance = 1e-9;

std::string quote(const std::string& s) { return "'" + s + "'"; }

}  // namespace

BayesianNetwork::BayesianNetwork(std::string name, std::vector<Variable> variables, std::vector<Cpt> cpts)
    : name_(std::move(name)), variables_(std::move(variables)), cpts_(std::move(cpts)) {
  const std::size_t n = variables_.size();
  for (std::size_t i = 0; i < n; ++i) index_.emplace(variables_[i].id, static_cast<VarIndex>(i));
  parents_.resize(n);
  children_.resize(n);
  cpt_of_.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& p : variables_[i].parents) {
      auto it = index_.find(p);
      if (it == index_.end()) continue;
      parents_[i].push_back(it->second);
      children_[static_cast<std::size_t>(it->second)].push_back(static_cast<VarIndex>(i));
    }
  }
  for (auto& c : children_) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  for (std::size_t c = 0; c < cpts_.size(); ++c) {
    auto it = index_.find(cpts_[c].owner);
    if (it != index_.end() && cpt_of_[static_cast<std::size_t>(it->second)] < 0)
      cpt_of_[static_cast<std::size_t>(it->second)] = static_cast<int>(c);
  }
}

std::optional<VarIndex> BayesianNetwork::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VarIndex BayesianNetwork::index_of(std::string_view id) const {
  auto v = find(id);
  if (!v) throw PreconditionError("unknown variable '" + std::string(id) + "'");
  return *v;
}

std::optional<StateIndex> BayesianNetwork::find_state(VarIndex v, std::string_view state) const {
  const auto& states = variable(v).states;
  auto it = std::find(states.begin(), states.end(), state);
  if (it == states.end()) return std::nullopt;
  return static_cast<StateIndex>(it - states.begin());
}

const std::vector<double>* BayesianNetwork::table(VarIndex v) const {
  int c = cpt_of_[static_cast<std::size_t>(v)];
  return c < 0 ? nullptr : &cpts_[static_cast<std::size_t>(c)].table;
}

std::size_t BayesianNetwork::cpt_offset(VarIndex v, StateIndex state,
                                        std::span<const StateIndex> parent_states) const {
  const auto& ps = parents(v);
  std::size_t row = 0;
  for (std::size_t i = 0; i < ps.size(); ++i)
    row = row * cardinality(ps[i]) + static_cast<std::size_t>(parent_states[i]);
  return row * cardinality(v) + static_cast<std::size_t>(state);
}

double BayesianNetwork::probability(VarIndex v, StateIndex state,
                                    std::span<const StateIndex> parent_states) const {
  return (*table(v))[cpt_offset(v, state, parent_states)];
}

ValidationReport validate_network(const BayesianNetwork& net) {
  ValidationReport report;
  auto problem = [&](std::string msg) { report.problems.push_back(std::move(msg)); };

  const std::size_t n = net.size();
  std::set<std::string> seen_ids;
  for (std::size_t i = 0; i < n; ++i) {
    const Variable& var = net.variables()[i];
    if (var.id.empty()) problem("variable #" + std::to_string(i) + ": empty id");
    if (!seen_ids.insert(var.id).second) problem("duplicate variable id " + quote(var.id));
    if (var.states.empty()) problem("variable " + quote(var.id) + ": no states");
    std::set<std::string> states(var.states.begin(), var.states.end());
    if (states.size() != var.states.size()) problem("variable " + quote(var.id) + ": duplicate state name");
    std::set<std::string> parents;
    for (const auto& p : var.parents) {
      if (p == var.id) problem("variable " + quote(var.id) + ": lists itself as a parent");
      if (!parents.insert(p).second) problem("variable " + quote(var.id) + ": duplicate parent " + quote(p));
      if (!net.find(p)) {
        problem("variable " + quote(var.id) + ": dangling parent " + quote(p));
      }
    }
  }

  std::map<std::string, int> cpt_count;
  for (const auto& cpt : net.cpts()) {
    ++cpt_count[cpt.owner];
    if (!net.find(cpt.owner)) problem("CPT for unknown variable " + quote(cpt.owner));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Variable& var = net.variables()[i];
    const int count = cpt_count[var.id];
    if (count == 0) problem("variable " + quote(var.id) + ": missing CPT");
    if (count > 1) problem("variable " + quote(var.id) + ": " + std::to_string(count) + " CPTs");
  }

  // Table shape and contents.
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = static_cast<VarIndex>(i);
    const Variable& var = net.variable(v);
    const auto* table = net.table(v);
    if (!table || var.states.empty()) continue;
    bool resolvable = true;
    std::size_t rows = 1;
    for (const auto& p : var.parents) {
      auto pi = net.find(p);
      if (!pi) { resolvable = false; break; }
      rows *= net.cardinality(*pi);
    }
    if (!resolvable) continue;
    const std::size_t expected = rows * var.states.size();
    if (table->size() != expected) {
      problem("variable " + quote(var.id) + ": CPT length " + std::to_string(table->size()) + ", expected " +
              std::to_string(expected));
      continue;
    }
    for (std::size_t k = 0; k < table->size(); ++k) {
      const double x = (*table)[k];
      if (!(x >= 0.0 && x <= 1.0)) {
        std::ostringstream os;
        os << "variable " << quote(var.id) << ": CPT entry " << k << " = " << x << " outside [0,1]";
        problem(os.str());
      }
    }
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (std::size_t s = 0; s < var.states.size(); ++s) sum += (*table)[r * var.states.size() + s];
      if (!(std::fabs(sum - 1.0) <= kRowTolerance)) {
        std::ostringstream os;
        os.precision(17);
        os << "variable " << quote(var.id) << ": CPT row " << r << " sums to " << sum << ", not 1";
        problem(os.str());
      }
    }
  }

  // Cycle check over resolved arcs (Kahn).
  {
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t i = 0; i < n; ++i) indegree[i] = net.parents(static_cast<VarIndex>(i)).size();
    std::queue<VarIndex> ready;
    for (std::size_t i = 0; i < n; ++i)
      if (indegree[i] == 0) ready.push(static_cast<VarIndex>(i));
    std::size_t visited = 0;
    while (!ready.empty()) {
      VarIndex v = ready.front();
      ready.pop();
      ++visited;
      for (VarIndex c : net.children(v)) {
        // a child lists each parent at most once in a valid net; count all listings
        for (VarIndex p : net.parents(c))
          if (p == v && --indegree[static_cast<std::size_t>(c)] == 0) ready.push(c);
      }
    }
    if (visited != n) {
      std::string members;
      for (std::size_t i = 0; i < n; ++i)
        if (indegree[i] > 0) members += (members.empty() ? "" : ", ") + net.variables()[i].id;
      problem("directed cycle among {" + members + "}");
    }
  }
  return report;
}

void require_valid(const BayesianNetwork& net) {
  auto report = validate_network(net);
  if (!report.ok()) throw ValidationError(std::move(report.problems));
}

namespace {

std::vector<std::vector<VarIndex>> undirected_adjacency(const BayesianNetwork& net) {
  std::vector<std::vector<VarIndex>> adj(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    for (VarIndex p : net.parents(static_cast<VarIndex>(i))) {
      adj[i].push_back(p);
      adj[static_cast<std::size_t>(p)].push_back(static_cast<VarIndex>(i));
    }
  }
  return adj;
}

}  // namespace

std::vector<std::vector<VarIndex>> connected_components(const BayesianNetwork& net) {
  const auto adj = undirected_adjacency(net);
  std::vector<int> comp(net.size(), -1);
  std::vector<std::vector<VarIndex>> out;
  for (std::size_t s = 0; s < net.size(); ++s) {
    if (comp[s] >= 0) continue;
    std::vector<VarIndex> members;
    std::vector<VarIndex> stack{static_cast<VarIndex>(s)};
    comp[s] = static_cast<int>(out.size());
    while (!stack.empty()) {
      VarIndex v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (VarIndex w : adj[static_cast<std::size_t>(v)]) {
        if (comp[static_cast<std::size_t>(w)] < 0) {
          comp[static_cast<std::size_t>(w)] = static_cast<int>(out.size());
          stack.push_back(w);
        }
      }
    }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

bool is_singly_connected(const BayesianNetwork& net) {
  std::size_t edges = 0;
  for (std::size_t i = 0; i < net.size(); ++i) edges += net.parents(static_cast<VarIndex>(i)).size();
  return edges + connected_components(net).size() == net.size();
}

double joint_log_probability(const BayesianNetwork& net, std::span<const StateIndex> states) {
  if (states.size() != net.size())
    throw PreconditionError("instantiation covers " + std::to_string(states.size()) + " of " +
                            std::to_string(net.size()) + " variables");
  double total = 0.0;
  std::vector<StateIndex> parent_states;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto v = static_cast<VarIndex>(i);
    if (states[i] < 0 || static_cast<std::size_t>(states[i]) >= net.cardinality(v))
      throw PreconditionError("variable '" + net.variable(v).id + "' has no state " + std::to_string(states[i]));
    parent_states.clear();
    for (VarIndex p : net.parents(v)) parent_states.push_back(states[static_cast<std::size_t>(p)]);
    const double p = net.probability(v, states[i], parent_states);
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    total += std::log(p);
  }
  return total;
}

NetworkStats network_stats(const BayesianNetwork& net) {
  NetworkStats stats;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto v = static_cast<VarIndex>(i);
    std::size_t size = net.cardinality(v);
    for (VarIndex p : net.parents(v)) size *= net.cardinality(p);
    const std::size_t degree = net.parents(v).size() + net.children(v).size();
    stats.size_per_node.push_back(size);
    stats.degree_per_node.push_back(degree);
    stats.total_size += size;
    stats.max_degree = std::max(stats.max_degree, degree);
  }
  return stats;
}

std::vector<VarIndex> subnetwork_side(const BayesianNetwork& net, VarIndex y, VarIndex x) {
  auto has = [](std::span<const VarIndex> s, VarIndex v) { return std::find(s.begin(), s.end(), v) != s.end(); };
  if (!has(net.parents(x), y) && !has(net.parents(y), x))
    throw PreconditionError("no arc between '" + net.variable(y).id + "' and '" + net.variable(x).id + "'");
  const auto adj = undirected_adjacency(net);
  std::vector<char> seen(net.size(), 0);
  std::vector<VarIndex> stack{y};
  seen[static_cast<std::size_t>(y)] = 1;
  std::vector<VarIndex> out;
  while (!stack.empty()) {
    VarIndex v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (VarIndex w : adj[static_cast<std::size_t>(v)]) {
      if (v == y && w == x) continue;
      if (w == x) throw StructureError("arc '" + net.variable(y).id + "'-'" + net.variable(x).id + "' lies on a cycle");
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        stack.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t instantiation_count(const BayesianNetwork& net) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const std::size_t c = net.cardinality(static_cast<VarIndex>(i));
    if (c != 0 && total > std::numeric_limits<std::size_t>::max() / c) return std::numeric_limits<std::size_t>::max();
    total *= c;
  }
  return total;
}

}  // namespace bnenum
