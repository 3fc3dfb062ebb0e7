#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "bnenum/engine.hpp"
#include "bnenum/model.hpp"
#include "bnenum/oracle.hpp"
#include "bnenum/streams.hpp"

namespace fixtures {

using namespace bnenum;

inline BayesianNetwork make_net(std::string name, std::vector<Variable> vars, std::vector<std::vector<double>> tables) {
  std::vector<Cpt> cpts;
  for (std::size_t i = 0; i < vars.size(); ++i) cpts.push_back({vars[i].id, tables[i]});
  return BayesianNetwork(std::move(name), std::move(vars), std::move(cpts));
}

// A -> B
inline BayesianNetwork net_a() {
  return make_net("net-a", {{"A", {"yes", "no"}, {}}, {"B", {"wet", "dry"}, {"A"}}},
                  {{0.2, 0.8}, {0.9, 0.1, 0.3, 0.7}});
}

// A -> B, A -> C, B -> D, C -> D
inline BayesianNetwork net_d() {
  return make_net("net-d",
                  {{"A", {"a0", "a1"}, {}},
                   {"B", {"b0", "b1"}, {"A"}},
                   {"C", {"c0", "c1"}, {"A"}},
                   {"D", {"d0", "d1"}, {"B", "C"}}},
                  {{0.3, 0.7},
                   {0.6, 0.4, 0.15, 0.85},
                   {0.25, 0.75, 0.9, 0.1},
                   {0.95, 0.05, 0.7, 0.3, 0.45, 0.55, 0.02, 0.98}});
}

// A -> B -> C
inline BayesianNetwork chain3() {
  return make_net("chain3",
                  {{"A", {"a0", "a1"}, {}}, {"B", {"b0", "b1"}, {"A"}}, {"C", {"c0", "c1"}, {"B"}}},
                  {{0.35, 0.65}, {0.8, 0.2, 0.45, 0.55}, {0.1, 0.9, 0.6, 0.4}});
}

// A -> C <- B
inline BayesianNetwork v_structure() {
  return make_net("vee",
                  {{"A", {"a0", "a1"}, {}}, {"B", {"b0", "b1"}, {}}, {"C", {"c0", "c1"}, {"A", "B"}}},
                  {{0.4, 0.6}, {0.7, 0.3}, {0.9, 0.1, 0.5, 0.5, 0.35, 0.65, 0.05, 0.95}});
}

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

struct Shape {
  std::vector<std::size_t> card;
  std::vector<std::vector<std::size_t>> parents;
};

// Fills CPTs with normalized uniform draws; each entry is zeroed with
// probability zero_rate as long as its row keeps a positive entry.
inline BayesianNetwork realize(Rng& rng, const Shape& shape, double zero_rate = 0.0) {
  const std::size_t n = shape.card.size();
  std::vector<Variable> vars(n);
  std::vector<std::vector<double>> tables(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t v = 0; v < n; ++v) {
    vars[v].id = "V" + std::to_string(v);
    for (std::size_t s = 0; s < shape.card[v]; ++s) vars[v].states.push_back("t" + std::to_string(s));
    std::size_t rows = 1;
    for (auto p : shape.parents[v]) {
      vars[v].parents.push_back("V" + std::to_string(p));
      rows *= shape.card[p];
    }
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> row(shape.card[v]);
      for (auto& x : row) x = 0.05 + unit(rng);
      for (std::size_t s = 0; s + 1 < row.size(); ++s)
        if (unit(rng) < zero_rate) row[s] = 0.0;
      const double sum = std::accumulate(row.begin(), row.end(), 0.0);
      for (auto x : row) tables[v].push_back(x / sum);
    }
  }
  return make_net("random", std::move(vars), std::move(tables));
}

// Random forest (or tree) with random edge orientation, random parent order
// and variable indices unrelated to the topological order.
inline Shape random_polytree_shape(Rng& rng, std::size_t n, std::size_t max_states, bool connected = true) {
  Shape shape;
  shape.card.resize(n);
  shape.parents.resize(n);
  for (auto& c : shape.card) c = uniform(rng, 2, max_states);
  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), 0);
  std::shuffle(label.begin(), label.end(), rng);
  for (std::size_t i = 1; i < n; ++i) {
    if (!connected && uniform(rng, 0, 4) == 0) continue;
    const std::size_t j = uniform(rng, 0, i - 1);
    if (uniform(rng, 0, 1))
      shape.parents[label[i]].push_back(label[j]);
    else
      shape.parents[label[j]].push_back(label[i]);
  }
  for (auto& ps : shape.parents) std::shuffle(ps.begin(), ps.end(), rng);
  return shape;
}

inline std::vector<std::size_t> topological_order(const Shape& shape) {
  const std::size_t n = shape.card.size();
  std::vector<std::size_t> indeg(n), order;
  std::vector<std::vector<std::size_t>> kids(n);
  for (std::size_t v = 0; v < n; ++v)
    for (auto p : shape.parents[v]) {
      ++indeg[v];
      kids[p].push_back(v);
    }
  for (std::size_t v = 0; v < n; ++v)
    if (indeg[v] == 0) order.push_back(v);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (auto k : kids[order[i]])
      if (--indeg[k] == 0) order.push_back(k);
  return order;
}

// Connected tree plus `extra` arcs consistent with a topological order; each
// arc adds one independent undirected cycle. Dense graphs may end up with
// fewer extra arcs.
inline Shape random_loopy_shape(Rng& rng, std::size_t n, std::size_t max_states, std::size_t extra,
                                std::size_t max_parents = 3) {
  Shape shape = random_polytree_shape(rng, n, max_states, true);
  const auto order = topological_order(shape);
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;
  auto adjacent = [&](std::size_t a, std::size_t b) {
    auto has = [](const std::vector<std::size_t>& v, std::size_t x) { return std::find(v.begin(), v.end(), x) != v.end(); };
    return has(shape.parents[a], b) || has(shape.parents[b], a);
  };
  std::size_t added = 0;
  for (int attempt = 0; attempt < 200 && added < extra; ++attempt) {
    std::size_t a = uniform(rng, 0, n - 1), b = uniform(rng, 0, n - 1);
    if (a == b || adjacent(a, b)) continue;
    if (pos[a] > pos[b]) std::swap(a, b);
    if (shape.parents[b].size() >= max_parents) continue;
    shape.parents[b].insert(shape.parents[b].begin() + static_cast<std::ptrdiff_t>(uniform(rng, 0, shape.parents[b].size())), a);
    ++added;
  }
  return shape;
}

// Random stream over variable v: `len` items with random non-increasing
// weights, some tied and some zero, payload states in a random order.
inline StreamPtr random_stream(Rng& rng, VarIndex v, std::size_t len) {
  std::vector<double> w(len);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& x : w) {
    const auto r = uniform(rng, 0, 9);
    x = r == 0 ? 0.0 : r == 1 ? 0.25 : unit(rng);
  }
  std::sort(w.rbegin(), w.rend());
  std::vector<StateIndex> states(len);
  std::iota(states.begin(), states.end(), 0);
  std::shuffle(states.begin(), states.end(), rng);
  std::vector<WeightedItem> items;
  for (std::size_t i = 0; i < len; ++i)
    items.push_back({LogWeight::from_probability(w[i]), Payload::leaf({{v, states[i]}})});
  std::sort(items.begin(), items.end(), ranks_before);
  return make_list_stream(std::move(items), make_node_set({v}));
}

inline std::vector<Instantiation> drain(InstantiationStream& s) {
  std::vector<Instantiation> out;
  while (auto i = s.next()) out.push_back(std::move(*i));
  return out;
}

// Empty string when `got` equals the oracle list in order, payload and
// log-weight (within tol); otherwise a description of the first mismatch.
inline std::string compare_with_oracle(const OracleResult& want, const std::vector<Instantiation>& got,
                                       double tol = 1e-9) {
  if (want.size() != got.size())
    return "length " + std::to_string(got.size()) + ", oracle " + std::to_string(want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (want[i].instantiation.states != got[i].states) return "order differs at rank " + std::to_string(i + 1);
    const double a = want[i].instantiation.log_weight, b = got[i].log_weight;
    if (std::isinf(a) || std::isinf(b)) {
      if (a != b) return "zero/non-zero mismatch at rank " + std::to_string(i + 1);
    } else if (std::abs(a - b) > tol) {
      return "log-weight off by " + std::to_string(std::abs(a - b)) + " at rank " + std::to_string(i + 1);
    }
  }
  return {};
}

inline double total_probability(const std::vector<Instantiation>& items) {
  double sum = 0.0;
  for (const auto& i : items) sum += std::exp(i.log_weight);
  return sum;
}

}  // namespace fixtures
