#include "bnenum/random_network.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "bnenum/errors.hpp"

namespace bnenum {

BayesianNetwork generate_random_polytree(const RandomNetworkParams& params) {
  const std::size_t n = params.nodes;
  if (n < 1) throw PreconditionError("gen-random: need at least one node");
  if (params.max_states < 2) throw PreconditionError("gen-random: max states must be at least 2");
  if (params.max_degree < 1) throw PreconditionError("gen-random: max degree must be at least 1");
  if (params.max_degree == 1 && n > 2)
    throw PreconditionError("gen-random: a connected tree on " + std::to_string(n) + " nodes needs max degree >= 2");

  std::mt19937_64 rng(params.seed);

  std::vector<std::size_t> degree(n, 0);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> eligible;
  for (std::size_t i = 1; i < n; ++i) {
    eligible.clear();
    for (std::size_t j = 0; j < i; ++j)
      if (degree[j] < params.max_degree) eligible.push_back(j);
    const std::size_t j = eligible[std::uniform_int_distribution<std::size_t>(0, eligible.size() - 1)(rng)];
    ++degree[i];
    ++degree[j];
    edges.emplace_back(j, i);
  }

  std::vector<std::vector<std::size_t>> parents(n);
  std::bernoulli_distribution coin(0.5);
  for (auto [a, b] : edges) {
    if (coin(rng))
      parents[b].push_back(a);
    else
      parents[a].push_back(b);
  }
  for (auto& ps : parents) std::sort(ps.begin(), ps.end());

  std::uniform_int_distribution<std::size_t> states_dist(2, params.max_states);
  std::vector<std::size_t> card(n);
  for (auto& c : card) c = states_dist(rng);

  std::vector<Variable> vars(n);
  std::vector<Cpt> cpts(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    vars[i].id = "X" + std::to_string(i);
    for (std::size_t s = 0; s < card[i]; ++s) vars[i].states.push_back("s" + std::to_string(s));
    std::size_t rows = 1;
    for (auto p : parents[i]) {
      vars[i].parents.push_back("X" + std::to_string(p));
      rows *= card[p];
    }
    cpts[i].owner = vars[i].id;
    cpts[i].table.reserve(rows * card[i]);
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> row(card[i]);
      double sum = 0.0;
      while (sum <= 0.0) {
        sum = 0.0;
        for (auto& x : row) sum += x = unit(rng);
      }
      for (auto x : row) cpts[i].table.push_back(x / sum);
    }
  }
  return BayesianNetwork("random-" + std::to_string(n) + "-" + std::to_string(params.max_states) + "-" +
                             std::to_string(params.max_degree) + "-" + std::to_string(params.seed),
                         std::move(vars), std::move(cpts));
}

}  // namespace bnenum
