#include <doctest.h>

#include <cmath>
#include <set>

#include "bnenum/errors.hpp"
#include "bnenum/model.hpp"
#include "fixtures.hpp"

using namespace bnenum;
using namespace fixtures;

namespace {

bool mentions(const ValidationReport& r, const std::string& needle) {
  for (const auto& p : r.problems)
    if (p.find(needle) != std::string::npos) return true;
  return false;
}

std::vector<VarIndex> component_of(const BayesianNetwork& net, VarIndex v) {
  for (const auto& c : connected_components(net))
    if (std::find(c.begin(), c.end(), v) != c.end()) return c;
  return {};
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("fixtures validate") {
    CHECK(validate_network(net_a()).ok());
    CHECK(validate_network(net_d()).ok());
    CHECK(validate_network(chain3()).ok());
    CHECK(validate_network(v_structure()).ok());
    CHECK(validate_network(BayesianNetwork()).ok());
  }

  TEST_CASE("row that does not sum to one names its node") {
    auto net = make_net("bad", {{"A", {"yes", "no"}, {}}, {"B", {"wet", "dry"}, {"A"}}},
                        {{0.2, 0.8}, {0.5, 0.6, 0.3, 0.7}});
    const auto r = validate_network(net);
    REQUIRE(r.problems.size() == 1);
    CHECK(r.problems[0].find("'B'") != std::string::npos);
    CHECK(r.problems[0].find("row 0") != std::string::npos);
    CHECK_THROWS_AS(require_valid(net), ValidationError);
  }

  TEST_CASE("directed two-cycle is reported once") {
    auto net = make_net("loop", {{"A", {"x", "y"}, {"B"}}, {"B", {"x", "y"}, {"A"}}},
                        {{0.5, 0.5, 0.5, 0.5}, {0.5, 0.5, 0.5, 0.5}});
    const auto r = validate_network(net);
    REQUIRE(r.problems.size() == 1);
    CHECK(r.problems[0].find("cycle") != std::string::npos);
  }

  TEST_CASE("structural problems") {
    CHECK(mentions(validate_network(make_net("n", {{"A", {"x", "x"}, {}}}, {{0.5, 0.5}})), "duplicate state"));
    CHECK(mentions(validate_network(make_net("n", {{"A", {}, {}}}, {{}})), "no states"));
    CHECK(mentions(validate_network(make_net("n", {{"A", {"x"}, {"Z"}}}, {{1.0}})), "'Z'"));
    CHECK(mentions(validate_network(make_net("n", {{"A", {"x"}, {}}, {"A", {"y"}, {}}}, {{1.0}, {1.0}})),
                   "duplicate"));
    CHECK(mentions(validate_network(make_net("n", {{"A", {"x", "y"}, {}}}, {{1.5, -0.5}})), "outside"));
    CHECK(mentions(validate_network(make_net("n", {{"A", {"x", "y"}, {}}}, {{0.5, 0.3, 0.2}})), "length 3"));
    BayesianNetwork missing("n", {{"A", {"x"}, {}}}, {});
    CHECK(mentions(validate_network(missing), "CPT"));
  }

  TEST_CASE("row sums within tolerance pass") {
    auto net = make_net("n", {{"A", {"x", "y"}, {}}}, {{0.3 + 5e-10, 0.7}});
    CHECK(validate_network(net).ok());
    auto off = make_net("n", {{"A", {"x", "y"}, {}}}, {{0.3 + 5e-9, 0.7}});
    CHECK_FALSE(validate_network(off).ok());
  }

  TEST_CASE("singly connected") {
    CHECK(is_singly_connected(net_a()));
    CHECK_FALSE(is_singly_connected(net_d()));
    CHECK(is_singly_connected(make_net("one", {{"A", {"x", "y"}, {}}}, {{0.5, 0.5}})));
    CHECK(is_singly_connected(v_structure()));
  }

  TEST_CASE("joint log probability of NET-A") {
    const auto net = net_a();
    const std::vector<StateIndex> yes_wet{0, 0}, no_dry{1, 1};
    CHECK(joint_log_probability(net, yes_wet) == doctest::Approx(std::log(0.2 * 0.9)).epsilon(1e-12));
    CHECK(joint_log_probability(net, no_dry) == doctest::Approx(std::log(0.8 * 0.7)).epsilon(1e-12));
    const std::vector<StateIndex> short_one{0};
    CHECK_THROWS_AS(joint_log_probability(net, short_one), PreconditionError);
    const std::vector<StateIndex> bad_state{0, 2};
    CHECK_THROWS_AS(joint_log_probability(net, bad_state), PreconditionError);
  }

  TEST_CASE("zero factor gives minus infinity") {
    auto net = make_net("z", {{"A", {"x", "y"}, {}}, {"B", {"x", "y"}, {"A"}}}, {{0.4, 0.6}, {1.0, 0.0, 0.5, 0.5}});
    const std::vector<StateIndex> s{0, 1};
    CHECK(std::isinf(joint_log_probability(net, s)));
  }

  TEST_CASE("stats") {
    const auto a = network_stats(net_a());
    CHECK(a.size_per_node == std::vector<std::size_t>{2, 4});
    CHECK(a.total_size == 6);
    CHECK(a.max_degree == 1);
    const auto d = network_stats(net_d());
    CHECK(d.degree_per_node[0] == 2);
    CHECK(d.degree_per_node[3] == 2);
    CHECK(d.max_degree == 2);
    const auto e = network_stats(BayesianNetwork());
    CHECK(e.total_size == 0);
    CHECK(e.max_degree == 0);
  }

  TEST_CASE("subnetwork sides") {
    CHECK(subnetwork_side(net_a(), 0, 1) == std::vector<VarIndex>{0});
    const auto c = chain3();
    CHECK(subnetwork_side(c, 1, 2) == std::vector<VarIndex>{0, 1});
    CHECK(subnetwork_side(c, 2, 1) == std::vector<VarIndex>{2});
    CHECK_THROWS_AS(subnetwork_side(c, 0, 2), PreconditionError);
    CHECK_THROWS_AS(subnetwork_side(net_d(), 0, 1), StructureError);
  }

  TEST_CASE("property: joint sums to one over all instantiations") {
    Rng rng(11);
    for (int trial = 0; trial < 60; ++trial) {
      const bool loopy = trial % 2;
      const std::size_t n = uniform(rng, 1, 7);
      const Shape shape = loopy && n > 2 ? random_loopy_shape(rng, n, 3, uniform(rng, 1, 2))
                                         : random_polytree_shape(rng, n, 3, trial % 3 != 0);
      const auto net = realize(rng, shape, trial % 4 == 0 ? 0.2 : 0.0);
      REQUIRE(validate_network(net).ok());
      REQUIRE(instantiation_count(net) <= 4096);
      std::vector<StateIndex> s(net.size(), 0);
      double sum = 0.0;
      for (bool more = true; more;) {
        const double lp = joint_log_probability(net, s);
        const double p = std::exp(lp);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        sum += p;
        more = false;
        for (std::size_t i = s.size(); i-- > 0;) {
          if (static_cast<std::size_t>(++s[i]) < net.cardinality(static_cast<VarIndex>(i))) {
            more = true;
            break;
          }
          s[i] = 0;
        }
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  TEST_CASE("property: arc sides partition the component and are closed under parents") {
    Rng rng(12);
    for (int trial = 0; trial < 80; ++trial) {
      const auto net = realize(rng, random_polytree_shape(rng, uniform(rng, 2, 12), 2, trial % 2));
      for (std::size_t c = 0; c < net.size(); ++c) {
        for (VarIndex p : net.parents(static_cast<VarIndex>(c))) {
          const VarIndex x = static_cast<VarIndex>(c);
          auto up = subnetwork_side(net, p, x);
          auto down = subnetwork_side(net, x, p);
          std::vector<VarIndex> both;
          std::set_union(up.begin(), up.end(), down.begin(), down.end(), std::back_inserter(both));
          std::vector<VarIndex> overlap;
          std::set_intersection(up.begin(), up.end(), down.begin(), down.end(), std::back_inserter(overlap));
          CHECK(overlap.empty());
          CHECK(both == component_of(net, x));
          for (const auto& side : {std::pair{up, x}, std::pair{down, p}}) {
            const std::set<VarIndex> members(side.first.begin(), side.first.end());
            for (VarIndex m : side.first)
              for (VarIndex q : net.parents(m)) {
                if (m == x && q == p) continue;
                CHECK(members.count(q) == 1);
              }
          }
        }
      }
    }
  }

  TEST_CASE("lookup helpers") {
    const auto net = net_a();
    CHECK(net.index_of("B") == 1);
    CHECK_FALSE(net.find("Z").has_value());
    CHECK_THROWS_AS(net.index_of("Z"), PreconditionError);
    CHECK(net.find_state(1, "dry") == 1);
    CHECK(net.children(0).size() == 1);
    CHECK(instantiation_count(net_d()) == 16);
    CHECK(connected_components(net_d()).size() == 1);
  }
}
