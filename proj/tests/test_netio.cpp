#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <sstream>

#include "bnenum/errors.hpp"
#include "bnenum/netio.hpp"
#include "fixtures.hpp"

using namespace bnenum;
using namespace fixtures;

namespace {

const char* kNetA = R"({
  "name": "net-a",
  "nodes": [
    {"id": "A", "states": ["yes", "no"], "parents": [], "cpt": [0.2, 0.8]},
    {"id": "B", "states": ["wet", "dry"], "parents": ["A"], "cpt": [0.9, 0.1, 0.3, 0.7]}
  ]
}
)";

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("netio") {
  TEST_CASE("parse NET-A") { CHECK(parse_network(kNetA) == net_a()); }

  TEST_CASE("canonical document survives a round trip byte for byte") {
    CHECK(serialize_network(parse_network(kNetA)) == kNetA);
  }

  TEST_CASE("round trip keeps parent order") {
    const auto back = parse_network(serialize_network(net_d()));
    CHECK(back == net_d());
    CHECK(back.variable(3).parents == std::vector<std::string>{"B", "C"});
  }

  TEST_CASE("length mismatch names the node") {
    try {
      parse_network(R"({"nodes": [{"id": "Q", "states": ["a", "b"], "cpt": [0.2, 0.3, 0.5]}]})");
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      REQUIRE(e.problems().size() == 1);
      CHECK(e.problems()[0].find("'Q'") != std::string::npos);
      CHECK(e.problems()[0].find("length 3") != std::string::npos);
    }
  }

  TEST_CASE("empty node list is an empty network") {
    const auto net = parse_network(R"({"name": "e", "nodes": []})");
    CHECK(net.empty());
    CHECK(parse_network(serialize_network(net)) == net);
  }

  TEST_CASE("syntax errors carry a line number") {
    try {
      parse_network("{\n  \"nodes\": [\n    {\"id\": \"A\",, }\n  ]\n}");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }

  TEST_CASE("shape errors carry a field path") {
    try {
      parse_network(R"({"nodes": [{"id": "A", "states": ["x"], "cpt": [1]}, {"id": "B", "states": ["x"], "cpt": ["one"]}]})");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("nodes[1] ('B').cpt[0]") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_network(R"({"name": "no nodes"})"), ParseError);
    CHECK_THROWS_AS(parse_network("[]"), ParseError);
  }

  TEST_CASE("evidence") {
    const auto net = net_a();
    const Evidence ev = parse_evidence(R"({"B": "wet"})", net);
    REQUIRE(ev.size() == 1);
    CHECK(ev.at(1) == 0);
    CHECK(parse_evidence("", net).empty());
    CHECK(parse_evidence("  \n", net).empty());
    CHECK_THROWS_AS(parse_evidence(R"({"Z": "x"})", net), ValidationError);
    CHECK_THROWS_AS(parse_evidence(R"({"B": "damp"})", net), ValidationError);
    CHECK_THROWS_AS(parse_evidence(R"({"B": 1})", net), ParseError);
    CHECK_THROWS_AS(parse_evidence("{", net), ParseError);
  }

  TEST_CASE("records for NET-A") {
    const auto net = net_a();
    auto stream = enumerate_instances(net);
    std::ostringstream out;
    const auto r = write_instantiations(stream, net, out, {1, RecordFormat::records, false});
    CHECK(r.written == 1);
    CHECK_FALSE(r.stream_ended);
    const auto doc = nlohmann::json::parse(out.str());
    CHECK(doc["rank"] == 1);
    CHECK(doc["p"].get<double>() == doctest::Approx(0.56).epsilon(1e-12));
    CHECK(doc["assignment"]["A"] == "no");
    CHECK(doc["assignment"]["B"] == "dry");
  }

  TEST_CASE("zero limit writes nothing") {
    const auto net = net_a();
    auto stream = enumerate_instances(net);
    std::ostringstream out;
    CHECK(write_instantiations(stream, net, out, {0, RecordFormat::records, false}).written == 0);
    CHECK(out.str().empty());
  }

  TEST_CASE("limit beyond the stream ends cleanly") {
    const auto net = net_a();
    auto stream = enumerate_instances(net);
    std::ostringstream out;
    const auto r = write_instantiations(stream, net, out, {10, RecordFormat::tsv, false});
    CHECK(r.written == 4);
    CHECK(r.stream_ended);
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 4);
    CHECK(lines[0].rfind("1\t", 0) == 0);
    CHECK(lines[3].find("A=yes\tB=dry") != std::string::npos);
  }

  TEST_CASE("property: p equals exp(logp) in records") {
    Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
      const auto net = realize(rng, random_polytree_shape(rng, uniform(rng, 1, 6), 3), trial % 3 == 0 ? 0.3 : 0.0);
      auto stream = enumerate_instances(net);
      std::ostringstream out;
      write_instantiations(stream, net, out);
      for (const auto& line : lines_of(out.str())) {
        const auto doc = nlohmann::json::parse(line);
        const double p = doc["p"].get<double>();
        if (doc["logp"].is_string()) {
          CHECK(doc["logp"] == "-inf");
          CHECK(p == 0.0);
        } else {
          const double expect = std::exp(doc["logp"].get<double>());
          CHECK(std::abs(p - expect) <= 1e-12 * expect);
        }
      }
    }
  }

  TEST_CASE("property: serialize then parse is the identity") {
    Rng rng(22);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = uniform(rng, 1, 8);
      const auto net = realize(rng, n > 2 && trial % 2 ? random_loopy_shape(rng, n, 4, 2) : random_polytree_shape(rng, n, 4));
      const auto text = serialize_network(net);
      const auto back = parse_network(text);
      CHECK(back.variables() == net.variables());
      CHECK(back.cpts() == net.cpts());
      CHECK(serialize_network(back) == text);
    }
  }

  TEST_CASE("failing sink raises IoError") {
    const auto net = net_a();
    auto stream = enumerate_instances(net);
    std::ostringstream out;
    out.setstate(std::ios::badbit);
    CHECK_THROWS_AS(write_instantiations(stream, net, out), IoError);
  }
}
