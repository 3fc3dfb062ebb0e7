#include "bnenum/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "bnenum/bench.hpp"
#include "bnenum/conditioning.hpp"
#include "bnenum/errors.hpp"
#include "bnenum/netio.hpp"
#include "bnenum/random_network.hpp"

namespace bnenum {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

struct EnumerateArgs {
  std::string network;
  std::string evidence;
  std::size_t top_k = 10;
  bool all = false;
  std::size_t max_instances = 0;
  bool skip_zero = false;
  std::string format = "records";
  std::size_t cutset_cap = kDefaultCutsetCap;
};

struct GenArgs {
  std::size_t nodes = 300;
  std::size_t max_states = 5;
  std::size_t max_degree = 5;
  std::uint64_t seed = 1;
  std::size_t instances = 600;
  std::size_t repetitions = 1;
};

int cmd_enumerate(const EnumerateArgs& a, CLI::App& sub, std::ostream& out, std::ostream& err) {
  if (a.all && sub.count("--max-instances") == 0) {
    err << "error: --all requires --max-instances N\n";
    return exit_code::usage;
  }
  const BayesianNetwork net = parse_network(read_file(a.network));
  const Evidence ev = a.evidence.empty() ? Evidence{} : parse_evidence(read_file(a.evidence), net);
  InstantiationStream stream = enumerate_general(net, ev, GeneralOptions{a.cutset_cap, std::nullopt});

  if (const WeightedItem* head = stream.stream()->at(0); head && head->weight.zero_factors > 0)
    err << "warning: the evidence has probability 0; the posterior is undefined\n";

  WriteOptions opts;
  opts.limit = a.all ? a.max_instances : a.top_k;
  opts.format = a.format == "tsv" ? RecordFormat::tsv : RecordFormat::records;
  opts.skip_zero = a.skip_zero;
  const WriteResult r = write_instantiations(stream, net, out, opts);

  if (a.all && r.written == a.max_instances && stream.has_next()) {
    err << "error: more than " << a.max_instances << " instantiations; raise --max-instances\n";
    return exit_code::cap;
  }
  if (!a.all && r.stream_ended)
    err << "warning: stream ended after " << r.written << " of " << a.top_k << " requested instantiations\n";
  if (r.stopped_at_zero)
    err << "note: stopped at the first zero-probability instantiation after " << r.written << " records\n";
  return exit_code::ok;
}

std::string member_list(const BayesianNetwork& net, const Cutset& c) {
  std::string s = "{";
  for (std::size_t i = 0; i < c.members.size(); ++i) s += (i ? "," : "") + net.variable(c.members[i]).id;
  return s + "}";
}

int cmd_validate(const std::string& path, std::ostream& out) {
  const BayesianNetwork net = parse_network_unchecked(read_file(path));
  const ValidationReport report = validate_network(net);
  if (!report.ok()) {
    out << "invalid\n";
    for (const auto& p : report.problems) out << "  " << p << "\n";
    return exit_code::validation;
  }
  const NetworkStats stats = network_stats(net);
  const bool single = is_singly_connected(net);
  out << "valid, " << (single ? "singly" : "multiply") << " connected, Size(B)=" << stats.total_size
      << ", MaxDegree=" << stats.max_degree;
  if (!single) {
    const Cutset c = find_loop_cutset(net);
    out << ", cutset=" << member_list(net, c) << " joint_size=" << c.joint_size;
  }
  out << "\n";
  for (std::size_t v = 0; v < net.size(); ++v)
    out << "  " << net.variables()[v].id << ": Size=" << stats.size_per_node[v]
        << " Degree=" << stats.degree_per_node[v] << "\n";
  return exit_code::ok;
}

RandomNetworkParams params_of(const GenArgs& a, std::uint64_t seed) {
  return RandomNetworkParams{a.nodes, a.max_states, a.max_degree, seed};
}

void add_generator_flags(CLI::App* sub, GenArgs& a) {
  sub->add_option("--nodes", a.nodes, "Number of variables")->capture_default_str();
  sub->add_option("--max-states", a.max_states, "Maximum states per variable")->capture_default_str();
  sub->add_option("--max-degree", a.max_degree, "Maximum degree per variable")->capture_default_str();
  sub->add_option("--seed", a.seed, "Random seed")->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Enumerate instantiations of a discrete Bayesian network from most to least probable"};
  app.require_subcommand(1);

  EnumerateArgs en;
  auto* enumerate = app.add_subcommand("enumerate", "Write ranked instantiations of a network");
  enumerate->add_option("network", en.network, "Network document (JSON)")->required();
  enumerate->add_option("--evidence", en.evidence, "Evidence document (JSON)");
  auto* top_k = enumerate->add_option("--top-k", en.top_k, "Number of instantiations to write")->capture_default_str();
  auto* all = enumerate->add_flag("--all", en.all, "Write every instantiation (needs --max-instances)");
  enumerate->add_option("--max-instances", en.max_instances, "Upper bound on records for --all");
  all->excludes(top_k);
  enumerate->add_flag("--skip-zero", en.skip_zero, "Stop at the first zero-probability instantiation");
  enumerate->add_option("--format", en.format, "Record format")
      ->check(CLI::IsMember({"records", "tsv"}))
      ->capture_default_str();
  enumerate->add_option("--cutset-cap", en.cutset_cap, "Largest loop-cutset joint size accepted")
      ->capture_default_str();

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a network and report its structure");
  validate->add_option("network", validate_path, "Network document (JSON)")->required();

  GenArgs gen;
  auto* gen_random = app.add_subcommand("gen-random", "Write a random singly connected network");
  add_generator_flags(gen_random, gen);

  GenArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time enumeration on random singly connected networks");
  add_generator_flags(bench_cmd, bench);
  bench_cmd->add_option("--instances", bench.instances, "Instantiations timed after the first")
      ->capture_default_str();
  bench_cmd->add_option("--repetitions", bench.repetitions, "Networks to run (seeds seed, seed+1, ...)")
      ->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::ok : exit_code::usage;
  }

  try {
    if (*enumerate) return cmd_enumerate(en, *enumerate, out, err);
    if (*validate) return cmd_validate(validate_path, out);
    if (*gen_random) {
      out << serialize_network(generate_random_polytree(params_of(gen, gen.seed)));
      return exit_code::ok;
    }
    if (*bench_cmd) {
      for (std::size_t r = 0; r < bench.repetitions; ++r) {
        if (r) out << "\n";
        print_bench(out, run_bench(params_of(bench, bench.seed + r), bench.instances));
      }
      return exit_code::ok;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_code::parse;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::parse;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return exit_code::validation;
  } catch (const CapExceededError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::cap;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  }
  return exit_code::usage;
}

}  // namespace bnenum
