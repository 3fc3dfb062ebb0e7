#include "bnenum/netio.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

#include "bnenum/errors.hpp"

namespace bnenum {

using nlohmann::json;

namespace {

std::size_t line_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    // drop the library's "[json.exception.parse_error.101] " prefix
    if (auto pos = what.find("] "); pos != std::string::npos) what = what.substr(pos + 2);
    throw ParseError(what, line_of(text, e.byte == 0 ? 0 : e.byte - 1));
  }
}

std::string quoted(const std::string& s) { return json(s).dump(); }

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field \"" + key + "\"");
  return *it;
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) throw ParseError(where + "[" + std::to_string(i) + "]: expected a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  char buf[40];
  for (int precision = 15; precision < 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

BayesianNetwork parse_network_unchecked(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("document: expected an object");
  std::string name;
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("name: expected a string");
    name = it->get<std::string>();
  }
  const json& nodes = field(doc, "nodes", "document");
  if (!nodes.is_array()) throw ParseError("nodes: expected an array");

  std::vector<Variable> vars;
  std::vector<Cpt> cpts;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "nodes[" + std::to_string(i) + "]";
    const json& node = nodes[i];
    if (!node.is_object()) throw ParseError(where + ": expected an object");
    const json& id = field(node, "id", where);
    if (!id.is_string()) throw ParseError(where + ".id: expected a string");
    Variable var;
    var.id = id.get<std::string>();
    const std::string named = where + " ('" + var.id + "')";
    var.states = string_list(field(node, "states", named), named + ".states");
    if (auto it = node.find("parents"); it != node.end()) var.parents = string_list(*it, named + ".parents");
    const json& cpt = field(node, "cpt", named);
    if (!cpt.is_array()) throw ParseError(named + ".cpt: expected an array of numbers");
    Cpt table{var.id, {}};
    table.table.reserve(cpt.size());
    for (std::size_t k = 0; k < cpt.size(); ++k) {
      if (!cpt[k].is_number()) throw ParseError(named + ".cpt[" + std::to_string(k) + "]: expected a number");
      table.table.push_back(cpt[k].get<double>());
    }
    vars.push_back(std::move(var));
    cpts.push_back(std::move(table));
  }
  return BayesianNetwork(std::move(name), std::move(vars), std::move(cpts));
}

BayesianNetwork parse_network(std::string_view text) {
  BayesianNetwork net = parse_network_unchecked(text);
  require_valid(net);
  return net;
}

std::string serialize_network(const BayesianNetwork& net) {
  std::string out = "{\n  \"name\": " + quoted(net.name()) + ",\n  \"nodes\": [";
  for (std::size_t i = 0; i < net.size(); ++i) {
    const Variable& var = net.variables()[i];
    out += i == 0 ? "\n" : ",\n";
    out += "    {\"id\": " + quoted(var.id) + ", \"states\": [";
    for (std::size_t s = 0; s < var.states.size(); ++s) out += (s ? ", " : "") + quoted(var.states[s]);
    out += "], \"parents\": [";
    for (std::size_t p = 0; p < var.parents.size(); ++p) out += (p ? ", " : "") + quoted(var.parents[p]);
    out += "], \"cpt\": [";
    if (const auto* table = net.table(static_cast<VarIndex>(i)))
      for (std::size_t k = 0; k < table->size(); ++k) out += (k ? ", " : "") + format_double((*table)[k]);
    out += "]}";
  }
  out += net.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

Evidence parse_evidence(std::string_view text, const BayesianNetwork& net) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return {};
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("evidence: expected an object of variable -> state");
  Evidence ev;
  std::vector<std::string> problems;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_string()) throw ParseError("evidence." + key + ": expected a state name");
    auto v = net.find(key);
    if (!v) {
      problems.push_back("evidence: unknown variable '" + key + "'");
      continue;
    }
    auto s = net.find_state(*v, value.get<std::string>());
    if (!s) {
      problems.push_back("evidence: variable '" + key + "' has no state '" + value.get<std::string>() + "'");
      continue;
    }
    ev[*v] = *s;
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return ev;
}

WriteResult write_instantiations(InstantiationStream& stream, const BayesianNetwork& net, std::ostream& sink,
                                 const WriteOptions& options) {
  WriteResult result;
  std::string line;
  while (result.written < options.limit) {
    auto inst = stream.next();
    if (!inst) {
      result.stream_ended = true;
      break;
    }
    if (options.skip_zero && std::isinf(inst->log_weight)) {
      result.stopped_at_zero = true;
      break;
    }
    const std::size_t rank = result.written + 1;
    const double p = std::exp(inst->log_weight);
    line.clear();
    if (options.format == RecordFormat::tsv) {
      line += std::to_string(rank) + '\t' + format_double(inst->log_weight) + '\t' + format_double(p);
      for (std::size_t v = 0; v < net.size(); ++v) {
        const Variable& var = net.variables()[v];
        line += '\t' + var.id + '=' + var.states[static_cast<std::size_t>(inst->states[v])];
      }
    } else {
      const std::string logp =
          std::isinf(inst->log_weight) ? std::string("\"-inf\"") : format_double(inst->log_weight);
      line += "{\"rank\":" + std::to_string(rank) + ",\"logp\":" + logp + ",\"p\":" + format_double(p) +
              ",\"assignment\":{";
      for (std::size_t v = 0; v < net.size(); ++v) {
        const Variable& var = net.variables()[v];
        line += (v ? "," : "") + quoted(var.id) + ":" + quoted(var.states[static_cast<std::size_t>(inst->states[v])]);
      }
      line += "}}";
    }
    line += '\n';
    sink << line;
    if (!sink) throw IoError("failed writing record " + std::to_string(rank));
    ++result.written;
  }
  return result;
}

}  // namespace bnenum
