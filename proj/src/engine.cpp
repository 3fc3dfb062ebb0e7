#include "bnenum/engine.hpp"

#include <algorithm>
#include <numeric>

#include "bnenum/errors.hpp"

namespace bnenum {

namespace {

bool contains(std::span<const VarIndex> s, VarIndex v) { return std::find(s.begin(), s.end(), v) != s.end(); }

// Advances a mixed-radix counter, last digit fastest. False after wrap-around.
bool next_config(std::vector<StateIndex>& config, std::span<const std::size_t> radix) {
  for (std::size_t i = config.size(); i-- > 0;) {
    if (static_cast<std::size_t>(++config[i]) < radix[i]) return true;
    config[i] = 0;
  }
  return false;
}

std::string unique_id(const BayesianNetwork& net, std::string base) {
  std::string id = base;
  for (int n = 1; net.find(id); ++n) id = base + "#" + std::to_string(n);
  return id;
}

}  // namespace

// ---------------------------------------------------------------- network transforms

namespace detail {

BayesianNetwork restrict_states(const BayesianNetwork& net, const std::map<VarIndex, StateIndex>& keep) {
  for (const auto& [v, s] : keep) {
    if (v < 0 || static_cast<std::size_t>(v) >= net.size())
      throw PreconditionError("restriction names variable #" + std::to_string(v) + " outside the network");
    if (s < 0 || static_cast<std::size_t>(s) >= net.cardinality(v))
      throw PreconditionError("variable '" + net.variable(v).id + "' has no state #" + std::to_string(s));
  }
  if (keep.empty() && net.cpts().size() == net.size()) {
    bool aligned = true;
    for (std::size_t i = 0; i < net.size() && aligned; ++i) aligned = net.cpts()[i].owner == net.variables()[i].id;
    if (aligned) return net;
  }

  auto kept_cardinality = [&](VarIndex v) { return keep.count(v) ? std::size_t{1} : net.cardinality(v); };

  std::vector<Variable> vars = net.variables();
  std::vector<Cpt> cpts;
  cpts.reserve(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto v = static_cast<VarIndex>(i);
    const auto ps = net.parents(v);
    std::vector<std::size_t> radix;
    for (VarIndex p : ps) radix.push_back(kept_cardinality(p));
    std::vector<StateIndex> config(ps.size(), 0), original(ps.size(), 0);
    std::vector<StateIndex> own_states;
    if (auto it = keep.find(v); it != keep.end()) {
      own_states.push_back(it->second);
    } else {
      own_states.resize(net.cardinality(v));
      std::iota(own_states.begin(), own_states.end(), 0);
    }
    Cpt cpt{vars[i].id, {}};
    do {
      for (std::size_t j = 0; j < ps.size(); ++j) {
        auto it = keep.find(ps[j]);
        original[j] = it != keep.end() ? it->second : config[j];
      }
      for (StateIndex s : own_states) cpt.table.push_back(net.probability(v, s, original));
    } while (next_config(config, radix));
    cpts.push_back(std::move(cpt));
  }
  for (const auto& [v, s] : keep) {
    auto& states = vars[static_cast<std::size_t>(v)].states;
    states = {states[static_cast<std::size_t>(s)]};
  }
  return BayesianNetwork(net.name(), std::move(vars), std::move(cpts));
}

}  // namespace detail

BayesianNetwork apply_evidence(const BayesianNetwork& net, const Evidence& evidence) {
  return detail::restrict_states(net, std::map<VarIndex, StateIndex>(evidence.begin(), evidence.end()));
}

std::pair<BayesianNetwork, VarIndex> attach_dummy_root(const BayesianNetwork& net, VarIndex r) {
  if (r < 0 || static_cast<std::size_t>(r) >= net.size())
    throw PreconditionError("dummy root target #" + std::to_string(r) + " outside the network");
  std::vector<Variable> vars = net.variables();
  std::vector<Cpt> cpts = net.cpts();
  const std::string id = unique_id(net, "__root_" + vars[static_cast<std::size_t>(r)].id);
  // A single-state last parent leaves the row-major table layout unchanged.
  vars[static_cast<std::size_t>(r)].parents.push_back(id);
  vars.push_back(Variable{id, {"d"}, {}});
  cpts.push_back(Cpt{id, {1.0}});
  const auto d = static_cast<VarIndex>(vars.size() - 1);
  return {BayesianNetwork(net.name(), std::move(vars), std::move(cpts)), d};
}

// ---------------------------------------------------------------- session

EnumerationSession::EnumerationSession(BayesianNetwork net) : net_(std::move(net)) {
  label_var_.resize(net_.size());
  std::iota(label_var_.begin(), label_var_.end(), 0);
  label_state_.resize(net_.size());
  for (std::size_t v = 0; v < net_.size(); ++v) {
    label_state_[v].resize(net_.cardinality(static_cast<VarIndex>(v)));
    std::iota(label_state_[v].begin(), label_state_[v].end(), 0);
  }
  active_.assign(net_.size(), 0);
}

EnumerationSession::EnumerationSession(BayesianNetwork net, std::vector<VarIndex> label_var,
                                       std::vector<std::vector<StateIndex>> label_state)
    : net_(std::move(net)), label_var_(std::move(label_var)), label_state_(std::move(label_state)) {
  if (label_var_.size() != net_.size() || label_state_.size() != net_.size())
    throw PreconditionError("session labels do not cover the network");
  active_.assign(net_.size(), 0);
}

PayloadPtr EnumerationSession::label(VarIndex v, StateIndex s) const {
  const VarIndex l = label_var_[static_cast<std::size_t>(v)];
  if (l < 0) return Payload::leaf({});
  return Payload::leaf({{l, label_state_[static_cast<std::size_t>(v)][static_cast<std::size_t>(s)]}});
}

const Message* EnumerationSession::find_message(VarIndex from, VarIndex to) const {
  auto it = memo_.find({from, to});
  return it == memo_.end() ? nullptr : &it->second;
}

const Message& EnumerationSession::compute_message(VarIndex from, VarIndex to) {
  ++requests_;
  if (const Message* m = find_message(from, to)) return *m;

  const bool from_is_parent = contains(net_.parents(to), from);
  if (!from_is_parent && !contains(net_.parents(from), to))
    throw PreconditionError("no arc between '" + net_.variable(from).id + "' and '" + net_.variable(to).id + "'");
  if (active_[static_cast<std::size_t>(from)])
    throw StructureError("message recursion revisited '" + net_.variable(from).id + "'; network is not singly connected");

  struct Guard {
    char& flag;
    ~Guard() { flag = 0; }
  } guard{active_[static_cast<std::size_t>(from)] = 1};

  require_others(from, to);

  Message msg;
  msg.kind = from_is_parent ? MessageKind::pi : MessageKind::lambda;
  msg.scope = {from, to, make_node_set(subnetwork_side(net_, from, to))};
  const NodeSetPtr& scope = msg.scope.nodes;
  const VarIndex y = from;
  const auto parents = net_.parents(y);

  if (msg.kind == MessageKind::pi) {
    // Every parent contributes its pi stream for the parent's state; the
    // children other than `to` contribute their lambda streams for y.
    const NodeSetPtr lam_nodes = lambda_nodes(y, to);
    std::vector<std::size_t> radix;
    for (VarIndex p : parents) radix.push_back(net_.cardinality(p));
    for (StateIndex state = 0; static_cast<std::size_t>(state) < net_.cardinality(y); ++state) {
      StreamPtr lam = lambda_product(y, state, to, lam_nodes);
      std::vector<StreamPtr> arms;
      std::vector<StateIndex> config(parents.size(), 0);
      do {
        std::vector<StreamPtr> args;
        args.reserve(parents.size() + 1);
        for (std::size_t i = 0; i < parents.size(); ++i)
          args.push_back(find_message(parents[i], y)->entries[static_cast<std::size_t>(config[i])]);
        args.push_back(lam);
        const LogWeight k = LogWeight::from_probability(net_.probability(y, state, config));
        arms.push_back(scale_stream(k, product_or_identity(std::move(args), scope)));
      } while (next_config(config, radix));
      msg.entries.push_back(merge_streams(std::move(arms), scope));
    }
  } else {
    // y is a child of `to`; `to` is fixed per entry, the other parents vary.
    const VarIndex x = to;
    const auto x_pos = static_cast<std::size_t>(std::find(parents.begin(), parents.end(), x) - parents.begin());
    std::vector<VarIndex> others;
    std::vector<std::size_t> radix;
    for (VarIndex p : parents) {
      if (p == x) continue;
      others.push_back(p);
      radix.push_back(net_.cardinality(p));
    }
    const NodeSetPtr lam_nodes = lambda_nodes(y, -1);
    const std::size_t ny = net_.cardinality(y);
    std::size_t combos = 1;
    for (auto r : radix) combos *= r;

    // The product for (y, other-parent states) does not depend on x; build it
    // once and let each x scale its own reader.
    std::vector<StreamPtr> products;
    products.reserve(ny * combos);
    for (StateIndex state = 0; static_cast<std::size_t>(state) < ny; ++state) {
      StreamPtr lam = lambda_product(y, state, -1, lam_nodes);
      std::vector<StateIndex> config(others.size(), 0);
      do {
        std::vector<StreamPtr> args;
        args.reserve(others.size() + 1);
        for (std::size_t i = 0; i < others.size(); ++i)
          args.push_back(find_message(others[i], y)->entries[static_cast<std::size_t>(config[i])]);
        args.push_back(lam);
        products.push_back(product_or_identity(std::move(args), scope));
      } while (next_config(config, radix));
    }

    std::vector<StateIndex> full(parents.size(), 0);
    for (StateIndex xs = 0; static_cast<std::size_t>(xs) < net_.cardinality(x); ++xs) {
      std::vector<StreamPtr> arms;
      arms.reserve(products.size());
      std::size_t slot = 0;
      for (StateIndex state = 0; static_cast<std::size_t>(state) < ny; ++state) {
        std::vector<StateIndex> config(others.size(), 0);
        do {
          for (std::size_t i = 0, j = 0; i < parents.size(); ++i) full[i] = i == x_pos ? xs : config[j++];
          const LogWeight k = LogWeight::from_probability(net_.probability(y, state, full));
          arms.push_back(scale_stream(k, products[slot++]));
        } while (next_config(config, radix));
      }
      msg.entries.push_back(merge_streams(std::move(arms), scope));
    }
  }
  return memo_.emplace(std::make_pair(from, to), std::move(msg)).first->second;
}

const Message& EnumerationSession::compute_pi_message(VarIndex from, VarIndex to) {
  if (!contains(net_.parents(to), from))
    throw PreconditionError("'" + net_.variable(from).id + "' is not a parent of '" + net_.variable(to).id + "'");
  return compute_message(from, to);
}

const Message& EnumerationSession::compute_lambda_message(VarIndex from, VarIndex to) {
  if (!contains(net_.parents(from), to))
    throw PreconditionError("'" + net_.variable(from).id + "' is not a child of '" + net_.variable(to).id + "'");
  return compute_message(from, to);
}

void EnumerationSession::require_others(VarIndex from, VarIndex to) {
  for (VarIndex p : net_.parents(from))
    if (p != to) compute_message(p, from);
  for (VarIndex c : net_.children(from))
    if (c != to) compute_message(c, from);
}

NodeSetPtr EnumerationSession::lambda_nodes(VarIndex y, VarIndex excluded_child) {
  std::vector<VarIndex> nodes{y};
  for (VarIndex c : net_.children(y)) {
    if (c == excluded_child) continue;
    const auto& side = *find_message(c, y)->scope.nodes;
    nodes.insert(nodes.end(), side.begin(), side.end());
  }
  return make_node_set(std::move(nodes));
}

StreamPtr EnumerationSession::lambda_product(VarIndex y, StateIndex state, VarIndex excluded_child,
                                             const NodeSetPtr& nodes) {
  std::vector<StreamPtr> args;
  for (VarIndex c : net_.children(y))
    if (c != excluded_child) args.push_back(find_message(c, y)->entries[static_cast<std::size_t>(state)]);
  args.push_back(make_unit_stream(make_node_set({y}), label(y, state)));
  return product_or_identity(std::move(args), nodes);
}

// ---------------------------------------------------------------- streams of full instantiations

InstantiationStream::InstantiationStream(StreamPtr root, std::size_t variable_count,
                                         std::vector<std::shared_ptr<EnumerationSession>> sessions)
    : cursor_(std::move(root)), variable_count_(variable_count), sessions_(std::move(sessions)) {}

Instantiation InstantiationStream::materialize(const WeightedItem& item, std::size_t variable_count) {
  std::vector<Assignment> leaves;
  leaves.reserve(variable_count);
  item.payload->collect(leaves);
  Instantiation inst;
  inst.states.assign(variable_count, -1);
  for (const auto& a : leaves) inst.states[static_cast<std::size_t>(a.var)] = a.state;
  inst.log_weight = item.weight.log_value();
  return inst;
}

std::optional<Instantiation> InstantiationStream::next() {
  auto item = cursor_.next();
  if (!item) return std::nullopt;
  return materialize(*item, variable_count_);
}

namespace detail {

PolytreeEnumeration enumerate_polytree(const BayesianNetwork& derived, const BayesianNetwork& original,
                                       std::span<const VarIndex> origin, std::optional<VarIndex> root) {
  if (!is_singly_connected(derived)) throw StructureError("network is not singly connected");
  if (origin.size() != derived.size()) throw PreconditionError("origin map does not cover the network");

  std::vector<VarIndex> label_var(origin.begin(), origin.end());
  std::vector<std::vector<StateIndex>> label_state(derived.size());
  std::vector<VarIndex> covered;
  for (std::size_t v = 0; v < derived.size(); ++v) {
    const VarIndex o = origin[v];
    if (o < 0) continue;
    covered.push_back(o);
    for (const auto& name : derived.variables()[v].states) {
      auto s = original.find_state(o, name);
      if (!s) throw PreconditionError("state '" + name + "' of '" + derived.variables()[v].id + "' has no origin");
      label_state[v].push_back(*s);
    }
  }
  const NodeSetPtr output_nodes = make_node_set(covered);

  PolytreeEnumeration out;
  const auto components = connected_components(derived);
  if (components.empty()) {
    out.stream = make_unit_stream(output_nodes, Payload::leaf({}));
    return out;
  }

  BayesianNetwork net = derived;
  std::vector<std::pair<VarIndex, VarIndex>> roots;  // (root, dummy)
  for (const auto& comp : components) {
    VarIndex r = comp.front();
    if (root && std::binary_search(comp.begin(), comp.end(), *root)) r = *root;
    auto [extended, d] = attach_dummy_root(net, r);
    net = std::move(extended);
    roots.emplace_back(r, d);
    label_var.push_back(-1);
    label_state.push_back({0});
  }

  auto session = std::make_shared<EnumerationSession>(std::move(net), std::move(label_var), std::move(label_state));
  std::vector<StreamPtr> parts;
  for (auto [r, d] : roots) parts.push_back(session->compute_message(r, d).entries.front());
  StreamPtr joined = parts.size() == 1 ? parts.front() : StreamPtr(lazy_product(std::move(parts)));
  out.stream = project_stream(std::move(joined), output_nodes);
  out.sessions.push_back(std::move(session));
  return out;
}

}  // namespace detail

InstantiationStream enumerate_instances(const BayesianNetwork& net, const Evidence& evidence,
                                        const EnumerationOptions& options) {
  require_valid(net);
  if (!is_singly_connected(net))
    throw StructureError("network '" + net.name() + "' is multiply connected; use conditioning");
  if (options.root && (*options.root < 0 || static_cast<std::size_t>(*options.root) >= net.size()))
    throw PreconditionError("root #" + std::to_string(*options.root) + " outside the network");
  BayesianNetwork reduced = apply_evidence(net, evidence);
  std::vector<VarIndex> origin(net.size());
  std::iota(origin.begin(), origin.end(), 0);
  auto result = detail::enumerate_polytree(reduced, net, origin, options.root);
  return InstantiationStream(std::move(result.stream), net.size(), std::move(result.sessions));
}

}  // namespace bnenum
