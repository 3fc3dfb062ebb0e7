#include "bnenum/streams.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

#include "bnenum/errors.hpp"

namespace bnenum {

namespace {

std::atomic<std::uint64_t> g_forced{0};

bool same_nodes(const NodeSetPtr& a, const NodeSetPtr& b) { return a == b || (a && b && *a == *b); }

}  // namespace

std::uint64_t forced_item_count() { return g_forced.load(std::memory_order_relaxed); }

// ---------------------------------------------------------------- payloads

PayloadPtr Payload::leaf(std::vector<Assignment> assignments) {
  auto p = std::make_shared<Payload>();
  p->leaves_ = std::move(assignments);
  return p;
}

PayloadPtr Payload::join(std::vector<PayloadPtr> parts) {
  auto p = std::make_shared<Payload>();
  p->parts_ = std::move(parts);
  return p;
}

void Payload::collect(std::vector<Assignment>& out) const {
  out.insert(out.end(), leaves_.begin(), leaves_.end());
  for (const auto& part : parts_) part->collect(out);
}

std::vector<Assignment> Payload::flatten() const {
  std::vector<Assignment> out;
  collect(out);
  std::sort(out.begin(), out.end());
  return out;
}

int compare_payloads(const Payload& a, const Payload& b) {
  const auto fa = a.flatten();
  const auto fb = b.flatten();
  const auto c = fa <=> fb;
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

bool ranks_before(const WeightedItem& a, const WeightedItem& b) {
  if (heavier(a.weight, b.weight)) return true;
  if (heavier(b.weight, a.weight)) return false;
  return compare_payloads(*a.payload, *b.payload) < 0;
}

NodeSetPtr make_node_set(std::vector<VarIndex> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return std::make_shared<const NodeSet>(std::move(nodes));
}

// ---------------------------------------------------------------- base stream

const WeightedItem* RankedStream::at(std::size_t i) {
  while (cache_.size() <= i && !done_) {
    auto item = generate();
    if (!item) {
      done_ = true;
      break;
    }
    if (!cache_.empty() && heavier(item->weight, cache_.back().weight))
      throw std::logic_error("ranked stream produced an increasing weight");
    cache_.push_back(std::move(*item));
    g_forced.fetch_add(1, std::memory_order_relaxed);
  }
  return i < cache_.size() ? &cache_[i] : nullptr;
}

std::optional<WeightedItem> Cursor::next() {
  const WeightedItem* item = peek();
  if (!item) return std::nullopt;
  WeightedItem copy = *item;
  ++position_;
  return copy;
}

// ---------------------------------------------------------------- leaves

namespace {

class ListStream final : public RankedStream {
 public:
  ListStream(std::vector<WeightedItem> items, NodeSetPtr nodes)
      : RankedStream(std::move(nodes)), items_(std::move(items)) {}

 protected:
  std::optional<WeightedItem> generate() override {
    if (next_ >= items_.size()) return std::nullopt;
    return items_[next_++];
  }

 private:
  std::vector<WeightedItem> items_;
  std::size_t next_ = 0;
};

class ScaleStream final : public RankedStream {
 public:
  ScaleStream(LogWeight k, StreamPtr arg) : RankedStream(arg->nodes()), k_(k), arg_(std::move(arg)) {}

 protected:
  std::optional<WeightedItem> generate() override {
    auto item = arg_.next();
    if (!item) return std::nullopt;
    return WeightedItem{item->weight + k_, std::move(item->payload)};
  }

 private:
  LogWeight k_;
  Cursor arg_;
};

class ProjectStream final : public RankedStream {
 public:
  ProjectStream(StreamPtr arg, NodeSetPtr nodes) : RankedStream(std::move(nodes)), arg_(std::move(arg)) {}

 protected:
  std::optional<WeightedItem> generate() override { return arg_.next(); }

 private:
  Cursor arg_;
};

// Heads live in a binary heap rather than being rescanned on every demand;
// the popped arm is refilled on the following demand so that an arm is never
// forced further than the merged output requires.
class MergeStream final : public RankedStream {
 public:
  MergeStream(std::vector<StreamPtr> arms, NodeSetPtr nodes) : RankedStream(std::move(nodes)) {
    arms_.reserve(arms.size());
    for (auto& a : arms) arms_.emplace_back(std::move(a));
  }

 protected:
  std::optional<WeightedItem> generate() override {
    if (!started_) {
      started_ = true;
      for (std::size_t i = 0; i < arms_.size(); ++i)
        if (arms_[i].peek()) push(i);
    } else if (refill_) {
      if (arms_[*refill_].peek()) push(*refill_);
      refill_.reset();
    }
    if (heap_.empty()) return std::nullopt;
    std::pop_heap(heap_.begin(), heap_.end(), after());
    const std::size_t winner = heap_.back();
    heap_.pop_back();
    auto item = arms_[winner].next();
    refill_ = winner;
    return item;
  }

 private:
  struct After {
    MergeStream* self;
    bool operator()(std::size_t a, std::size_t b) const {
      const WeightedItem& ia = *self->arms_[a].peek();
      const WeightedItem& ib = *self->arms_[b].peek();
      if (heavier(ib.weight, ia.weight)) return true;
      if (heavier(ia.weight, ib.weight)) return false;
      const int c = compare_payloads(*ia.payload, *ib.payload);
      if (c != 0) return c > 0;
      return a > b;
    }
  };
  After after() { return After{this}; }
  void push(std::size_t arm) {
    heap_.push_back(arm);
    std::push_heap(heap_.begin(), heap_.end(), after());
  }

  std::vector<Cursor> arms_;
  std::vector<std::size_t> heap_;
  std::optional<std::size_t> refill_;
  bool started_ = false;
};

// Checks that the argument node sets partition `nodes` (or computes it).
NodeSetPtr partition_nodes(const std::vector<StreamPtr>& args, NodeSetPtr nodes) {
  std::vector<VarIndex> all;
  for (const auto& a : args) {
    if (!a) throw PreconditionError("lazy_product: null argument");
    all.insert(all.end(), a->nodes()->begin(), a->nodes()->end());
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw PreconditionError("lazy_product: argument node sets overlap");
  if (!nodes) return std::make_shared<const NodeSet>(std::move(all));
  if (*nodes != all) throw PreconditionError("lazy_product: declared node set is not the union of the arguments");
  return nodes;
}

}  // namespace

StreamPtr make_list_stream(std::vector<WeightedItem> items, NodeSetPtr nodes) {
  for (std::size_t i = 1; i < items.size(); ++i)
    if (heavier(items[i].weight, items[i - 1].weight))
      throw PreconditionError("make_list_stream: items are not in non-increasing order");
  return std::make_shared<ListStream>(std::move(items), std::move(nodes));
}

StreamPtr make_singleton(VarIndex var, StateIndex state) {
  return make_unit_stream(make_node_set({var}), Payload::leaf({{var, state}}));
}

StreamPtr make_unit_stream(NodeSetPtr nodes, PayloadPtr payload) {
  return std::make_shared<ListStream>(std::vector<WeightedItem>{{LogWeight::one(), std::move(payload)}},
                                      std::move(nodes));
}

StreamPtr scale_stream(LogWeight k, StreamPtr s) { return std::make_shared<ScaleStream>(k, std::move(s)); }

StreamPtr merge_streams(std::vector<StreamPtr> arms, NodeSetPtr nodes) {
  if (!nodes) {
    if (arms.empty()) throw PreconditionError("merge_streams: empty argument list needs a node set");
    nodes = arms.front()->nodes();
  }
  for (const auto& a : arms)
    if (!same_nodes(a->nodes(), nodes)) throw PreconditionError("merge_streams: arguments cover different node sets");
  return std::make_shared<MergeStream>(std::move(arms), std::move(nodes));
}

std::shared_ptr<ProductStream> lazy_product(std::vector<StreamPtr> args, NodeSetPtr nodes, FringeRule rule) {
  if (args.empty()) throw PreconditionError("lazy_product: needs at least one argument");
  nodes = partition_nodes(args, std::move(nodes));
  return std::make_shared<ProductStream>(std::move(args), std::move(nodes), rule);
}

StreamPtr product_or_identity(std::vector<StreamPtr> args, NodeSetPtr nodes) {
  if (args.size() == 1) {
    if (nodes && !same_nodes(args.front()->nodes(), nodes))
      throw PreconditionError("lazy_product: declared node set is not the union of the arguments");
    return args.front();
  }
  return lazy_product(std::move(args), std::move(nodes));
}

StreamPtr project_stream(StreamPtr s, NodeSetPtr nodes) {
  return std::make_shared<ProjectStream>(std::move(s), std::move(nodes));
}

// ---------------------------------------------------------------- product

std::size_t ProductStream::IndexHash::operator()(const Index& idx) const noexcept {
  std::size_t h = idx.size();
  for (auto v : idx) h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

ProductStream::ProductStream(std::vector<StreamPtr> args, NodeSetPtr nodes, FringeRule rule)
    : RankedStream(std::move(nodes)), args_(std::move(args)), rule_(rule) {}

LogWeight ProductStream::weight_at(const Index& index) {
  LogWeight w;
  for (std::size_t d = 0; d < args_.size(); ++d) w += args_[d]->at(index[d])->weight;
  return w;
}

PayloadPtr ProductStream::payload_at(const Index& index) {
  std::vector<PayloadPtr> parts;
  parts.reserve(args_.size());
  for (std::size_t d = 0; d < args_.size(); ++d) parts.push_back(args_[d]->at(index[d])->payload);
  return Payload::join(std::move(parts));
}

bool ProductStream::element_before(const Element& a, const Element& b) const {
  if (heavier(a.weight, b.weight)) return true;
  if (heavier(b.weight, a.weight)) return false;
  auto* self = const_cast<ProductStream*>(this);  // items are cached; no forcing happens here
  const int c = compare_payloads(*self->payload_at(a.index), *self->payload_at(b.index));
  if (c != 0) return c < 0;
  return a.index < b.index;
}

bool ProductStream::admissible(const Index& candidate) const {
  if (rule_ == FringeRule::domination_scan) {
    for (const auto& f : fringe_) {
      bool dominates = true;
      for (std::size_t d = 0; d < candidate.size() && dominates; ++d) dominates = f.index[d] <= candidate[d];
      if (dominates) return false;
    }
    return true;
  }
  Index pred = candidate;
  for (std::size_t d = 0; d < candidate.size(); ++d) {
    if (candidate[d] == 0) continue;
    --pred[d];
    const bool seen = emitted_.count(pred) > 0;
    ++pred[d];
    if (!seen) return false;
  }
  return true;
}

std::size_t ProductStream::best_position() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < fringe_.size(); ++i)
    if (element_before(fringe_[i], fringe_[best])) best = i;
  return best;
}

void ProductStream::push(Element e) {
  fringe_.push_back(std::move(e));
  if (rule_ == FringeRule::predecessors)
    std::push_heap(fringe_.begin(), fringe_.end(),
                   [this](const Element& a, const Element& b) { return element_before(b, a); });
}

ProductStream::Element ProductStream::pop_best() {
  if (rule_ == FringeRule::predecessors) {
    std::pop_heap(fringe_.begin(), fringe_.end(),
                  [this](const Element& a, const Element& b) { return element_before(b, a); });
  } else {
    std::swap(fringe_[best_position()], fringe_.back());
  }
  Element e = std::move(fringe_.back());
  fringe_.pop_back();
  return e;
}

std::optional<WeightedItem> ProductStream::generate() {
  const std::size_t n = args_.size();
  if (!started_) {
    started_ = true;
    for (const auto& a : args_)
      if (!a->at(0)) return std::nullopt;
    Index origin(n, 0);
    LogWeight w = weight_at(origin);
    push({std::move(origin), w});
  }
  if (pending_) {
    // successors of the previous emission are forced only on this demand
    const Index last = std::move(*pending_);
    pending_.reset();
    for (std::size_t k = 0; k < n; ++k) {
      Index neighbour = last;
      ++neighbour[k];
      if (!admissible(neighbour)) continue;
      if (!args_[k]->at(neighbour[k])) continue;  // argument k has no further item
      LogWeight w = weight_at(neighbour);
      push({std::move(neighbour), w});
    }
  }
  if (fringe_.empty()) return std::nullopt;

  Element best = pop_best();
  WeightedItem out{best.weight, payload_at(best.index)};
  ++emitted_count_;
  if (rule_ == FringeRule::predecessors) emitted_.insert(best.index);
  pending_ = std::move(best.index);
  return out;
}

}  // namespace bnenum
