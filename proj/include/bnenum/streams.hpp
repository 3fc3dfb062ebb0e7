#pragma once

// Lazily extended, cached, non-increasing streams of weighted partial
// instantiations, and the three combinators that build messages from them:
// constant scaling, k-way merge and the n-ary product with its fringe.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "bnenum/model.hpp"

namespace bnenum {

/// Log-space weight that keeps zero factors apart from the finite part.
///
/// A product of probabilities is represented by the number of zero factors
/// and the sum of the logs of the non-zero ones. Ordering is by fewer zeros
/// first, then by larger log sum. Both parts add independently, so equal sums
/// of componentwise ordered operands imply equal operands, which keeps every
/// zero-probability instantiation in a well-defined order instead of a single
/// undifferentiated -inf tie.
struct LogWeight {
  std::int32_t zero_factors = 0;
  double log_nonzero = 0.0;

  static LogWeight one() { return {}; }
  static LogWeight from_probability(double p) { return p > 0.0 ? LogWeight{0, std::log(p)} : LogWeight{1, 0.0}; }
  static LogWeight from_log(double log_p) {
    return log_p == -std::numeric_limits<double>::infinity() ? LogWeight{1, 0.0} : LogWeight{0, log_p};
  }

  /// Natural log of the probability; -inf when any factor was zero.
  double log_value() const { return zero_factors > 0 ? -std::numeric_limits<double>::infinity() : log_nonzero; }

  LogWeight operator+(const LogWeight& o) const { return {zero_factors + o.zero_factors, log_nonzero + o.log_nonzero}; }
  LogWeight& operator+=(const LogWeight& o) { return *this = *this + o; }
  bool operator==(const LogWeight&) const = default;
};

/// Strictly heavier.
inline bool heavier(const LogWeight& a, const LogWeight& b) {
  if (a.zero_factors != b.zero_factors) return a.zero_factors < b.zero_factors;
  return a.log_nonzero > b.log_nonzero;
}

struct Assignment {
  VarIndex var;
  StateIndex state;
  auto operator<=>(const Assignment&) const = default;
};

class Payload;
using PayloadPtr = std::shared_ptr<const Payload>;

/// Persistent partial instantiation. Products reference their component
/// payloads; nothing is copied until flatten().
class Payload {
 public:
  static PayloadPtr leaf(std::vector<Assignment> assignments);
  static PayloadPtr join(std::vector<PayloadPtr> parts);

  void collect(std::vector<Assignment>& out) const;
  /// All assignments sorted by variable.
  std::vector<Assignment> flatten() const;

 private:
  std::vector<Assignment> leaves_;
  std::vector<PayloadPtr> parts_;
};

/// Lexicographic comparison of two payloads over the same node set, by
/// variable then state index. This is the tie-break shared with the oracle.
int compare_payloads(const Payload& a, const Payload& b);

struct WeightedItem {
  LogWeight weight;
  PayloadPtr payload;
};

/// Total order used by every combinator: heavier first, then the smaller
/// payload. Returns true when a must come before b.
bool ranks_before(const WeightedItem& a, const WeightedItem& b);

using NodeSet = std::vector<VarIndex>;  // sorted, unique
using NodeSetPtr = std::shared_ptr<const NodeSet>;

NodeSetPtr make_node_set(std::vector<VarIndex> nodes);

/// Count of items appended to any stream cache in this process.
std::uint64_t forced_item_count();

/// A sorted sequence whose tail is a suspended computation. Items are
/// generated on demand and cached append-only; exhaustion is sticky.
class RankedStream {
 public:
  virtual ~RankedStream() = default;
  RankedStream(const RankedStream&) = delete;
  RankedStream& operator=(const RankedStream&) = delete;

  /// Item i, forcing generation up to it; nullptr past the end. The pointer
  /// is invalidated by the next call that forces this stream.
  const WeightedItem* at(std::size_t i);
  std::size_t cached() const { return cache_.size(); }
  bool exhausted() const { return done_; }
  const NodeSetPtr& nodes() const { return nodes_; }

 protected:
  explicit RankedStream(NodeSetPtr nodes) : nodes_(std::move(nodes)) {}
  virtual std::optional<WeightedItem> generate() = 0;

 private:
  std::vector<WeightedItem> cache_;
  NodeSetPtr nodes_;
  bool done_ = false;
};

using StreamPtr = std::shared_ptr<RankedStream>;

/// Independent reader of a shared stream.
class Cursor {
 public:
  Cursor() = default;
  explicit Cursor(StreamPtr stream) : stream_(std::move(stream)) {}

  const WeightedItem* peek() { return stream_->at(position_); }
  std::optional<WeightedItem> next();
  void advance() { ++position_; }
  std::size_t position() const { return position_; }
  const StreamPtr& stream() const { return stream_; }

 private:
  StreamPtr stream_;
  std::size_t position_ = 0;
};

/// Fully materialized stream; items must already be in rank order.
StreamPtr make_list_stream(std::vector<WeightedItem> items, NodeSetPtr nodes);
/// One item of weight one assigning `state` to `var`.
StreamPtr make_singleton(VarIndex var, StateIndex state);
/// One item of weight one with an arbitrary payload over `nodes`.
StreamPtr make_unit_stream(NodeSetPtr nodes, PayloadPtr payload);

/// Every item of s with k added to its weight.
StreamPtr scale_stream(LogWeight k, StreamPtr s);
inline StreamPtr scale_stream(double k_log, StreamPtr s) { return scale_stream(LogWeight::from_log(k_log), std::move(s)); }

/// Sorted merge; all arguments must declare the same node set. An empty
/// argument list needs `nodes` to know what it covers.
StreamPtr merge_streams(std::vector<StreamPtr> arms, NodeSetPtr nodes = nullptr);

enum class FringeRule {
  /// Insert a dominated neighbour once all of its immediate predecessors have
  /// been emitted.
  predecessors,
  /// Insert a dominated neighbour unless some fringe element dominates it
  /// (linear scan of the fringe).
  domination_scan,
};

class ProductStream;

/// Lazy n-ary product. Argument node sets must be pairwise disjoint; when
/// `nodes` is given it must equal their union.
std::shared_ptr<ProductStream> lazy_product(std::vector<StreamPtr> args, NodeSetPtr nodes = nullptr,
                                            FringeRule rule = FringeRule::predecessors);

/// lazy_product, except that a single argument is returned unchanged.
StreamPtr product_or_identity(std::vector<StreamPtr> args, NodeSetPtr nodes);

/// Same items, re-declared over `nodes`. Used once payload labels no longer
/// mention helper variables (dummy roots, cutset clones).
StreamPtr project_stream(StreamPtr s, NodeSetPtr nodes);

class ProductStream final : public RankedStream {
 public:
  ProductStream(std::vector<StreamPtr> args, NodeSetPtr nodes, FringeRule rule);

  std::size_t arity() const { return args_.size(); }
  std::size_t fringe_size() const { return fringe_.size(); }
  std::size_t emitted() const { return emitted_count_; }

 protected:
  std::optional<WeightedItem> generate() override;

 private:
  using Index = std::vector<std::uint32_t>;
  struct Element {
    Index index;
    LogWeight weight;
  };
  struct IndexHash {
    std::size_t operator()(const Index& idx) const noexcept;
  };

  bool element_before(const Element& a, const Element& b) const;
  bool admissible(const Index& candidate) const;
  LogWeight weight_at(const Index& index);
  PayloadPtr payload_at(const Index& index);
  std::size_t best_position() const;
  void push(Element e);
  Element pop_best();

  std::vector<StreamPtr> args_;
  FringeRule rule_;
  bool started_ = false;
  std::vector<Element> fringe_;  // binary heap for `predecessors`, plain list for `domination_scan`
  std::unordered_set<Index, IndexHash> emitted_;
  std::size_t emitted_count_ = 0;
  std::optional<Index> pending_;
};

}  // namespace bnenum
