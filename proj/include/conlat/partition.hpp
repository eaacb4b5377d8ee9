#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace conlat {

using Element = std::uint32_t;
using ElementPair = std::pair<Element, Element>;
using Block = std::vector<Element>;
using BlockList = std::vector<Block>;

inline constexpr std::size_t kDefaultEqBound = 8;

/// An equivalence relation on {0..n-1} stored as its least-element kernel:
/// kernel()[x] is the smallest element of the block containing x. Two
/// partitions are equal as relations exactly when their kernels are equal.
class Partition {
 public:
  /// The empty partition of the empty set.
  Partition() = default;

  /// Discrete partition (every block a singleton) on n elements.
  explicit Partition(std::size_t n);

  static Partition discrete(std::size_t n) { return Partition(n); }
  static Partition top(std::size_t n);

  /// Canonicalizes an arbitrary labelling: x and y share a block iff
  /// labels[x] == labels[y].
  static Partition from_labels(std::span<const std::uint32_t> labels);

  /// Least equivalence relation on {0..n-1} containing every pair.
  static Partition from_pairs(std::size_t n, std::span<const ElementPair> pairs);

  /// Blocks must be disjoint and cover {0..n-1}.
  static Partition from_blocks(std::size_t n, const BlockList& blocks);

  /// Parses bar notation "|0,1,2|3,4,5|". The underlying set is {0..n-1}
  /// where n-1 is the largest element mentioned; every element must appear
  /// exactly once. "|" is the empty partition.
  static Partition parse(std::string_view text);

  std::size_t size() const { return kernel_.size(); }
  std::span<const Element> kernel() const { return kernel_; }
  Element rep(Element x) const { return kernel_[x]; }
  bool related(Element x, Element y) const { return kernel_[x] == kernel_[y]; }

  std::size_t block_count() const;
  bool is_discrete() const { return block_count() == size(); }
  bool is_top() const { return block_count() <= 1; }

  /// Blocks ordered by least element, elements ascending.
  BlockList blocks() const;

  /// Pairs (kernel[x], x) for every non-representative x; their equivalence
  /// closure is this partition.
  std::vector<ElementPair> spanning_pairs() const;

  /// Bar notation, e.g. "|0,3|1,4|2,5|".
  std::string to_string() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition&, const Partition&) = default;

 private:
  explicit Partition(std::vector<Element> kernel) : kernel_(std::move(kernel)) {}

  std::vector<Element> kernel_;
};

struct PartitionHash {
  std::size_t operator()(const Partition& p) const noexcept;
};

Partition meet(const Partition& p, const Partition& q);
Partition join(const Partition& p, const Partition& q);

/// Refinement order: every block of p lies inside a block of q.
bool leq(const Partition& p, const Partition& q);

/// p intersected with subset^2, re-indexed by position in subset. The subset
/// must be strictly increasing and in range.
Partition restrict(const Partition& p, std::span<const Element> subset);

/// All partitions of {0..n-1} in lexicographic restricted-growth-string order.
std::vector<Partition> enumerate_eq(std::size_t n, std::size_t bound = kDefaultEqBound);

/// Every equivalence relation theta with lo <= theta <= hi. Requires lo <= hi.
std::vector<Partition> enumerate_between(const Partition& lo, const Partition& hi);

/// Bell numbers, saturating at UINT64_MAX.
std::uint64_t bell_number(std::size_t n);

}  // namespace conlat

template <>
struct std::hash<conlat::Partition> {
  std::size_t operator()(const conlat::Partition& p) const noexcept {
    return conlat::PartitionHash{}(p);
  }
};
