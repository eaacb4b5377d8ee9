#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "conlat/partition.hpp"

namespace conlat {

inline constexpr std::size_t kDefaultLatticeBudget = 1'000'000;

using OrderRow = boost::dynamic_bitset<std::uint64_t>;

/// A finite lattice given by its order relation on element indices 0..size-1.
/// Rows of the order are stored as bitsets in both directions so that
/// intervals, joins and meets are cheap set operations.
class FiniteLattice {
 public:
  /// The one-element lattice.
  FiniteLattice();

  /// Builds from a predicate leq(i, j). When validate is set the relation is
  /// checked to be a partial order with all pairwise joins and meets; an
  /// InputError is thrown otherwise. Callers that construct a lattice from a
  /// known lattice (intervals, products, congruence sets) may skip it.
  static FiniteLattice from_leq(std::size_t size, const std::function<bool(std::size_t, std::size_t)>& leq,
                                std::vector<std::string> labels = {}, bool validate = true);

  /// Induced refinement order on a set of distinct partitions that is known
  /// to form a lattice. Labels are the bar strings.
  static FiniteLattice of_partitions(std::span<const Partition> elements);

  std::size_t size() const { return up_.size(); }
  bool leq(std::size_t i, std::size_t j) const { return up_[i][j]; }
  const OrderRow& up_set(std::size_t i) const { return up_[i]; }
  const OrderRow& down_set(std::size_t i) const { return down_[i]; }

  std::size_t bottom() const { return bottom_; }
  std::size_t top() const { return top_; }
  std::size_t join(std::size_t i, std::size_t j) const;
  std::size_t meet(std::size_t i, std::size_t j) const;

  /// upper_covers()[i] lists the elements covering i, ascending.
  const std::vector<std::vector<std::size_t>>& upper_covers() const { return upper_; }
  const std::vector<std::vector<std::size_t>>& lower_covers() const { return lower_; }
  /// Length of the longest chain from bottom to i.
  std::size_t height(std::size_t i) const { return height_[i]; }

  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(std::size_t i) const;

 private:
  void finish(bool validate);

  std::vector<OrderRow> up_;
  std::vector<OrderRow> down_;
  std::vector<std::vector<std::size_t>> upper_;
  std::vector<std::vector<std::size_t>> lower_;
  std::vector<std::size_t> height_;
  std::vector<std::size_t> popcount_up_;
  std::vector<std::size_t> popcount_down_;
  std::vector<std::string> labels_;
  std::size_t bottom_ = 0;
  std::size_t top_ = 0;
};

/// One factor Eq(block_size)^exponent of a product of partition lattices.
struct ShapeFactor {
  std::size_t block_size = 0;
  std::size_t exponent = 0;
  friend bool operator==(const ShapeFactor&, const ShapeFactor&) = default;
};

/// A predicted interval shape: the product of its factors. Factors with
/// block_size <= 1 or exponent 0 are the trivial lattice.
struct IntervalShape {
  std::vector<ShapeFactor> factors;

  /// Product of Bell(block_size)^exponent, saturating.
  std::uint64_t predicted_size() const;
  bool trivial() const { return predicted_size() == 1; }
  /// Nontrivial factors merged by block size, e.g. "Eq(2)^4 x Eq(3)^3", or "1".
  std::string to_string() const;
};

/// Edges (i, j) with j covering i, sorted.
std::vector<std::pair<std::size_t, std::size_t>> covers(const FiniteLattice& lattice);

/// Induced sublattice on {x : a <= x <= b}, in ascending index order.
FiniteLattice interval(const FiniteLattice& lattice, std::size_t a, std::size_t b);

/// Componentwise-ordered product; the empty product is the one-element lattice.
FiniteLattice product(std::span<const FiniteLattice> factors, std::size_t budget = kDefaultLatticeBudget);

FiniteLattice chain(std::size_t length);

/// Eq(k) under refinement, elements in restricted-growth-string order.
FiniteLattice eq_lattice(std::size_t k, std::size_t bound = kDefaultEqBound);

FiniteLattice shape_lattice(const IntervalShape& shape, std::size_t budget = kDefaultLatticeBudget);

/// Exact order-isomorphism test: invariant screening followed by
/// backtracking along covering edges.
bool isomorphic(const FiniteLattice& a, const FiniteLattice& b);

struct DotOptions {
  /// Labels longer than this are replaced by the element index.
  std::size_t label_cap = 64;
  std::string graph_name = "lattice";
};

/// Graphviz rendering: one node per element, one edge per covering pair,
/// nodes grouped into ranks by height.
std::string to_dot(const FiniteLattice& lattice, const DotOptions& options = {});

/// "index<TAB>label" lines for every element whose label was elided by to_dot.
std::string dot_legend(const FiniteLattice& lattice, const DotOptions& options = {});

}  // namespace conlat
