#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "conlat/lattice.hpp"
#include "conlat/partition.hpp"

namespace conlat {

using Table = std::vector<Element>;

struct Operation {
  std::string symbol;
  Table table;
  friend bool operator==(const Operation&, const Operation&) = default;
};

/// A finite algebra on {0..size-1} whose basic operations are all unary.
class UnaryAlgebra {
 public:
  UnaryAlgebra() = default;

  /// Throws InputError if a table has the wrong length or an entry out of
  /// range, or if two operations share a symbol.
  UnaryAlgebra(std::string name, std::size_t size, std::vector<Operation> ops);

  const std::string& name() const { return name_; }
  std::size_t size() const { return size_; }
  const std::vector<Operation>& ops() const { return ops_; }

  /// nullptr when no operation has this symbol.
  const Operation* find(std::string_view symbol) const;

  friend bool operator==(const UnaryAlgebra&, const UnaryAlgebra&) = default;

 private:
  std::string name_;
  std::size_t size_ = 0;
  std::vector<Operation> ops_;
};

/// Permutation tables become operations g0, g1, ...
UnaryAlgebra from_permutations(std::size_t n, const std::vector<Table>& perms, std::string name = "");

bool respects(const UnaryAlgebra& a, const Partition& p);

/// Least congruence containing every pair.
Partition cg(const UnaryAlgebra& a, std::span<const ElementPair> pairs);

/// Least congruence containing the relation p.
Partition cg(const UnaryAlgebra& a, const Partition& p);

/// The congruence lattice of an algebra. Elements are ordered by block count
/// (descending) and then by bar string, so index 0 is the identity relation
/// and the last index is the all relation.
class ConLattice {
 public:
  ConLattice(UnaryAlgebra algebra, std::vector<Partition> elements);

  const UnaryAlgebra& algebra() const { return algebra_; }
  const std::vector<Partition>& elements() const& { return elements_; }
  std::vector<Partition> elements() && { return std::move(elements_); }
  const Partition& operator[](std::size_t i) const { return elements_[i]; }
  std::size_t size() const { return elements_.size(); }
  std::optional<std::size_t> index_of(const Partition& p) const;
  bool contains(const Partition& p) const { return index_.contains(p); }

  /// Order, covers, heights; labels are bar strings.
  const FiniteLattice& lattice() const { return lattice_; }

 private:
  UnaryAlgebra algebra_;
  std::vector<Partition> elements_;
  std::unordered_map<Partition, std::size_t, PartitionHash> index_;
  FiniteLattice lattice_;
};

/// All congruences: principal congruences closed under joins, plus the
/// identity relation. Throws BoundError past max_size congruences.
ConLattice con(const UnaryAlgebra& a, std::size_t max_size = kDefaultLatticeBudget);

/// Distinct self-maps of the universe, identity first.
class Monoid1 {
 public:
  const std::vector<Table>& maps() const { return maps_; }
  std::size_t size() const { return maps_.size(); }
  bool contains(const Table& t) const;

 private:
  friend Monoid1 monoid1(const UnaryAlgebra& a, std::size_t max_size);
  struct TableHash {
    std::size_t operator()(const Table& t) const noexcept;
  };
  std::vector<Table> maps_;
  std::unordered_map<Table, std::size_t, TableHash> index_;
};

inline constexpr std::size_t kDefaultMonoidBound = 2'000'000;

/// Closure of the identity and the operation tables under composition.
Monoid1 monoid1(const UnaryAlgebra& a, std::size_t max_size = kDefaultMonoidBound);

/// Congruence of amb generated by beta, where beta is a partition of the
/// strictly increasing subset sub (re-indexed by position).
Partition star_of(const UnaryAlgebra& amb, std::span<const Element> sub, const Partition& beta);

/// {(x,y) : (e f x, e f y) in beta for every f in monoid1(amb)}, where e is
/// the operation named e_symbol. e must be idempotent with image exactly sub.
Partition hat_of(const UnaryAlgebra& amb, std::span<const Element> sub, std::string_view e_symbol,
                 const Partition& beta);
Partition hat_of(const UnaryAlgebra& amb, std::span<const Element> sub, std::string_view e_symbol,
                 const Partition& beta, const Monoid1& monoid);

/// The algebra induced on sub = e(A): operations {e f restricted to sub} for
/// f in monoid1(amb), re-indexed by position in sub, duplicates removed.
UnaryAlgebra subreduct(const UnaryAlgebra& amb, std::span<const Element> sub, std::string_view e_symbol);
UnaryAlgebra subreduct(const UnaryAlgebra& amb, std::span<const Element> sub, std::string_view e_symbol,
                       const Monoid1& monoid);

/// Throws InputError unless the op e_symbol exists, is idempotent and has
/// image exactly sub. Returns its table.
const Table& checked_retraction(const UnaryAlgebra& amb, std::span<const Element> sub, std::string_view e_symbol);

}  // namespace conlat
