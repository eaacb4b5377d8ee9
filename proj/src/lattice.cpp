#include "conlat/lattice.hpp"

#include <algorithm>
#include <map>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

#include "conlat/error.hpp"

namespace conlat {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::uint64_t>::max() / b) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

}  // namespace

FiniteLattice::FiniteLattice() {
  up_.assign(1, OrderRow(1));
  up_[0].set(0);
  down_ = up_;
  finish(false);
}

FiniteLattice FiniteLattice::from_leq(std::size_t size, const std::function<bool(std::size_t, std::size_t)>& leq,
                                      std::vector<std::string> labels, bool validate) {
  if (size == 0) throw InputError("a lattice must have at least one element");
  if (!labels.empty() && labels.size() != size) throw InputError("label count does not match lattice size");
  FiniteLattice out;
  out.up_.assign(size, OrderRow(size));
  out.down_.assign(size, OrderRow(size));
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      if (leq(i, j)) {
        out.up_[i].set(j);
        out.down_[j].set(i);
      }
    }
  }
  out.labels_ = std::move(labels);
  out.finish(validate);
  return out;
}

FiniteLattice FiniteLattice::of_partitions(std::span<const Partition> elements) {
  std::vector<std::string> labels;
  labels.reserve(elements.size());
  for (const auto& p : elements) labels.push_back(p.to_string());
  return from_leq(
      elements.size(), [&](std::size_t i, std::size_t j) { return conlat::leq(elements[i], elements[j]); },
      std::move(labels), false);
}

void FiniteLattice::finish(bool validate) {
  const std::size_t n = up_.size();
  popcount_up_.resize(n);
  popcount_down_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    popcount_up_[i] = up_[i].count();
    popcount_down_[i] = down_[i].count();
  }
  if (validate) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!up_[i][i]) throw InputError("order is not reflexive at " + std::to_string(i));
      for (auto j = up_[i].find_first(); j != OrderRow::npos; j = up_[i].find_next(j)) {
        if (j != i && up_[j][i]) throw InputError("order is not antisymmetric");
        if (!up_[j].is_subset_of(up_[i])) throw InputError("order is not transitive");
      }
    }
  }
  std::vector<std::size_t> bottoms, tops;
  for (std::size_t i = 0; i < n; ++i) {
    if (popcount_up_[i] == n) bottoms.push_back(i);
    if (popcount_down_[i] == n) tops.push_back(i);
  }
  if (bottoms.size() != 1 || tops.size() != 1) throw InputError("order has no unique bottom and top");
  bottom_ = bottoms.front();
  top_ = tops.front();
  if (validate) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const OrderRow ub = up_[i] & up_[j];
        const OrderRow lb = down_[i] & down_[j];
        const auto nub = ub.count(), nlb = lb.count();
        bool has_join = false, has_meet = false;
        for (auto c = ub.find_first(); c != OrderRow::npos && !has_join; c = ub.find_next(c)) {
          has_join = popcount_up_[c] == nub;
        }
        for (auto c = lb.find_first(); c != OrderRow::npos && !has_meet; c = lb.find_next(c)) {
          has_meet = popcount_down_[c] == nlb;
        }
        if (!has_join || !has_meet) {
          throw InputError("elements " + std::to_string(i) + " and " + std::to_string(j) + " lack a join or meet");
        }
      }
    }
  }
  upper_.assign(n, {});
  lower_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    OrderRow strict = up_[i];
    strict.reset(i);
    for (auto j = strict.find_first(); j != OrderRow::npos; j = strict.find_next(j)) {
      // j covers i iff nothing strictly above i lies strictly below j.
      if ((strict & down_[j]).count() == 1) {
        upper_[i].push_back(j);
        lower_[j].push_back(i);
      }
    }
  }
  // Down-set size is a linear extension of the order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return popcount_down_[a] < popcount_down_[b]; });
  height_.assign(n, 0);
  for (auto j : order) {
    for (auto i : lower_[j]) height_[j] = std::max(height_[j], height_[i] + 1);
  }
}

std::size_t FiniteLattice::join(std::size_t i, std::size_t j) const {
  const OrderRow ub = up_[i] & up_[j];
  const auto nub = ub.count();
  for (auto c = ub.find_first(); c != OrderRow::npos; c = ub.find_next(c)) {
    if (popcount_up_[c] == nub) return c;
  }
  throw InputError("join does not exist");
}

std::size_t FiniteLattice::meet(std::size_t i, std::size_t j) const {
  const OrderRow lb = down_[i] & down_[j];
  const auto nlb = lb.count();
  for (auto c = lb.find_first(); c != OrderRow::npos; c = lb.find_next(c)) {
    if (popcount_down_[c] == nlb) return c;
  }
  throw InputError("meet does not exist");
}

std::string FiniteLattice::label(std::size_t i) const {
  return labels_.empty() ? std::to_string(i) : labels_[i];
}

std::uint64_t IntervalShape::predicted_size() const {
  std::uint64_t total = 1;
  for (const auto& f : factors) {
    const auto b = bell_number(f.block_size);
    for (std::size_t e = 0; e < f.exponent; ++e) total = saturating_mul(total, b);
  }
  return total;
}

std::string IntervalShape::to_string() const {
  std::map<std::size_t, std::size_t> merged;
  for (const auto& f : factors) {
    if (f.block_size >= 2 && f.exponent > 0) merged[f.block_size] += f.exponent;
  }
  if (merged.empty()) return "1";
  std::string s;
  for (const auto& [size, exp] : merged) {
    if (!s.empty()) s += " x ";
    s += "Eq(" + std::to_string(size) + ")";
    if (exp > 1) s += "^" + std::to_string(exp);
  }
  return s;
}

std::vector<std::pair<std::size_t, std::size_t>> covers(const FiniteLattice& lattice) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    for (auto j : lattice.upper_covers()[i]) edges.emplace_back(i, j);
  }
  return edges;
}

FiniteLattice interval(const FiniteLattice& lattice, std::size_t a, std::size_t b) {
  if (a >= lattice.size() || b >= lattice.size()) throw InputError("interval: element out of range");
  if (!lattice.leq(a, b)) throw InputError("interval: lower endpoint is not below upper endpoint");
  const OrderRow members = lattice.up_set(a) & lattice.down_set(b);
  std::vector<std::size_t> index;
  for (auto x = members.find_first(); x != OrderRow::npos; x = members.find_next(x)) index.push_back(x);
  std::vector<std::string> labels;
  if (!lattice.labels().empty()) {
    for (auto x : index) labels.push_back(lattice.labels()[x]);
  }
  return FiniteLattice::from_leq(
      index.size(), [&](std::size_t i, std::size_t j) { return lattice.leq(index[i], index[j]); }, std::move(labels),
      false);
}

FiniteLattice product(std::span<const FiniteLattice> factors, std::size_t budget) {
  std::uint64_t total = 1;
  for (const auto& f : factors) total = saturating_mul(total, f.size());
  if (total > budget) {
    throw BoundError("product of " + std::to_string(total) + " elements exceeds budget " + std::to_string(budget));
  }
  const auto n = static_cast<std::size_t>(total);
  // Mixed-radix digits, first factor least significant.
  std::vector<std::vector<std::size_t>> digits(n, std::vector<std::size_t>(factors.size()));
  for (std::size_t x = 0; x < n; ++x) {
    auto rest = x;
    for (std::size_t k = 0; k < factors.size(); ++k) {
      digits[x][k] = rest % factors[k].size();
      rest /= factors[k].size();
    }
  }
  return FiniteLattice::from_leq(
      n,
      [&](std::size_t i, std::size_t j) {
        for (std::size_t k = 0; k < factors.size(); ++k) {
          if (!factors[k].leq(digits[i][k], digits[j][k])) return false;
        }
        return true;
      },
      {}, false);
}

FiniteLattice chain(std::size_t length) {
  if (length == 0) throw InputError("chain: length must be positive");
  return FiniteLattice::from_leq(length, [](std::size_t i, std::size_t j) { return i <= j; }, {}, false);
}

FiniteLattice eq_lattice(std::size_t k, std::size_t bound) {
  const auto elements = enumerate_eq(k, bound);
  return FiniteLattice::of_partitions(elements);
}

FiniteLattice shape_lattice(const IntervalShape& shape, std::size_t budget) {
  if (shape.predicted_size() > budget) {
    throw BoundError("shape " + shape.to_string() + " exceeds lattice budget " + std::to_string(budget));
  }
  std::vector<FiniteLattice> parts;
  for (const auto& f : shape.factors) {
    if (f.block_size <= 1) continue;
    const auto eq = eq_lattice(f.block_size, std::max(kDefaultEqBound, f.block_size));
    for (std::size_t e = 0; e < f.exponent; ++e) parts.push_back(eq);
  }
  return product(parts, budget);
}

namespace {

// Per-element signature that any isomorphism must preserve.
using Signature = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, std::size_t>;

std::vector<Signature> signatures(const FiniteLattice& l) {
  std::vector<Signature> sig(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) {
    sig[i] = {l.height(i), l.upper_covers()[i].size(), l.lower_covers()[i].size(), l.down_set(i).count(),
              l.up_set(i).count()};
  }
  return sig;
}

class IsoSearch {
 public:
  IsoSearch(const FiniteLattice& a, const FiniteLattice& b)
      : a_(a), b_(b), sig_a_(signatures(a)), sig_b_(signatures(b)), map_(a.size(), kUnmapped),
        inverse_(b.size(), kUnmapped) {}

  bool run() {
    if (sig_a_[a_.bottom()] != sig_b_[b_.bottom()]) return false;
    assign(a_.bottom(), b_.bottom());
    return extend(1);
  }

 private:
  static constexpr std::size_t kUnmapped = static_cast<std::size_t>(-1);

  static bool is_cover(const FiniteLattice& l, std::size_t lo, std::size_t hi) {
    const auto& up = l.upper_covers()[lo];
    return std::binary_search(up.begin(), up.end(), hi);
  }

  void assign(std::size_t x, std::size_t y) {
    map_[x] = y;
    inverse_[y] = x;
  }

  void unassign(std::size_t x) {
    inverse_[map_[x]] = kUnmapped;
    map_[x] = kUnmapped;
  }

  // Cover edges between x and mapped elements must match cover edges
  // between y and their images, in both directions.
  bool consistent(std::size_t x, std::size_t y) const {
    if (inverse_[y] != kUnmapped || sig_a_[x] != sig_b_[y]) return false;
    for (auto lc : a_.lower_covers()[x]) {
      if (map_[lc] != kUnmapped && !is_cover(b_, map_[lc], y)) return false;
    }
    for (auto uc : a_.upper_covers()[x]) {
      if (map_[uc] != kUnmapped && !is_cover(b_, y, map_[uc])) return false;
    }
    for (auto lc : b_.lower_covers()[y]) {
      if (inverse_[lc] != kUnmapped && !is_cover(a_, inverse_[lc], x)) return false;
    }
    for (auto uc : b_.upper_covers()[y]) {
      if (inverse_[uc] != kUnmapped && !is_cover(a_, x, inverse_[uc])) return false;
    }
    return true;
  }

  // Images allowed for an unmapped x that touches the mapped region.
  std::vector<std::size_t> candidates(std::size_t x) const {
    const std::vector<std::size_t>* pool = nullptr;
    for (auto lc : a_.lower_covers()[x]) {
      if (map_[lc] != kUnmapped) {
        pool = &b_.upper_covers()[map_[lc]];
        break;
      }
    }
    if (pool == nullptr) {
      for (auto uc : a_.upper_covers()[x]) {
        if (map_[uc] != kUnmapped) {
          pool = &b_.lower_covers()[map_[uc]];
          break;
        }
      }
    }
    std::vector<std::size_t> out;
    if (pool == nullptr) return out;
    for (auto y : *pool) {
      if (consistent(x, y)) out.push_back(y);
    }
    return out;
  }

  bool extend(std::size_t mapped) {
    if (mapped == a_.size()) return true;
    // Most-constrained frontier element first.
    std::size_t best = kUnmapped;
    std::vector<std::size_t> best_candidates;
    for (std::size_t x = 0; x < a_.size(); ++x) {
      if (map_[x] != kUnmapped) continue;
      bool frontier = false;
      for (auto lc : a_.lower_covers()[x]) frontier = frontier || map_[lc] != kUnmapped;
      for (auto uc : a_.upper_covers()[x]) frontier = frontier || map_[uc] != kUnmapped;
      if (!frontier) continue;
      auto c = candidates(x);
      if (best == kUnmapped || c.size() < best_candidates.size()) {
        best = x;
        best_candidates = std::move(c);
        if (best_candidates.size() <= 1) break;
      }
    }
    if (best == kUnmapped) return false;
    for (auto y : best_candidates) {
      assign(best, y);
      if (extend(mapped + 1)) return true;
      unassign(best);
    }
    return false;
  }

  const FiniteLattice& a_;
  const FiniteLattice& b_;
  std::vector<Signature> sig_a_;
  std::vector<Signature> sig_b_;
  std::vector<std::size_t> map_;
  std::vector<std::size_t> inverse_;
};

}  // namespace

bool isomorphic(const FiniteLattice& a, const FiniteLattice& b) {
  if (a.size() != b.size()) return false;
  if (covers(a).size() != covers(b).size()) return false;
  auto sa = signatures(a), sb = signatures(b);
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return false;
  return IsoSearch(a, b).run();
}

std::string to_dot(const FiniteLattice& lattice, const DotOptions& options) {
  std::ostringstream out;
  out << "digraph " << options.graph_name << " {\n";
  out << "  rankdir=BT;\n  node [shape=box, fontsize=10];\n";
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    auto label = lattice.label(i);
    if (label.size() > options.label_cap) label = std::to_string(i);
    out << "  n" << i << " [label=\"" << label << "\"];\n";
  }
  std::map<std::size_t, std::vector<std::size_t>> ranks;
  for (std::size_t i = 0; i < lattice.size(); ++i) ranks[lattice.height(i)].push_back(i);
  for (const auto& [h, nodes] : ranks) {
    out << "  { rank=same;";
    for (auto i : nodes) out << " n" << i << ";";
    out << " }\n";
  }
  for (const auto& [i, j] : covers(lattice)) out << "  n" << i << " -> n" << j << ";\n";
  out << "}\n";
  return out.str();
}

std::string dot_legend(const FiniteLattice& lattice, const DotOptions& options) {
  std::string out;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const auto label = lattice.label(i);
    if (label.size() > options.label_cap) out += std::to_string(i) + "\t" + label + "\n";
  }
  return out;
}

}  // namespace conlat
