#include "conlat/algebra.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_set>

#include "conlat/error.hpp"
#include "conlat/union_find.hpp"

namespace conlat {

namespace {

void check_subset(std::span<const Element> sub, std::size_t n) {
  for (std::size_t i = 0; i < sub.size(); ++i) {
    if (sub[i] >= n) throw InputError("subset element " + std::to_string(sub[i]) + " out of range");
    if (i > 0 && sub[i] <= sub[i - 1]) throw InputError("subset must be strictly increasing");
  }
}

std::vector<Partition> sorted_congruences(std::vector<Partition> elements) {
  std::vector<std::pair<std::size_t, std::string>> keys;
  std::vector<std::size_t> order(elements.size());
  keys.reserve(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    keys.emplace_back(elements[i].block_count(), elements[i].to_string());
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a].first != keys[b].first) return keys[a].first > keys[b].first;
    return keys[a].second < keys[b].second;
  });
  std::vector<Partition> out;
  out.reserve(elements.size());
  for (auto i : order) out.push_back(std::move(elements[i]));
  return out;
}

}  // namespace

UnaryAlgebra::UnaryAlgebra(std::string name, std::size_t size, std::vector<Operation> ops)
    : name_(std::move(name)), size_(size), ops_(std::move(ops)) {
  std::unordered_set<std::string> seen;
  for (const auto& op : ops_) {
    if (!seen.insert(op.symbol).second) throw InputError("duplicate operation symbol \"" + op.symbol + "\"");
    if (op.table.size() != size_) {
      throw InputError("operation \"" + op.symbol + "\" has " + std::to_string(op.table.size()) +
                       " entries, expected " + std::to_string(size_));
    }
    for (auto v : op.table) {
      if (v >= size_) {
        throw InputError("operation \"" + op.symbol + "\" has entry " + std::to_string(v) + " out of range");
      }
    }
  }
}

const Operation* UnaryAlgebra::find(std::string_view symbol) const {
  for (const auto& op : ops_) {
    if (op.symbol == symbol) return &op;
  }
  return nullptr;
}

UnaryAlgebra from_permutations(std::size_t n, const std::vector<Table>& perms, std::string name) {
  std::vector<Operation> ops;
  for (std::size_t i = 0; i < perms.size(); ++i) {
    const auto& p = perms[i];
    if (p.size() != n) throw InputError("permutation " + std::to_string(i) + " has the wrong length");
    std::vector<bool> hit(n, false);
    for (auto v : p) {
      if (v >= n || hit[v]) throw InputError("table " + std::to_string(i) + " is not a bijection");
      hit[v] = true;
    }
    ops.push_back({"g" + std::to_string(i), p});
  }
  return UnaryAlgebra(std::move(name), n, std::move(ops));
}

bool respects(const UnaryAlgebra& a, const Partition& p) {
  if (p.size() != a.size()) throw InputError("respects: partition and algebra sizes differ");
  // Comparing every element with its block representative suffices.
  for (const auto& op : a.ops()) {
    for (Element x = 0; x < a.size(); ++x) {
      if (!p.related(op.table[x], op.table[p.rep(x)])) return false;
    }
  }
  return true;
}

Partition cg(const UnaryAlgebra& a, std::span<const ElementPair> pairs) {
  const auto n = a.size();
  UnionFind uf(n);
  std::deque<ElementPair> queue;
  for (const auto& [x, y] : pairs) {
    if (x >= n || y >= n) {
      throw InputError("cg: pair (" + std::to_string(x) + "," + std::to_string(y) + ") out of range");
    }
    queue.emplace_back(x, y);
  }
  while (!queue.empty()) {
    const auto [x, y] = queue.front();
    queue.pop_front();
    if (!uf.unite(x, y)) continue;
    for (const auto& op : a.ops()) queue.emplace_back(op.table[x], op.table[y]);
  }
  return Partition::from_labels(uf.labels());
}

Partition cg(const UnaryAlgebra& a, const Partition& p) {
  if (p.size() != a.size()) throw InputError("cg: partition and algebra sizes differ");
  const auto pairs = p.spanning_pairs();
  return cg(a, pairs);
}

ConLattice::ConLattice(UnaryAlgebra algebra, std::vector<Partition> elements)
    : algebra_(std::move(algebra)), elements_(sorted_congruences(std::move(elements))) {
  for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i], i);
  lattice_ = FiniteLattice::of_partitions(elements_);
}

std::optional<std::size_t> ConLattice::index_of(const Partition& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ConLattice con(const UnaryAlgebra& a, std::size_t max_size) {
  const auto n = a.size();
  std::vector<Partition> principals;
  {
    std::unordered_set<Partition, PartitionHash> seen;
    for (Element x = 0; x < n; ++x) {
      for (Element y = x + 1; y < n; ++y) {
        const ElementPair pair{x, y};
        auto p = cg(a, std::span<const ElementPair>(&pair, 1));
        if (seen.insert(p).second) principals.push_back(std::move(p));
      }
    }
  }
  // FIFO join closure starting from the identity relation.
  std::vector<Partition> elements{Partition(n)};
  std::unordered_set<Partition, PartitionHash> known{elements.front()};
  for (std::size_t k = 0; k < elements.size(); ++k) {
    for (const auto& p : principals) {
      auto j = join(elements[k], p);
      if (!known.insert(j).second) continue;
      if (elements.size() >= max_size) throw BoundError("more than " + std::to_string(max_size) + " congruences");
      elements.push_back(std::move(j));
    }
  }
  return ConLattice(a, std::move(elements));
}

std::size_t Monoid1::TableHash::operator()(const Table& t) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto v : t) {
    h ^= v;
    h *= 1099511628211ull;
  }
  return h;
}

bool Monoid1::contains(const Table& t) const { return index_.contains(t); }

Monoid1 monoid1(const UnaryAlgebra& a, std::size_t max_size) {
  Monoid1 m;
  Table identity(a.size());
  for (Element x = 0; x < a.size(); ++x) identity[x] = x;
  m.index_.emplace(identity, 0);
  m.maps_.push_back(std::move(identity));
  // Left-multiplying by generators from the identity reaches every product.
  for (std::size_t k = 0; k < m.maps_.size(); ++k) {
    for (const auto& op : a.ops()) {
      Table composed(a.size());
      for (Element x = 0; x < a.size(); ++x) composed[x] = op.table[m.maps_[k][x]];
      if (m.index_.contains(composed)) continue;
      if (m.maps_.size() >= max_size) {
        throw BoundError("monoid exceeds " + std::to_string(max_size) + " maps");
      }
      m.index_.emplace(composed, m.maps_.size());
      m.maps_.push_back(std::move(composed));
    }
  }
  return m;
}

Partition star_of(const UnaryAlgebra& amb, std::span<const Element> sub, const Partition& beta) {
  check_subset(sub, amb.size());
  if (beta.size() != sub.size()) throw InputError("star_of: beta is not a partition of the subset");
  std::vector<ElementPair> pairs;
  for (const auto& [x, y] : beta.spanning_pairs()) pairs.emplace_back(sub[x], sub[y]);
  return cg(amb, pairs);
}

const Table& checked_retraction(const UnaryAlgebra& amb, std::span<const Element> sub, std::string_view e_symbol) {
  check_subset(sub, amb.size());
  const auto* e = amb.find(e_symbol);
  if (e == nullptr) throw InputError("no operation named \"" + std::string(e_symbol) + "\"");
  const auto& t = e->table;
  for (Element x = 0; x < amb.size(); ++x) {
    if (t[t[x]] != t[x]) throw InputError("operation \"" + std::string(e_symbol) + "\" is not idempotent");
  }
  std::set<Element> image(t.begin(), t.end());
  if (!std::equal(image.begin(), image.end(), sub.begin(), sub.end())) {
    throw InputError("image of \"" + std::string(e_symbol) + "\" is not the given subset");
  }
  return t;
}

Partition hat_of(const UnaryAlgebra& amb, std::span<const Element> sub, std::string_view e_symbol,
                 const Partition& beta) {
  return hat_of(amb, sub, e_symbol, beta, monoid1(amb));
}

Partition hat_of(const UnaryAlgebra& amb, std::span<const Element> sub, std::string_view e_symbol,
                 const Partition& beta, const Monoid1& monoid) {
  const auto& e = checked_retraction(amb, sub, e_symbol);
  if (beta.size() != sub.size()) throw InputError("hat_of: beta is not a partition of the subset");
  std::vector<Element> position(amb.size(), 0);
  for (std::size_t i = 0; i < sub.size(); ++i) position[sub[i]] = static_cast<Element>(i);
  // x and y are related iff their signatures (beta-class of e f x, over
  // all f) agree.
  std::vector<std::vector<Element>> signature(amb.size());
  for (Element x = 0; x < amb.size(); ++x) {
    auto& s = signature[x];
    s.reserve(monoid.size());
    for (const auto& f : monoid.maps()) s.push_back(beta.rep(position[e[f[x]]]));
  }
  std::map<std::vector<Element>, Element> first;
  std::vector<std::uint32_t> labels(amb.size());
  for (Element x = 0; x < amb.size(); ++x) labels[x] = first.try_emplace(signature[x], x).first->second;
  return Partition::from_labels(labels);
}

UnaryAlgebra subreduct(const UnaryAlgebra& amb, std::span<const Element> sub, std::string_view e_symbol) {
  return subreduct(amb, sub, e_symbol, monoid1(amb));
}

UnaryAlgebra subreduct(const UnaryAlgebra& amb, std::span<const Element> sub, std::string_view e_symbol,
                       const Monoid1& monoid) {
  const auto& e = checked_retraction(amb, sub, e_symbol);
  std::vector<Element> position(amb.size(), 0);
  for (std::size_t i = 0; i < sub.size(); ++i) position[sub[i]] = static_cast<Element>(i);
  std::set<Table> tables;
  for (const auto& f : monoid.maps()) {
    Table t(sub.size());
    for (std::size_t i = 0; i < sub.size(); ++i) t[i] = position[e[f[sub[i]]]];
    tables.insert(std::move(t));
  }
  std::vector<Operation> ops;
  for (auto& t : tables) ops.push_back({"p" + std::to_string(ops.size()), t});
  return UnaryAlgebra(amb.name() + "|sub", sub.size(), std::move(ops));
}

}  // namespace conlat
