#include "conlat/overalgebra.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

#include "conlat/error.hpp"
#include "conlat/union_find.hpp"

namespace conlat {

namespace {

constexpr Element kNone = std::numeric_limits<Element>::max();

// Inverse tables of an embedding: inverse[j][x] is the base element whose
// copy in B_j is x, or kNone.
std::vector<Table> inverses(const EmbeddingMap& em, std::size_t ambient_size) {
  std::vector<Table> inv(em.copies.size(), Table(ambient_size, kNone));
  for (std::size_t j = 0; j < em.copies.size(); ++j) {
    for (Element b = 0; b < em.copies[j].size(); ++b) inv[j][em.copies[j][b]] = b;
  }
  return inv;
}

std::vector<Element> shared_elements(const EmbeddingMap& em, std::size_t ambient_size) {
  std::vector<Element> out;
  const auto members = em.memberships(ambient_size);
  for (Element x = 0; x < ambient_size; ++x) {
    if (members[x].size() > 1) out.push_back(x);
  }
  return out;
}

void require_congruence(const UnaryAlgebra& base, const Partition& beta) {
  if (beta.size() != base.size()) throw InputError("beta is not a partition of the base universe");
  if (!respects(base, beta)) throw InputError("beta " + beta.to_string() + " is not a congruence of the base");
}

// Checks that blocks partition exactly the given index set.
void require_partition_of(const BlockList& blocks, const std::set<std::size_t>& universe, const std::string& what) {
  std::set<std::size_t> seen;
  for (const auto& block : blocks) {
    if (block.empty()) throw InputError(what + ": empty block");
    for (auto v : block) {
      if (!universe.contains(v)) throw InputError(what + ": index " + std::to_string(v) + " not allowed");
      if (!seen.insert(v).second) throw InputError(what + ": index " + std::to_string(v) + " repeated");
    }
  }
  if (seen != universe) throw InputError(what + ": blocks do not cover every index");
}

std::size_t ambient_size_of(const EmbeddingMap& em) {
  std::size_t n = 0;
  for (const auto& c : em.copies) {
    for (auto x : c) n = std::max<std::size_t>(n, x + 1);
  }
  return n;
}

}  // namespace

std::vector<std::vector<std::size_t>> EmbeddingMap::memberships(std::size_t ambient_size) const {
  std::vector<std::vector<std::size_t>> out(ambient_size);
  for (std::size_t j = 0; j < copies.size(); ++j) {
    for (auto x : copies[j]) out[x].push_back(j);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tie-point construction

OverISpec normalized(const OverISpec& spec) {
  OverISpec out = spec;
  const auto n = spec.base.size();
  const auto k = spec.tiepoints.size();
  for (auto t : spec.tiepoints) {
    if (t >= n) throw InputError("tie-point " + std::to_string(t) + " out of range");
  }
  if (out.blocks.empty() && k > 0) {
    Block all;
    for (Element i = 1; i <= k; ++i) all.push_back(i);
    out.blocks.push_back(std::move(all));
  }
  std::set<std::size_t> indices;
  for (std::size_t i = 1; i <= k; ++i) indices.insert(i);
  require_partition_of(out.blocks, indices, "tie-point blocks");
  for (auto& b : out.blocks) std::sort(b.begin(), b.end());
  return out;
}

EmbeddingMap embed_i(const OverISpec& spec) {
  const auto n = spec.base.size();
  EmbeddingMap em;
  em.construction = "I";
  Table identity(n);
  for (Element b = 0; b < n; ++b) identity[b] = b;
  em.copies.push_back(identity);
  em.sub0 = identity;
  for (std::size_t i = 1; i <= spec.tiepoints.size(); ++i) {
    const auto t = spec.tiepoints[i - 1];
    const auto offset = n + (i - 1) * (n - 1);
    Table copy(n);
    for (Element b = 0; b < n; ++b) {
      copy[b] = b == t ? t : static_cast<Element>(offset + (b < t ? b : b - 1));
    }
    em.copies.push_back(std::move(copy));
  }
  em.tie_elements = shared_elements(em, n + spec.tiepoints.size() * (n - (n > 0 ? 1 : 0)));
  return em;
}

OverResult build_i(const OverISpec& raw, std::span<const Table> relabel) {
  const auto spec = normalized(raw);
  const auto n = spec.base.size();
  const auto k = spec.tiepoints.size();
  if (n == 0) throw InputError("base algebra must be nonempty");
  auto em = embed_i(spec);
  if (!relabel.empty()) {
    if (relabel.size() != k) throw InputError("relabel needs one permutation per copy");
    for (std::size_t i = 1; i <= k; ++i) {
      const auto& sigma = relabel[i - 1];
      std::vector<bool> hit(n, false);
      if (sigma.size() != n) throw InputError("relabel permutation has the wrong length");
      for (auto v : sigma) {
        if (v >= n || hit[v]) throw InputError("relabel table is not a bijection");
        hit[v] = true;
      }
      if (sigma[spec.tiepoints[i - 1]] != spec.tiepoints[i - 1]) {
        throw InputError("relabel permutation must fix its tie-point");
      }
      Table copy(n);
      for (Element b = 0; b < n; ++b) copy[b] = em.copies[i][sigma[b]];
      em.copies[i] = std::move(copy);
    }
  }
  const std::size_t size = n + k * (n - 1);
  const auto inv = inverses(em, size);
  const auto members = em.memberships(size);

  // e0 pulls every element back along the lowest-indexed copy containing it.
  Table e0(size);
  for (Element x = 0; x < size; ++x) {
    const auto iota = members[x].front();
    e0[x] = inv[iota][x];
  }
  std::vector<Operation> ops;
  for (std::size_t c = 0; c <= k; ++c) {
    Table ek(size);
    for (Element x = 0; x < size; ++x) ek[x] = em.copies[c][e0[x]];
    ops.push_back({"e" + std::to_string(c), std::move(ek)});
  }
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    Table sn(size);
    for (Element x = 0; x < size; ++x) {
      sn[x] = x;
      for (auto i : members[x]) {
        if (i == 0) continue;
        if (std::binary_search(spec.blocks[b].begin(), spec.blocks[b].end(), static_cast<Element>(i))) {
          sn[x] = spec.tiepoints[i - 1];
          break;
        }
      }
    }
    ops.push_back({"s" + std::to_string(b + 1), std::move(sn)});
  }
  for (const auto& f : spec.base.ops()) {
    Table fe(size);
    for (Element x = 0; x < size; ++x) fe[x] = f.table[e0[x]];
    ops.push_back({f.symbol + "e0", std::move(fe)});
  }
  std::string name = spec.base.name().empty() ? "overalgebra" : spec.base.name() + "-over";
  return {UnaryAlgebra(std::move(name), size, std::move(ops)), std::move(em), "e0"};
}

Partition formula_star_i(const OverISpec& spec, const Partition& beta) {
  return formula_star_i(spec, embed_i(normalized(spec)), beta);
}

namespace {

// Union-find holding the star relation: every copy's beta-classes, then each
// base class C_r merged with C_r^i for the tie-points it contains.
UnionFind star_i_forest(const OverISpec& spec, const EmbeddingMap& em, const Partition& beta) {
  const auto size = ambient_size_of(em);
  UnionFind uf(size);
  for (const auto& copy : em.copies) {
    for (Element b = 0; b < beta.size(); ++b) uf.unite(copy[b], copy[beta.rep(b)]);
  }
  for (std::size_t i = 1; i <= spec.tiepoints.size(); ++i) {
    const auto r = beta.rep(spec.tiepoints[i - 1]);
    uf.unite(em.copies[0][r], em.copies[i][r]);
  }
  return uf;
}

}  // namespace

Partition formula_star_i(const OverISpec& raw, const EmbeddingMap& em, const Partition& beta) {
  const auto spec = normalized(raw);
  require_congruence(spec.base, beta);
  auto uf = star_i_forest(spec, em, beta);
  return Partition::from_labels(uf.labels());
}

Partition formula_tilde_i(const OverISpec& spec, const Partition& beta) {
  return formula_tilde_i(spec, embed_i(normalized(spec)), beta);
}

Partition formula_tilde_i(const OverISpec& raw, const EmbeddingMap& em, const Partition& beta) {
  const auto spec = normalized(raw);
  require_congruence(spec.base, beta);
  auto uf = star_i_forest(spec, em, beta);
  const auto classes = beta.blocks();
  for (const auto& block : spec.blocks) {
    for (const auto& cr : classes) {
      // Copies in this block whose tie-point lies in C_r.
      std::vector<std::size_t> hits;
      for (auto i : block) {
        if (beta.related(spec.tiepoints[i - 1], cr.front())) hits.push_back(i);
      }
      if (hits.size() < 2) continue;
      for (const auto& cl : classes) {
        if (cl.front() == cr.front()) continue;
        for (auto i : hits) uf.unite(em.copies[hits.front()][cl.front()], em.copies[i][cl.front()]);
      }
    }
  }
  return Partition::from_labels(uf.labels());
}

IntervalShape predicted_shape_i(const OverISpec& raw, const Partition& beta) {
  const auto spec = normalized(raw);
  require_congruence(spec.base, beta);
  const auto classes = beta.blocks();
  const auto m = classes.size();
  IntervalShape shape;
  for (const auto& cr : classes) {
    for (const auto& block : spec.blocks) {
      std::size_t count = 0;
      for (auto i : block) count += beta.related(spec.tiepoints[i - 1], cr.front());
      shape.factors.push_back({count, m - 1});
    }
  }
  return shape;
}

// ---------------------------------------------------------------------------
// Chained construction

OverIISpec normalized(const OverIISpec& spec) {
  OverIISpec out = spec;
  const auto n = spec.base.size();
  if (spec.gen_pairs.empty()) throw InputError("at least one generating pair is required");
  for (const auto& [a, b] : spec.gen_pairs) {
    if (a >= n || b >= n) {
      throw InputError("generating pair (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
    }
  }
  if (spec.u < 1) throw InputError("u must be at least 1");
  const auto k = spec.k();
  std::set<std::size_t> multiples;
  for (std::size_t v = 0; v <= spec.u; ++v) multiples.insert(v * k);
  if (out.blocks.empty()) out.blocks.push_back(Block(multiples.begin(), multiples.end()));
  require_partition_of(out.blocks, multiples, "copy blocks");
  for (auto& b : out.blocks) std::sort(b.begin(), b.end());
  return out;
}

EmbeddingMap embed_ii(const OverIISpec& spec) {
  const auto n = spec.base.size();
  const auto k = spec.k();
  const auto last = spec.u * k;
  const auto a = [&](std::size_t i) { return spec.gen_pairs[i - 1].first; };
  const auto b = [&](std::size_t i) { return spec.gen_pairs[i - 1].second; };
  EmbeddingMap em;
  em.construction = "II";
  Table identity(n);
  for (Element x = 0; x < n; ++x) identity[x] = x;
  em.copies.push_back(identity);
  em.sub0 = identity;
  for (std::size_t j = 1; j <= last; ++j) {
    const auto i = j % k;
    // Left tie-point of B_j (in base terms) and the element it is glued to.
    const Element left = i == 0 ? a(1) : a(i);
    const auto prev = j - 1;
    const Element glued = prev % k == 0 ? em.copies[prev][a(1)] : em.copies[prev][b(prev % k)];
    const auto offset = n + (j - 1) * (n - 1);
    Table copy(n);
    for (Element x = 0; x < n; ++x) {
      copy[x] = x == left ? glued : static_cast<Element>(offset + (x < left ? x : x - 1));
    }
    em.copies.push_back(std::move(copy));
  }
  em.tie_elements = shared_elements(em, n + last * (n - 1));
  return em;
}

namespace {

struct RetractionTables {
  std::vector<Table> e;  // e[j] for j = 0..uK
  std::vector<std::string> conflicts;
};

RetractionTables retractions_ii(const OverIISpec& spec, const EmbeddingMap& em) {
  const auto n = spec.base.size();
  const auto k = spec.k();
  const auto last = spec.u * k;
  const auto size = n + last * (n - 1);
  const auto inv = inverses(em, size);
  const auto members = em.memberships(size);
  RetractionTables out;
  out.e.assign(last + 1, Table(size, kNone));
  auto record = [&](std::size_t j, Element x, Element value) {
    auto& slot = out.e[j][x];
    if (slot == kNone) {
      slot = value;
    } else if (slot != value) {
      out.conflicts.push_back("e" + std::to_string(j) + " at " + std::to_string(x) + ": " + std::to_string(slot) +
                              " vs " + std::to_string(value));
    }
  };
  std::vector<std::size_t> block_of(last + 1, 0);
  for (std::size_t nb = 0; nb < spec.blocks.size(); ++nb) {
    for (auto l : spec.blocks[nb]) block_of[l] = nb;
  }
  for (std::size_t j = 0; j <= last; ++j) {
    for (Element x = 0; x < size; ++x) {
      if (j % k == 0) {
        bool in_block = false;
        for (auto c : members[x]) {
          if (c % k == 0 && block_of[c] == block_of[j]) {
            in_block = true;
            record(j, x, em.copies[j][inv[c][x]]);
          }
        }
        if (!in_block) record(j, x, em.copies[j][spec.gen_pairs[0].first]);
      } else {
        const auto i = j % k;
        for (auto c : members[x]) {
          if (c < j) record(j, x, em.copies[j][spec.gen_pairs[i - 1].first]);
          if (c == j) record(j, x, x);
          if (c > j) record(j, x, em.copies[j][spec.gen_pairs[i - 1].second]);
        }
      }
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> clause_conflicts_ii(const OverIISpec& raw) {
  const auto spec = normalized(raw);
  return retractions_ii(spec, embed_ii(spec)).conflicts;
}

OverResult build_ii(const OverIISpec& raw) {
  const auto spec = normalized(raw);
  const auto n = spec.base.size();
  if (n == 0) throw InputError("base algebra must be nonempty");
  const auto last = spec.u * spec.k();
  const auto size = n + last * (n - 1);
  auto em = embed_ii(spec);
  const auto r = retractions_ii(spec, em);
  if (!r.conflicts.empty()) throw std::logic_error("ill-defined retraction: " + r.conflicts.front());
  const auto inv = inverses(em, size);
  // q_{i,j} = S_{i,j} e_i
  auto q = [&](std::size_t i, std::size_t j) {
    Table t(size);
    for (Element x = 0; x < size; ++x) t[x] = em.copies[j][inv[i][r.e[i][x]]];
    return t;
  };
  std::vector<Operation> ops;
  for (const auto& f : spec.base.ops()) {
    Table fe(size);
    for (Element x = 0; x < size; ++x) fe[x] = f.table[r.e[0][x]];
    ops.push_back({f.symbol + "e0", std::move(fe)});
  }
  for (std::size_t i = 0; i <= last; ++i) ops.push_back({"q_" + std::to_string(i) + "_0", q(i, 0)});
  for (std::size_t j = 1; j <= last; ++j) ops.push_back({"q_0_" + std::to_string(j), q(0, j)});
  std::string name = spec.base.name().empty() ? "overalgebra2" : spec.base.name() + "-over2";
  return {UnaryAlgebra(std::move(name), size, std::move(ops)), std::move(em), "q_0_0"};
}

Partition generated_congruence(const OverIISpec& spec) { return cg(spec.base, spec.gen_pairs); }

namespace {

UnionFind star_ii_forest(const OverIISpec& spec, const EmbeddingMap& em, const Partition& beta) {
  require_congruence(spec.base, beta);
  for (const auto& [a, b] : spec.gen_pairs) {
    if (!beta.related(a, b)) {
      throw InputError("beta " + beta.to_string() + " does not contain the pair (" + std::to_string(a) + "," +
                       std::to_string(b) + ")");
    }
  }
  const auto k = spec.k();
  UnionFind uf(ambient_size_of(em));
  for (const auto& copy : em.copies) {
    for (Element x = 0; x < beta.size(); ++x) uf.unite(copy[x], copy[beta.rep(x)]);
  }
  // One block holding the class of a tie-point of every copy (the left one).
  const auto hub = em.copies[0][spec.gen_pairs[0].first];
  for (std::size_t j = 1; j < em.copies.size(); ++j) {
    const auto i = j % k;
    const Element tie = i == 0 ? spec.gen_pairs[0].first : spec.gen_pairs[i - 1].first;
    uf.unite(hub, em.copies[j][tie]);
  }
  return uf;
}

}  // namespace

Partition formula_star_ii(const OverIISpec& raw, const Partition& beta) {
  const auto spec = normalized(raw);
  auto uf = star_ii_forest(spec, embed_ii(spec), beta);
  return Partition::from_labels(uf.labels());
}

Partition formula_tilde_ii(const OverIISpec& raw, const Partition& beta) {
  const auto spec = normalized(raw);
  const auto em = embed_ii(spec);
  auto uf = star_ii_forest(spec, em, beta);
  for (const auto& block : spec.blocks) {
    for (Element c = 0; c < beta.size(); ++c) {
      if (beta.rep(c) != c) continue;
      for (auto l : block) uf.unite(em.copies[block.front()][c], em.copies[l][c]);
    }
  }
  return Partition::from_labels(uf.labels());
}

IntervalShape predicted_shape_ii(const OverIISpec& raw, const Partition& theta) {
  const auto spec = normalized(raw);
  require_congruence(spec.base, theta);
  IntervalShape shape;
  const auto beta = generated_congruence(spec);
  if (!leq(beta, theta) || theta.is_top()) return shape;
  const auto r = theta.block_count();
  for (const auto& block : spec.blocks) shape.factors.push_back({block.size(), r - 1});
  return shape;
}

}  // namespace conlat
