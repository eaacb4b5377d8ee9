#include "conlat/verify.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <unordered_set>

#include "conlat/error.hpp"

namespace conlat {

namespace {

std::optional<ElementPair> differing_pair(const Partition& p, const Partition& q) {
  if (p.size() != q.size()) return std::nullopt;
  for (Element x = 0; x < p.size(); ++x) {
    for (Element y = x + 1; y < p.size(); ++y) {
      if (p.related(x, y) != q.related(x, y)) return ElementPair{x, y};
    }
  }
  return std::nullopt;
}

void fail(VerifyReport& report, const Partition& beta, std::string what,
          std::optional<ElementPair> pair = std::nullopt) {
  report.failures.push_back({beta.to_string(), std::move(what), pair});
}

void fail_mismatch(VerifyReport& report, const Partition& beta, const std::string& what, const Partition& got,
                   const Partition& want) {
  fail(report, beta, what + ": " + got.to_string() + " vs " + want.to_string(), differing_pair(got, want));
}

std::string join_list(std::span<const Element> xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(xs[i]);
  }
  return out;
}

std::string blocks_string(const BlockList& blocks) {
  std::string out = "|";
  for (const auto& b : blocks) out += join_list(b) + "|";
  return out;
}

struct Oracle {
  ConLattice base;
  ConLattice ambient;
  std::vector<Element> sub;
  /// fibers[b] holds ambient indices restricting to base[b].
  std::vector<std::vector<std::size_t>> fibers;
};

// Groups ambient congruences by their restriction and checks that restriction
// is a lattice epimorphism onto the base congruences.
Oracle build_oracle(ConLattice base, ConLattice ambient, std::vector<Element> sub, VerifyReport& report) {
  Oracle o{std::move(base), std::move(ambient), std::move(sub), {}};
  report.base_con_size = o.base.size();
  report.ambient_con_size = o.ambient.size();
  o.fibers.assign(o.base.size(), {});
  std::vector<Partition> restricted;
  restricted.reserve(o.ambient.size());
  for (std::size_t i = 0; i < o.ambient.size(); ++i) {
    restricted.push_back(restrict(o.ambient[i], o.sub));
    auto idx = o.base.index_of(restricted.back());
    if (!idx) {
      report.epimorphism_ok = false;
      fail(report, restricted.back(), "restriction of " + o.ambient[i].to_string() + " is not a congruence of B");
      continue;
    }
    o.fibers[*idx].push_back(i);
  }
  for (std::size_t b = 0; b < o.base.size(); ++b) {
    if (o.fibers[b].empty()) {
      report.epimorphism_ok = false;
      fail(report, o.base[b], "no ambient congruence restricts to this one");
    }
  }
  for (std::size_t i = 0; i < o.ambient.size(); ++i) {
    for (std::size_t j = i + 1; j < o.ambient.size(); ++j) {
      const auto m = restrict(meet(o.ambient[i], o.ambient[j]), o.sub);
      const auto mm = meet(restricted[i], restricted[j]);
      if (m != mm) {
        report.epimorphism_ok = false;
        fail_mismatch(report, mm, "restriction does not preserve the meet of " + o.ambient[i].to_string() + " and " +
                                      o.ambient[j].to_string(), m, mm);
      }
      const auto jn = restrict(join(o.ambient[i], o.ambient[j]), o.sub);
      const auto jj = join(restricted[i], restricted[j]);
      if (jn != jj) {
        report.epimorphism_ok = false;
        fail_mismatch(report, jj, "restriction does not preserve the join of " + o.ambient[i].to_string() + " and " +
                                      o.ambient[j].to_string(), jn, jj);
      }
    }
  }
  std::size_t total = 0;
  for (const auto& f : o.fibers) total += f.size();
  if (total != o.ambient.size() && report.epimorphism_ok) {
    report.epimorphism_ok = false;
    fail(report, Partition(), "fiber sizes do not sum to |Con A|");
  }
  return o;
}

// Fills one report entry per base congruence with the oracle fiber and its
// extremes.
void collect_fibers(const Oracle& o, VerifyReport& report) {
  for (std::size_t b = 0; b < o.base.size(); ++b) {
    FiberReport fr;
    fr.beta = o.base[b];
    for (auto i : o.fibers[b]) fr.fiber.push_back(o.ambient[i]);
    if (!fr.fiber.empty()) {
      fr.star = fr.fiber.front();
      fr.hat = fr.fiber.back();
      for (const auto& a : fr.fiber) {
        if (!leq(fr.star, a)) {
          fail(report, fr.beta, "fiber has no least element");
          break;
        }
      }
      for (const auto& a : fr.fiber) {
        if (!leq(a, fr.hat)) {
          fail(report, fr.beta, "fiber has no greatest element");
          break;
        }
      }
    }
    report.fibers.push_back(std::move(fr));
  }
}

// The fiber must equal [star_of(beta), hat_of(beta)] in Con A.
void check_lemma(const Oracle& o, const UnaryAlgebra& amb, std::string_view e_sym, const Monoid1& monoid,
                 VerifyReport& report) {
  for (std::size_t b = 0; b < o.base.size(); ++b) {
    const auto& beta = o.base[b];
    const auto star = star_of(amb, o.sub, beta);
    const auto hat = hat_of(amb, o.sub, e_sym, beta, monoid);
    std::vector<std::size_t> between;
    for (std::size_t i = 0; i < o.ambient.size(); ++i) {
      if (leq(star, o.ambient[i]) && leq(o.ambient[i], hat)) between.push_back(i);
    }
    if (between != o.fibers[b]) {
      report.lemma_ok = false;
      fail(report, beta,
           "fiber (" + std::to_string(o.fibers[b].size()) + " elements) differs from [star, hat] (" +
               std::to_string(between.size()) + " elements)");
    }
    auto& fr = report.fibers[b];
    if (!fr.fiber.empty()) {
      if (star != fr.star) {
        report.lemma_ok = false;
        fail_mismatch(report, beta, "star differs from the least fiber element", star, fr.star);
      }
      if (hat != fr.hat) {
        report.lemma_ok = false;
        fail_mismatch(report, beta, "hat differs from the greatest fiber element", hat, fr.hat);
      }
    }
  }
}

// Every partition between the fiber's extremes must be an ambient congruence.
void check_eq_filter(const Oracle& o, const FiberReport& fr, VerifyReport& report) {
  if (fr.fiber.empty()) return;
  try {
    const auto all = enumerate_between(fr.star, fr.hat);
    for (const auto& p : all) {
      if (!o.ambient.contains(p)) {
        fail(report, fr.beta, "interval partition " + p.to_string() + " is not a congruence");
        return;
      }
    }
    if (all.size() != fr.fiber.size()) fail(report, fr.beta, "fiber is not the full interval of Eq(A)");
  } catch (const BoundError& e) {
    fail(report, fr.beta, std::string("interval enumeration: ") + e.what());
  }
}

void check_shape(FiberReport& fr, const IntervalShape& shape, std::size_t budget, VerifyReport& report) {
  fr.predicted = shape;
  fr.shape_match = false;
  if (shape.predicted_size() != fr.fiber.size()) {
    fail(report, fr.beta,
         "fiber has " + std::to_string(fr.fiber.size()) + " elements, predicted " + shape.to_string() + " has " +
             std::to_string(shape.predicted_size()));
    return;
  }
  try {
    const auto predicted = shape_lattice(shape, budget);
    const auto actual = FiniteLattice::of_partitions(fr.fiber);
    fr.shape_match = isomorphic(actual, predicted);
  } catch (const BoundError& e) {
    fail(report, fr.beta, std::string("shape lattice: ") + e.what());
    return;
  }
  if (!fr.shape_match) fail(report, fr.beta, "fiber is not isomorphic to " + shape.to_string());
}

Oracle oracle_for(const UnaryAlgebra& base, const OverResult& built, const VerifyOptions& options,
                  VerifyReport& report) {
  std::vector<Element> sub = built.embedding.sub0;
  auto oracle =
      build_oracle(con(base, options.lattice_budget), con(built.ambient, options.lattice_budget), sub, report);
  collect_fibers(oracle, report);
  if (options.residuation) {
    const auto monoid = monoid1(built.ambient);
    const auto induced = con(subreduct(built.ambient, sub, built.retraction, monoid), options.lattice_budget);
    if (induced.elements() != oracle.base.elements()) {
      report.lemma_ok = false;
      fail(report, Partition(), "the induced algebra on B has different congruences than the base");
    }
    check_lemma(oracle, built.ambient, built.retraction, monoid, report);
  }
  if (options.eq_filter) {
    for (const auto& fr : report.fibers) check_eq_filter(oracle, fr, report);
  }
  return oracle;
}

}  // namespace

VerifyReport check_residuation(const UnaryAlgebra& ambient, std::span<const Element> sub, std::string_view e_sym,
                               std::size_t lattice_budget) {
  VerifyReport report;
  report.theorem = "lemma";
  report.subject = ambient.name();
  checked_retraction(ambient, sub, e_sym);
  const auto monoid = monoid1(ambient);
  std::vector<Element> s(sub.begin(), sub.end());
  auto oracle = build_oracle(con(subreduct(ambient, sub, e_sym, monoid), lattice_budget), con(ambient, lattice_budget), s,
                             report);
  collect_fibers(oracle, report);
  check_lemma(oracle, ambient, e_sym, monoid, report);
  return report;
}

VerifyReport check_thm1(const OverISpec& raw, const VerifyOptions& options) {
  const auto spec = normalized(raw);
  VerifyReport report;
  report.theorem = "1";
  report.subject = spec.base.name() + " tiepoints=" + join_list(spec.tiepoints) + " blocks=" +
                   blocks_string(spec.blocks);
  const auto built = build_i(spec);
  const auto oracle = oracle_for(spec.base, built, options, report);
  for (auto& fr : report.fibers) {
    if (fr.fiber.empty()) continue;
    const auto star = formula_star_i(spec, built.embedding, fr.beta);
    const auto tilde = formula_tilde_i(spec, built.embedding, fr.beta);
    fr.exact_match = star == fr.star && tilde == fr.hat;
    if (star != fr.star) fail_mismatch(report, fr.beta, "formula star differs from the least fiber element", star, fr.star);
    if (tilde != fr.hat) {
      fail_mismatch(report, fr.beta, "formula tilde differs from the greatest fiber element", tilde, fr.hat);
    }
    check_shape(fr, predicted_shape_i(spec, fr.beta), options.lattice_budget, report);
  }
  return report;
}

VerifyReport check_thm2_thm3(const OverIISpec& raw, const VerifyOptions& options) {
  const auto spec = normalized(raw);
  VerifyReport report;
  report.theorem = "2+3";
  std::string pairs;
  for (const auto& [a, b] : spec.gen_pairs) pairs += (pairs.empty() ? "" : ",") + std::to_string(a) + ":" + std::to_string(b);
  report.subject = spec.base.name() + " pairs=" + pairs + " u=" + std::to_string(spec.u) + " blocks=" +
                   blocks_string(spec.blocks);
  const auto built = build_ii(spec);
  const auto oracle = oracle_for(spec.base, built, options, report);
  const auto beta = generated_congruence(spec);
  for (auto& fr : report.fibers) {
    if (fr.fiber.empty()) continue;
    const auto& theta = fr.beta;
    if (theta == beta) {
      const auto star = formula_star_ii(spec, beta);
      const auto tilde = formula_tilde_ii(spec, beta);
      fr.exact_match = star == fr.star && tilde == fr.hat;
      if (star != fr.star) fail_mismatch(report, theta, "formula star differs from the least fiber element", star, fr.star);
      if (tilde != fr.hat) {
        fail_mismatch(report, theta, "formula tilde differs from the greatest fiber element", tilde, fr.hat);
      }
    }
    const bool expect_nontrivial = leq(beta, theta) && !theta.is_top();
    const bool nontrivial = fr.fiber.size() > 1;
    const auto shape = predicted_shape_ii(spec, theta);
    // Nontriviality is only forced when some block has two or more copies.
    const bool forced = expect_nontrivial && !shape.trivial();
    if (nontrivial && !expect_nontrivial) fail(report, theta, "nontrivial fiber outside [beta, 1_B)");
    if (forced && !nontrivial) fail(report, theta, "trivial fiber although beta <= theta < 1_B");
    check_shape(fr, shape, options.lattice_budget, report);
  }
  return report;
}

namespace {

class Draw {
 public:
  Draw(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    rng_.seed(seq);
  }
  /// Uniform-ish integer in [lo, hi]; mt19937_64 output is fixed by the
  /// standard, so this is reproducible everywhere.
  std::size_t operator()(std::size_t lo, std::size_t hi) { return lo + rng_() % (hi - lo + 1); }

 private:
  std::mt19937_64 rng_;
};

UnaryAlgebra random_base(Draw& draw, const FuzzBounds& bounds, const std::string& name) {
  const auto n = draw(2, std::max<std::size_t>(2, bounds.max_base));
  const auto k = draw(1, std::max<std::size_t>(1, bounds.max_ops));
  std::vector<Operation> ops;
  for (std::size_t i = 0; i < k; ++i) {
    Table t(n);
    for (auto& v : t) v = static_cast<Element>(draw(0, n - 1));
    ops.push_back({"f" + std::to_string(i), std::move(t)});
  }
  return UnaryAlgebra(name, n, std::move(ops));
}

BlockList random_blocks(Draw& draw, std::span<const Element> items) {
  BlockList blocks;
  for (auto v : items) {
    const auto b = draw(0, blocks.size());
    if (b == blocks.size()) blocks.emplace_back();
    blocks[b].push_back(v);
  }
  return blocks;
}

std::optional<OverISpec> random_spec_i(Draw& draw, const FuzzBounds& bounds, const UnaryAlgebra& base) {
  const auto n = base.size();
  const auto kmax = std::min<std::size_t>(6, (bounds.max_ambient - n) / (n - 1));
  const auto k = draw(0, kmax);
  OverISpec spec{base, {}, {}};
  std::vector<Element> indices;
  for (std::size_t i = 1; i <= k; ++i) {
    spec.tiepoints.push_back(static_cast<Element>(draw(0, n - 1)));
    indices.push_back(static_cast<Element>(i));
  }
  spec.blocks = random_blocks(draw, indices);
  std::uint64_t total = 0;
  const auto cb = con(base);
  for (const auto& beta : cb.elements()) total += predicted_shape_i(spec, beta).predicted_size();
  if (total > bounds.max_predicted) return std::nullopt;
  return spec;
}

std::optional<OverIISpec> random_spec_ii(Draw& draw, const FuzzBounds& bounds, const UnaryAlgebra& base) {
  const auto n = base.size();
  OverIISpec spec{base, {}, 1, {}};
  const auto pairs = draw(1, 2);
  for (std::size_t i = 0; i < pairs; ++i) {
    const auto a = static_cast<Element>(draw(0, n - 1));
    auto b = static_cast<Element>(draw(0, n - 2));
    if (b >= a) ++b;
    spec.gen_pairs.emplace_back(a, b);
  }
  spec.u = draw(1, 2);
  if (n + spec.u * spec.k() * (n - 1) > bounds.max_ambient) return std::nullopt;
  std::vector<Element> multiples;
  for (std::size_t v = 0; v <= spec.u; ++v) multiples.push_back(static_cast<Element>(v * spec.k()));
  spec.blocks = random_blocks(draw, multiples);
  if (!clause_conflicts_ii(spec).empty()) return std::nullopt;
  std::uint64_t total = 0;
  const auto cb = con(base);
  for (const auto& theta : cb.elements()) total += predicted_shape_ii(spec, theta).predicted_size();
  if (total > bounds.max_predicted) return std::nullopt;
  return spec;
}

constexpr int kMaxAttempts = 1000;

VerifyReport fuzz_trial(std::uint64_t seed, std::size_t index, const FuzzBounds& bounds) {
  Draw draw(seed, index);
  const auto name = "fuzz-" + std::to_string(seed) + "-" + std::to_string(index);
  VerifyReport report;
  report.theorem = index % 2 == 0 ? "1" : "2+3";
  report.subject = name;
  try {
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      const auto base = random_base(draw, bounds, name);
      if (index % 2 == 0) {
        if (auto spec = random_spec_i(draw, bounds, base)) return check_thm1(*spec);
      } else {
        if (auto spec = random_spec_ii(draw, bounds, base)) return check_thm2_thm3(*spec);
      }
    }
    fail(report, Partition(), "no spec within bounds after " + std::to_string(kMaxAttempts) + " attempts");
  } catch (const std::exception& e) {
    fail(report, Partition(), e.what());
  }
  return report;
}

}  // namespace

std::vector<VerifyReport> fuzz(std::uint64_t seed, std::size_t trials, const FuzzBounds& bounds) {
  if (bounds.max_base < 2 || bounds.max_ambient < bounds.max_base) {
    throw InputError("fuzz bounds need max_base >= 2 and max_ambient >= max_base");
  }
  std::vector<VerifyReport> reports;
  reports.reserve(trials);
  for (std::size_t i = 0; i < trials; ++i) reports.push_back(fuzz_trial(seed, i, bounds));
  return reports;
}

}  // namespace conlat
