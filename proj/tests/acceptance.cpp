// Acceptance checks: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "conlat/algebra.hpp"
#include "conlat/io.hpp"
#include "conlat/lattice.hpp"
#include "conlat/overalgebra.hpp"
#include "conlat/partition.hpp"
#include "conlat/verify.hpp"

using namespace conlat;

namespace {

UnaryAlgebra s3set() { return from_permutations(6, {{1, 2, 0, 4, 5, 3}, {3, 5, 4, 0, 2, 1}}, "s3set"); }

const std::string kAlpha = "|0,1,2|3,4,5|";
const std::string kBeta = "|0,3|1,4|2,5|";
const std::string kGamma = "|0,4|1,5|2,3|";
const std::string kDelta = "|0,5|1,3|2,4|";

// Collects failed expectations for one criterion.
struct Ctx {
  std::vector<std::string> problems;
  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

std::set<std::string> nontrivial(const ConLattice& c) {
  std::set<std::string> out;
  for (std::size_t i = 1; i + 1 < c.size(); ++i) out.insert(c[i].to_string());
  return out;
}

std::vector<Partition> fiber_over(const ConLattice& ambient, std::span<const Element> sub, const std::string& beta) {
  std::vector<Partition> out;
  for (const auto& a : ambient.elements()) {
    if (restrict(a, sub).to_string() == beta) out.push_back(a);
  }
  return out;
}

FiniteLattice two() { return chain(2); }

FiniteLattice power(const FiniteLattice& l, std::size_t k) {
  const std::vector<FiniteLattice> parts(k, l);
  return product(parts);
}

// Compares the fiber over beta with an expected lattice built by hand.
void expect_fiber(Ctx& ctx, const std::string& tag, const ConLattice& ambient, std::span<const Element> sub,
                  const std::string& beta, const FiniteLattice& expected) {
  const auto fiber = fiber_over(ambient, sub, beta);
  const bool ok = fiber.size() == expected.size() && isomorphic(FiniteLattice::of_partitions(fiber), expected);
  ctx.expect(ok, tag + " fiber over " + beta + " has " + std::to_string(fiber.size()) + " elements, expected " +
                     std::to_string(expected.size()));
}

int failures = 0;

void run(int id, const std::string& title, double limit_seconds, const std::function<void(Ctx&)>& body) {
  Ctx ctx;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(ctx);
  } catch (const std::exception& e) {
    ctx.problems.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > limit_seconds) ctx.problems.push_back("took " + std::to_string(secs) + " s");
  const bool ok = ctx.problems.empty();
  failures += ok ? 0 : 1;
  std::ostringstream line;
  line.precision(3);
  line << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " [" << std::fixed << secs << " s]";
  std::cout << line.str() << "\n";
  for (const auto& p : ctx.problems) std::cout << "    " << p << "\n";
}

}  // namespace

int main() {
  run(1, "Con of the S3-set has the four listed nontrivial congruences", 1.0, [](Ctx& ctx) {
    const auto c = con(s3set());
    ctx.expect(c.size() == 6, "expected 6 congruences, got " + std::to_string(c.size()));
    ctx.expect(nontrivial(c) == std::set<std::string>{kAlpha, kBeta, kGamma, kDelta}, "nontrivial members differ");
  });

  run(2, "tie-points 0,2: operation table and 7 congruences", 5.0, [](Ctx& ctx) {
    const auto r = build_i({s3set(), {0, 2}, {}});
    const std::vector<std::pair<std::string, Table>> rows{
        {"e0", {0, 1, 2, 3, 4, 5, 1, 2, 3, 4, 5, 0, 1, 3, 4, 5}},
        {"e1", {0, 6, 7, 8, 9, 10, 6, 7, 8, 9, 10, 0, 6, 8, 9, 10}},
        {"e2", {11, 12, 2, 13, 14, 15, 12, 2, 13, 14, 15, 11, 12, 13, 14, 15}},
        {"s1", {0, 1, 2, 3, 4, 5, 0, 0, 0, 0, 0, 2, 2, 2, 2, 2}},
        {"g0e0", {1, 2, 0, 4, 5, 3, 2, 0, 4, 5, 3, 1, 2, 4, 5, 3}},
        {"g1e0", {3, 5, 4, 0, 2, 1, 5, 4, 0, 2, 1, 3, 5, 0, 2, 1}},
    };
    ctx.expect(r.ambient.ops().size() == rows.size(), "wrong number of operations");
    for (std::size_t i = 0; i < rows.size() && i < r.ambient.ops().size(); ++i) {
      ctx.expect(r.ambient.ops()[i].symbol == rows[i].first && r.ambient.ops()[i].table == rows[i].second,
                 "row " + rows[i].first + " differs");
    }
    const auto c = con(r.ambient);
    ctx.expect(c.size() == 7, "expected 7 congruences, got " + std::to_string(c.size()));
    // delta-star is pinned to the computed congruence; the variant that merges
    // 7,9 with 11,15 is checked to be incompatible with the operations.
    const std::set<std::string> expected{
        "|0,1,2,6,7,11,12|3,4,5|8,9,10,13,14,15|", "|0,1,2,6,7,11,12|3,4,5|8,9,10|13,14,15|",
        "|0,3,8|1,4|2,5,15|6,9|7,10|11,13|12,14|", "|0,4,9|1,5|2,3,13|6,10|7,8|11,14|12,15|",
        "|0,5,10|1,3|2,4,14|6,8|7,9|11,15|12,13|"};
    ctx.expect(nontrivial(c) == expected, "nontrivial members differ");
    ctx.expect(!respects(r.ambient, Partition::parse("|0,5,10|1,3|2,4,14|6,8|7,9,11,15|12,13|")),
               "merged delta-star variant is unexpectedly a congruence");
  });

  run(3, "tie-points 0,3: 9 congruences with the seven listed", 5.0, [](Ctx& ctx) {
    const auto c = con(build_i({s3set(), {0, 3}, {}}).ambient);
    ctx.expect(c.size() == 9, "expected 9 congruences, got " + std::to_string(c.size()));
    const std::set<std::string> expected{
        "|0,1,2,6,7|3,4,5,14,15|8,9,10|11,12,13|",        "|0,3,8,11|1,4|2,5|6,9,12,14|7,10,13,15|",
        "|0,3,8,11|1,4|2,5|6,9,12,14|7,10|13,15|",        "|0,3,8,11|1,4|2,5|6,9|7,10,13,15|12,14|",
        "|0,3,8,11|1,4|2,5|6,9|7,10|12,14|13,15|",        "|0,4,9|1,5|2,3,13|6,10|7,8|11,14|12,15|",
        "|0,5,10|1,3,12|2,4|6,8|7,9|11,15|13,14|"};
    ctx.expect(nontrivial(c) == expected, "nontrivial members differ");
  });

  run(4, "tie-point sweep: fiber shapes by lattice isomorphism", 30.0, [](Ctx& ctx) {
    const auto one = chain(1);
    const auto eq3 = eq_lattice(3);
    const auto sq = power(two(), 2);
    auto sweep = [&](std::vector<Element> t, const std::vector<std::pair<std::string, FiniteLattice>>& want) {
      const auto r = build_i({s3set(), t, {}});
      const auto c = con(r.ambient);
      std::string tag = "T=(";
      for (std::size_t i = 0; i < t.size(); ++i) tag += (i ? "," : "") + std::to_string(t[i]);
      tag += ")";
      for (const auto& [beta, lattice] : want) expect_fiber(ctx, tag, c, r.embedding.sub0, beta, lattice);
    };
    sweep({0, 1}, {{kAlpha, two()}, {kBeta, one}, {kGamma, one}, {kDelta, one}});
    sweep({0, 1, 2}, {{kAlpha, eq3}, {kBeta, one}, {kGamma, one}, {kDelta, one}});
    sweep({0, 2, 3}, {{kAlpha, two()}, {kBeta, sq}, {kGamma, sq}, {kDelta, one}});
    sweep({0, 1, 2, 3}, {{kAlpha, eq3}, {kBeta, sq}, {kGamma, sq}, {kDelta, sq}});
    sweep({0, 2, 3, 5}, {{kAlpha, sq}, {kBeta, power(sq, 2)}, {kGamma, sq}, {kDelta, sq}});
  });

  run(5, "closing examples: 130 and 261 element lattices", 300.0, [](Ctx& ctx) {
    const auto r9 = build_i({s3set(), {0, 1, 2, 0, 1, 2, 3, 4, 5}, {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}});
    const auto c9 = con(r9.ambient);
    ctx.expect(c9.size() == 130, "expected 130 congruences, got " + std::to_string(c9.size()));
    expect_fiber(ctx, "nine tie-points", c9, r9.embedding.sub0, kAlpha, power(eq_lattice(3), 3));
    const auto r8 = build_i({s3set(), {0, 3, 0, 3, 0, 3, 0, 3}, {{1, 2}, {3, 4}, {5, 6}, {7, 8}}});
    const auto c8 = con(r8.ambient);
    ctx.expect(c8.size() == 261, "expected 261 congruences, got " + std::to_string(c8.size()));
    expect_fiber(ctx, "eight tie-points", c8, r8.embedding.sub0, kBeta, power(power(two(), 2), 4));
  });

  run(6, "residuation lemma on every overalgebra of criteria 2-5", 300.0, [](Ctx& ctx) {
    const std::vector<OverISpec> specs{
        {s3set(), {0, 2}, {}},
        {s3set(), {0, 3}, {}},
        {s3set(), {0, 1}, {}},
        {s3set(), {0, 1, 2}, {}},
        {s3set(), {0, 2, 3}, {}},
        {s3set(), {0, 1, 2, 3}, {}},
        {s3set(), {0, 2, 3, 5}, {}},
        {s3set(), {0, 1, 2, 0, 1, 2, 3, 4, 5}, {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}},
        {s3set(), {0, 3, 0, 3, 0, 3, 0, 3}, {{1, 2}, {3, 4}, {5, 6}, {7, 8}}},
    };
    for (const auto& spec : specs) {
      const auto built = build_i(spec);
      const auto rep = check_residuation(built.ambient, built.embedding.sub0, built.retraction);
      std::string why;
      for (const auto& f : rep.failures) why += " " + f.beta + ": " + f.what + ";";
      ctx.expect(rep.pass() && rep.epimorphism_ok && rep.lemma_ok, rep.subject + " failed:" + why);
    }
  });

  run(7, "theorems 2 and 3 on the S3-set with pairs 0:3", 120.0, [](Ctx& ctx) {
    const std::vector<std::pair<std::size_t, BlockList>> cases{
        {1, {{0, 2}}}, {1, {{0}, {2}}}, {2, {{0, 2, 4}}}, {2, {{0}, {2}, {4}}}, {2, {{0, 2}, {4}}}, {2, {{0}, {2, 4}}},
    };
    for (const auto& [u, blocks] : cases) {
      const auto rep = check_thm2_thm3({s3set(), {{0, 3}}, u, blocks});
      std::string why;
      for (const auto& f : rep.failures) why += " " + f.beta + ": " + f.what + ";";
      ctx.expect(rep.pass(), rep.subject + " failed:" + why);
    }
    // u=1 with one block: a single 2x2 fiber at beta, all others trivial.
    const OverIISpec fig{s3set(), {{0, 3}}, 1, {{0, 2}}};
    const auto built = build_ii(fig);
    const auto c = con(built.ambient);
    const auto sq = power(two(), 2);
    for (const auto& beta : con(s3set()).elements()) {
      const auto s = beta.to_string();
      expect_fiber(ctx, "u=1 |0,2|", c, built.embedding.sub0, s, s == kBeta ? sq : chain(1));
    }
  });

  run(8, "200 seeded fuzz trials pass and repeat identically", 600.0, [](Ctx& ctx) {
    const auto a = fuzz(20240601, 200);
    const auto b = fuzz(20240601, 200);
    ctx.expect(a.size() == 200, "wrong report count");
    std::size_t bad = 0, nontrivial_trials = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i].pass()) {
        ++bad;
        std::string why;
        for (const auto& f : a[i].failures) why += " " + f.beta + ": " + f.what + ";";
        ctx.expect(false, a[i].subject + " failed:" + why);
      }
      nontrivial_trials += a[i].ambient_con_size > a[i].base_con_size;
      ctx.expect(report_to_json(a[i]) == report_to_json(b[i]), "trial " + std::to_string(i) + " not reproducible");
    }
    ctx.expect(nontrivial_trials > 0, "no trial produced a nontrivial fiber");
    std::cout << "    " << 200 - bad << "/200 passed, " << nontrivial_trials << " with nontrivial fibers\n";
  });

  run(9, "partition kernel: Eq(4) axioms and Bell numbers", 10.0, [](Ctx& ctx) {
    const auto eq4 = enumerate_eq(4);
    ctx.expect(eq4.size() == 15, "Eq(4) should have 15 elements");
    for (const auto& p : eq4) {
      for (const auto& q : eq4) {
        const auto m = meet(p, q);
        const auto j = join(p, q);
        ctx.expect(m == meet(q, p) && j == join(q, p), "commutativity");
        ctx.expect(meet(p, j) == p && join(p, m) == p, "absorption");
        ctx.expect(leq(m, p) && leq(m, q) && leq(p, j) && leq(q, j), "bounds");
        ctx.expect(leq(p, q) == (m == p) && leq(p, q) == (j == q), "order agrees with meet and join");
        for (const auto& r : eq4) {
          ctx.expect(meet(m, r) == meet(p, meet(q, r)) && join(j, r) == join(p, join(q, r)), "associativity");
          // Greatest lower bound and least upper bound.
          if (leq(r, p) && leq(r, q)) ctx.expect(leq(r, m), "meet is not greatest");
          if (leq(p, r) && leq(q, r)) ctx.expect(leq(j, r), "join is not least");
        }
      }
    }
    const std::vector<std::size_t> bell{1, 1, 2, 5, 15, 52, 203};
    for (std::size_t n = 0; n < bell.size(); ++n) {
      ctx.expect(enumerate_eq(n).size() == bell[n], "enumerate_eq(" + std::to_string(n) + ") size");
      ctx.expect(bell_number(n) == bell[n], "bell_number(" + std::to_string(n) + ")");
    }
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
