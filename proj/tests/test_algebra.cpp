#include "doctest.h"

#include <random>
#include <set>

#include "conlat/algebra.hpp"
#include "conlat/error.hpp"
#include "conlat/overalgebra.hpp"

using namespace conlat;

namespace {

UnaryAlgebra s3set() { return from_permutations(6, {{1, 2, 0, 4, 5, 3}, {3, 5, 4, 0, 2, 1}}, "s3set"); }

std::vector<std::string> strings(const ConLattice& c) {
  std::vector<std::string> out;
  for (const auto& p : c.elements()) out.push_back(p.to_string());
  return out;
}

UnaryAlgebra random_algebra(std::mt19937& rng, std::size_t n, std::size_t ops) {
  std::vector<Operation> out;
  for (std::size_t k = 0; k < ops; ++k) {
    Table t(n);
    for (auto& v : t) v = static_cast<Element>(rng() % n);
    out.push_back({"f" + std::to_string(k), t});
  }
  return UnaryAlgebra("random", n, out);
}

}  // namespace

TEST_CASE("congruences of the S3-set") {
  const auto c = con(s3set());
  CHECK(strings(c) == std::vector<std::string>{"|0|1|2|3|4|5|", "|0,3|1,4|2,5|", "|0,4|1,5|2,3|", "|0,5|1,3|2,4|",
                                               "|0,1,2|3,4,5|", "|0,1,2,3,4,5|"});
  CHECK(c.index_of(Partition::parse("|0,4|1,5|2,3|")) == 2u);
  CHECK_FALSE(c.contains(Partition::parse("|0,1|2|3|4|5|")));
  const auto& l = c.lattice();
  CHECK(l.bottom() == 0);
  CHECK(l.top() == 5);
  CHECK(l.upper_covers()[0].size() == 4);
}

TEST_CASE("principal congruences") {
  const auto a = s3set();
  const std::vector<ElementPair> p03{{0, 3}};
  const std::vector<ElementPair> p01{{0, 1}};
  CHECK(cg(a, p03).to_string() == "|0,3|1,4|2,5|");
  CHECK(cg(a, p01).to_string() == "|0,1,2|3,4,5|");
  CHECK(cg(a, Partition(6)).is_discrete());
  const std::vector<ElementPair> bad{{0, 6}};
  CHECK_THROWS_AS(cg(a, bad), InputError);
}

TEST_CASE("con agrees with filtering Eq(n) on random algebras") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const auto n = 1 + rng() % 6;
    const auto a = random_algebra(rng, n, 1 + rng() % 3);
    std::set<Partition> expected;
    for (const auto& p : enumerate_eq(n)) {
      if (respects(a, p)) expected.insert(p);
    }
    const auto c = con(a);
    CHECK(std::set<Partition>(c.elements().begin(), c.elements().end()) == expected);
    CHECK(c.size() == expected.size());
    for (const auto& p : c.elements()) CHECK(cg(a, p) == p);
  }
}

TEST_CASE("con respects its size budget") { CHECK_THROWS_AS(con(UnaryAlgebra("free", 6, {}), 100), BoundError); }

TEST_CASE("algebra validation") {
  CHECK_THROWS_AS(UnaryAlgebra("x", 2, {{"f", {0}}}), InputError);
  CHECK_THROWS_AS(UnaryAlgebra("x", 2, {{"f", {0, 2}}}), InputError);
  CHECK_THROWS_AS(UnaryAlgebra("x", 2, {{"f", {0, 1}}, {"f", {1, 0}}}), InputError);
  CHECK_THROWS_AS(from_permutations(2, {{0, 0}}), InputError);
  CHECK_THROWS_AS(from_permutations(3, {{0, 1}}), InputError);
  const auto one = from_permutations(1, {{0}});
  CHECK(one.ops().front().symbol == "g0");
  CHECK(con(one).size() == 1);
  CHECK(s3set().find("g1") != nullptr);
  CHECK(s3set().find("h") == nullptr);
}

TEST_CASE("monoid of the S3-set is the group of order 6") {
  const auto m = monoid1(s3set());
  CHECK(m.size() == 6);
  CHECK(m.maps().front() == Table{0, 1, 2, 3, 4, 5});
  CHECK(m.contains(Table{1, 2, 0, 4, 5, 3}));
  CHECK_THROWS_AS(monoid1(s3set(), 3), BoundError);
}

TEST_CASE("star and hat collapse when the retraction is the identity") {
  auto ops = s3set().ops();
  ops.push_back({"id", {0, 1, 2, 3, 4, 5}});
  const UnaryAlgebra a("s3id", 6, ops);
  const std::vector<Element> all{0, 1, 2, 3, 4, 5};
  for (const auto& beta : con(a).elements()) {
    CHECK(star_of(a, all, beta) == beta);
    CHECK(hat_of(a, all, "id", beta) == beta);
  }
}

TEST_CASE("star and hat on the tie-point overalgebra") {
  const auto r = build_i({s3set(), {0, 2}, {}});
  const auto& amb = r.ambient;
  const auto& sub = r.embedding.sub0;
  const auto alpha = Partition::parse("|0,1,2|3,4,5|");
  CHECK(star_of(amb, sub, alpha).to_string() == "|0,1,2,6,7,11,12|3,4,5|8,9,10|13,14,15|");
  CHECK(hat_of(amb, sub, "e0", alpha).to_string() == "|0,1,2,6,7,11,12|3,4,5|8,9,10,13,14,15|");
  const auto beta = Partition::parse("|0,3|1,4|2,5|");
  CHECK(star_of(amb, sub, beta).to_string() == "|0,3,8|1,4|2,5,15|6,9|7,10|11,13|12,14|");
  CHECK(hat_of(amb, sub, "e0", beta) == star_of(amb, sub, beta));

  const auto induced = subreduct(amb, sub, "e0");
  CHECK(induced.size() == 6);
  CHECK(con(induced).elements() == con(s3set()).elements());
}

TEST_CASE("star and hat are monotone and bracket each other") {
  const auto r = build_i({s3set(), {0, 3, 2, 5}, {{1, 2}, {3, 4}}});
  const auto& sub = r.embedding.sub0;
  const auto monoid = monoid1(r.ambient);
  const auto base = con(s3set());
  for (const auto& b : base.elements()) {
    const auto sb = star_of(r.ambient, sub, b);
    const auto hb = hat_of(r.ambient, sub, "e0", b, monoid);
    CHECK(leq(sb, hb));
    CHECK(restrict(sb, sub) == b);
    CHECK(restrict(hb, sub) == b);
    for (const auto& c : base.elements()) {
      if (!leq(b, c)) continue;
      CHECK(leq(sb, star_of(r.ambient, sub, c)));
      CHECK(leq(hb, hat_of(r.ambient, sub, "e0", c, monoid)));
    }
  }
}

TEST_CASE("retraction checks") {
  const auto r = build_i({s3set(), {0, 2}, {}});
  const std::vector<Element> sub{0, 1, 2, 3, 4, 5};
  CHECK_NOTHROW(checked_retraction(r.ambient, sub, "e0"));
  CHECK_THROWS_AS(checked_retraction(r.ambient, sub, "e1"), InputError);
  CHECK_THROWS_AS(checked_retraction(r.ambient, sub, "g0e0"), InputError);
  CHECK_THROWS_AS(checked_retraction(r.ambient, sub, "nope"), InputError);
  const std::vector<Element> unsorted{1, 0};
  CHECK_THROWS_AS(star_of(r.ambient, unsorted, Partition(2)), InputError);
}
