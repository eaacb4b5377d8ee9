#include "doctest.h"

#include <set>
#include <unordered_set>

#include "conlat/error.hpp"
#include "conlat/partition.hpp"

using namespace conlat;

namespace {

using Relation = std::set<std::pair<Element, Element>>;

Relation relation_of(const Partition& p) {
  Relation r;
  for (Element x = 0; x < p.size(); ++x) {
    for (Element y = 0; y < p.size(); ++y) {
      if (p.related(x, y)) r.emplace(x, y);
    }
  }
  return r;
}

// Transitive closure by repeated composition, independent of union-find.
Relation closure(Relation r, std::size_t n) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (Element a = 0; a < n; ++a) {
      for (Element b = 0; b < n; ++b) {
        if (!r.contains({a, b})) continue;
        for (Element c = 0; c < n; ++c) {
          if (r.contains({b, c}) && r.emplace(a, c).second) changed = true;
        }
      }
    }
  }
  return r;
}

}  // namespace

TEST_CASE("bar notation round trip and canonical form") {
  const auto p = Partition::parse("|3,4,5|0,1,2|");
  CHECK(p.to_string() == "|0,1,2|3,4,5|");
  CHECK(p.size() == 6);
  CHECK(p.block_count() == 2);
  CHECK(p.rep(4) == 3);
  CHECK(p.related(0, 2));
  CHECK_FALSE(p.related(2, 3));
  CHECK(Partition::parse("|0|").to_string() == "|0|");
  CHECK(Partition::parse("|").size() == 0);
  CHECK(Partition(3).to_string() == "|0|1|2|");
  CHECK(Partition::top(3).to_string() == "|0,1,2|");
}

TEST_CASE("constructors agree") {
  const std::vector<std::uint32_t> labels{7, 7, 2, 9, 2};
  const auto a = Partition::from_labels(labels);
  const std::vector<ElementPair> pairs{{0, 1}, {2, 4}};
  const auto b = Partition::from_pairs(5, pairs);
  const auto c = Partition::from_blocks(5, {{1, 0}, {4, 2}, {3}});
  CHECK(a == b);
  CHECK(b == c);
  CHECK(a.to_string() == "|0,1|2,4|3|");
  const std::vector<Element> kernel{0, 0, 2, 3, 2};
  CHECK(std::vector<Element>(a.kernel().begin(), a.kernel().end()) == kernel);
}

TEST_CASE("malformed input is rejected") {
  CHECK_THROWS_AS(Partition::parse("0,1|2"), InputError);
  CHECK_THROWS_AS(Partition::parse("|0,1|1,2|"), InputError);
  CHECK_THROWS_AS(Partition::parse("|0,2|"), InputError);
  CHECK_THROWS_AS(Partition::parse("|0,x|1|"), InputError);
  CHECK_THROWS_AS(Partition::from_blocks(3, {{0, 1}}), InputError);
  CHECK_THROWS_AS(meet(Partition(2), Partition(3)), InputError);
  CHECK_THROWS_AS(join(Partition(2), Partition(3)), InputError);
  CHECK_THROWS_AS(leq(Partition(2), Partition(3)), InputError);
}

TEST_CASE("Bell numbers and enumeration sizes") {
  const std::vector<std::uint64_t> bell{1, 1, 2, 5, 15, 52, 203, 877, 4140};
  for (std::size_t n = 0; n < bell.size(); ++n) {
    CHECK(bell_number(n) == bell[n]);
    if (n <= 8) CHECK(enumerate_eq(n).size() == bell[n]);
  }
  CHECK(bell_number(1000) == UINT64_MAX);
  CHECK_THROWS_AS(enumerate_eq(9), BoundError);
}

TEST_CASE("enumerate_eq lists distinct partitions") {
  const auto all = enumerate_eq(5);
  std::unordered_set<Partition> seen(all.begin(), all.end());
  CHECK(seen.size() == all.size());
  CHECK(all.front() == Partition::top(5));
  CHECK(all.back() == Partition(5));
}

TEST_CASE("Eq(4) lattice axioms against the relation oracle") {
  const auto all = enumerate_eq(4);
  REQUIRE(all.size() == 15);
  for (const auto& p : all) {
    const auto rp = relation_of(p);
    CHECK(meet(p, p) == p);
    CHECK(join(p, p) == p);
    for (const auto& q : all) {
      const auto rq = relation_of(q);
      Relation inter, uni = rp;
      for (const auto& e : rp) {
        if (rq.contains(e)) inter.insert(e);
      }
      uni.insert(rq.begin(), rq.end());
      CHECK(relation_of(meet(p, q)) == inter);
      CHECK(relation_of(join(p, q)) == closure(uni, 4));
      CHECK(meet(p, q) == meet(q, p));
      CHECK(join(p, q) == join(q, p));
      CHECK(meet(p, join(p, q)) == p);
      CHECK(join(p, meet(p, q)) == p);
      const bool sub = std::includes(rq.begin(), rq.end(), rp.begin(), rp.end());
      CHECK(leq(p, q) == sub);
      CHECK(leq(p, q) == (meet(p, q) == p));
      for (const auto& r : all) {
        CHECK(meet(meet(p, q), r) == meet(p, meet(q, r)));
        CHECK(join(join(p, q), r) == join(p, join(q, r)));
      }
    }
  }
}

TEST_CASE("restrict re-indexes by position") {
  const auto p = Partition::parse("|0,3,8|1,4|2,5,15|6,9|7,10|11,13|12,14|");
  const std::vector<Element> sub{0, 1, 2, 3, 4, 5};
  CHECK(restrict(p, sub).to_string() == "|0,3|1,4|2,5|");
  const std::vector<Element> odd{1, 3, 9, 6};
  CHECK_THROWS_AS(restrict(p, odd), InputError);
}

TEST_CASE("enumerate_between matches a filtered enumeration") {
  const auto all = enumerate_eq(6);
  const std::vector<std::pair<std::string, std::string>> cases{
      {"|0|1|2|3|4|5|", "|0,1,2,3,4,5|"},
      {"|0,1|2|3|4|5|", "|0,1,2|3,4,5|"},
      {"|0,3|1,4|2,5|", "|0,3|1,4|2,5|"},
      {"|0|1|2|3|4|5|", "|0,1,2|3,4|5|"},
  };
  for (const auto& [lo_s, hi_s] : cases) {
    const auto lo = Partition::parse(lo_s);
    const auto hi = Partition::parse(hi_s);
    std::set<Partition> expected;
    for (const auto& p : all) {
      if (leq(lo, p) && leq(p, hi)) expected.insert(p);
    }
    const auto got = enumerate_between(lo, hi);
    CHECK(std::set<Partition>(got.begin(), got.end()) == expected);
    CHECK(got.size() == expected.size());
  }
  CHECK_THROWS_AS(enumerate_between(Partition::top(3), Partition(3)), InputError);
}

TEST_CASE("hash is consistent with equality") {
  const auto a = Partition::parse("|0,2|1|");
  const auto b = Partition::from_blocks(3, {{2, 0}, {1}});
  CHECK(std::hash<Partition>{}(a) == std::hash<Partition>{}(b));
}
