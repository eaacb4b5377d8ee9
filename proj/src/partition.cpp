#include "conlat/partition.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <unordered_map>

#include "conlat/error.hpp"
#include "conlat/union_find.hpp"

namespace conlat {

namespace {

void require_same_size(const Partition& p, const Partition& q, const char* op) {
  if (p.size() != q.size()) {
    throw InputError(std::string(op) + ": partitions on sets of different size (" +
                     std::to_string(p.size()) + " vs " + std::to_string(q.size()) + ")");
  }
}

// labels[x] < labels.size() for all x.
std::vector<Element> normalize_small(std::span<const std::uint32_t> labels) {
  const auto n = labels.size();
  std::vector<Element> first(n, std::numeric_limits<Element>::max());
  std::vector<Element> kernel(n);
  for (Element x = 0; x < n; ++x) {
    auto& f = first[labels[x]];
    if (f == std::numeric_limits<Element>::max()) f = x;
    kernel[x] = f;
  }
  return kernel;
}

// Visits every restricted growth string of length n; the callback receives
// the string as a span.
template <typename Visit>
void for_each_rgs(std::size_t n, Visit&& visit) {
  if (n == 0) {
    visit(std::span<const std::uint32_t>{});
    return;
  }
  std::vector<std::uint32_t> a(n, 0);
  // prefix_max[i] = max(a[0..i-1]), prefix_max[0] unused.
  std::vector<std::uint32_t> prefix_max(n, 0);
  while (true) {
    visit(std::span<const std::uint32_t>(a));
    // Find rightmost position that can be incremented.
    std::size_t i = n - 1;
    while (i > 0 && a[i] > prefix_max[i]) --i;
    if (i == 0) return;
    ++a[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      prefix_max[j] = std::max(prefix_max[j - 1], a[j - 1]);
      a[j] = 0;
    }
  }
}

}  // namespace

Partition::Partition(std::size_t n) : kernel_(n) {
  for (Element x = 0; x < n; ++x) kernel_[x] = x;
}

Partition Partition::top(std::size_t n) { return Partition(std::vector<Element>(n, 0)); }

Partition Partition::from_labels(std::span<const std::uint32_t> labels) {
  const bool small = std::all_of(labels.begin(), labels.end(),
                                 [&](std::uint32_t l) { return l < labels.size(); });
  if (small) return Partition(normalize_small(labels));
  std::unordered_map<std::uint32_t, Element> first;
  std::vector<Element> kernel(labels.size());
  for (Element x = 0; x < labels.size(); ++x) {
    kernel[x] = first.try_emplace(labels[x], x).first->second;
  }
  return Partition(std::move(kernel));
}

Partition Partition::from_pairs(std::size_t n, std::span<const ElementPair> pairs) {
  UnionFind uf(n);
  for (const auto& [x, y] : pairs) {
    if (x >= n || y >= n) {
      throw InputError("pair (" + std::to_string(x) + "," + std::to_string(y) +
                       ") out of range for a set of size " + std::to_string(n));
    }
    uf.unite(x, y);
  }
  return Partition(normalize_small(uf.labels()));
}

Partition Partition::from_blocks(std::size_t n, const BlockList& blocks) {
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> labels(n, kUnset);
  for (std::uint32_t b = 0; b < blocks.size(); ++b) {
    for (Element x : blocks[b]) {
      if (x >= n) throw InputError("block element " + std::to_string(x) + " out of range");
      if (labels[x] != kUnset) {
        throw InputError("element " + std::to_string(x) + " appears in more than one block");
      }
      labels[x] = b;
    }
  }
  for (Element x = 0; x < n; ++x) {
    if (labels[x] == kUnset) throw InputError("element " + std::to_string(x) + " not covered by any block");
  }
  return from_labels(labels);
}

Partition Partition::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty() || text.front() != '|' || text.back() != '|') {
    throw InputError("bar notation must start and end with '|': \"" + std::string(text) + "\"");
  }
  if (text == "|" || text == "||") return Partition();
  text = text.substr(1, text.size() - 2);
  BlockList blocks;
  Element max_element = 0;
  std::size_t count = 0;
  while (true) {
    auto bar = text.find('|');
    auto piece = trim(text.substr(0, bar));
    Block block;
    while (true) {
      auto comma = piece.find(',');
      auto tok = trim(piece.substr(0, comma));
      Element v{};
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw InputError("bad element \"" + std::string(tok) + "\" in bar notation");
      }
      block.push_back(v);
      max_element = std::max(max_element, v);
      ++count;
      if (comma == std::string_view::npos) break;
      piece.remove_prefix(comma + 1);
    }
    blocks.push_back(std::move(block));
    if (bar == std::string_view::npos) break;
    text.remove_prefix(bar + 1);
  }
  const std::size_t n = std::size_t{max_element} + 1;
  if (count != n) throw InputError("bar notation does not list each of 0.." + std::to_string(max_element) + " exactly once");
  return from_blocks(n, blocks);
}

std::size_t Partition::block_count() const {
  std::size_t c = 0;
  for (Element x = 0; x < kernel_.size(); ++x) c += kernel_[x] == x;
  return c;
}

BlockList Partition::blocks() const {
  BlockList out;
  std::vector<std::size_t> slot(kernel_.size());
  for (Element x = 0; x < kernel_.size(); ++x) {
    if (kernel_[x] == x) {
      slot[x] = out.size();
      out.emplace_back();
    }
    out[slot[kernel_[x]]].push_back(x);
  }
  return out;
}

std::vector<ElementPair> Partition::spanning_pairs() const {
  std::vector<ElementPair> out;
  for (Element x = 0; x < kernel_.size(); ++x) {
    if (kernel_[x] != x) out.emplace_back(kernel_[x], x);
  }
  return out;
}

std::string Partition::to_string() const {
  std::string s = "|";
  for (const auto& block : blocks()) {
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(block[i]);
    }
    s += '|';
  }
  return s;
}

std::size_t PartitionHash::operator()(const Partition& p) const noexcept {
  // FNV-1a over the kernel.
  std::size_t h = 1469598103934665603ull;
  for (Element k : p.kernel()) {
    h ^= k;
    h *= 1099511628211ull;
  }
  return h ^ p.size();
}

Partition meet(const Partition& p, const Partition& q) {
  require_same_size(p, q, "meet");
  const auto n = p.size();
  // The pair (kp, kq) identifies the intersection block; both are < n.
  std::unordered_map<std::uint64_t, Element> first;
  first.reserve(n);
  std::vector<std::uint32_t> labels(n);
  for (Element x = 0; x < n; ++x) {
    const std::uint64_t key = std::uint64_t{p.rep(x)} * n + q.rep(x);
    labels[x] = first.try_emplace(key, x).first->second;
  }
  return Partition::from_labels(labels);
}

Partition join(const Partition& p, const Partition& q) {
  require_same_size(p, q, "join");
  UnionFind uf(p.size());
  for (Element x = 0; x < p.size(); ++x) {
    uf.unite(x, p.rep(x));
    uf.unite(x, q.rep(x));
  }
  return Partition::from_labels(uf.labels());
}

bool leq(const Partition& p, const Partition& q) {
  require_same_size(p, q, "leq");
  for (Element x = 0; x < p.size(); ++x) {
    if (q.rep(x) != q.rep(p.rep(x))) return false;
  }
  return true;
}

Partition restrict(const Partition& p, std::span<const Element> subset) {
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] >= p.size()) throw InputError("restrict: element " + std::to_string(subset[i]) + " out of range");
    if (i > 0 && subset[i] <= subset[i - 1]) throw InputError("restrict: subset must be strictly increasing");
  }
  std::vector<std::uint32_t> labels(subset.size());
  for (std::size_t i = 0; i < subset.size(); ++i) labels[i] = p.rep(subset[i]);
  return Partition::from_labels(labels);
}

std::vector<Partition> enumerate_eq(std::size_t n, std::size_t bound) {
  if (n > bound) {
    throw BoundError("enumerate_eq: n = " + std::to_string(n) + " exceeds bound " + std::to_string(bound));
  }
  std::vector<Partition> out;
  out.reserve(static_cast<std::size_t>(bell_number(n)));
  for_each_rgs(n, [&](std::span<const std::uint32_t> rgs) { out.push_back(Partition::from_labels(rgs)); });
  return out;
}

std::vector<Partition> enumerate_between(const Partition& lo, const Partition& hi) {
  require_same_size(lo, hi, "enumerate_between");
  if (!leq(lo, hi)) throw InputError("enumerate_between: lower bound is not below upper bound");
  // For each hi-block, the lo-block representatives inside it.
  std::vector<std::vector<Element>> groups;
  std::vector<std::size_t> group_of(hi.size());
  for (Element x = 0; x < hi.size(); ++x) {
    if (hi.rep(x) == x) {
      group_of[x] = groups.size();
      groups.emplace_back();
    }
    if (lo.rep(x) == x) groups[group_of[hi.rep(x)]].push_back(x);
  }
  std::vector<std::vector<std::vector<std::uint32_t>>> choices;
  std::uint64_t total = 1;
  for (const auto& g : groups) {
    std::vector<std::vector<std::uint32_t>> rgss;
    for_each_rgs(g.size(), [&](std::span<const std::uint32_t> r) { rgss.emplace_back(r.begin(), r.end()); });
    total *= rgss.size();
    if (total > 10'000'000) throw BoundError("enumerate_between: interval too large to enumerate");
    choices.push_back(std::move(rgss));
  }
  std::vector<Partition> out;
  out.reserve(total);
  std::vector<std::size_t> idx(groups.size(), 0);
  const auto n = lo.size();
  while (true) {
    // Label each lo-representative by (group, rgs value) and spread over lo-blocks.
    std::vector<std::uint32_t> rep_label(n, 0);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto& r = choices[g][idx[g]];
      for (std::size_t k = 0; k < groups[g].size(); ++k) {
        rep_label[groups[g][k]] = groups[g][r[k]];
      }
    }
    std::vector<std::uint32_t> labels(n);
    for (Element x = 0; x < n; ++x) labels[x] = rep_label[lo.rep(x)];
    out.push_back(Partition::from_labels(labels));
    std::size_t g = 0;
    while (g < groups.size() && ++idx[g] == choices[g].size()) idx[g++] = 0;
    if (g == groups.size()) break;
  }
  return out;
}

std::uint64_t bell_number(std::size_t n) {
  // Bell triangle with saturating addition.
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  auto add = [](std::uint64_t a, std::uint64_t b) { return a > kMax - b ? kMax : a + b; };
  std::vector<std::uint64_t> row{1};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto v : row) next.push_back(add(next.back(), v));
    row = std::move(next);
  }
  return row.front();
}

}  // namespace conlat
