#include "conlat/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "conlat/error.hpp"

namespace conlat {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Element parse_element(std::string_view text) {
  text = trim(text);
  Element v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError("expected a non-negative integer, got \"" + std::string(text) + "\"");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T get_field(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw InputError(std::string("field \"") + key + "\": " + e.what());
  }
}

UnaryAlgebra base_from(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.contains("base")) throw InputError("spec is missing \"base\"");
  const auto& b = j.at("base");
  if (b.is_string()) {
    std::filesystem::path p = b.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return read_algebra(p);
  }
  return algebra_from_json(b);
}

BlockList blocks_from(const Json& j) {
  if (!j.contains("blocks")) return {};
  return get_field<BlockList>(j, "blocks");
}

}  // namespace

Json algebra_to_json(const UnaryAlgebra& a) {
  Json ops = Json::array();
  for (const auto& op : a.ops()) ops.push_back({{"symbol", op.symbol}, {"table", op.table}});
  return {{"name", a.name()}, {"size", a.size()}, {"operations", ops}};
}

UnaryAlgebra algebra_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("algebra must be a JSON object");
  if (j.contains("size") && !j.at("size").is_number_unsigned()) throw InputError("\"size\" must be a non-negative integer");
  const auto size = get_field<std::size_t>(j, "size");
  std::vector<Operation> ops;
  if (j.contains("operations")) {
    const auto& arr = j.at("operations");
    if (!arr.is_array()) throw InputError("\"operations\" must be an array");
    for (const auto& op : arr) {
      if (!op.is_object()) throw InputError("each operation must be an object");
      ops.push_back({get_field<std::string>(op, "symbol"), get_field<Table>(op, "table")});
    }
  }
  const auto name = j.contains("name") ? get_field<std::string>(j, "name") : std::string();
  return UnaryAlgebra(name, size, std::move(ops));
}

Json partition_to_json(const Partition& p) { return p.blocks(); }

Partition partition_from_json(const Json& j, std::size_t n) {
  try {
    return Partition::from_blocks(n, j.get<BlockList>());
  } catch (const Json::exception& e) {
    throw InputError(std::string("partition: ") + e.what());
  }
}

Json embedding_to_json(const OverResult& result) {
  const auto& em = result.embedding;
  return {{"construction", em.construction},
          {"ambient_size", result.ambient.size()},
          {"copies", em.copies},
          {"sub0", em.sub0},
          {"tie_elements", em.tie_elements},
          {"retraction", result.retraction}};
}

Json report_to_json(const VerifyReport& report) {
  Json fibers = Json::array();
  for (const auto& f : report.fibers) {
    Json entry = {{"beta", f.beta.to_string()},
                  {"star", f.star.to_string()},
                  {"hat", f.hat.to_string()},
                  {"fiber_size", f.fiber.size()},
                  {"shape_match", f.shape_match},
                  {"exact_match", f.exact_match}};
    if (f.predicted) {
      entry["predicted"] = f.predicted->to_string();
      entry["predicted_size"] = f.predicted->predicted_size();
    } else {
      entry["predicted"] = nullptr;
      entry["predicted_size"] = nullptr;
    }
    fibers.push_back(std::move(entry));
  }
  Json failures = Json::array();
  for (const auto& f : report.failures) {
    Json entry = {{"beta", f.beta}, {"what", f.what}};
    entry["pair"] = f.pair ? Json::array({f.pair->first, f.pair->second}) : Json(nullptr);
    failures.push_back(std::move(entry));
  }
  return {{"theorem", report.theorem},
          {"subject", report.subject},
          {"pass", report.pass()},
          {"base_con_size", report.base_con_size},
          {"ambient_con_size", report.ambient_con_size},
          {"epimorphism_ok", report.epimorphism_ok},
          {"lemma_ok", report.lemma_ok},
          {"fibers", std::move(fibers)},
          {"failures", std::move(failures)}};
}

Json con_to_json(const ConLattice& lattice) {
  Json elements = Json::array();
  for (const auto& p : lattice.elements()) elements.push_back(p.to_string());
  Json cover_pairs = Json::array();
  for (const auto& [i, j] : covers(lattice.lattice())) cover_pairs.push_back({i, j});
  return {{"algebra", lattice.algebra().name()},
          {"size", lattice.size()},
          {"congruences", std::move(elements)},
          {"covers", std::move(cover_pairs)}};
}

OverISpec spec_i_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw InputError("spec must be a JSON object");
  return {base_from(j, base_dir), get_field<std::vector<Element>>(j, "tiepoints"), blocks_from(j)};
}

OverIISpec spec_ii_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw InputError("spec must be a JSON object");
  OverIISpec spec{base_from(j, base_dir), {}, 1, blocks_from(j)};
  for (const auto& pr : get_field<std::vector<std::vector<Element>>>(j, "pairs")) {
    if (pr.size() != 2) throw InputError("each pair must have two elements");
    spec.gen_pairs.emplace_back(pr[0], pr[1]);
  }
  if (j.contains("u")) {
    const auto u = get_field<long long>(j, "u");
    if (u < 1) throw InputError("u must be at least 1");
    spec.u = static_cast<std::size_t>(u);
  }
  return spec;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

UnaryAlgebra read_algebra(const std::filesystem::path& path) {
  const auto j = read_json(path);
  try {
    return algebra_from_json(j);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

std::vector<Element> parse_list(std::string_view text) {
  std::vector<Element> out;
  if (trim(text).empty()) return out;
  for (auto part : split(text, ',')) out.push_back(parse_element(part));
  return out;
}

std::vector<ElementPair> parse_pairs(std::string_view text) {
  std::vector<ElementPair> out;
  if (trim(text).empty()) return out;
  for (auto part : split(text, ',')) {
    const auto fields = split(part, ':');
    if (fields.size() != 2) throw InputError("expected a pair a:b, got \"" + std::string(trim(part)) + "\"");
    out.emplace_back(parse_element(fields[0]), parse_element(fields[1]));
  }
  return out;
}

BlockList parse_blockspec(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '|') text.remove_prefix(1);
  if (!text.empty() && text.back() == '|') text.remove_suffix(1);
  BlockList out;
  if (trim(text).empty()) return out;
  for (auto part : split(text, '|')) {
    if (trim(part).empty()) throw InputError("empty block in block spec");
    out.push_back(parse_list(part));
  }
  return out;
}

}  // namespace conlat
