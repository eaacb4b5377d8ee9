#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "conlat/algebra.hpp"
#include "conlat/overalgebra.hpp"
#include "conlat/partition.hpp"
#include "conlat/verify.hpp"

namespace conlat {

using Json = nlohmann::json;

/// {"name": ..., "size": n, "operations": [{"symbol": ..., "table": [...]}]}
Json algebra_to_json(const UnaryAlgebra& a);
UnaryAlgebra algebra_from_json(const Json& j);

/// Partitions are arrays of blocks, e.g. [[0,1,2],[3,4,5]].
Json partition_to_json(const Partition& p);
Partition partition_from_json(const Json& j, std::size_t n);

Json embedding_to_json(const OverResult& result);
Json report_to_json(const VerifyReport& report);

/// Congruences as bar strings plus covering pairs by index.
Json con_to_json(const ConLattice& lattice);

/// Spec files: {"base": <algebra or path>, "tiepoints": [...], "blocks": [[...]]}
/// and {"base": ..., "pairs": [[a,b],...], "u": 1, "blocks": [[...]]}.
/// Relative base paths resolve against base_dir.
OverISpec spec_i_from_json(const Json& j, const std::filesystem::path& base_dir);
OverIISpec spec_ii_from_json(const Json& j, const std::filesystem::path& base_dir);

Json read_json(const std::filesystem::path& path);
UnaryAlgebra read_algebra(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);
void write_json(const std::filesystem::path& path, const Json& j);

/// "0,2,3" -> {0,2,3}; "" -> {}.
std::vector<Element> parse_list(std::string_view text);

/// "0:3,2:5" -> {(0,3),(2,5)}.
std::vector<ElementPair> parse_pairs(std::string_view text);

/// "1,2|3,4" -> {{1,2},{3,4}}; outer bars are optional.
BlockList parse_blockspec(std::string_view text);

}  // namespace conlat
