// conlat: congruence lattices of finite unary algebras and their overalgebras.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "conlat/algebra.hpp"
#include "conlat/error.hpp"
#include "conlat/io.hpp"
#include "conlat/lattice.hpp"
#include "conlat/overalgebra.hpp"
#include "conlat/verify.hpp"

namespace fs = std::filesystem;
using namespace conlat;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;

struct Limits {
  std::size_t max_universe = 64;
  std::size_t max_lattice = kDefaultLatticeBudget;
};

std::size_t env_size(const char* name, std::size_t fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(raw, &pos);
    if (pos != std::string(raw).size() || v == 0) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw InputError(std::string(name) + " must be a positive integer");
  }
}

Limits read_limits() {
  return {env_size("CONLAT_MAX_UNIVERSE", 64), env_size("CONLAT_MAX_LATTICE", kDefaultLatticeBudget)};
}

void require_universe(std::size_t size, const Limits& limits) {
  if (size > limits.max_universe) {
    throw BoundError("universe of " + std::to_string(size) + " elements exceeds CONLAT_MAX_UNIVERSE=" +
                     std::to_string(limits.max_universe));
  }
}

// Flags shared by build-i, build-ii and check.
struct SpecFlags {
  std::string algebra;
  std::string spec;
  std::optional<std::string> tiepoints;
  std::optional<std::string> pairs;
  std::size_t u = 1;
  std::string blocks;
};

void add_spec_flags(CLI::App* app, SpecFlags& f, bool with_i, bool with_ii) {
  app->add_option("algebra", f.algebra, "Base algebra JSON");
  app->add_option("--spec", f.spec, "Spec JSON (alternative to the algebra argument and flags)");
  if (with_i) app->add_option("--tiepoints", f.tiepoints, "Tie-points, e.g. 0,2");
  if (with_ii) {
    app->add_option("--pairs", f.pairs, "Generating pairs, e.g. 0:3,2:5");
    app->add_option("--u", f.u, "Number of up-pointing copies")->check(CLI::PositiveNumber);
  }
  app->add_option("--blocks", f.blocks, "Block spec, e.g. \"1,2|3,4\"");
}

bool wants_ii(const SpecFlags& f) {
  if (!f.spec.empty()) return read_json(f.spec).contains("pairs");
  return f.pairs.has_value();
}

OverISpec spec_i(const SpecFlags& f) {
  if (!f.spec.empty()) return spec_i_from_json(read_json(f.spec), fs::path(f.spec).parent_path());
  if (f.algebra.empty()) throw InputError("an algebra file or --spec is required");
  return {read_algebra(f.algebra), parse_list(f.tiepoints.value_or("")), parse_blockspec(f.blocks)};
}

OverIISpec spec_ii(const SpecFlags& f) {
  if (!f.spec.empty()) return spec_ii_from_json(read_json(f.spec), fs::path(f.spec).parent_path());
  if (f.algebra.empty()) throw InputError("an algebra file or --spec is required");
  return {read_algebra(f.algebra), parse_pairs(f.pairs.value_or("")), f.u, parse_blockspec(f.blocks)};
}

std::size_t size_i(const OverISpec& s) {
  const auto n = s.base.size();
  return n == 0 ? 0 : n + s.tiepoints.size() * (n - 1);
}

std::size_t size_ii(const OverIISpec& s) {
  const auto n = s.base.size();
  return n == 0 ? 0 : n + s.u * s.k() * (n - 1);
}

void print_decomposition(const OverResult& r) {
  std::cout << "|A| = " << r.ambient.size() << "\n";
  for (std::size_t j = 0; j < r.embedding.copies.size(); ++j) {
    std::cout << "B_" << j << ":";
    for (auto x : r.embedding.copies[j]) std::cout << " " << x;
    std::cout << "\n";
  }
  std::cout << "shared:";
  for (auto x : r.embedding.tie_elements) std::cout << " " << x;
  std::cout << "\n";
}

void write_build(const OverResult& r, const std::string& out, const std::string& embedding) {
  write_json(out, algebra_to_json(r.ambient));
  fs::path emb = embedding;
  if (emb.empty()) emb = fs::path(out).replace_extension(".embedding.json");
  write_json(emb, embedding_to_json(r));
  std::cout << "wrote " << out << " and " << emb.string() << "\n";
}

// "7 = 5*1 + 2": fiber sizes grouped by value.
std::string fiber_accounting(const VerifyReport& r) {
  std::map<std::size_t, std::size_t> counts;
  for (const auto& f : r.fibers) ++counts[f.fiber.size()];
  std::string out = std::to_string(r.ambient_con_size) + " =";
  bool first = true;
  for (const auto& [size, count] : counts) {
    out += first ? " " : " + ";
    first = false;
    out += count == 1 ? std::to_string(size) : std::to_string(count) + "*" + std::to_string(size);
  }
  return out;
}

int report_outcome(const VerifyReport& r, const std::string& report_path) {
  if (!report_path.empty()) write_json(report_path, report_to_json(r));
  std::cout << "theorem " << r.theorem << ": " << r.subject << "\n";
  std::cout << "|Con B| = " << r.base_con_size << "\n";
  std::cout << "|Con A| = " << fiber_accounting(r) << "\n";
  for (const auto& f : r.fibers) {
    if (f.fiber.size() < 2) continue;
    std::cout << "fiber over " << f.beta.to_string() << ": " << f.fiber.size();
    if (f.predicted) std::cout << " (predicted " << f.predicted->to_string() << ")";
    std::cout << "\n";
  }
  if (r.pass()) {
    std::cout << "PASS\n";
    return kOk;
  }
  for (const auto& f : r.failures) {
    std::cerr << "FAIL at " << f.beta << ": " << f.what;
    if (f.pair) std::cerr << " [witness pair (" << f.pair->first << "," << f.pair->second << ")]";
    std::cerr << "\n";
  }
  std::cout << "FAIL\n";
  return kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Congruence lattices of finite unary algebras and overalgebras"};
  app.require_subcommand(1);

  auto* con_cmd = app.add_subcommand("con", "Compute the congruence lattice of an algebra");
  std::string con_algebra, con_dot, con_json;
  bool con_list = false;
  std::size_t label_cap = DotOptions{}.label_cap;
  con_cmd->add_option("algebra", con_algebra, "Algebra JSON")->required();
  con_cmd->add_option("--dot", con_dot, "Write a Hasse diagram in DOT format");
  con_cmd->add_option("--json", con_json, "Write congruences and covers as JSON");
  con_cmd->add_flag("--list", con_list, "Print every congruence in bar notation");
  con_cmd->add_option("--label-cap", label_cap, "Longest DOT label before falling back to indices");

  auto* bi_cmd = app.add_subcommand("build-i", "Build a tie-point overalgebra");
  SpecFlags bi;
  std::string bi_out, bi_emb;
  add_spec_flags(bi_cmd, bi, true, false);
  bi_cmd->add_option("--out", bi_out, "Ambient algebra JSON")->required();
  bi_cmd->add_option("--embedding", bi_emb, "Embedding JSON (default: next to --out)");

  auto* bii_cmd = app.add_subcommand("build-ii", "Build a chained overalgebra");
  SpecFlags bii;
  std::string bii_out, bii_emb;
  add_spec_flags(bii_cmd, bii, false, true);
  bii_cmd->add_option("--out", bii_out, "Ambient algebra JSON")->required();
  bii_cmd->add_option("--embedding", bii_emb, "Embedding JSON (default: next to --out)");

  auto* check_cmd = app.add_subcommand("check", "Verify a theorem against the congruence oracle");
  SpecFlags ck;
  std::string thm, report_path, sub_list, e_sym;
  check_cmd->add_option("--thm", thm, "1, 2, 3 or lemma")->required()->check(CLI::IsMember({"1", "2", "3", "lemma"}));
  add_spec_flags(check_cmd, ck, true, true);
  check_cmd->add_option("--sub", sub_list, "Subset e(A) for --thm lemma on a plain algebra");
  check_cmd->add_option("--e", e_sym, "Retraction symbol for --thm lemma on a plain algebra");
  check_cmd->add_option("--report", report_path, "Write the JSON report");

  auto* perms_cmd = app.add_subcommand("perms", "Write an algebra of permutations");
  std::size_t perm_n = 0;
  std::vector<std::string> perm_tables;
  std::string perm_out, perm_name;
  perms_cmd->add_option("--n", perm_n, "Universe size")->required();
  perms_cmd->add_option("--perm", perm_tables, "Permutation table, e.g. 1,2,0 (repeatable)");
  perms_cmd->add_option("--out", perm_out, "Algebra JSON; stdout when omitted");
  perms_cmd->add_option("--name", perm_name, "Algebra name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    const auto limits = read_limits();
    VerifyOptions options;
    options.lattice_budget = limits.max_lattice;

    if (*con_cmd) {
      const auto a = read_algebra(con_algebra);
      require_universe(a.size(), limits);
      const auto c = con(a, limits.max_lattice);
      if (con_list) {
        for (const auto& p : c.elements()) std::cout << p.to_string() << "\n";
      } else {
        std::cout << c.size() << "\n";
      }
      if (!con_json.empty()) write_json(con_json, con_to_json(c));
      if (!con_dot.empty()) {
        DotOptions dot{label_cap, "con"};
        write_text(con_dot, to_dot(c.lattice(), dot));
        const auto legend = dot_legend(c.lattice(), dot);
        if (!legend.empty()) write_text(con_dot + ".legend.txt", legend);
      }
      return kOk;
    }

    if (*bi_cmd) {
      const auto spec = spec_i(bi);
      require_universe(size_i(spec), limits);
      const auto r = build_i(spec);
      print_decomposition(r);
      write_build(r, bi_out, bi_emb);
      return kOk;
    }

    if (*bii_cmd) {
      const auto spec = spec_ii(bii);
      require_universe(size_ii(spec), limits);
      const auto r = build_ii(spec);
      print_decomposition(r);
      write_build(r, bii_out, bii_emb);
      return kOk;
    }

    if (*check_cmd) {
      if (thm == "1") {
        const auto spec = spec_i(ck);
        require_universe(size_i(spec), limits);
        return report_outcome(check_thm1(spec, options), report_path);
      }
      if (thm == "2" || thm == "3") {
        const auto spec = spec_ii(ck);
        require_universe(size_ii(spec), limits);
        return report_outcome(check_thm2_thm3(spec, options), report_path);
      }
      // lemma: a plain algebra with --sub/--e, or either construction.
      if (!e_sym.empty()) {
        if (ck.algebra.empty()) throw InputError("--thm lemma with --e needs an algebra file");
        const auto a = read_algebra(ck.algebra);
        require_universe(a.size(), limits);
        const auto sub = parse_list(sub_list);
        return report_outcome(check_residuation(a, sub, e_sym, limits.max_lattice), report_path);
      }
      const auto built = [&] {
        if (wants_ii(ck)) {
          const auto spec = spec_ii(ck);
          require_universe(size_ii(spec), limits);
          return build_ii(spec);
        }
        const auto spec = spec_i(ck);
        require_universe(size_i(spec), limits);
        return build_i(spec);
      }();
      return report_outcome(
          check_residuation(built.ambient, built.embedding.sub0, built.retraction, limits.max_lattice), report_path);
    }

    if (*perms_cmd) {
      std::vector<Table> perms;
      for (const auto& t : perm_tables) perms.push_back(parse_list(t));
      const auto a = from_permutations(perm_n, perms, perm_name);
      if (perm_out.empty()) {
        std::cout << algebra_to_json(a).dump(2) << "\n";
      } else {
        write_json(perm_out, algebra_to_json(a));
      }
      return kOk;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BoundError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
