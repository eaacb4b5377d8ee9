#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conlat/algebra.hpp"
#include "conlat/lattice.hpp"
#include "conlat/overalgebra.hpp"
#include "conlat/partition.hpp"

namespace conlat {

struct FiberReport {
  Partition beta;
  Partition star;
  Partition hat;
  /// Ambient congruences restricting to beta, in ConLattice order.
  std::vector<Partition> fiber;
  /// Absent for plain residuation checks, which have no closed form.
  std::optional<IntervalShape> predicted;
  bool shape_match = true;
  bool exact_match = true;
};

/// One failed assertion. pair is a differing pair when one exists.
struct Failure {
  std::string beta;
  std::string what;
  std::optional<ElementPair> pair;
};

struct VerifyReport {
  std::string theorem;
  /// Short description of the algebra or spec that was checked.
  std::string subject;
  std::size_t base_con_size = 0;
  std::size_t ambient_con_size = 0;
  std::vector<FiberReport> fibers;
  bool epimorphism_ok = true;
  bool lemma_ok = true;
  std::vector<Failure> failures;

  bool pass() const { return failures.empty() && epimorphism_ok && lemma_ok; }
};

struct VerifyOptions {
  /// Also run the residuation checks (restriction onto, meets, joins,
  /// fiber = [star, hat]).
  bool residuation = true;
  /// Compare every fiber with the filter of Eq(A) between its extremes.
  bool eq_filter = true;
  std::size_t lattice_budget = kDefaultLatticeBudget;
};

VerifyReport check_residuation(const UnaryAlgebra& ambient, std::span<const Element> sub, std::string_view e_sym,
                               std::size_t lattice_budget = kDefaultLatticeBudget);

VerifyReport check_thm1(const OverISpec& spec, const VerifyOptions& options = {});

VerifyReport check_thm2_thm3(const OverIISpec& spec, const VerifyOptions& options = {});

struct FuzzBounds {
  std::size_t max_base = 5;
  std::size_t max_ops = 3;
  std::size_t max_ambient = 30;
  /// Sum of predicted fiber sizes allowed per trial.
  std::uint64_t max_predicted = 2000;
};

/// Even trials exercise the tie-point construction, odd trials the chained
/// one. Trial i depends only on (seed, i).
std::vector<VerifyReport> fuzz(std::uint64_t seed, std::size_t trials, const FuzzBounds& bounds = {});

}  // namespace conlat
