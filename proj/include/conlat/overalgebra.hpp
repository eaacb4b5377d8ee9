#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "conlat/algebra.hpp"
#include "conlat/lattice.hpp"
#include "conlat/partition.hpp"

namespace conlat {

/// Parameters of the tie-point expansion: copies B_1..B_K of the base, copy i
/// glued to the base at tiepoints[i-1]. blocks partitions the 1-based copy
/// indices {1..K}; an empty list means the single block {1..K}.
struct OverISpec {
  UnaryAlgebra base;
  std::vector<Element> tiepoints;
  BlockList blocks;
};

/// Parameters of the chained expansion: K-1 generating pairs, copies
/// B_0..B_{uK} glued end to end. blocks partitions {0, K, ..., uK}; an empty
/// list means a single block.
struct OverIISpec {
  UnaryAlgebra base;
  std::vector<ElementPair> gen_pairs;
  std::size_t u = 1;
  BlockList blocks;

  std::size_t k() const { return gen_pairs.size() + 1; }
};

/// copies[j][b] is the ambient index of the copy of base element b in B_j;
/// copies[0] is the identity.
struct EmbeddingMap {
  std::string construction;
  std::vector<Table> copies;
  std::vector<Element> sub0;
  /// Ambient elements shared by two or more copies, ascending.
  std::vector<Element> tie_elements;

  /// Copy indices whose image contains each ambient element.
  std::vector<std::vector<std::size_t>> memberships(std::size_t ambient_size) const;
};

struct OverResult {
  UnaryAlgebra ambient;
  EmbeddingMap embedding;
  /// Symbol of the idempotent operation with image sub0.
  std::string retraction;
};

/// Validated copy of the spec with default blocks filled in.
OverISpec normalized(const OverISpec& spec);
OverIISpec normalized(const OverIISpec& spec);

EmbeddingMap embed_i(const OverISpec& spec);

/// The ambient universe has n + K(n-1) elements; fresh elements of B_i are
/// numbered n + (i-1)(n-1) + rank, rank counting base elements other than
/// t_i. Operations, in order: e0..eK, s1..sN, then <f>e0 per base symbol f.
///
/// relabel, when non-empty, holds one permutation per copy (K of them), each
/// fixing its tie-point; copy i then uses pi_i composed with relabel[i-1].
OverResult build_i(const OverISpec& spec, std::span<const Table> relabel = {});

EmbeddingMap embed_ii(const OverIISpec& spec);

/// Disagreements between the defining clauses of the retractions at shared
/// elements; empty when every retraction is well defined.
std::vector<std::string> clause_conflicts_ii(const OverIISpec& spec);

/// The ambient universe has n + uK(n-1) elements; B_0 is the base and each
/// later copy gets n-1 fresh indices for its non-shared elements in base
/// order. Operations: <f>e0 per base symbol, q_i_0 for 0<=i<=uK, q_0_j for
/// 1<=j<=uK.
OverResult build_ii(const OverIISpec& spec);

/// Closed-form least congruence restricting to beta.
Partition formula_star_i(const OverISpec& spec, const Partition& beta);
Partition formula_star_i(const OverISpec& spec, const EmbeddingMap& embedding, const Partition& beta);

/// Closed-form greatest congruence restricting to beta.
Partition formula_tilde_i(const OverISpec& spec, const Partition& beta);
Partition formula_tilde_i(const OverISpec& spec, const EmbeddingMap& embedding, const Partition& beta);

/// Factors (|T_n ∩ I_r|, m-1) for every class r of beta and block n.
IntervalShape predicted_shape_i(const OverISpec& spec, const Partition& beta);

/// beta must be a congruence of the base containing every generating pair.
Partition formula_star_ii(const OverIISpec& spec, const Partition& beta);
Partition formula_tilde_ii(const OverIISpec& spec, const Partition& beta);

/// The congruence generated by the spec's pairs.
Partition generated_congruence(const OverIISpec& spec);

/// Factors (|T_n|, r-1) when generated_congruence <= theta < 1, where r is
/// the class count of theta; the empty shape otherwise.
IntervalShape predicted_shape_ii(const OverIISpec& spec, const Partition& theta);

}  // namespace conlat
