// Constancy (isomonodromy) tests, residue telescoping and the rank-1 and
// torus groups built from them.
#pragma once

#include <optional>
#include <vector>

#include "pdgal3/diff_module.hpp"
#include "pdgal3/group_model.hpp"

namespace pdgal3 {

/// d_x B - d_t A = A B - B A.
struct ConstancyWitness {
  RMatrix B;
};

struct ConstancyResult {
  std::optional<ConstancyWitness> witness;
  bool complete = true;
};

bool verify_witness(const DiffSystem& a, const RMatrix& B);
ConstancyResult is_constant(const DiffSystem& a, const SolverOptions& opt = {});

struct Telescoper {
  std::optional<OreOp> op;
  bool bound_limited = false;
  /// Rank over Q(t) of the residue parts of f, δf, ..., δ^(h-1) f; equal to
  /// h when no monic operator of lower order works.
  std::size_t lower_rank = 0;
};
/// Minimal monic L with L(f) in d_x K, searched up to max_order.
Telescoper telescoper(const RatFunc& f, int max_order);
/// L applied to f with δ = d/dt.
RatFunc apply_delta(const OreOp& L, const RatFunc& f);

struct CharacterLattice {
  std::vector<std::vector<Z>> generators;  // Hermite normal form rows
  std::vector<RatFunc> witnesses;          // sum m_i a_i = d_x(r)/r
  int m_bound = 12;
};
/// All m in Z^n with sum m_i a_i a logarithmic derivative in K.
CharacterLattice character_lattice(const std::vector<RatFunc>& diag, int m_bound = 12);
bool verify_lattice(const std::vector<RatFunc>& diag, const CharacterLattice& lat);

/// Group of the rank-1 system d_x y = a y in GL1, as equations in z = y11.
GroupDescription rank1_group(const RatFunc& a, int max_order = 4, int m_bound = 12);

/// Group of the diagonal system diag(a_1..a_n) as a subgroup of the
/// diagonal torus: binomials from the character lattice and the δ-relations
/// sum c_ik δ^k(z_i'/z_i) = 0 coming from sum c_ik δ^(k+1) a_i in d_x K, one
/// generator per coordinate of lowest order (up to max_order).
GroupDescription torus_group(const std::vector<RatFunc>& diag, int max_order = 4, int m_bound = 12);

/// Integer row operations.
std::vector<std::vector<Z>> integer_kernel(const std::vector<std::vector<Z>>& rows, std::size_t n);
std::vector<std::vector<Z>> hermite_normal_form(std::vector<std::vector<Z>> rows);

}  // namespace pdgal3
