// Differential modules over K given by systems d_x Y = A Y.
#pragma once

#include <optional>
#include <vector>

#include "pdgal3/linear_solvers.hpp"

namespace pdgal3 {

/// A system d_x Y = A Y; the matrix is the whole data.
using DiffSystem = RMatrix;

DiffSystem direct_sum(const DiffSystem& a, const DiffSystem& b);
DiffSystem tensor(const DiffSystem& a, const DiffSystem& b);
DiffSystem dual(const DiffSystem& a);
/// Hom(a, b) = dual(a) (x) b; solutions are vec(U), column-major, U: b <- a.
DiffSystem hom(const DiffSystem& a, const DiffSystem& b);
/// k-th exterior power in the basis of increasing index sets.
DiffSystem wedge(const DiffSystem& a, int k);
/// Second symmetric power of a 2-dim system in the basis e1^2, e1 e2, e2^2.
DiffSystem sym2(const DiffSystem& a);
/// [[A, d_t A], [0, A]]
DiffSystem prolong(const DiffSystem& a);

/// P A P^-1 + d_x(P) P^-1, the system satisfied by P Y. Throws on singular P.
DiffSystem gauge(const DiffSystem& a, const RMatrix& P);

/// B with A S - d_x S = S B when the column span of S is invariant.
std::optional<RMatrix> is_invariant(const DiffSystem& a, const RMatrix& S);

/// Columns of S followed by unit vectors completing them to a basis.
RMatrix complete_basis(const RMatrix& S);

struct MorphismSpace {
  std::vector<RMatrix> basis;  // U with d_x U = B U - U A
  bool complete = true;
};
MorphismSpace morphisms(const DiffSystem& from, const DiffSystem& to, const SolverOptions& opt = {});
/// An invertible element of the span, found as a generic combination.
std::optional<RMatrix> invertible_member(const MorphismSpace& m);

struct SplitResult {
  std::optional<RMatrix> complement;  // basis of an invariant complement of S
  bool complete = true;
};
SplitResult split_extension(const DiffSystem& a, const RMatrix& S, const SolverOptions& opt = {});

struct FlagCertificate {
  std::vector<RMatrix> subspaces;  // increasing invariant subspaces
  bool verified = false;
};
/// Checks each subspace for invariance and containment; sets verified.
bool verify_flag(const DiffSystem& a, FlagCertificate& cert);

struct ModuleDiag {
  std::vector<DiffSystem> factors;  // diagonal blocks, top to bottom
  RMatrix P;                        // gauge(A, P) is block upper triangular
  RMatrix triangular;               // gauge(A, P)
  bool complete = true;
  std::vector<std::size_t> sizes() const;
  std::size_t offset(std::size_t i) const;
};
/// Composition factors. Uses the certificate when given, else
/// hyperexponential lines of the module and its dual. Throws NonFuchsian.
ModuleDiag diag_decompose(const DiffSystem& a, const std::optional<FlagCertificate>& cert = std::nullopt,
                          const SolverOptions& opt = {});

/// One invariant line of a (empty when none exists among Q(t)-exponent
/// candidates); the result is a basis column.
std::optional<RMatrix> find_invariant_line(const DiffSystem& a, const SolverOptions& opt = {});

}  // namespace pdgal3
