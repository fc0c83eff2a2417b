// Rational and hyperexponential solutions of first-order systems over K, and
// linear operators in Q(t)[delta].
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdgal3/diff_field.hpp"
#include "pdgal3/matrix.hpp"

namespace pdgal3 {

using RMatrix = Matrix<RatFunc>;
using RVector = std::vector<RatFunc>;
using QtMatrix = Matrix<Qt>;

struct NonFuchsian : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RMatrix d_x(const RMatrix& m);
RMatrix d_t(const RMatrix& m);
RVector d_x(const RVector& v);
RVector apply(const RMatrix& m, const RVector& v);
bool is_zero_vector(const RVector& v);

/// Kernel basis in reduced form (1 at each free column, 0 at the others).
std::vector<std::vector<Qt>> qt_nullspace(const QtMatrix& m);

// ---- operators in Q(t)[delta] ---------------------------------------------

/// L = sum c_i delta^i, monic.
class OreOp {
 public:
  OreOp() : c_{Qt(1)} {}
  explicit OreOp(std::vector<Qt> coeffs);
  /// delta^k
  static OreOp power(int k);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Qt>& coeffs() const { return c_; }

  Qt apply(const Qt& f) const;
  RatFunc apply(const RatFunc& f) const;

  friend bool operator==(const OreOp& a, const OreOp& b) { return a.c_ == b.c_; }
  friend bool operator!=(const OreOp& a, const OreOp& b) { return !(a == b); }
  /// Composition a * b.
  friend OreOp operator*(const OreOp& a, const OreOp& b);

 private:
  std::vector<Qt> c_;
};

std::string to_string(const OreOp& op);

/// Right remainder of delta^k modulo L, as coefficients of 1, ..., delta^(h-1).
std::vector<Qt> right_remainder_power(const OreOp& L, int k);
/// Right remainder of an arbitrary operator (coefficient list, not monic).
std::vector<Qt> right_remainder(const std::vector<Qt>& op, const OreOp& L);

/// Minimal monic L with L(r) = 0.
OreOp annihilator(const Qt& r);
/// Minimal monic L annihilating the values of the residue element rho at
/// every root of the squarefree pole p.
OreOp annihilator(const QtPoly& rho, const QtPoly& p);
/// Minimal monic common left multiple.
OreOp lclm(const std::vector<OreOp>& ops);

// ---- rational solutions ---------------------------------------------------

struct SolverOptions {
  int max_pole_order = 6;  // used only where no exact bound is available
  int max_degree = 8;
};

struct SolutionSpace {
  std::optional<RVector> particular;
  std::vector<RVector> basis;
  bool complete = true;
};

/// Solutions (Y, c) of d_x(Y) = A Y + sum_j c_j rhs_j with c in Q(t)^m.
struct ParamSolution {
  RVector y;
  std::vector<Qt> c;
};
struct ParamSolutionSpace {
  std::vector<ParamSolution> basis;
  bool complete = true;
};

ParamSolutionSpace rational_solutions_param(const RMatrix& A, const std::vector<RVector>& rhs,
                                            const SolverOptions& opt = {});
SolutionSpace rational_solutions(const RMatrix& A, const RVector& b = {}, const SolverOptions& opt = {});

// ---- local data -----------------------------------------------------------

/// Residue matrix of A at the roots of the squarefree factor p, entries mod p.
Matrix<QtPoly> residue_matrix(const RMatrix& A, const QtPoly& p);
/// lim x*A at infinity when A vanishes there.
QtMatrix residue_at_infinity(const RMatrix& A);
/// Characteristic polynomial over Q(t) of the residue matrix viewed as a
/// Q(t)-linear map on (Q(t)[x]/p)^n.
QtPoly norm_charpoly(const Matrix<QtPoly>& R, const QtPoly& p);
/// Integer roots common to every t-specialization of a polynomial over Q(t).
std::vector<long> integer_roots(const QtPoly& f);
/// Fuchsian: simple finite poles and A = O(1/x) at infinity.
bool is_fuchsian(const RMatrix& A);

// ---- hyperexponential solutions ------------------------------------------

struct HyperexpSolution {
  RatFunc r;                   // exponent: y = exp(int r) * v
  std::vector<RVector> basis;  // all v, a basis over Q(t)
};
/// One entry per class of exponents modulo logarithmic derivatives. Throws
/// NonFuchsian when A is not Fuchsian.
std::vector<HyperexpSolution> hyperexponential_solutions(const RMatrix& A, const SolverOptions& opt = {});

}  // namespace pdgal3
