// The differential field K = Q(t)(x) with derivations d/dx and d/dt.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdgal3/fraction.hpp"
#include "pdgal3/poly.hpp"
#include "pdgal3/rational.hpp"

namespace pdgal3 {

using QPoly = Poly<Q>;        // Q[t]
using Qt = Fraction<Q>;       // Q(t), the delta-field of x-constants
using QtPoly = Poly<Qt>;      // Q(t)[x]
using RatFunc = Fraction<Qt>; // K = Q(t)(x)

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- constructors -------------------------------------------------------

inline Qt qt_t() { return Qt::var(); }
inline RatFunc rf_x() { return RatFunc::var(); }
inline RatFunc rf_t() { return RatFunc(Qt::var()); }
inline RatFunc rf_const(const Qt& c) { return RatFunc(c); }

// ---- derivations --------------------------------------------------------

Qt d_t(const Qt& a);
QtPoly d_t(const QtPoly& p);
RatFunc d_t(const RatFunc& a);
RatFunc d_x(const RatFunc& a);

/// True when a does not depend on x.
inline bool is_x_free(const RatFunc& a) { return a.is_constant(); }
/// True when a is a rational number.
bool is_rational_constant(const RatFunc& a);
bool is_rational_constant(const Qt& a);

// ---- text form ----------------------------------------------------------

std::string to_string(const Qt& a);
std::string to_string(const QtPoly& p, char var = 'x');
std::string to_string(const RatFunc& a);

/// Parses integers, t, x, + - * / ^ (integer exponents) and parentheses.
RatFunc parse_ratfunc(std::string_view text);
/// Parses an expression that must not contain x.
Qt parse_qt(std::string_view text);

// ---- structural decompositions -----------------------------------------

/// Residue of a at all roots of a squarefree monic pole polynomial, stored
/// as an element of Q(t)[x]/(pole).
struct ResidueData {
  QtPoly pole;
  QtPoly residue;
  int order = 1;
};

struct PoleTerm {
  QtPoly pole;       // squarefree monic factor of the denominator
  int power = 1;     // term numerator / pole^power
  QtPoly numerator;  // deg < deg pole
};

struct PartialFractions {
  QtPoly polynomial_part;
  std::vector<PoleTerm> terms;
  std::vector<ResidueData> residues;  // nonzero residues only
};

/// Full decomposition; reconstruct() recovers the input exactly.
PartialFractions partial_fractions(const RatFunc& a);
RatFunc reconstruct(const PartialFractions& pf);

/// a = d_x(rational_part) + remainder_num / remainder_den with the
/// remainder denominator squarefree and deg remainder_num < deg remainder_den.
struct HermiteReduction {
  RatFunc rational_part;
  QtPoly remainder_num;
  QtPoly remainder_den;
};
HermiteReduction hermite_reduce(const RatFunc& a);

/// F with d_x(F) = a when every residue of a vanishes.
std::optional<RatFunc> rational_antiderivative(const RatFunc& a);

struct LogDerivative {
  int m = 1;
  RatFunc r;
};
/// Smallest m <= m_max with m*a = d_x(r)/r for some r in K.
std::optional<LogDerivative> is_log_derivative(const RatFunc& a, int m_max);

/// Pieces of the pole set of a simple-pole remainder on which every residue
/// function is constant. `values[i]` is the residue of input i on `pole`,
/// or empty when it is not in Q(t) there.
struct ResiduePiece {
  QtPoly pole;
  std::vector<std::optional<Qt>> values;
  std::vector<QtPoly> elements;  // residue elements mod pole, one per input
};
/// Splits the common pole set of the Hermite remainders of the inputs.
std::vector<ResiduePiece> residue_pieces(const std::vector<RatFunc>& inputs);

// ---- roots --------------------------------------------------------------

/// Distinct rational roots of a polynomial over Q, ascending.
std::vector<Q> rational_roots(const QPoly& p);
/// Distinct roots in Q(t) of a polynomial over Q(t).
std::vector<Qt> qt_roots(const QtPoly& p);

/// Lexicographic order on printed forms; used for deterministic sorting.
bool display_less(const RatFunc& a, const RatFunc& b);

}  // namespace pdgal3
