// Linear differential algebraic subgroups of GL_n described by δ-polynomial
// equations in the matrix entries, and the pullback/intersection assembly.
#pragma once

#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "pdgal3/linear_solvers.hpp"

namespace pdgal3 {

/// The order-th δ-derivative of entry (i, j) of a generic matrix. `set`
/// distinguishes independent generic matrices (0 is the group variable).
struct DVar {
  int set = 0;
  int i = 0, j = 0;
  int order = 0;
  friend bool operator<(const DVar& a, const DVar& b) {
    return std::tie(a.order, a.set, a.i, a.j) < std::tie(b.order, b.set, b.i, b.j);
  }
  friend bool operator==(const DVar& a, const DVar& b) {
    return a.set == b.set && a.i == b.i && a.j == b.j && a.order == b.order;
  }
};

/// Exponents may be negative (entries of invertible matrices appear in
/// denominators); normalize() clears them.
using Monomial = std::map<DVar, int>;

/// Lexicographic from the highest-ranked variable down, so the leading term
/// carries the highest derivative.
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Laurent δ-polynomial with Q(t) coefficients.
class DPoly {
 public:
  DPoly() = default;
  DPoly(const Qt& c);  // NOLINT: implicit constant
  DPoly(long c) : DPoly(Qt(c)) {}  // NOLINT
  static DPoly var(int i, int j, int order = 0, int set = 0);
  static DPoly monomial(const Monomial& m, const Qt& c = Qt(1));

  const std::map<Monomial, Qt, MonomialLess>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int max_order() const;

  DPoly operator-() const;
  friend DPoly operator+(const DPoly& a, const DPoly& b);
  friend DPoly operator-(const DPoly& a, const DPoly& b);
  friend DPoly operator*(const DPoly& a, const DPoly& b);
  DPoly& operator+=(const DPoly& b) { return *this = *this + b; }
  DPoly& operator-=(const DPoly& b) { return *this = *this - b; }
  DPoly& operator*=(const DPoly& b) { return *this = *this * b; }
  friend bool operator==(const DPoly& a, const DPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const DPoly& a, const DPoly& b) { return !(a == b); }

  /// Integer power; negative powers only for monomials.
  DPoly pow(int e) const;
  /// δ = d/dt on coefficients and variables.
  DPoly delta() const;
  /// Replaces each variable v by f(v).
  DPoly substitute(const std::function<DPoly(const DVar&)>& f) const;
  Qt eval(const std::function<Qt(const DVar&)>& f) const;
  /// Multiplied by the smallest monomial making all exponents >= 0, then
  /// made monic in the leading term.
  DPoly normalized() const;

 private:
  std::map<Monomial, Qt, MonomialLess> terms_;
  void add_term(const Monomial& m, const Qt& c);
};

std::string to_string(const DVar& v);
/// Variables print as y12, y12', y12'' (primes are δ-derivatives).
std::string to_string(const DPoly& p);

/// Homomorphism GL_source -> GL_target given by δ-polynomial entries.
struct RepMap {
  std::string name;
  std::size_t source_dim = 0, target_dim = 0;
  std::vector<std::vector<DPoly>> entries;  // target_dim x target_dim

  static RepMap identity(std::size_t n);
  /// Y -> (Y[idx[a]][idx[b]]); a block restriction when idx is a block of a
  /// block-triangular group.
  static RepMap select(std::size_t n, const std::vector<int>& idx, std::string name = "");
  static RepMap det(std::size_t n);
  static RepMap diagonal(std::size_t n);
  /// Y -> [[r(Y), δ r(Y)], [0, r(Y)]]
  static RepMap prolongation(const RepMap& r);
  /// Y -> blockdiag(a(Y), b(Y))
  static RepMap direct_sum(const RepMap& a, const RepMap& b);
  /// outer after inner
  static RepMap compose(const RepMap& outer, const RepMap& inner);

  /// Substitutes generic source matrix entries by the given δ-polynomials.
  std::vector<std::vector<DPoly>> apply(const std::vector<std::vector<DPoly>>& y) const;
  std::vector<std::vector<Qt>> eval(const QtMatrix& m) const;
};

/// r(Y1 Y2) == r(Y1) r(Y2) with Y1, Y2 generic matrices of independent
/// δ-indeterminates.
bool is_multiplicative(const RepMap& r);

/// The source matrix of a representation written with generic entries.
std::vector<std::vector<DPoly>> generic_matrix(std::size_t n, int set = 0);

struct GroupDescription {
  enum class Kind { Explicit, Named, Pullback, Deferred };
  struct Component {
    RepMap rep;
    std::vector<GroupDescription> group;  // exactly one element
  };

  Kind kind = Kind::Explicit;
  std::size_t dim = 0;
  std::vector<DPoly> equations;  // defining equations; necessary ones for Deferred
  std::string family;            // Named
  std::vector<std::string> data; // Named parameters, printable
  std::vector<Component> components;
  std::vector<DPoly> ambient;    // Pullback ambient closure equations
  std::string reduction;         // Deferred
  std::vector<std::string> flags;

  void add_flag(const std::string& f);
  bool has_flag(const std::string& f) const;
};

std::string to_string(GroupDescription::Kind k);

/// Normalized, deduplicated, sorted equation list.
std::vector<DPoly> normalize_equations(const std::vector<DPoly>& eqs);

GroupDescription explicit_group(std::size_t n, const std::vector<DPoly>& eqs);
GroupDescription gl(std::size_t n);
GroupDescription sl(std::size_t n);
/// Upper triangular.
GroupDescription borel(std::size_t n);
/// Block upper triangular for the given block sizes.
GroupDescription block_triangular(const std::vector<std::size_t>& sizes);
/// Diagonal matrices, with extra equations in the diagonal entries.
GroupDescription diagonal_group(std::size_t n, const std::vector<DPoly>& eqs, std::vector<std::string> data);
/// {[[1, u], [0, 1]] : L(u) = 0}
GroupDescription additive(const OreOp& L);
/// Matrices with δY = 0 (and det = 1 when special); valid in the basis of an
/// integrable fundamental matrix, so flagged "up to conjugation".
GroupDescription constant_group(std::size_t n, bool special, const std::string& witness);
GroupDescription deferred(std::size_t n, const std::string& reduction, const std::vector<DPoly>& partial);

/// Equations of the target-coordinate group substituted through rep.
GroupDescription pullback(const RepMap& rep, const GroupDescription& g);
/// Pullback-intersection recipe; equations are the union.
GroupDescription pullback_intersection(std::size_t n, const std::vector<std::pair<RepMap, GroupDescription>>& parts,
                                       const std::vector<DPoly>& ambient);
GroupDescription intersect(const std::vector<GroupDescription>& groups);

struct SingularMatrix : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
/// Evaluates every equation with δ = d/dt at m.
bool member(const GroupDescription& g, const QtMatrix& m);
/// The equations of g that do not vanish at m.
std::vector<DPoly> violated(const GroupDescription& g, const QtMatrix& m);

}  // namespace pdgal3
