#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pdgal3/linear_solvers.hpp"

using namespace pdgal3;

namespace {

RatFunc P(const char* s) { return parse_ratfunc(s); }
Qt T(const char* s) { return parse_qt(s); }

RMatrix M(std::initializer_list<std::initializer_list<const char*>> rows) {
  std::size_t n = rows.size(), m = rows.begin()->size(), i = 0;
  RMatrix a(n, m);
  for (auto& r : rows) {
    std::size_t j = 0;
    for (auto* s : r) a(i, j++) = P(s);
    ++i;
  }
  return a;
}

bool solves(const RMatrix& A, const RVector& y, const RVector& b = {}) {
  RVector lhs = d_x(y), rhs = apply(A, y);
  for (std::size_t i = 0; i < y.size(); ++i) {
    RatFunc r = lhs[i] - rhs[i];
    if (!b.empty()) r -= b[i];
    if (!is_zero(r)) return false;
  }
  return true;
}

// Matrix of d(vec P) = (I (x) A - A^T (x) I) vec P with P column-major:
// the system whose solutions are P with dP = A P - P A.
RMatrix end_system(const RMatrix& A) {
  RMatrix I = RMatrix::identity(A.rows());
  return kron(I, A) - kron(A.transpose(), I);
}

}  // namespace

TEST_CASE("rational solutions, homogeneous") {
  auto s = rational_solutions(M({{"1/x"}}));
  CHECK(s.complete);
  REQUIRE(s.basis.size() == 1);
  CHECK(s.basis[0][0] / P("x") == RatFunc(s.basis[0][0] / P("x")));
  CHECK(is_x_free(s.basis[0][0] / P("x")));

  auto e = rational_solutions(M({{"1"}}));
  CHECK(e.complete);
  CHECK(e.basis.empty());

  // Both components of [[t/x,1],[0,t/x]] grow like x^t: no rational solution.
  CHECK(rational_solutions(M({{"t/x", "1"}, {"0", "t/x"}})).basis.empty());

  // Endomorphisms dP = AP - PA of A = (t/x) I + N: P = exp(xN) C exp(-xN)
  // is polynomial for every constant C, so the space is 4-dimensional.
  RMatrix E = end_system(M({{"t/x", "1"}, {"0", "t/x"}}));
  auto h = rational_solutions(E);
  CHECK(h.complete);
  CHECK(h.basis.size() == 4);
  for (auto& v : h.basis) CHECK(solves(E, v));
  // Replacing 1 by 1/x: P = a I + b N' with constants only.
  RMatrix E2 = end_system(M({{"t/x", "1/x"}, {"0", "t/x"}}));
  auto h2 = rational_solutions(E2);
  CHECK(h2.complete);
  CHECK(h2.basis.size() == 2);
  for (auto& v : h2.basis) {
    CHECK(solves(E2, v));
    CHECK(is_zero(v[1]));
    CHECK(v[0] == v[3]);
    for (auto& c : v) CHECK(is_x_free(c));
  }
  auto nil = rational_solutions(M({{"0", "1"}, {"0", "0"}}));
  CHECK(nil.complete);
  CHECK(nil.basis.size() == 2);
}

TEST_CASE("rational solutions with poles and exponents") {
  // y' = (2/x - 1/(x-t)) y has y = x^2/(x-t).
  RMatrix A = M({{"2/x - 1/(x-t)"}});
  auto s = rational_solutions(A);
  REQUIRE(s.basis.size() == 1);
  CHECK(is_x_free(s.basis[0][0] / P("x^2/(x-t)")));
  // A 2x2 triangular system with a log-free rational solution.
  RMatrix B = M({{"-1/x", "1/x"}, {"0", "0"}});
  auto b = rational_solutions(B);
  CHECK(b.complete);
  for (auto& v : b.basis) CHECK(solves(B, v));
  CHECK(b.basis.size() == 2);
}

TEST_CASE("rational solutions, inhomogeneous") {
  auto s = rational_solutions(M({{"0"}}), {P("1/x^2")});
  REQUIRE(s.particular.has_value());
  CHECK(is_x_free((*s.particular)[0] - P("-1/x")));
  CHECK(s.basis.size() == 1);

  auto r = rational_solutions(M({{"1/x"}}), {P("x")});
  REQUIRE(r.particular.has_value());
  CHECK(solves(M({{"1/x"}}), *r.particular, {P("x")}));

  auto q = rational_solutions(M({{"1"}}), {P("-x")});
  REQUIRE(q.particular.has_value());
  CHECK((*q.particular)[0] == P("x+1"));
  CHECK(q.basis.empty());

  CHECK_FALSE(rational_solutions(M({{"0"}}), {P("1/x")}).particular.has_value());

  // y' = c1/x + c2/x^2: only c1 = 0 works.
  auto ps = rational_solutions_param(M({{"0"}}), {{P("1/x")}, {P("1/x^2")}});
  for (auto& b : ps.basis) CHECK(is_zero(b.c[0]));
  CHECK(ps.basis.size() == 2);
}

TEST_CASE("hyperexponential solutions") {
  auto d = hyperexponential_solutions(M({{"t/x", "0"}, {"0", "1/x"}}));
  REQUIRE(d.size() == 2);
  int found_t = 0, found_1 = 0;
  for (auto& h : d) {
    REQUIRE(h.basis.size() == 1);
    const RVector& v = h.basis[0];
    RMatrix A = M({{"t/x", "0"}, {"0", "1/x"}});
    for (std::size_t i = 0; i < 2; ++i) A(i, i) -= h.r;
    CHECK(solves(A, v));
    if (is_zero(v[1])) ++found_t;
    if (is_zero(v[0])) ++found_1;
  }
  CHECK(found_t == 1);
  CHECK(found_1 == 1);

  auto n = hyperexponential_solutions(M({{"0", "1"}, {"0", "0"}}));
  REQUIRE(n.size() == 1);
  CHECK(is_zero(n[0].r));
  // The module is trivial: (1,0) and (x,1) are both rational solutions.
  CHECK(n[0].basis.size() == 2);

  auto j = hyperexponential_solutions(M({{"t/x", "1/x"}, {"0", "t/x"}}));
  REQUIRE(j.size() == 1);
  CHECK(j[0].r == P("t/x"));
  REQUIRE(j[0].basis.size() == 1);
  CHECK(is_zero(j[0].basis[0][1]));

  // Residues +-1/2 at the two roots of x^2 - 1.
  auto s = hyperexponential_solutions(M({{"1/(x^2-1)"}}));
  REQUIRE(s.size() == 1);

  CHECK_THROWS_AS(hyperexponential_solutions(M({{"1"}})), NonFuchsian);
  CHECK_THROWS_AS(hyperexponential_solutions(M({{"1/x^2"}})), NonFuchsian);
}

TEST_CASE("operators") {
  CHECK(annihilator(Qt(1)) == OreOp::power(1));
  CHECK(annihilator(T("t^2")) == OreOp({T("-2/t"), Qt(1)}));
  CHECK(to_string(OreOp::power(1)) == "δ");
  OreOp L = lclm({OreOp({T("-1/t"), Qt(1)}), OreOp::power(1)});
  CHECK(L.order() == 2);
  CHECK(L.apply(qt_t()) == Qt(0));
  CHECK(L.apply(Qt(1)) == Qt(0));
  CHECK(L == OreOp::power(2));

  // Residue 1/(2 sqrt t) at the roots of x^2 - t: annihilated by delta + 1/(2t).
  QtPoly p = P("x^2 - t").num();
  QtPoly rho = (P("x").num() * QtPoly(T("1/(2*t)")));
  OreOp A = annihilator(rho, p);
  CHECK(A == OreOp({T("1/(2*t)"), Qt(1)}));

  // Composition agrees with application.
  OreOp a({T("t"), T("1/t"), Qt(1)}), b({T("t^2+1"), Qt(1)});
  Qt f = T("(t^3 - 2)/(t + 5)");
  CHECK((a * b).apply(f) == a.apply(b.apply(f)));
  // Right remainder of a*b modulo b vanishes.
  auto rem = right_remainder((a * b).coeffs(), b);
  for (auto& c : rem) CHECK(is_zero(c));

  // lclm of three first-order operators.
  std::vector<Qt> fs{T("t"), T("1/(t-1)"), T("t^2+1")};
  std::vector<OreOp> ops;
  for (auto& g : fs) ops.push_back(annihilator(g));
  OreOp l3 = lclm(ops);
  CHECK(l3.order() == 3);
  for (auto& g : fs) CHECK(l3.apply(g) == Qt(0));
}

TEST_CASE("local data") {
  CHECK(integer_roots(QtPoly(std::vector<Qt>{Qt(2), Qt(-3), Qt(1)})) == std::vector<long>{1, 2});
  // (z - t)(z + 2): only -2 is an integer root for every t.
  QtPoly z = QtPoly::var();
  CHECK(integer_roots((z - QtPoly(qt_t())) * (z + QtPoly(Qt(2)))) == std::vector<long>{-2});
  CHECK(is_fuchsian(M({{"t/x", "1/(x-1)"}, {"0", "0"}})));
  CHECK_FALSE(is_fuchsian(M({{"1", "0"}, {"0", "0"}})));
}
