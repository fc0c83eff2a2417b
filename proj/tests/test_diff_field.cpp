#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "pdgal3/diff_field.hpp"

using namespace pdgal3;

namespace {

RatFunc P(const char* s) { return parse_ratfunc(s); }
Qt T(const char* s) { return parse_qt(s); }

RatFunc random_ratfunc(std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-3, 3), deg(0, 2), pick(0, 3);
  const char* dens[] = {"x", "x - 1", "x + 1", "x - t"};
  RatFunc num;
  for (int k = 0; k <= deg(rng); ++k) {
    Qt c = Qt(QPoly(Q(coef(rng)))) + Qt(QPoly(Q(coef(rng)))) * qt_t();
    num += RatFunc(c) * pow(rf_x(), k);
  }
  RatFunc den = P(dens[pick(rng)]) * P(dens[pick(rng)]);
  return num / den;
}

}  // namespace

TEST_CASE("arithmetic is canonical") {
  CHECK(P("t/x") + P("1/x") == P("(t+1)/x"));
  CHECK(P("x/(x-t)") * P("(x-t)/x") == RatFunc(1));
  CHECK(RatFunc(1) / P("x^2-t") == P("1/(x^2-t)"));
  CHECK_THROWS_AS(RatFunc(1) / RatFunc(0), DivisionByZero);
  CHECK(P("(2*t*x+2)/(4*x^2)") == P("(t*x+1)/(2*x^2)"));
  CHECK(P("(2*t*x+2)/(4*x^2)").den() == P("x^2").num());
}

TEST_CASE("derivations") {
  CHECK(d_x(P("1/x")) == P("-1/x^2"));
  CHECK(d_t(P("t/x")) == P("1/x"));
  CHECK(d_t(P("1/(x-t)")) == P("1/(x-t)^2"));
  std::mt19937 rng(7);
  for (int i = 0; i < 1000; ++i) {
    RatFunc a = random_ratfunc(rng);
    REQUIRE(d_x(d_t(a)) == d_t(d_x(a)));
  }
}

TEST_CASE("printer and parser round trip") {
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    RatFunc a = random_ratfunc(rng) + RatFunc(T("(3*t^2-1)/(2*t+4)")) * random_ratfunc(rng);
    REQUIRE(parse_ratfunc(to_string(a)) == a);
  }
  CHECK(to_string(P("t/x")) == "t/x");
  CHECK(to_string(P("0")) == "0");
  CHECK(to_string(P("-x^2 + 1/2")) == "-x^2 + 1/2");
  CHECK_THROWS_AS(parse_ratfunc("1/(x-"), ParseError);
  CHECK_THROWS_AS(parse_ratfunc("y+1"), ParseError);
  CHECK_THROWS_AS(parse_ratfunc("1/(x-x)"), ParseError);
  CHECK_THROWS_AS(parse_qt("x+t"), ParseError);
}

TEST_CASE("partial fractions") {
  SUBCASE("1/(x^2-1)") {
    auto pf = partial_fractions(P("1/(x^2-1)"));
    REQUIRE(pf.residues.size() == 1);
    // Residue element e has e(1) = 1/2 and e(-1) = -1/2, so e = x/2.
    CHECK(pf.residues[0].pole == P("x^2-1").num());
    const auto& e = pf.residues[0].residue;
    CHECK(e.eval<Qt>(Qt(1)) == T("1/2"));
    CHECK(e.eval<Qt>(Qt(-1)) == T("-1/2"));
    CHECK(RatFunc(e) == P("x/2"));
  }
  SUBCASE("1/x^2") {
    auto pf = partial_fractions(P("1/x^2"));
    CHECK(pf.residues.empty());
    REQUIRE(pf.terms.size() == 1);
    CHECK(pf.terms[0].power == 2);
    CHECK(pf.terms[0].pole == P("x").num());
    CHECK(RatFunc(pf.terms[0].numerator) == RatFunc(1));
  }
  SUBCASE("t*x/(x-t)") {
    auto pf = partial_fractions(P("t*x/(x-t)"));
    CHECK(RatFunc(pf.polynomial_part) == rf_t());
    REQUIRE(pf.residues.size() == 1);
    CHECK(RatFunc(pf.residues[0].residue) == P("t^2"));
    CHECK(reconstruct(pf) == P("t*x/(x-t)"));
  }
  std::mt19937 rng(3);
  for (int i = 0; i < 200; ++i) {
    RatFunc a = random_ratfunc(rng) * random_ratfunc(rng) + random_ratfunc(rng);
    REQUIRE(reconstruct(partial_fractions(a)) == a);
  }
}

TEST_CASE("rational antiderivative") {
  CHECK(rational_antiderivative(P("1/x^2")) == P("-1/x"));
  CHECK_FALSE(rational_antiderivative(P("1/x")).has_value());
  auto f = rational_antiderivative(P("1/(x-t)^2 + 3*x"));
  REQUIRE(f.has_value());
  CHECK(*f == P("-1/(x-t) + 3*x^2/2"));
  std::mt19937 rng(5);
  for (int i = 0; i < 200; ++i) {
    RatFunc F = random_ratfunc(rng) * random_ratfunc(rng);
    auto g = rational_antiderivative(d_x(F));
    REQUIRE(g.has_value());
    REQUIRE(is_x_free(F - *g));
    HermiteReduction h = hermite_reduce(F);
    REQUIRE(d_x(h.rational_part) + RatFunc(h.remainder_num, h.remainder_den) == F);
    REQUIRE(gcd(h.remainder_den, h.remainder_den.derivative()).deg() == 0);
  }
}

TEST_CASE("logarithmic derivatives") {
  auto a = is_log_derivative(P("1/x"), 4);
  REQUIRE(a.has_value());
  CHECK(a->m == 1);
  CHECK(a->r == P("x"));
  CHECK_FALSE(is_log_derivative(P("t/x"), 4).has_value());
  auto b = is_log_derivative(P("3/(2*x)"), 4);
  REQUIRE(b.has_value());
  CHECK(b->m == 2);
  CHECK(b->r == P("x^3"));
  CHECK(d_x(b->r) == RatFunc(2) * P("3/(2*x)") * b->r);
  CHECK_FALSE(is_log_derivative(P("1/(5*x)"), 4).has_value());
  CHECK_FALSE(is_log_derivative(P("1/x^2"), 4).has_value());
  auto c = is_log_derivative(P("2*x/(x^2-t) - 1/(x-1)"), 1);
  REQUIRE(c.has_value());
  CHECK(c->r == P("(x^2-t)/(x-1)"));
}

TEST_CASE("residue pieces split by value") {
  // 1/(x^2-1) has residues 1/2 and -1/2 on the two roots.
  auto pieces = residue_pieces({P("1/(x^2-1)")});
  REQUIRE(pieces.size() == 2);
  for (const auto& p : pieces) {
    REQUIRE(p.values[0].has_value());
    CHECK(p.pole.deg() == 1);
  }
  // x/(x^2-t): residue 1/2 at both roots, kept together.
  auto q = residue_pieces({P("x/(x^2-t)")});
  REQUIRE(q.size() == 1);
  CHECK(q[0].values[0] == T("1/2"));
  // 1/(x^2-t) has residues +-1/(2 sqrt t), not in Q(t).
  auto r = residue_pieces({P("1/(x^2-t)")});
  REQUIRE(r.size() == 1);
  CHECK_FALSE(r[0].values[0].has_value());
}

TEST_CASE("roots") {
  CHECK(rational_roots(QPoly(std::vector<Q>{Q(-6), Q(11), Q(-6), Q(1)})) == std::vector<Q>{1, 2, 3});
  CHECK(rational_roots(QPoly(std::vector<Q>{Q(1), Q(0), Q(1)})).empty());
  // (2z - 3)(z^2 + 1)(5z + 1)
  QPoly p = QPoly(std::vector<Q>{Q(-3), Q(2)}) * QPoly(std::vector<Q>{Q(1), Q(0), Q(1)}) *
            QPoly(std::vector<Q>{Q(1), Q(5)});
  CHECK(rational_roots(p) == std::vector<Q>{Q(-1, 5), Q(3, 2)});
  // (z - t/(t+1)) (z + 2 t^2) (z^2 - t)
  QtPoly z = QtPoly::var();
  QtPoly f = (z - QtPoly(T("t/(t+1)"))) * (z + QtPoly(T("2*t^2"))) * (z * z - QtPoly(qt_t()));
  auto roots = qt_roots(f);
  REQUIRE(roots.size() == 2);
  bool a = false, b = false;
  for (auto& r : roots) {
    a = a || r == T("t/(t+1)");
    b = b || r == T("-2*t^2");
  }
  CHECK(a);
  CHECK(b);
}
