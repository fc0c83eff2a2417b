#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pdgal3/diff_module.hpp"
#include "support.hpp"

using namespace pdgal3;
using namespace testing_support;

namespace {

// Hypergeometric companion system with a=1/2, b=1/3, c=1/5: irreducible.
RMatrix hypergeometric() {
  return M({{"0", "1"}, {"(1/6)/(x*(1-x))", "-(1/5-(11/6)*x)/(x*(1-x))"}});
}

bool isomorphic(const RMatrix& a, const RMatrix& b) {
  return invertible_member(morphisms(a, b)).has_value();
}

}  // namespace

TEST_CASE("constructions") {
  CHECK(tensor(M({{"t/x"}}), M({{"1/(x-1)"}})) == M({{"t/x+1/(x-1)"}}));
  CHECK(dual(M({{"t/x", "1"}, {"0", "x"}})) == M({{"-t/x", "0"}, {"-1", "-x"}}));
  RMatrix A = M({{"1/x", "t", "0"}, {"x", "t/(x-1)", "2"}, {"1", "0", "x^2"}});
  CHECK(wedge(A, 3) == M({{"1/x + t/(x-1) + x^2"}}));
  CHECK(wedge(A, 1) == A);
  CHECK(wedge(A, 0).rows() == 1);
  CHECK_THROWS_AS(wedge(A, 4), DimensionError);
  CHECK(direct_sum(M({{"t/x"}}), M({{"x"}})) == M({{"t/x", "0"}, {"0", "x"}}));
  // hom(a, b) is dual(a) tensor b
  CHECK(hom(M({{"t/x"}}), M({{"x"}})) == M({{"x-t/x"}}));
  CHECK_THROWS_AS(tensor(M({{"1", "2"}}), M({{"1"}})) + M({{"1"}}), DimensionError);
}

TEST_CASE("wedge 2 of a 3-dim system matches minors of solutions") {
  // For diagonal A the exterior square is diagonal with pairwise sums.
  RMatrix A = M({{"t", "0", "0"}, {"0", "1/x", "0"}, {"0", "0", "x"}});
  CHECK(wedge(A, 2) == M({{"t+1/x", "0", "0"}, {"0", "t+x", "0"}, {"0", "0", "1/x+x"}}));
  RMatrix N = M({{"0", "1", "0"}, {"0", "0", "1"}, {"0", "0", "0"}});
  // e1^e2 -> 0, e1^e3 -> e1^e2, e2^e3 -> e1^e3
  CHECK(wedge(N, 2) == M({{"0", "1", "0"}, {"0", "0", "1"}, {"0", "0", "0"}}));
}

TEST_CASE("sym2") {
  RMatrix A = M({{"t", "1/x"}, {"x", "2"}});
  CHECK(sym2(A) == M({{"2*t", "1/x", "0"}, {"2*x", "t+2", "2/x"}, {"0", "x", "4"}}));
  CHECK(sym2(M({{"t", "0"}, {"0", "1/x"}})) == M({{"2*t", "0", "0"}, {"0", "t+1/x", "0"}, {"0", "0", "2/x"}}));
}

TEST_CASE("prolong") {
  CHECK(prolong(M({{"t/x"}})) == M({{"t/x", "1/x"}, {"0", "t/x"}}));
  CHECK(prolong(M({{"0"}})) == M({{"0", "0"}, {"0", "0"}}));
  RMatrix A = M({{"1/x", "x"}, {"0", "1/(x+1)"}});
  RMatrix D = prolong(A);
  CHECK(D.block(0, 2, 2, 2).is_zero_matrix());
  CHECK(D.block(0, 0, 2, 2) == A);
}

TEST_CASE("gauge") {
  RMatrix A = M({{"t/x", "1"}, {"x", "1/(x-t)"}});
  CHECK(gauge(A, RMatrix::identity(2)) == A);
  CHECK(gauge(M({{"0"}}), M({{"x"}})) == M({{"1/x"}}));
  RMatrix P = M({{"1", "x"}, {"t", "1"}});
  RMatrix Q = M({{"x", "0"}, {"1", "1"}});
  CHECK(gauge(gauge(A, P), *P.inverse()) == A);
  CHECK(gauge(gauge(A, P), Q) == gauge(A, Q * P));
  CHECK_THROWS_AS(gauge(A, M({{"1", "x"}, {"1", "x"}})), std::invalid_argument);
}

TEST_CASE("is_invariant") {
  auto B = is_invariant(M({{"t/x", "1"}, {"0", "0"}}), M({{"1"}, {"0"}}));
  REQUIRE(B);
  CHECK(*B == M({{"t/x"}}));
  CHECK_FALSE(is_invariant(M({{"0", "1"}, {"0", "0"}}), M({{"0"}, {"1"}})));
  // S = (x, 1): A S - d_x S = (1, 0) - (1, 0) = 0, so B = 0.
  auto B2 = is_invariant(M({{"0", "1"}, {"0", "0"}}), M({{"x"}, {"1"}}));
  REQUIRE(B2);
  CHECK(*B2 == M({{"0"}}));
  CHECK_THROWS_AS(is_invariant(M({{"0", "1"}, {"0", "0"}}), M({{"1", "2"}, {"1", "2"}})), std::invalid_argument);

  // A completion of S gauges A to block triangular form with B in the corner.
  RMatrix A = gauge(M({{"1/x", "1/(x-1)", "x"}, {"0", "t/x", "1"}, {"0", "0", "0"}}),
                    M({{"1", "0", "0"}, {"x", "1", "0"}, {"1", "t", "1"}}));
  RMatrix S = M({{"1"}, {"x"}, {"1"}});
  auto B3 = is_invariant(A, S);
  REQUIRE(B3);
  RMatrix Ag = gauge(A, *complete_basis(S).inverse());
  CHECK(Ag.block(0, 0, 1, 1) == *B3);
  CHECK(Ag.block(1, 0, 2, 1).is_zero_matrix());
}

TEST_CASE("morphisms") {
  auto m = morphisms(M({{"t/x"}}), M({{"t/x"}}));
  CHECK(m.basis.size() == 1);
  CHECK(morphisms(M({{"t/x"}}), M({{"0"}})).basis.empty());
  RMatrix A = M({{"t/x", "1/(x-1)"}, {"0", "0"}});
  CHECK(isomorphic(A, dual(dual(A))));
  RMatrix P = M({{"1", "x"}, {"0", "1"}});
  CHECK(isomorphic(A, gauge(A, P)));
  // U from [[0]] to [[1/x]]: u = x.
  auto m2 = morphisms(M({{"0"}}), M({{"1/x"}}));
  REQUIRE(m2.basis.size() == 1);
  CHECK(is_zero(d_x(m2.basis[0](0, 0)) - m2.basis[0](0, 0) / testing_support::P("x")));
  CHECK_FALSE(isomorphic(M({{"1/x"}}), M({{"1/(2*x)"}})));
}

TEST_CASE("split_extension") {
  RMatrix e1 = M({{"1"}, {"0"}});
  auto s1 = split_extension(M({{"0", "1"}, {"0", "0"}}), e1);
  REQUIRE(s1.complement);
  CHECK(is_invariant(M({{"0", "1"}, {"0", "0"}}), *s1.complement));
  CHECK(*s1.complement == M({{"x"}, {"1"}}));

  // d_x f = f/x + 1 has no rational solution (f = x log x).
  CHECK_FALSE(split_extension(M({{"1/x", "1"}, {"0", "0"}}), e1).complement);
  // d_x f = f/x - 1/x^2 ... with the off-diagonal entry 1/x^2: f = -1/(2x) works.
  auto s2 = split_extension(M({{"1/x", "1/x^2"}, {"0", "0"}}), e1);
  REQUIRE(s2.complement);
  CHECK(is_invariant(M({{"1/x", "1/x^2"}, {"0", "0"}}), *s2.complement));

  // Self-extension with constant off-diagonal: d_x f = 1, f = x splits it.
  auto s3 = split_extension(M({{"t/x", "1"}, {"0", "t/x"}}), e1);
  REQUIRE(s3.complement);
  CHECK(*s3.complement == M({{"x"}, {"1"}}));
  // Off-diagonal 1/x: d_x f = 1/x, nonsplit.
  CHECK_FALSE(split_extension(M({{"t/x", "1/x"}, {"0", "t/x"}}), e1).complement);
  // [[t/x, 1], [0, 0]] splits via f = x/(1-t).
  auto s4 = split_extension(M({{"t/x", "1"}, {"0", "0"}}), e1);
  REQUIRE(s4.complement);
  CHECK(*s4.complement == M({{"x/(1-t)"}, {"1"}}));
  CHECK_FALSE(split_extension(M({{"t/x", "1/(x-1)"}, {"0", "0"}}), e1).complement);

  CHECK_THROWS_AS(split_extension(M({{"0", "1"}, {"0", "0"}}), M({{"0"}, {"1"}})), std::invalid_argument);
}

TEST_CASE("flag certificates") {
  RMatrix A = M({{"t/x", "1", "0"}, {"0", "t/x", "1"}, {"0", "0", "0"}});
  FlagCertificate c{{M({{"1"}, {"0"}, {"0"}}), M({{"1", "0"}, {"0", "1"}, {"0", "0"}})}};
  CHECK(verify_flag(A, c));
  CHECK(c.verified);
  FlagCertificate bad{{M({{"0"}, {"1"}, {"0"}})}};
  CHECK_FALSE(verify_flag(A, bad));
  auto d = diag_decompose(A, c);
  REQUIRE(d.factors.size() == 3);
  CHECK(d.factors[0] == M({{"t/x"}}));
  CHECK(d.factors[1] == M({{"t/x"}}));
  CHECK(d.factors[2] == M({{"0"}}));
  CHECK(d.P == RMatrix::identity(3));
  CHECK_THROWS_AS(diag_decompose(A, bad), std::invalid_argument);
}

TEST_CASE("diag_decompose without certificate") {
  RMatrix A = M({{"t/x", "1", "0"}, {"0", "t/x", "1"}, {"0", "0", "0"}});
  auto d = diag_decompose(A);
  REQUIRE(d.factors.size() == 3);
  CHECK(gauge(A, d.P) == d.triangular);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(d.triangular.block(i, i, 1, 1) == d.factors[i]);
  CHECK(d.triangular(1, 0) == RatFunc(0));
  CHECK(d.triangular(2, 0) == RatFunc(0));
  CHECK(d.triangular(2, 1) == RatFunc(0));

  RMatrix W = hypergeometric();
  CHECK_FALSE(find_invariant_line(W));
  CHECK_FALSE(find_invariant_line(dual(W)));
  auto d2 = diag_decompose(direct_sum(W, M({{"0"}})));
  REQUIRE(d2.factors.size() == 2);
  CHECK(d2.sizes() == std::vector<std::size_t>{1, 2});
  CHECK(d2.factors[0] == M({{"0"}}));
  CHECK(isomorphic(d2.factors[1], W));
}

TEST_CASE("diag_decompose of a scrambled triangular system") {
  RMatrix tri = M({{"1/x", "1/(x-1)", "1/x"}, {"0", "t/x", "1/(x+1)"}, {"0", "0", "t/(x+1)"}});
  RMatrix P = M({{"1", "0", "1"}, {"2", "1", "0"}, {"1", "t", "1"}});
  auto d = diag_decompose(gauge(tri, P));
  REQUIRE(d.factors.size() == 3);
  CHECK(gauge(gauge(tri, P), d.P) == d.triangular);
  std::vector<RMatrix> expected{M({{"1/x"}}), M({{"t/x"}}), M({{"t/(x+1)"}})};
  // Each factor is isomorphic to exactly one original factor.
  for (const auto& f : d.factors) {
    int hits = 0;
    for (const auto& e : expected) hits += isomorphic(f, e);
    CHECK(hits == 1);
  }
}
