#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pdgal3/group_model.hpp"
#include "support.hpp"

using namespace pdgal3;
using namespace testing_support;

namespace {

DPoly y(int i, int j, int order = 0) { return DPoly::var(i - 1, j - 1, order); }

QtMatrix QM(std::initializer_list<std::initializer_list<const char*>> rows) {
  std::size_t n = rows.size(), i = 0;
  QtMatrix a(n, n);
  for (auto& r : rows) {
    std::size_t j = 0;
    for (auto* s : r) a(i, j++) = T(s);
    ++i;
  }
  return a;
}

std::vector<std::string> strings(const GroupDescription& g) {
  std::vector<std::string> s;
  for (const auto& e : g.equations) s.push_back(to_string(e));
  return s;
}

// {z : δ(δz/z) = 0} on a 1x1 matrix.
GroupDescription log_flat() {
  DPoly z = DPoly::var(0, 0);
  DPoly l = z.delta() * z.pow(-1);
  return explicit_group(1, {l.delta()});
}

}  // namespace

TEST_CASE("δ-polynomial arithmetic") {
  DPoly a = y(1, 1), b = y(1, 2);
  CHECK((a * b).delta() == a.delta() * b + a * b.delta());
  CHECK(to_string(a.delta()) == "y11'");
  CHECK(to_string(DPoly(T("t")) * a * a - DPoly(3)) == "t*y11^2 - 3");
  DPoly l = a.delta() * a.pow(-1);
  // δ(z'/z) cleared of denominators
  CHECK(to_string(l.delta().normalized()) == "y11''*y11 - y11'^2");
  CHECK((a.pow(-2) * a.pow(2)) == DPoly(1));
  CHECK_THROWS_AS((a + b).pow(-1), std::invalid_argument);
  // normalization clears denominators and makes the leading term monic
  CHECK((DPoly(2) * b * a.pow(-1) + DPoly(4)).normalized() == (b + DPoly(2) * a).normalized());
  CHECK(y(2, 1).normalized() == y(2, 1));
}

TEST_CASE("built-in representations are multiplicative") {
  CHECK(is_multiplicative(RepMap::identity(3)));
  CHECK(is_multiplicative(RepMap::det(3)));
  CHECK(is_multiplicative(RepMap::det(2)));
  CHECK(is_multiplicative(RepMap::prolongation(RepMap::identity(2))));
  CHECK(is_multiplicative(RepMap::compose(RepMap::det(2), RepMap::prolongation(RepMap::identity(1)))));
  // Restriction to a block is a homomorphism only on block triangular
  // groups; on all of GL3 it is not.
  CHECK_FALSE(is_multiplicative(RepMap::select(3, {0, 1})));
  CHECK_FALSE(is_multiplicative(RepMap::diagonal(3)));
}

TEST_CASE("pullback") {
  GroupDescription z1 = explicit_group(1, {DPoly::var(0, 0) - DPoly(1)});
  auto g = pullback(RepMap::det(3), z1);
  CHECK(member(g, QtMatrix::identity(3)));
  CHECK(member(g, QM({{"t", "1", "0"}, {"0", "1/t", "5"}, {"0", "0", "1"}})));
  CHECK_FALSE(member(g, QM({{"2", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}})));
  REQUIRE(g.equations.size() == 1);
  CHECK(g.equations[0] == sl(3).equations[0]);

  auto h = pullback(RepMap::select(3, {0, 1}, "V2"), explicit_group(2, {DPoly::var(0, 1)}));
  CHECK(strings(h) == std::vector<std::string>{"y12"});

  // Torus lattice {(0, m2)} on the diagonal of a 2-dim module: z2 = 1.
  auto torus = diagonal_group(2, {DPoly::var(1, 1) - DPoly(1)}, {"lattice (0,1)"});
  auto pt = pullback(RepMap::diagonal(2), torus);
  CHECK(strings(pt) == std::vector<std::string>{"y22 - 1"});

  // Composition: pulling back in two steps equals pulling back once.
  RepMap inner = RepMap::prolongation(RepMap::identity(1));
  RepMap outer = RepMap::det(2);
  auto two = pullback(inner, pullback(outer, z1));
  auto one = pullback(RepMap::compose(outer, inner), z1);
  CHECK(two.equations == one.equations);
  CHECK(strings(one) == std::vector<std::string>{"y11^2 - 1"});
}

TEST_CASE("intersect") {
  auto g = intersect({sl(3), borel(3)});
  CHECK(g.equations.size() == 4);
  CHECK(strings(g).back() == "y33*y22*y11 - 1");
}

TEST_CASE("intersect with explicit members") {
  auto g = intersect({sl(3), borel(3)});
  CHECK(member(g, QM({{"t", "1", "3"}, {"0", "1/t", "0"}, {"0", "0", "1"}})));
  CHECK_FALSE(member(g, QM({{"t", "1", "3"}, {"0", "1", "0"}, {"0", "0", "1"}})));
  CHECK_FALSE(member(g, QM({{"1", "0", "0"}, {"1", "1", "0"}, {"0", "0", "1"}})));
  auto same = intersect({borel(3), gl(3)});
  CHECK(same.equations == borel(3).equations);
}

TEST_CASE("member") {
  for (const auto& g : {gl(3), sl(3), borel(3), log_flat(), additive(OreOp::power(1))})
    CHECK(member(g, QtMatrix::identity(g.dim)));
  // δ(δt/t) = -1/t^2 != 0
  CHECK_FALSE(member(log_flat(), QM({{"t"}})));
  CHECK(member(log_flat(), QM({{"5"}})));
  // exp(c t) is the model member; over Q(t) only constants qualify
  auto torus = pullback(RepMap::select(3, {0}), log_flat());
  CHECK_FALSE(member(torus, QM({{"t", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}})));
  CHECK(member(torus, QM({{"7", "0", "0"}, {"0", "t", "0"}, {"0", "0", "1"}})));
  CHECK(member(borel(3), QM({{"1", "t", "0"}, {"0", "1", "0"}, {"0", "0", "1"}})));
  CHECK_THROWS_AS(member(gl(3), QtMatrix(3, 3)), SingularMatrix);
  CHECK_THROWS_AS(member(gl(3), QtMatrix::identity(2)), DimensionError);

  auto ga = additive(OreOp::power(2));
  CHECK(member(ga, QM({{"1", "3*t+1"}, {"0", "1"}})));
  CHECK_FALSE(member(ga, QM({{"1", "t^2"}, {"0", "1"}})));
  auto c = constant_group(2, true, "0");
  CHECK(c.has_flag("up to conjugation"));
  CHECK(member(c, QM({{"2", "3"}, {"1", "2"}})));
  CHECK(member(c, QM({{"2", "3"}, {"0", "1/2"}})));
  CHECK_FALSE(member(c, QM({{"2", "3"}, {"0", "1"}})));
  CHECK_FALSE(member(c, QM({{"t", "0"}, {"0", "1/t"}})));
}

TEST_CASE("deferred and block groups") {
  auto d = deferred(3, "tau(G)=0", {DPoly::var(1, 0)});
  CHECK(d.kind == GroupDescription::Kind::Deferred);
  CHECK(d.has_flag("deferred"));
  auto p = pullback_intersection(3, {{RepMap::det(3), explicit_group(1, {DPoly::var(0, 0) - DPoly(1)})}},
                                 borel(3).equations);
  CHECK(p.kind == GroupDescription::Kind::Pullback);
  CHECK(p.components.size() == 1);
  CHECK(p.equations.size() == 4);
  auto bt = block_triangular({1, 2});
  CHECK(strings(bt) == std::vector<std::string>{"y21", "y31"});
}
