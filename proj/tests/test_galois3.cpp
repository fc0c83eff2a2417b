#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pdgal3/galois3.hpp"
#include "support.hpp"

using namespace pdgal3;
using namespace testing_support;

namespace {

QtMatrix QM(std::initializer_list<std::initializer_list<const char*>> rows) {
  std::size_t n = rows.size(), m = rows.begin()->size(), i = 0;
  QtMatrix a(n, m);
  for (auto& r : rows) {
    std::size_t j = 0;
    for (auto* s : r) a(i, j++) = T(s);
    ++i;
  }
  return a;
}

RMatrix cols(std::size_t n, std::initializer_list<std::size_t> idx) {
  RMatrix s(n, idx.size());
  std::size_t j = 0;
  for (auto i : idx) s(i, j++) = RatFunc(1);
  return s;
}

FlagCertificate full_flag() { return FlagCertificate{{cols(3, {0}), cols(3, {0, 1})}, false}; }
FlagCertificate plane_flag() { return FlagCertificate{{cols(3, {0, 1})}, false}; }
FlagCertificate line_flag() { return FlagCertificate{{cols(3, {0})}, false}; }

// Non-split extension of 0 by t/x.
RMatrix nc2() { return M({{"t/x", "1/(x-1)"}, {"0", "0"}}); }

// Gauss hypergeometric system with a = 1/3, b = 1/2, c = 1: irreducible,
// free of t, with SL2 in its group.
RMatrix hyper() { return M({{"0", "1"}, {"1/(6*x*(1-x))", "-(1-11*x/6)/(x*(1-x))"}}); }

RMatrix block_diag(const RMatrix& w, const RMatrix& u) {
  RMatrix a(3, 3);
  a.set_block(0, 0, w);
  a.set_block(2, 2, u);
  return a;
}

RMatrix reversed_dual(const RMatrix& a) {
  RMatrix d(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) d(i, j) = -a(2 - j, 2 - i);
  return d;
}

QtMatrix dual_member(const QtMatrix& g) {
  QtMatrix inv = *g.inverse();
  QtMatrix d(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) d(i, j) = inv(2 - j, 2 - i);
  return d;
}

void check_members(const GroupDescription& g, std::initializer_list<QtMatrix> in, std::initializer_list<QtMatrix> out) {
  for (const auto& m : in) CHECK(member(g, m));
  for (const auto& m : out) CHECK_FALSE(member(g, m));
}

}  // namespace

TEST_CASE("classify2") {
  CHECK(classify2(nc2()) == TypeTag::NC);
  CHECK(classify2(M({{"1/x", "1/(x-1)"}, {"0", "0"}})) == TypeTag::CQ);
  CHECK(classify2(M({{"t/x", "0"}, {"0", "0"}})) == TypeTag::CR);
  // 1 = d_x(x) is absorbed by a complement: this one splits.
  auto cr = classify2_full(M({{"t/x", "1"}, {"0", "0"}}));
  CHECK(cr.tag == TypeTag::CR);
  CHECK(gauge(M({{"t/x", "1"}, {"0", "0"}}), *cr.basis.inverse()) == cr.normal_form);
  CHECK(is_zero(cr.normal_form(0, 1)));

  RMatrix P = M({{"1", "t"}, {"x", "1"}});
  CHECK(classify2(gauge(nc2(), P)) == TypeTag::NC);
  CHECK(classify2(gauge(M({{"1/x", "1/(x-1)"}, {"0", "0"}}), P)) == TypeTag::CQ);
  CHECK(classify2(tensor(nc2(), M({{"t/(x+2)"}}))) == TypeTag::NC);

  CHECK_THROWS_AS(classify2(hyper()), std::invalid_argument);
}

TEST_CASE("dual labels") {
  CHECK(dual_label("(CQ,CR)") == "(CR,CQ)");
  CHECK(dual_label("(CR,CQ,NC)") == "(CQ,CR,NC)");
  CHECK(dual_label("(NC,CQ)-prolongation") == "(CQ,NC)-prolongation");
  CHECK(dual_label("(NC,NC)-commutative") == "(NC,NC)-commutative");
  CHECK(dual_label("SEMISIMPLE") == "SEMISIMPLE");
}

TEST_CASE("dual reversal rep on upper triangular matrices") {
  RepMap r = dual_reversal_rep(3);
  QtMatrix g1 = QM({{"2", "t", "1"}, {"0", "t", "3"}, {"0", "0", "1/t"}});
  QtMatrix g2 = QM({{"t^2", "1", "t"}, {"0", "5", "t+1"}, {"0", "0", "7"}});
  auto as_matrix = [](const std::vector<std::vector<Qt>>& e) {
    QtMatrix m(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) m(i, j) = e[i][j];
    return m;
  };
  CHECK(as_matrix(r.eval(g1 * g2)) == as_matrix(r.eval(g1)) * as_matrix(r.eval(g2)));
  CHECK(as_matrix(r.eval(g1)) == dual_member(g1));
}

TEST_CASE("semisimple, all factors of dim 1") {
  RMatrix a = M({{"t/x", "0", "0"}, {"0", "1/x", "0"}, {"0", "0", "0"}});
  auto r = dispatch(a, full_flag());
  CHECK(r.report.label == "SEMISIMPLE");
  check_members(r.group, {QM({{"5", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}})},
                {QM({{"t", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}),
                 QM({{"5", "1", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}),
                 QM({{"5", "0", "0"}, {"0", "2", "0"}, {"0", "0", "1"}})});
}

TEST_CASE("semisimple with a simple plane") {
  RMatrix a = block_diag(hyper(), M({{"t/x"}}));
  auto r = dispatch(a, plane_flag());
  CHECK(r.report.label == "SEMISIMPLE");
  CHECK(r.group.has_flag("identity-component-level"));
  check_members(r.group,
                {QM({{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "5"}}),
                 QM({{"0", "1", "0"}, {"-1", "0", "0"}, {"0", "0", "5"}})},
                {QM({{"t", "0", "0"}, {"0", "1/t", "0"}, {"0", "0", "5"}}),
                 QM({{"1", "0", "1"}, {"0", "1", "0"}, {"0", "0", "5"}}),
                 QM({{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "t"}})});
}

TEST_CASE("decomposable") {
  RMatrix a = block_diag(nc2(), M({{"1/x"}}));
  auto r = dispatch(a, full_flag());
  CHECK(r.report.label == "DECOMPOSABLE");
  check_members(r.group, {QM({{"5", "t^2", "0"}, {"0", "1", "0"}, {"0", "0", "1"}})},
                {QM({{"5", "t^2", "1"}, {"0", "1", "0"}, {"0", "0", "1"}}),
                 QM({{"5", "t^2", "0"}, {"0", "2", "0"}, {"0", "0", "1"}})});
}

TEST_CASE("indecomposable with a simple plane") {
  RMatrix a = block_diag(hyper(), M({{"t/x"}}));
  a(1, 2) = P("1");
  auto r = dispatch(a, plane_flag());
  CHECK(r.report.label == "INDECOMPOSABLE-2DIM");
  CHECK(r.group.kind != GroupDescription::Kind::Deferred);
  check_members(r.group,
                {QM({{"1", "0", "t"}, {"0", "1", "t^3"}, {"0", "0", "5"}}),
                 QM({{"0", "1", "1"}, {"-1", "0", "0"}, {"0", "0", "5"}})},
                {QM({{"t", "0", "0"}, {"0", "1/t", "0"}, {"0", "0", "5"}}),
                 QM({{"1", "0", "0"}, {"0", "1", "0"}, {"1", "0", "5"}})});
}

TEST_CASE("(CQ,CQ) is deferred") {
  RMatrix a = M({{"0", "1/x", "0"}, {"0", "0", "1/(x-1)"}, {"0", "0", "0"}});
  auto r = dispatch(a, full_flag());
  CHECK(r.report.label == "(CQ,CQ)");
  CHECK(r.group.kind == GroupDescription::Kind::Deferred);
  CHECK_FALSE(r.report.premises.empty());
}

TEST_CASE("(CR,CQ,NC)") {
  RMatrix a = M({{"t/x", "0", "1/(x-1)"}, {"0", "0", "1/x"}, {"0", "0", "0"}});
  auto r = dispatch(a, full_flag());
  CHECK(r.report.label == "(CR,CQ,NC)");
  CHECK(r.group.kind == GroupDescription::Kind::Deferred);
  check_members(r.group, {QM({{"5", "0", "t"}, {"0", "1", "3"}, {"0", "0", "1"}})},
                {QM({{"5", "1", "t"}, {"0", "1", "3"}, {"0", "0", "1"}}),
                 QM({{"5", "0", "t"}, {"0", "2", "3"}, {"0", "0", "1"}})});
}

TEST_CASE("(CR,NC,CQ) goes through (CR,CQ,NC)") {
  RMatrix a = M({{"-t/x", "0", "1/x"}, {"0", "0", "1/(x-1)"}, {"0", "0", "-t/x"}});
  auto r = dispatch(a, full_flag());
  CHECK(r.report.label == "(CR,NC,CQ)");
  REQUIRE_FALSE(r.report.path.empty());
  bool permuted = false;
  for (const auto& p : r.report.path) permuted = permuted || p.find("(CR,CQ,NC)") != std::string::npos;
  CHECK(permuted);
  // In the reported basis U comes first.
  CHECK(r.report.normal_form(0, 0) == P("0"));
}

TEST_CASE("(CR,NC,NC)") {
  RMatrix a = M({{"t/x", "0", "1/(x-1)"}, {"0", "-t/x", "1/(x-1)"}, {"0", "0", "0"}});
  auto r = dispatch(a, full_flag());
  CHECK(r.report.label == "(CR,NC,NC)");
  CHECK(r.group.kind != GroupDescription::Kind::Deferred);
  check_members(r.group, {QM({{"5", "0", "t"}, {"0", "1/5", "t^2"}, {"0", "0", "1"}})},
                {QM({{"5", "1", "t"}, {"0", "1/5", "t^2"}, {"0", "0", "1"}}),
                 QM({{"5", "0", "t"}, {"0", "5", "t^2"}, {"0", "0", "1"}})});
}

TEST_CASE("(NC,NC) commutative") {
  RMatrix a = M({{"t/x", "1/(x-1)", "0"}, {"0", "0", "1/(x-1)"}, {"0", "0", "-t/x"}});
  auto r = dispatch(a, full_flag());
  CHECK(r.report.label == "(NC,NC)-commutative");
  CHECK_FALSE(r.report.certificates.empty());
  check_members(r.group, {QM({{"5", "t", "t^3"}, {"0", "1", "t/5"}, {"0", "0", "1/5"}})},
                {QM({{"5", "t", "t^3"}, {"0", "1", "t"}, {"0", "0", "1/5"}}),
                 QM({{"5", "t", "t^3"}, {"0", "1", "t/5"}, {"0", "0", "1"}})});
}

TEST_CASE("(NC,NC) noncommutative") {
  RMatrix a = M({{"t/x", "1/(x-1)", "0"}, {"0", "0", "1/(x-1)"}, {"0", "0", "-2*t/x"}});
  auto r = dispatch(a, full_flag());
  CHECK(r.report.label == "(NC,NC)-noncommutative");
  check_members(r.group, {QM({{"5", "t", "t^2"}, {"0", "1", "t^4"}, {"0", "0", "1/25"}})},
                {QM({{"5", "t", "t^2"}, {"0", "1", "t^4"}, {"0", "0", "1/5"}}),
                 QM({{"5", "t", "t^2"}, {"0", "1", "t^4"}, {"1", "0", "1/25"}})});
}

TEST_CASE("(CQ,NC) prolongation") {
  RMatrix a = prolongation_normal_form(nc2());
  CHECK(a == M({{"t/x", "1/x", "0"}, {"0", "t/x", "1/(x-1)"}, {"0", "0", "0"}}));
  auto r = dispatch(a, full_flag());
  CHECK(r.report.label == "(CQ,NC)-prolongation");
  CHECK(r.report.normal_form == a);
  const QtMatrix in = QM({{"5", "0", "2*t"}, {"0", "5", "t^2"}, {"0", "0", "1"}});
  const QtMatrix out1 = QM({{"5", "0", "t"}, {"0", "5", "t^2"}, {"0", "0", "1"}});
  const QtMatrix out2 = QM({{"5", "1", "2*t"}, {"0", "5", "t^2"}, {"0", "0", "1"}});
  check_members(r.group, {in}, {out1, out2});

  // A gauge preserving the flag and a rescaled extension class keep the label.
  RMatrix b = gauge(prolongation_normal_form(nc2(), T("3")), M({{"1", "t", "0"}, {"0", "1", "x"}, {"0", "0", "1"}}));
  auto rb = dispatch(b, full_flag());
  CHECK(rb.report.label == "(CQ,NC)-prolongation");
  CHECK(rb.report.normal_form(0, 0) == rb.report.normal_form(1, 1));

  SUBCASE("dual") {
    auto rd = dispatch(reversed_dual(a), full_flag());
    CHECK(rd.report.label == "(NC,CQ)-prolongation");
    CHECK(rd.report.via_dual);
    check_members(rd.group, {dual_member(in)}, {dual_member(out1), dual_member(out2)});
  }
}

TEST_CASE("dual of (CR,CQ,NC)") {
  RMatrix a = M({{"t/x", "0", "1/(x-1)"}, {"0", "0", "1/x"}, {"0", "0", "0"}});
  auto rd = dispatch(reversed_dual(a), full_flag());
  CHECK(rd.report.label == "(CQ,CR,NC)");
  CHECK(rd.report.via_dual);
  CHECK(member(rd.group, dual_member(QM({{"5", "0", "t"}, {"0", "1", "3"}, {"0", "0", "1"}}))));
  CHECK_FALSE(member(rd.group, dual_member(QM({{"5", "1", "t"}, {"0", "1", "3"}, {"0", "0", "1"}}))));
}

TEST_CASE("dispatch rejects other dimensions") {
  CHECK_THROWS_AS(dispatch(nc2()), DimensionError);
}
