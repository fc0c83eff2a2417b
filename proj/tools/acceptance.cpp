// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pdgal3/galois3.hpp"
#include "pdgal3/series_oracle.hpp"

using namespace pdgal3;

namespace {

std::mt19937 rng(20261018);

int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

RatFunc P(const char* s) { return parse_ratfunc(s); }

RMatrix M(std::initializer_list<std::initializer_list<const char*>> rows) {
  RMatrix a(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (auto& r : rows) {
    std::size_t j = 0;
    for (auto* s : r) a(i, j++) = P(s);
    ++i;
  }
  return a;
}

QtMatrix QM(std::initializer_list<std::initializer_list<const char*>> rows) {
  QtMatrix a(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (auto& r : rows) {
    std::size_t j = 0;
    for (auto* s : r) a(i, j++) = parse_qt(s);
    ++i;
  }
  return a;
}

struct Outcome {
  bool ok = true;
  std::vector<std::string> notes;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }
};

int failures = 0;

void criterion(int k, const std::string& title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < limit_s, "over the time limit");
  if (!o.ok) ++failures;
  std::ostringstream line;
  line.precision(2);
  line << std::fixed << "criterion " << k << ": " << (o.ok ? "PASS" : "FAIL") << "  " << title << "  (" << secs
       << " s, limit " << limit_s << " s)";
  std::cout << line.str() << "\n";
  const std::size_t shown = std::min<std::size_t>(o.notes.size(), 8);
  for (std::size_t i = 0; i < shown; ++i) std::cout << "    " << o.notes[i] << "\n";
  if (o.notes.size() > shown) std::cout << "    ... " << o.notes.size() - shown << " more\n";
  std::cout.flush();
}

// c/(x - p) with p in {0, 1, -1, t} and c in Q(t).
RatFunc random_fuchsian_entry(bool allow_t) {
  static const char* poles[] = {"x", "x-1", "x+1", "x-t"};
  RatFunc e(0);
  const int terms = uniform(0, 2);
  for (int k = 0; k < terms; ++k) {
    const int p = uniform(0, allow_t ? 3 : 2);
    Qt c(uniform(-3, 3));
    if (allow_t) c += Qt(uniform(-2, 2)) * Qt::var();
    e += RatFunc(c) / parse_ratfunc(poles[p]);
  }
  return e;
}

RMatrix random_fuchsian(std::size_t n, bool allow_t) {
  RMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = random_fuchsian_entry(allow_t);
  return a;
}

std::string describe(const RMatrix& a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.rows(); ++i) {
    s += i ? ", [" : "[";
    for (std::size_t j = 0; j < a.cols(); ++j) s += (j ? ", " : "") + to_string(a(i, j));
    s += "]";
  }
  return s + "]";
}

// ---- 1 -------------------------------------------------------------------------

void prolongation_identity(Outcome& o) {
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = static_cast<std::size_t>(uniform(1, 3));
    RMatrix a = random_fuchsian(n, true);
    const Q x0 = ordinary_point(a);
    SeriesMatrix u = fundamental_series(a, x0, 10);
    SeriesMatrix block = series_block(u, delta_series(u), u);
    // d_x B - prolong(A) B vanishes through order 8.
    o.require(satisfies(prolong(a), block), "prolonged series fails for " + describe(a));
  }
}

// ---- 2 -------------------------------------------------------------------------

RMatrix random_gauge(std::size_t n) {
  for (;;) {
    RMatrix p = RMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        RatFunc e(Qt(uniform(-2, 2)) + Qt(uniform(-1, 1)) * Qt::var());
        e += RatFunc(Qt(uniform(0, 1))) * rf_x();
        p(i, j) += e;
      }
    if (p.inverse()) return p;
  }
}

void constancy(Outcome& o) {
  int built = 0;
  while (built < 30) {
    const std::size_t n = static_cast<std::size_t>(uniform(1, 2));
    RMatrix a0 = random_fuchsian(n, false);
    RMatrix a = gauge(a0, random_gauge(n));
    ++built;
    ConstancyResult c = is_constant(a);
    o.require(c.witness.has_value(), "no witness for " + describe(a));
    if (c.witness) o.require(verify_witness(a, c.witness->B), "witness fails for " + describe(a));
  }
  std::vector<RatFunc> rank1{P("t/x")};
  while (rank1.size() < 11) {
    const int p = uniform(-3, 3), c0 = uniform(-3, 3), c1 = uniform(1, 3) * (uniform(0, 1) ? 1 : -1);
    RatFunc a = RatFunc(Qt(c0) + Qt(c1) * Qt::var()) / (rf_x() - RatFunc(Qt(p)));
    a += random_fuchsian_entry(false);
    rank1.push_back(a);
  }
  for (const auto& a : rank1) {
    RMatrix m(1, 1);
    m(0, 0) = a;
    // Independent criterion in rank 1: constant iff δa has a rational antiderivative.
    const bool oracle = rational_antiderivative(d_t(a)).has_value();
    o.require(!oracle, "fixture is constant after all: " + to_string(a));
    o.require(!is_constant(m).witness, "false witness for [[" + to_string(a) + "]]");
  }
}

// ---- 3 -------------------------------------------------------------------------

void telescopers(Outcome& o) {
  struct Case {
    const char* f;
    OreOp expected;
  };
  const OreOp d = OreOp::power(1);
  // δ - 1/t annihilates the residue t of t/(x - t).
  const OreOp d_minus = OreOp({-Qt(1) / Qt::var(), Qt(1)});
  const std::vector<Case> cases{{"1/x", d}, {"1/(x-t)", d}, {"t/(x-t)", d_minus}, {"1/x + 1/(x-t)", d}};
  for (const auto& c : cases) {
    const RatFunc f = P(c.f);
    Telescoper t = telescoper(f, 4);
    if (!t.op) {
      o.require(false, std::string("no telescoper for ") + c.f);
      continue;
    }
    o.require(*t.op == c.expected, std::string("unexpected operator for ") + c.f + ": " + to_string(*t.op));
    o.require(rational_antiderivative(apply_delta(*t.op, f)).has_value(), std::string("L(f) not in d_x K for ") + c.f);
    o.require(t.lower_rank == static_cast<std::size_t>(t.op->order()),
              std::string("rank certificate does not exclude lower orders for ") + c.f);
    // f itself has a nonzero residue, so order 0 is excluded independently.
    o.require(!rational_antiderivative(f).has_value(), std::string("order 0 would do for ") + c.f);
  }
}

// ---- 4 -------------------------------------------------------------------------

RMatrix random_constant_gauge() {
  for (;;) {
    RMatrix p(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        p(i, j) = RatFunc(Qt(uniform(-2, 2)) + Qt(uniform(-1, 1)) * Qt::var() + Qt(i == j ? 3 : 0));
    if (p.inverse()) return p;
  }
}

void trichotomy(Outcome& o) {
  struct Family {
    TypeTag tag;
    RMatrix base;
  };
  const std::vector<Family> families{
      {TypeTag::CQ, M({{"1/x", "1/(x-1)"}, {"0", "0"}})},
      {TypeTag::CR, M({{"t/x", "0"}, {"0", "1/(x+1)"}})},
      {TypeTag::NC, M({{"t/x", "1/(x-1)"}, {"0", "0"}})},
  };
  for (const auto& fam : families) {
    o.require(classify2(fam.base) == fam.tag, "base fixture misclassified: " + describe(fam.base));
    for (int k = 0; k < 10; ++k) {
      RMatrix twist(1, 1);
      twist(0, 0) = RatFunc(Qt(uniform(-3, 3)) + Qt(uniform(-2, 2)) * Qt::var()) / (rf_x() - RatFunc(Qt(uniform(2, 5))));
      RMatrix a = gauge(tensor(fam.base, twist), random_constant_gauge());
      const TypeTag got = classify2(a);
      o.require(got == fam.tag, "twist of " + to_string(fam.tag) + " classified " + to_string(got) + ": " + describe(a));
    }
  }
}

// ---- 5 and 6 -------------------------------------------------------------------

RMatrix cols(std::initializer_list<std::size_t> idx) {
  RMatrix s(3, idx.size());
  std::size_t j = 0;
  for (auto i : idx) s(i, j++) = RatFunc(1);
  return s;
}

FlagCertificate full_flag() { return {{cols({0}), cols({0, 1})}, false}; }
FlagCertificate plane_flag() { return {{cols({0, 1})}, false}; }

RMatrix nc2() { return M({{"t/x", "1/(x-1)"}, {"0", "0"}}); }
RMatrix hyper() { return M({{"0", "1"}, {"1/(6*x*(1-x))", "-(1-11*x/6)/(x*(1-x))"}}); }

struct Fixture {
  std::string label;
  RMatrix a;
  FlagCertificate flag;
  std::vector<QtMatrix> members, non_members;
  bool flag_case;
};

std::vector<Fixture> fixtures() {
  RMatrix plane(3, 3);
  plane.set_block(0, 0, hyper());
  plane(2, 2) = P("t/x");
  RMatrix plane_ext = plane;
  plane_ext(1, 2) = P("1");
  RMatrix dec(3, 3);
  dec.set_block(0, 0, nc2());
  dec(2, 2) = P("1/x");
  return {
      {"SEMISIMPLE",
       M({{"t/x", "0", "0"}, {"0", "1/x", "0"}, {"0", "0", "0"}}),
       full_flag(),
       {QM({{"5", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}})},
       {QM({{"t", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}), QM({{"5", "1", "0"}, {"0", "1", "0"}, {"0", "0", "1"}})},
       false},
      {"SEMISIMPLE",
       plane,
       plane_flag(),
       {QM({{"0", "1", "0"}, {"-1", "0", "0"}, {"0", "0", "5"}})},
       {QM({{"t", "0", "0"}, {"0", "1/t", "0"}, {"0", "0", "5"}}), QM({{"1", "0", "1"}, {"0", "1", "0"}, {"0", "0", "5"}})},
       false},
      {"DECOMPOSABLE",
       dec,
       full_flag(),
       {QM({{"5", "t^2", "0"}, {"0", "1", "0"}, {"0", "0", "1"}})},
       {QM({{"5", "t^2", "1"}, {"0", "1", "0"}, {"0", "0", "1"}}), QM({{"5", "t^2", "0"}, {"0", "2", "0"}, {"0", "0", "1"}})},
       false},
      {"INDECOMPOSABLE-2DIM",
       plane_ext,
       plane_flag(),
       {QM({{"1", "0", "t"}, {"0", "1", "t^3"}, {"0", "0", "5"}})},
       {QM({{"t", "0", "0"}, {"0", "1/t", "0"}, {"0", "0", "5"}}), QM({{"1", "0", "0"}, {"0", "1", "0"}, {"1", "0", "5"}})},
       false},
      {"(CQ,CQ)",
       M({{"0", "1/x", "0"}, {"0", "0", "1/(x-1)"}, {"0", "0", "0"}}),
       full_flag(),
       {QM({{"1", "2", "3"}, {"0", "1", "5"}, {"0", "0", "1"}})},
       {QM({{"1", "2", "3"}, {"1", "1", "5"}, {"0", "0", "1"}}), QM({{"2", "2", "3"}, {"0", "1", "5"}, {"0", "0", "1"}})},
       true},
      {"(CR,CQ,NC)",
       M({{"t/x", "0", "1/(x-1)"}, {"0", "0", "1/x"}, {"0", "0", "0"}}),
       full_flag(),
       {QM({{"5", "0", "t"}, {"0", "1", "3"}, {"0", "0", "1"}})},
       {QM({{"5", "1", "t"}, {"0", "1", "3"}, {"0", "0", "1"}}), QM({{"5", "0", "t"}, {"0", "2", "3"}, {"0", "0", "1"}})},
       true},
      {"(CR,NC,CQ)",
       M({{"-t/x", "0", "1/x"}, {"0", "0", "1/(x-1)"}, {"0", "0", "-t/x"}}),
       full_flag(),
       {},
       {},
       true},
      {"(CR,NC,NC)",
       M({{"t/x", "0", "1/(x-1)"}, {"0", "-t/x", "1/(x-1)"}, {"0", "0", "0"}}),
       full_flag(),
       {QM({{"5", "0", "t"}, {"0", "1/5", "t^2"}, {"0", "0", "1"}})},
       {QM({{"5", "1", "t"}, {"0", "1/5", "t^2"}, {"0", "0", "1"}}), QM({{"5", "0", "t"}, {"0", "5", "t^2"}, {"0", "0", "1"}})},
       true},
      {"(NC,NC)-commutative",
       M({{"t/x", "1/(x-1)", "0"}, {"0", "0", "1/(x-1)"}, {"0", "0", "-t/x"}}),
       full_flag(),
       {QM({{"5", "t", "t^3"}, {"0", "1", "t/5"}, {"0", "0", "1/5"}})},
       {QM({{"5", "t", "t^3"}, {"0", "1", "t"}, {"0", "0", "1/5"}}), QM({{"5", "t", "t^3"}, {"0", "1", "t/5"}, {"0", "0", "1"}})},
       true},
      {"(NC,NC)-noncommutative",
       M({{"t/x", "1/(x-1)", "0"}, {"0", "0", "1/(x-1)"}, {"0", "0", "-2*t/x"}}),
       full_flag(),
       {QM({{"5", "t", "t^2"}, {"0", "1", "t^4"}, {"0", "0", "1/25"}})},
       {QM({{"5", "t", "t^2"}, {"0", "1", "t^4"}, {"0", "0", "1/5"}})},
       true},
      {"(CQ,NC)-prolongation",
       prolongation_normal_form(nc2()),
       full_flag(),
       {QM({{"5", "0", "2*t"}, {"0", "5", "t^2"}, {"0", "0", "1"}}), QM({{"1", "0", "1"}, {"0", "1", "t"}, {"0", "0", "1"}})},
       {QM({{"5", "0", "t"}, {"0", "5", "t^2"}, {"0", "0", "1"}}), QM({{"5", "1", "2*t"}, {"0", "5", "t^2"}, {"0", "0", "1"}})},
       true},
  };
}

void branches(Outcome& o) {
  for (const auto& f : fixtures()) {
    DispatchResult r = dispatch(f.a, f.flag);
    o.require(r.report.label == f.label, "expected " + f.label + ", got " + r.report.label);
    o.require(member(r.group, QtMatrix::identity(3)), f.label + ": identity rejected");
    for (const auto& m : f.members) o.require(member(r.group, m), f.label + ": member rejected");
    for (const auto& m : f.non_members) o.require(!member(r.group, m), f.label + ": non-member accepted");
  }
}

void duality(Outcome& o) {
  // Flag of dual(V) = -A^T: the annihilators of V2 and V1.
  const FlagCertificate dual_flag{{cols({2}), cols({2, 1})}, false};
  for (const auto& f : fixtures()) {
    if (!f.flag_case) continue;
    DispatchResult r = dispatch(f.a, f.flag);
    DispatchResult rd = dispatch(dual(f.a), dual_flag);
    const std::string want = dual_label(r.report.label);
    o.require(rd.report.label == want, "dual of " + r.report.label + ": expected " + want + ", got " + rd.report.label);
    if (f.label == "(CR,NC,CQ)") {
      bool routed = false;
      for (const auto& p : r.report.path) routed = routed || p.find("(CR,CQ,NC)") != std::string::npos;
      o.require(routed, "(CR,NC,CQ) did not go through the (CR,CQ,NC) handler");
    }
  }
}

// ---- 7 -------------------------------------------------------------------------

void torus(Outcome& o) {
  const std::vector<RatFunc> d{P("t/x"), P("1/x"), P("0")};
  CharacterLattice lat = character_lattice(d);
  const std::vector<std::vector<Z>> want{{Z(0), Z(1), Z(0)}, {Z(0), Z(0), Z(1)}};
  o.require(lat.generators == want, "lattice is not {(0, m2, m3)}");
  for (std::size_t k = 0; k < lat.generators.size(); ++k) {
    RatFunc s(0);
    for (std::size_t i = 0; i < d.size(); ++i) s += RatFunc(Qt(Q(lat.generators[k][i]))) * d[i];
    const RatFunc& r = lat.witnesses.at(k);
    o.require(!is_zero(r) && s * r == d_x(r), "witness fails for generator " + std::to_string(k));
  }
  // (1, 0, 0) is excluded: t/x is not a logarithmic derivative.
  o.require(!is_log_derivative(d[0], 12), "t/x taken for a logarithmic derivative");

  GroupDescription g = rank1_group(P("t/x"));
  o.require(!g.data.empty() && g.data[0] == "L = δ", "rank1_group(t/x) is not described by L = δ");
  GroupDescription pulled = pullback(RepMap::select(3, {0}, "z"), g);
  o.require(member(pulled, QtMatrix::identity(3)), "identity rejected");
  o.require(member(pulled, QM({{"3", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}})), "diag(3,1,1) rejected");
  o.require(!member(pulled, QM({{"t", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}})), "diag(t,1,1) accepted");
  GroupDescription tor = torus_group(d);
  o.require(member(tor, QM({{"5", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}})), "torus rejects diag(5,1,1)");
  o.require(!member(tor, QM({{"t", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}})), "torus accepts diag(t,1,1)");
  o.require(!member(tor, QM({{"5", "0", "0"}, {"0", "-1", "0"}, {"0", "0", "1"}})), "torus accepts diag(5,-1,1)");
}

}  // namespace

int main() {
  criterion(1, "prolongation series identity on 50 random Fuchsian systems", 30, prolongation_identity);
  criterion(2, "constancy witnesses on 30 gauged t-free systems, none on 11 rank-1 systems", 60, constancy);
  criterion(3, "telescoper minimality with rank certificates", 10, telescopers);
  criterion(4, "classify2 trichotomy on 10 twists per family", 60, trichotomy);
  criterion(5, "dispatcher branch fixtures and membership", 120, branches);
  criterion(6, "duality labels and the (CR,NC,CQ) permutation", 120, duality);
  criterion(7, "character lattice, rank-1 group and torus membership", 10, torus);
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << "\n";
  return failures == 0 ? 0 : 1;
}
