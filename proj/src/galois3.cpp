#include "pdgal3/galois3.hpp"

#include <stdexcept>

namespace pdgal3 {

std::string to_string(TypeTag t) {
  switch (t) {
    case TypeTag::CQ: return "CQ";
    case TypeTag::CR: return "CR";
    case TypeTag::NC: return "NC";
  }
  return "?";
}

namespace {

using Kind = GroupDescription::Kind;

DPoly yv(std::size_t i, std::size_t j, int order = 0) {
  return DPoly::var(static_cast<int>(i), static_cast<int>(j), order);
}

RMatrix unit(std::size_t n, std::size_t i) {
  RMatrix e(n, 1);
  e(i, 0) = RatFunc(1);
  return e;
}

RMatrix hcat(const std::vector<RMatrix>& parts) {
  std::size_t cols = 0;
  for (const auto& p : parts) cols += p.cols();
  RMatrix m(parts.at(0).rows(), cols);
  std::size_t c = 0;
  for (const auto& p : parts) {
    m.set_block(0, c, p);
    c += p.cols();
  }
  return m;
}

RMatrix inverse_of(const RMatrix& m) {
  auto inv = m.inverse();
  if (!inv) throw std::logic_error("basis matrix is singular");
  return *inv;
}

/// The system in the basis given by the columns of S.
RMatrix rebase(const RMatrix& a, const RMatrix& S) { return gauge(a, inverse_of(S)); }

std::string mstr(const RMatrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += i ? ", [" : "[";
    for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? ", " : "") + to_string(m(i, j));
    s += "]";
  }
  return s + "]";
}

std::vector<DPoly> eqs_of(const GroupDescription& g) { return g.equations; }

std::vector<DPoly> operator+(std::vector<DPoly> a, const std::vector<DPoly>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// Equations of the torus of diag(a) on the diagonal entries of GL_n.
GroupDescription torus_on_diagonal(const std::vector<RatFunc>& a, const DispatchConfig& cfg) {
  return pullback(RepMap::diagonal(a.size()), torus_group(a, cfg.max_order, cfg.m_bound));
}

std::vector<RatFunc> diagonal_of(const RMatrix& a) {
  std::vector<RatFunc> d;
  for (std::size_t i = 0; i < a.rows(); ++i) d.push_back(a(i, i));
  return d;
}

/// Binomials of the character lattice alone: the algebraic relations.
std::vector<DPoly> lattice_equations(const std::vector<RatFunc>& a, int m_bound) {
  CharacterLattice lat = character_lattice(a, m_bound);
  std::vector<DPoly> eqs;
  for (const auto& g : lat.generators) {
    DPoly pos(1), neg(1);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (g[i] > 0) pos *= yv(i, i).pow(static_cast<int>(g[i].get_si()));
      if (g[i] < 0) neg *= yv(i, i).pow(static_cast<int>(-g[i].get_si()));
    }
    eqs.push_back(pos - neg);
  }
  return eqs;
}

/// Group of the 2-dim NC module [[a, *], [0, d]]: torus on the diagonal,
/// unipotent entry free.
GroupDescription nc2_group(const RatFunc& a, const RatFunc& d, const DispatchConfig& cfg) {
  GroupDescription t = torus_group({a, d}, cfg.max_order, cfg.m_bound);
  std::vector<DPoly> eqs;
  for (const auto& e : t.equations)
    if (e != yv(0, 1)) eqs.push_back(e);
  GroupDescription g = explicit_group(2, eqs);
  g.kind = Kind::Named;
  g.family = "NC";
  g.data = t.data;
  g.flags = t.flags;
  return g;
}

RepMap block_diagonal_rep(const std::vector<std::size_t>& sizes) {
  std::size_t n = 0;
  for (auto s : sizes) n += s;
  RepMap r{"block-diagonal", n, n, {}};
  r.entries.assign(n, std::vector<DPoly>(n));
  std::size_t o = 0;
  for (auto s : sizes) {
    for (std::size_t i = o; i < o + s; ++i)
      for (std::size_t j = o; j < o + s; ++j) r.entries[i][j] = yv(i, j);
    o += s;
  }
  return r;
}

/// Y -> the entries listed, zero elsewhere (same size).
RepMap entries_rep(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& keep, std::string name) {
  RepMap r{std::move(name), n, n, {}};
  r.entries.assign(n, std::vector<DPoly>(n));
  for (auto [i, j] : keep) r.entries[i][j] = yv(i, j);
  return r;
}

Classification classify_triangular(const RMatrix& t, const SolverOptions& opt) {
  Classification c;
  c.basis = RMatrix::identity(2);
  c.normal_form = t;
  if (rational_antiderivative(d_t(t(0, 0) - t(1, 1)))) {
    c.tag = TypeTag::CQ;
    return c;
  }
  SplitResult s = split_extension(t, unit(2, 0), opt);
  c.complete = s.complete;
  if (s.complement) {
    c.tag = TypeTag::CR;
    c.basis = hcat({unit(2, 0), *s.complement});
    c.normal_form = rebase(t, c.basis);
    return c;
  }
  c.tag = TypeTag::NC;
  return c;
}

DispatchResult deferred_result(const std::string& label, const std::string& reduction, const std::vector<DPoly>& partial,
                               const RMatrix& a) {
  DispatchResult r;
  r.report.label = label;
  r.report.basis = RMatrix::identity(a.rows());
  r.report.normal_form = a;
  r.group = deferred(a.rows(), reduction, partial);
  return r;
}

std::vector<DPoly> borel3() { return borel(3).equations; }

void chain(DispatchResult& r, const RMatrix& S) {
  r.report.basis = S * r.report.basis;
}

// ---- V^diag with a 2-dim simple factor -----------------------------------------

GroupDescription semisimple_with_plane(const RMatrix& w, const RatFunc& u, bool w_first, const DispatchConfig& cfg,
                                       std::vector<std::pair<std::string, RMatrix>>* certs) {
  const std::size_t p = w_first ? 0 : 1, q = p + 1, iu = w_first ? 2 : 0;
  std::vector<DPoly> ambient;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const bool in_w_i = i == p || i == q, in_w_j = j == p || j == q;
      if (i != j && !(in_w_i && in_w_j)) ambient.push_back(yv(i, j));
    }
  // ∧²W ⊕ U as a 2-dim diagonal module.
  RepMap r2{"det(W) + U", 3, 2, {}};
  r2.entries.assign(2, std::vector<DPoly>(2));
  r2.entries[0][0] = yv(p, p) * yv(q, q) - yv(p, q) * yv(q, p);
  r2.entries[1][1] = yv(iu, iu);
  GroupDescription g2 = torus_group({w.trace(), u}, cfg.max_order, cfg.m_bound);

  for (const auto& h : hyperexponential_solutions(sym2(w), cfg.solver))
    if (!h.basis.empty()) {
      GroupDescription part = pullback_intersection(3, {{r2, g2}}, ambient);
      GroupDescription d = deferred(3,
                                    "the 2-dim factor may have a Zariski closure not containing SL2 (its symmetric "
                                    "square has a hyperexponential line); needs a Kovacic-type classification",
                                    part.equations);
      return d;
    }

  // W ⊗ W*: trace-zero part of hom(W, W), vec column-major.
  RMatrix H = hom(w, w);
  RMatrix S(4, 3);
  S(2, 0) = RatFunc(1);
  S(1, 1) = RatFunc(1);
  S(0, 2) = RatFunc(1);
  S(3, 2) = RatFunc(-1);
  auto sl = is_invariant(H, S);
  if (!sl) throw std::logic_error("trace-zero endomorphisms are not a submodule");
  ConstancyResult cr = is_constant(*sl, cfg.solver);
  RepMap rw = RepMap::select(3, {static_cast<int>(p), static_cast<int>(q)}, "W");
  GroupDescription gw;
  if (cr.witness) {
    std::vector<DPoly> eqs;
    const std::pair<std::size_t, std::size_t> pos[4] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        DPoly ya = yv(pos[a].first, pos[a].second), yb = yv(pos[b].first, pos[b].second);
        eqs.push_back(ya * yb.delta() - yb * ya.delta());
      }
    gw = explicit_group(2, eqs);
    gw.kind = Kind::Named;
    gw.family = "SL2-constant-conjugate";
    gw.data = {"sl(W) constant, witness B = " + mstr(cr.witness->B)};
    gw.add_flag("up to conjugation");
    if (certs) certs->push_back({"constancy witness of sl(W)", cr.witness->B});
  } else {
    gw = gl(2);
    gw.family = "SL2";
    gw.data = {"sl(W) non-constant: the SL2 part is full"};
  }
  if (!cr.complete) gw.add_flag("bound-limited");
  GroupDescription g = pullback_intersection(3, {{r2, g2}, {rw, gw}}, ambient);
  g.add_flag("identity-component-level");
  return g;
}

}  // namespace

Classification classify2_full(const DiffSystem& w, const std::optional<FlagCertificate>& cert,
                              const SolverOptions& opt) {
  if (w.rows() != 2 || !w.is_square()) throw DimensionError("classify2 expects a 2-dim system");
  ModuleDiag d = diag_decompose(w, cert, opt);
  if (d.factors.size() != 2) throw std::invalid_argument("classify2: the module is simple");
  Classification c = classify_triangular(d.triangular, opt);
  c.basis = inverse_of(d.P) * c.basis;
  c.complete = c.complete && d.complete;
  return c;
}

TypeTag classify2(const DiffSystem& w, const std::optional<FlagCertificate>& cert, const SolverOptions& opt) {
  return classify2_full(w, cert, opt).tag;
}

GroupDescription diag_group(const ModuleDiag& d, const DispatchConfig& cfg) {
  auto sizes = d.sizes();
  bool all_lines = true;
  for (auto s : sizes) all_lines = all_lines && s == 1;
  if (all_lines) {
    std::vector<RatFunc> a;
    for (const auto& f : d.factors) a.push_back(f(0, 0));
    return torus_group(a, cfg.max_order, cfg.m_bound);
  }
  if (sizes == std::vector<std::size_t>{2, 1})
    return semisimple_with_plane(d.factors[0], d.factors[1](0, 0), true, cfg, nullptr);
  if (sizes == std::vector<std::size_t>{1, 2})
    return semisimple_with_plane(d.factors[1], d.factors[0](0, 0), false, cfg, nullptr);
  if (sizes == std::vector<std::size_t>{3}) {
    const RMatrix& a = d.factors[0];
    GroupDescription det = rank1_group(a.trace(), cfg.max_order, cfg.m_bound);
    GroupDescription p = pullback(RepMap::det(3), det);
    return deferred(3,
                    "simple 3-dim module: the quasi-simple group of V ⊗ V* is not computed; only the ∧³V "
                    "condition is emitted",
                    p.equations);
  }
  throw std::invalid_argument("diag_group: unsupported factor sizes");
}

std::string dual_label(const std::string& label) {
  if (label.empty() || label[0] != '(') return label;
  const auto close = label.find(')');
  const auto c1 = label.find(',');
  if (close == std::string::npos || c1 == std::string::npos || c1 > close) return label;
  const auto c2 = label.find(',', c1 + 1);
  const auto end_second = (c2 != std::string::npos && c2 < close) ? c2 : close;
  std::string first = label.substr(1, c1 - 1), second = label.substr(c1 + 1, end_second - c1 - 1);
  return "(" + second + "," + first + label.substr(end_second);
}

DiffSystem prolongation_normal_form(const DiffSystem& quot, const Qt& k) {
  if (quot.rows() != 2 || !is_zero(quot(1, 0))) throw std::invalid_argument("expected an upper triangular 2-dim system");
  const RatFunc a = quot(0, 0), b = quot(0, 1), c = quot(1, 1), kk(k);
  DiffSystem v(3, 3);
  v(0, 0) = a;
  v(0, 1) = kk * d_t(a - c);
  v(0, 2) = kk * d_t(b);
  v(1, 1) = a;
  v(1, 2) = b;
  v(2, 2) = c;
  return v;
}

RepMap dual_reversal_rep(std::size_t n) {
  // Inverse of a generic upper triangular matrix by back substitution.
  std::vector<std::vector<DPoly>> inv(n, std::vector<DPoly>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = yv(i, i).pow(-1);
  for (std::size_t d = 1; d < n; ++d)
    for (std::size_t i = 0; i + d < n; ++i) {
      const std::size_t j = i + d;
      DPoly s;
      for (std::size_t k = i; k < j; ++k) s += inv[i][k] * yv(k, j);
      inv[i][j] = -(s * yv(j, j).pow(-1));
    }
  RepMap r{"dual-reversal", n, n, {}};
  r.entries.assign(n, std::vector<DPoly>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.entries[i][j] = inv[n - 1 - j][n - 1 - i];
  return r;
}

// ---- dispatcher ------------------------------------------------------------------

namespace {

struct Ctx {
  const DispatchConfig& cfg;
};

DispatchResult flag_case(const RMatrix& a, const Ctx& ctx);

/// V = [[w11, w12, 0], [0, w22, 0], [0, 0, u]] with W = [[w11, w12], [0, w22]]
/// not semisimple.
DispatchResult decomposable_case(const RMatrix& a, const Ctx& ctx) {
  DispatchResult r;
  r.report.label = "DECOMPOSABLE";
  r.report.basis = RMatrix::identity(3);
  r.report.normal_form = a;
  std::vector<DPoly> ambient = borel3() + std::vector<DPoly>{yv(0, 2), yv(1, 2)};
  GroupDescription torus = torus_on_diagonal(diagonal_of(a), ctx.cfg);
  if (rational_antiderivative(d_t(a(0, 0) - a(1, 1)))) {
    r.report.path.push_back("W1 ⊗ W2* constant");
    r.report.premises.push_back(
        "Gal(W1 ⊗ W2*) constant: W is of type CQ, so τ(G) = 0 by τ(G) = max(τ(H), τ(G/H))");
    r.group = deferred(3, "τ(G) = 0 (decomposable, W1 ⊗ W2* constant): delegated to a type-0 algorithm",
                       ambient + torus.equations);
    return r;
  }
  r.report.path.push_back("W1 ⊗ W2* non-constant: determined by V^diag within the stabilizer of W1");
  r.report.premises.push_back("W of type NC: the unipotent block of the stabilizer lies in G");
  r.group = pullback_intersection(3, {{RepMap::diagonal(3), torus_on_diagonal(diagonal_of(a), ctx.cfg)}}, ambient);
  return r;
}

/// V/U is [[a11, b13], [0, a33]] in the basis where V_2 = V_1 ⊕ U.
DispatchResult cr_cq_nc(const RMatrix& a, const Ctx& ctx, const std::string& label) {
  DispatchResult r;
  r.report.label = label;
  r.report.basis = RMatrix::identity(3);
  r.report.normal_form = a;
  std::vector<DPoly> ambient = borel3() + std::vector<DPoly>{yv(0, 1)};
  RepMap rho = entries_rep(3, {{0, 0}, {1, 1}, {1, 2}, {2, 2}}, "V1 + V/V1");
  GroupDescription inner =
      deferred(3, "τ = 0 for V1 ⊕ V/V1 (V/V1 of type CQ): delegated to a type-0 algorithm",
               borel3() + std::vector<DPoly>{yv(0, 1), yv(0, 2)} + torus_on_diagonal(diagonal_of(a), ctx.cfg).equations);
  r.group = pullback_intersection(3, {{rho, inner}}, ambient);
  r.report.path.push_back("determined by (B', V1 ⊕ V/V1); Z block free");
  r.report.premises.push_back("NC part gives τ(G) = 1 while the image on V1 ⊕ V/V1 has type 0, so Z ⊂ G");
  return r;
}

DispatchResult cr_case(const RMatrix& a, const Classification& v2, const Ctx& ctx) {
  // v2.basis columns: e1 and the complement (f, 1) of V_1 in V_2.
  RMatrix S = RMatrix::identity(3);
  S(0, 1) = v2.basis(0, 1);
  S(1, 1) = v2.basis(1, 1);
  RMatrix a1 = rebase(a, S);
  if (!is_zero(a1(0, 1))) throw std::logic_error("complement of V1 in V2 failed");
  RMatrix vu(2, 2);
  vu(0, 0) = a1(0, 0);
  vu(0, 1) = a1(0, 2);
  vu(1, 1) = a1(2, 2);
  Classification c3 = classify_triangular(vu, ctx.cfg.solver);
  Classification c2 = classify_triangular(a1.block(1, 1, 2, 2), ctx.cfg.solver);
  const TypeTag t2 = c2.tag, t3 = c3.tag;
  const std::string lab = "(CR," + to_string(t2) + "," + to_string(t3) + ")";
  DispatchResult r;
  if (t3 == TypeTag::CR || t2 == TypeTag::CR) {
    r = deferred_result(lab, "V is decomposable by the case analysis, but no decomposition was found",
                        borel3() + torus_on_diagonal(diagonal_of(a1), ctx.cfg).equations, a1);
    r.report.complete = false;
  } else if (t2 == TypeTag::CQ && t3 == TypeTag::CQ) {
    r = deferred_result(lab, "τ(G) = 0: ω(V/V1 ⊕ V/U) is faithful and of type CQ in both summands",
                        borel3() + std::vector<DPoly>{yv(0, 1)} + torus_on_diagonal(diagonal_of(a1), ctx.cfg).equations,
                        a1);
    r.report.premises.push_back("V/V1 and V/U of type CQ, ω(V/V1 ⊕ V/U) faithful: τ(G) = 0");
  } else if (t2 == TypeTag::CQ && t3 == TypeTag::NC) {
    r = cr_cq_nc(a1, ctx, lab);
  } else if (t2 == TypeTag::NC && t3 == TypeTag::CQ) {
    RMatrix perm(3, 3);
    perm(1, 0) = RatFunc(1);
    perm(0, 1) = RatFunc(1);
    perm(2, 2) = RatFunc(1);
    RMatrix a2 = rebase(a1, perm);
    r = cr_cq_nc(a2, ctx, lab);
    r.report.path.insert(r.report.path.begin(), "permute V1 and U: (CR,CQ,NC)");
    chain(r, perm);
  } else {
    r.report.label = lab;
    r.report.basis = RMatrix::identity(3);
    r.report.normal_form = a1;
    r.group = pullback_intersection(3, {{RepMap::diagonal(3), torus_on_diagonal(diagonal_of(a1), ctx.cfg)}},
                                    borel3() + std::vector<DPoly>{yv(0, 1)});
    r.report.path.push_back("determined by ω(V2 ⊕ V/V2); Y block free");
    r.report.premises.push_back("both quotients NC: R_u(G) = Y");
  }
  r.report.types = {TypeTag::CR, t2, t3};
  r.report.complete = r.report.complete && c2.complete && c3.complete;
  chain(r, S);
  return r;
}

DispatchResult ncnc_case(const RMatrix& a, const Ctx& ctx) {
  DispatchResult r;
  r.report.basis = RMatrix::identity(3);
  r.report.normal_form = a;
  auto noncommutative = [&](const std::string& why) {
    r.report.label = "(NC,NC)-noncommutative";
    r.report.premises.push_back(why);
    r.report.path.push_back("determined by V^diag; [B,B] ⊂ G");
    r.group = pullback_intersection(3, {{RepMap::diagonal(3), torus_on_diagonal(diagonal_of(a), ctx.cfg)}}, borel3());
  };
  const RatFunc chi = a(0, 0) - RatFunc(2) * a(1, 1) + a(2, 2);
  auto ld = is_log_derivative(chi, 1);
  if (!ld) {
    noncommutative("a11 - 2 a22 + a33 is not a logarithmic derivative: the action on Lie[B,B]/Lie Z is not isotypic");
    return r;
  }
  RMatrix S1 = RMatrix::identity(3);
  S1(0, 0) = ld->r;
  RMatrix a1 = rebase(a, S1);
  if (!is_zero(a1(0, 0) - RatFunc(2) * a1(1, 1) + a1(2, 2))) throw std::logic_error("isotypic normalization failed");
  RMatrix v2t(2, 2);
  v2t(0, 0) = a1(1, 1);
  v2t(0, 1) = a1(0, 1);
  v2t(1, 1) = a1(2, 2);
  MorphismSpace ms = morphisms(v2t, a1.block(1, 1, 2, 2), ctx.cfg.solver);
  r.report.complete = ms.complete;
  auto T = invertible_member(ms);
  if (!T) {
    noncommutative("isotypic, but V2 ⊗ (V/V2 ⊗ (V2/V1)*) is not isomorphic to V/V1: dim R_u(closure) = 3");
    return r;
  }
  if (!is_zero((*T)(1, 0))) throw std::logic_error("morphism between NC modules is not triangular");
  const RatFunc kappa = (*T)(0, 0) / (*T)(1, 1), tau2 = (*T)(0, 1) / (*T)(1, 1);
  if (!is_zero(d_x(kappa)) || !kappa.num().is_constant() || !kappa.den().is_constant())
    throw std::logic_error("proportionality constant depends on x");
  RMatrix S2 = RMatrix::identity(3);
  S2(1, 2) = tau2;
  RMatrix a2 = rebase(a1, S2);
  if (a2(1, 2) != kappa * a2(0, 1)) throw std::logic_error("proportional normal form failed");
  const Qt k = kappa.num().coeff(0) / kappa.den().coeff(0);
  r.report.label = "(NC,NC)-commutative";
  r.report.certificates.push_back({"isomorphism V2 ⊗ χ -> V/V1", *T});
  r.report.premises.push_back("isotypic: a11 - 2 a22 + a33 = r'/r with r = " + to_string(ld->r));
  r.report.premises.push_back("extension classes proportional (a23 = k a12 with k = " + to_string(k) +
                              "): R_u of the closure is 2-dim, [G,G] commutative");
  r.report.path.push_back("determined by V2 inside the Zariski closure");
  std::vector<DPoly> closure = borel3() + lattice_equations(diagonal_of(a2), ctx.cfg.m_bound);
  closure.push_back(yv(0, 0) * yv(1, 2) - DPoly(k) * yv(1, 1) * yv(0, 1));
  r.group = pullback_intersection(
      3, {{RepMap::select(3, {0, 1}, "V2"), nc2_group(a2(0, 0), a2(1, 1), ctx.cfg)}}, closure);
  r.report.normal_form = a2;
  r.report.basis = S1 * S2;
  return r;
}

DispatchResult cqnc_case(const RMatrix& a, const Ctx& ctx) {
  DispatchResult r;
  r.report.label = "(CQ,NC)-V2+V/V2";
  r.report.basis = RMatrix::identity(3);
  r.report.normal_form = a;
  SplitResult sp = split_extension(a.block(0, 0, 2, 2), unit(2, 0), ctx.cfg.solver);
  r.report.complete = sp.complete;
  if (sp.complement) {
    RMatrix S = RMatrix::identity(3);
    S(0, 1) = (*sp.complement)(0, 0);
    S(1, 1) = (*sp.complement)(1, 0);
    RMatrix a1 = rebase(a, S);
    r.report.normal_form = a1;
    r.report.basis = S;
    r.report.certificates.push_back({"complement of V1 in V2", *sp.complement});
    r.report.premises.push_back("V2 semisimple: determined by ω(V2 ⊕ V/V2) as in the (CR,NC,NC) argument");
    r.report.path.push_back("V2 semisimple");
    r.group = pullback_intersection(3, {{RepMap::diagonal(3), torus_on_diagonal(diagonal_of(a1), ctx.cfg)}},
                                    borel3() + std::vector<DPoly>{yv(0, 1)});
    return r;
  }
  auto via_v2 = [&](const RMatrix& b, const std::string& why) {
    r.report.premises.push_back(why);
    r.report.path.push_back("determined by ω(V2 ⊕ V/V2)");
    RepMap rho = entries_rep(3, {{0, 0}, {0, 1}, {1, 1}, {2, 2}}, "V2 + V/V2");
    GroupDescription inner = deferred(
        3, "τ = 0 for V2 ⊕ V/V2 (V2 of type CQ): delegated to a type-0 algorithm",
        borel3() + std::vector<DPoly>{yv(0, 2), yv(1, 2)} + torus_on_diagonal(diagonal_of(b), ctx.cfg).equations);
    r.group = pullback_intersection(3, {{rho, inner}}, borel3());
  };
  auto ld = is_log_derivative(a(0, 0) - a(1, 1), 1);
  if (!ld) {
    via_v2(a, "V1 and V2/V1 not isomorphic: R_u(G') ≠ 1");
    return r;
  }
  RMatrix S1 = RMatrix::identity(3);
  S1(0, 0) = ld->r;
  RMatrix a1 = rebase(a, S1);
  if (a1(0, 0) != a1(1, 1)) throw std::logic_error("normalization V1 = V2/V1 failed");
  r.report.basis = S1;
  r.report.normal_form = a1;
  // a12 = y' + k δ(a22 - a33) for some y in K and k in Q(t)?
  RMatrix zero(1, 1);
  ParamSolutionSpace ps =
      rational_solutions_param(zero, {RVector{a1(0, 1)}, RVector{d_t(a1(1, 1) - a1(2, 2))}}, ctx.cfg.solver);
  r.report.complete = r.report.complete && ps.complete;
  std::optional<Qt> kappa;
  for (const auto& s : ps.basis)
    if (!is_zero(s.c[0])) {
      kappa = -s.c[1] / s.c[0];
      break;
    }
  if (!kappa || is_zero(*kappa)) {
    via_v2(a1, "V2 not a twisted prolongation of a rank-1 module: R_u(G') ≠ 1");
    return r;
  }
  RMatrix can = prolongation_normal_form(a1.block(1, 1, 2, 2), *kappa);
  MorphismSpace ms = morphisms(a1, can, ctx.cfg.solver);
  r.report.complete = r.report.complete && ms.complete;
  auto T = invertible_member(ms);
  if (!T) {
    r.group = deferred(3, "(CQ,NC) with reductive G': no embedding into the prolongation of V/V1 was found",
                       borel3() + torus_on_diagonal(diagonal_of(a1), ctx.cfg).equations);
    r.report.label = "(CQ,NC)";
    r.report.complete = false;
    return r;
  }
  RMatrix D = RMatrix::identity(3);
  D(0, 0) = RatFunc(*kappa);
  RMatrix S2 = inverse_of(*T) * D;
  RMatrix a2 = rebase(a1, S2);
  if (a2 != prolongation_normal_form(a1.block(1, 1, 2, 2))) throw std::logic_error("prolongation normal form failed");
  r.report.label = "(CQ,NC)-prolongation";
  r.report.basis = S1 * S2;
  r.report.normal_form = a2;
  r.report.certificates.push_back({"isomorphism onto the prolongation normal form", *T});
  r.report.premises.push_back("V1 ≅ V2/V1 and a12 ≡ k δ(a22 - a33) mod d_x K with k = " + to_string(*kappa) +
                              ": G' reductive");
  r.report.path.push_back("V embeds in prolong((V/V1) ⊗ (V/V2)*) ⊗ V/V2");
  std::vector<DPoly> image = borel3();
  image.push_back(yv(0, 0) - yv(1, 1));
  image.push_back(yv(2, 2) * yv(0, 1) - yv(1, 1, 1) * yv(2, 2) + yv(1, 1) * yv(2, 2, 1));
  image.push_back(yv(2, 2) * yv(0, 2) - yv(1, 2, 1) * yv(2, 2) + yv(1, 2) * yv(2, 2, 1));
  r.group = pullback_intersection(
      3, {{RepMap::select(3, {1, 2}, "V/V1"), nc2_group(a2(1, 1), a2(2, 2), ctx.cfg)}}, image);
  r.group.add_flag("structural");
  return r;
}

RMatrix reversed_dual(const RMatrix& a) {
  const std::size_t n = a.rows();
  RMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d(i, j) = -a(n - 1 - j, n - 1 - i);
  return d;
}

RMatrix reversal(std::size_t n) {
  RMatrix J(n, n);
  for (std::size_t i = 0; i < n; ++i) J(i, n - 1 - i) = RatFunc(1);
  return J;
}

DispatchResult flag_case(const RMatrix& a, const Ctx& ctx) {
  Classification c1 = classify_triangular(a.block(0, 0, 2, 2), ctx.cfg.solver);
  Classification c2 = classify_triangular(a.block(1, 1, 2, 2), ctx.cfg.solver);
  const TypeTag t1 = c1.tag, t2 = c2.tag;
  const bool dual_route = (t1 == TypeTag::CQ && t2 == TypeTag::CR) || (t1 == TypeTag::NC && t2 == TypeTag::CR) ||
                          (t1 == TypeTag::NC && t2 == TypeTag::CQ);
  DispatchResult r;
  if (dual_route) {
    RMatrix ad = reversed_dual(a);
    DispatchResult rd = flag_case(ad, ctx);
    r.report = rd.report;
    r.report.label = dual_label(rd.report.label);
    r.report.via_dual = true;
    r.report.path.insert(r.report.path.begin(), "dualize and reverse the basis");
    if (r.report.types.size() >= 2) std::swap(r.report.types[0], r.report.types[1]);
    const RMatrix J = reversal(3);
    r.report.basis = J * inverse_of(rd.report.basis).transpose() * J;
    r.report.normal_form = reversed_dual(rd.report.normal_form);
    r.group = intersect({pullback(dual_reversal_rep(3), rd.group), borel(3)});
    r.group.dim = 3;
    if (rd.group.kind == Kind::Deferred) r.group.reduction = rd.group.reduction;
    return r;
  }
  const std::string pair = "(" + to_string(t1) + "," + to_string(t2) + ")";
  if (t1 == TypeTag::CQ && t2 == TypeTag::CQ) {
    r = deferred_result(pair, "τ(G) = 0: V^diag is constant", borel3() + torus_on_diagonal(diagonal_of(a), ctx.cfg).equations,
                        a);
    r.report.premises.push_back("V2 and V/V1 of type CQ: V^diag constant, τ(G) = 0");
  } else if (t1 == TypeTag::CR && t2 == TypeTag::CR) {
    r = deferred_result(pair, "V is decomposable by the case analysis, but no decomposition was found",
                        borel3() + torus_on_diagonal(diagonal_of(a), ctx.cfg).equations, a);
    r.report.complete = false;
  } else if (t1 == TypeTag::CR) {
    r = cr_case(a, c1, ctx);
  } else if (t1 == TypeTag::NC && t2 == TypeTag::NC) {
    r = ncnc_case(a, ctx);
  } else {
    r = cqnc_case(a, ctx);
  }
  if (r.report.types.empty()) r.report.types = {t1, t2};
  r.report.complete = r.report.complete && c1.complete && c2.complete;
  return r;
}

/// C ∩ span(e1, e2) for a 3x2 basis C, and a column of C outside it.
std::pair<RMatrix, RMatrix> line_in_v2(const RMatrix& C) {
  RMatrix line(3, 1);
  for (std::size_t i = 0; i < 3; ++i) line(i, 0) = C(i, 0) * C(2, 1) - C(i, 1) * C(2, 0);
  RMatrix other = C.block(0, is_zero(C(2, 0)) ? 1 : 0, 3, 1);
  return {line, other};
}

DispatchResult triangular_case(const RMatrix& a, const Ctx& ctx) {
  const SolverOptions& opt = ctx.cfg.solver;
  bool complete = true;
  RMatrix e1 = unit(3, 0), e2 = unit(3, 1);
  SplitResult s2 = split_extension(a, hcat({e1, e2}), opt);
  SplitResult s1 = split_extension(a.block(0, 0, 2, 2), unit(2, 0), opt);
  complete = s2.complete && s1.complete;
  std::optional<RMatrix> u;
  if (s1.complement) {
    RMatrix v(3, 1);
    v(0, 0) = (*s1.complement)(0, 0);
    v(1, 0) = (*s1.complement)(1, 0);
    u = v;
  }
  DispatchResult r;
  if (s2.complement && u) {
    RMatrix S = hcat({e1, *u, *s2.complement});
    RMatrix d = rebase(a, S);
    r.report.label = "SEMISIMPLE";
    r.report.basis = S;
    r.report.normal_form = d;
    r.report.path.push_back("V ≅ V^diag, all factors of dim 1");
    r.report.premises.push_back("G° commutative (diagonal): τ(G) = 0, group computed from the torus data");
    r.report.certificates.push_back({"diagonalizing basis", S});
    r.group = torus_group(diagonal_of(d), ctx.cfg.max_order, ctx.cfg.m_bound);
    r.report.complete = complete;
    return r;
  }
  // Decompositions V = W ⊕ U with W 2-dim.
  std::optional<RMatrix> S;
  std::string how;
  SplitResult sv1 = split_extension(a, e1, opt);
  complete = complete && sv1.complete;
  if (sv1.complement) {
    auto [line, other] = line_in_v2(*sv1.complement);
    S = hcat({line, other, e1});
    how = "V1 has an invariant complement";
  } else if (s2.complement) {
    S = hcat({e1, e2, *s2.complement});
    how = "V2 has an invariant complement";
  } else if (u) {
    SplitResult su = split_extension(a, *u, opt);
    complete = complete && su.complete;
    if (su.complement) {
      auto [line, other] = line_in_v2(*su.complement);
      S = hcat({line, other, *u});
      how = "the complement U of V1 in V2 has an invariant complement";
    }
  }
  if (S) {
    RMatrix d = rebase(a, *S);
    if (!is_zero(d(0, 2)) || !is_zero(d(1, 2)) || !is_zero(d(1, 0)) || !is_zero(d(2, 0)) || !is_zero(d(2, 1)))
      throw std::logic_error("decomposition failed verification");
    r = decomposable_case(d, ctx);
    r.report.path.insert(r.report.path.begin(), how);
    r.report.certificates.push_back({"decomposing basis", *S});
    chain(r, *S);
    r.report.complete = r.report.complete && complete;
    return r;
  }
  r = flag_case(a, ctx);
  r.report.complete = r.report.complete && complete;
  return r;
}

DispatchResult plane_case(const ModuleDiag& d, const Ctx& ctx) {
  const auto sizes = d.sizes();
  const std::size_t k = sizes[0];
  const RMatrix& a = d.triangular;
  RMatrix sub(3, k);
  for (std::size_t i = 0; i < k; ++i) sub(i, i) = RatFunc(1);
  SplitResult sp = split_extension(a, sub, ctx.cfg.solver);
  DispatchResult r;
  r.report.complete = sp.complete && d.complete;
  const bool w_first = k == 2;
  if (sp.complement) {
    RMatrix S = hcat({sub, *sp.complement});
    RMatrix b = rebase(a, S);
    r.report.label = "SEMISIMPLE";
    r.report.basis = S;
    r.report.normal_form = b;
    r.report.path.push_back("V = U ⊕ W with W simple of dim 2");
    r.report.certificates.push_back({"decomposing basis", S});
    const RMatrix w = w_first ? b.block(0, 0, 2, 2) : b.block(1, 1, 2, 2);
    const RatFunc u = w_first ? b(2, 2) : b(0, 0);
    r.group = semisimple_with_plane(w, u, w_first, ctx.cfg, &r.report.certificates);
    r.report.premises.push_back("G determined by (H, W ⊗ W*) and (H, ∧²W ⊕ U), H = GL(U) × GL(W)");
    return r;
  }
  r.report.label = "INDECOMPOSABLE-2DIM";
  r.report.basis = RMatrix::identity(3);
  r.report.normal_form = a;
  const RMatrix w = w_first ? a.block(0, 0, 2, 2) : a.block(1, 1, 2, 2);
  const RatFunc u = w_first ? a(2, 2) : a(0, 0);
  RMatrix U(1, 1);
  U(0, 0) = u;
  ConstancyResult cr = is_constant(tensor(dual(U), w), ctx.cfg.solver);
  r.report.complete = r.report.complete && cr.complete;
  GroupDescription gd = semisimple_with_plane(w, u, w_first, ctx.cfg, &r.report.certificates);
  std::vector<DPoly> ambient = block_triangular(sizes).equations;
  GroupDescription pulled = pullback(block_diagonal_rep(sizes), gd);
  if (cr.witness) {
    r.report.certificates.push_back({"constancy witness of W1* ⊗ W2", cr.witness->B});
    r.report.premises.push_back("Gal(W1* ⊗ W2) constant: τ(G) = 0");
    r.report.path.push_back("W1* ⊗ W2 constant");
    r.group = deferred(3, "τ(G) = 0 (indecomposable, W1* ⊗ W2 constant): delegated to a type-0 algorithm",
                       ambient + pulled.equations);
    return r;
  }
  r.report.premises.push_back("W1* ⊗ W2 non-constant: R_u(G) ≅ W, G determined by V^diag");
  r.report.path.push_back("determined by V^diag; unipotent block free");
  r.group = pullback_intersection(3, {{block_diagonal_rep(sizes), gd}}, ambient);
  return r;
}

}  // namespace

DispatchResult dispatch(const DiffSystem& v, const std::optional<FlagCertificate>& cert, const DispatchConfig& cfg) {
  if (v.rows() != 3 || !v.is_square()) throw DimensionError("dispatch expects a 3-dim system");
  Ctx ctx{cfg};
  ModuleDiag d = diag_decompose(v, cert, cfg.solver);
  const auto sizes = d.sizes();
  DispatchResult r;
  if (sizes.size() == 1) {
    r.report.label = "SIMPLE";
    r.report.basis = RMatrix::identity(3);
    r.report.normal_form = d.triangular;
    r.report.path.push_back("no invariant line in V or V*");
    r.group = diag_group(d, cfg);
  } else if (sizes.size() == 2) {
    r = plane_case(d, ctx);
  } else {
    r = triangular_case(d.triangular, ctx);
  }
  r.report.complete = r.report.complete && d.complete;
  r.report.basis = inverse_of(d.P) * r.report.basis;
  if (rebase(v, r.report.basis) != r.report.normal_form) throw std::logic_error("report basis does not reproduce the normal form");
  if (cert) r.report.path.insert(r.report.path.begin(), "flag from certificate");
  return r;
}

}  // namespace pdgal3
