#include "pdgal3/integrability.hpp"

#include <algorithm>

namespace pdgal3 {

// ---- constancy --------------------------------------------------------------

bool verify_witness(const DiffSystem& a, const RMatrix& B) {
  return d_x(B) - d_t(a) == a * B - B * a;
}

ConstancyResult is_constant(const DiffSystem& a, const SolverOptions& opt) {
  const std::size_t n = a.rows();
  RMatrix sys = kron(RMatrix::identity(n), a) - kron(a.transpose(), RMatrix::identity(n));
  RMatrix da = d_t(a);
  RVector rhs;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) rhs.push_back(da(i, j));
  ConstancyResult out;
  if (is_zero_vector(rhs)) {
    out.witness = ConstancyWitness{RMatrix(n, n)};
    return out;
  }
  SolutionSpace s = rational_solutions(sys, rhs, opt);
  out.complete = s.complete;
  if (!s.particular) return out;
  RMatrix B(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) B(i, j) = (*s.particular)[j * n + i];
  if (!verify_witness(a, B)) throw std::logic_error("constancy witness failed verification");
  out.witness = ConstancyWitness{B};
  return out;
}

// ---- telescoping ------------------------------------------------------------

RatFunc apply_delta(const OreOp& L, const RatFunc& f) {
  RatFunc s, g = f;
  for (std::size_t k = 0; k < L.coeffs().size(); ++k) {
    s += RatFunc(L.coeffs()[k]) * g;
    g = d_t(g);
  }
  return s;
}

namespace {

/// Coefficient vectors over Q(t) of the simple-pole remainders of the given
/// functions, written over a common denominator.
std::vector<std::vector<Qt>> remainder_vectors(const std::vector<RatFunc>& fs) {
  std::vector<HermiteReduction> hr;
  QtPoly D(Qt(1));
  for (const auto& f : fs) {
    hr.push_back(hermite_reduce(f));
    if (!hr.back().remainder_num.is_zero_poly()) D = lcm(D, hr.back().remainder_den);
  }
  std::vector<std::vector<Qt>> out;
  const std::size_t len = static_cast<std::size_t>(std::max(D.deg(), 0));
  for (const auto& h : hr) {
    std::vector<Qt> v(len, Qt(0));
    if (!h.remainder_num.is_zero_poly()) {
      QtPoly num = h.remainder_num * (D / h.remainder_den);
      for (std::size_t k = 0; k < len; ++k) v[k] = num.coeff(k);
    }
    out.push_back(std::move(v));
  }
  return out;
}

QtMatrix columns(const std::vector<std::vector<Qt>>& vs, std::size_t count) {
  const std::size_t len = vs.empty() ? 0 : vs[0].size();
  QtMatrix m(len, count);
  for (std::size_t j = 0; j < count; ++j)
    for (std::size_t i = 0; i < len; ++i) m(i, j) = vs[j][i];
  return m;
}

}  // namespace

Telescoper telescoper(const RatFunc& f, int max_order) {
  if (max_order < 0) throw std::invalid_argument("max_order must be non-negative");
  std::vector<RatFunc> ds{f};
  for (int k = 0; k < max_order; ++k) ds.push_back(d_t(ds.back()));
  auto vs = remainder_vectors(ds);
  Telescoper out;
  for (std::size_t h = 0; h <= static_cast<std::size_t>(max_order); ++h) {
    QtMatrix lower = columns(vs, h);
    std::size_t r = h == 0 ? 0 : lower.rank();
    QtMatrix with = columns(vs, h + 1);
    if (with.rank() == r) {
      // v_h = -sum c_i v_i
      std::vector<Qt> c(h + 1, Qt(0));
      c[h] = Qt(1);
      if (h > 0) {
        QtMatrix rhs(vs[h].size(), 1);
        for (std::size_t i = 0; i < vs[h].size(); ++i) rhs(i, 0) = -vs[h][i];
        auto sol = lower.solve(rhs);
        if (!sol) throw std::logic_error("telescoper: dependent column not in span");
        for (std::size_t i = 0; i < h; ++i) c[i] = (*sol)(i, 0);
      }
      out.op = OreOp(c);
      out.lower_rank = r;
      if (!rational_antiderivative(apply_delta(*out.op, f)))
        throw std::logic_error("telescoper failed verification");
      return out;
    }
  }
  out.bound_limited = true;
  out.lower_rank = columns(vs, static_cast<std::size_t>(max_order) + 1).rank();
  return out;
}

// ---- integer lattices ---------------------------------------------------------

namespace {

/// g = s a + t b
void ext_gcd_z(const Z& a, const Z& b, Z& g, Z& s, Z& t) {
  Z r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    Z q = r0 / r1;
    Z r2 = r0 - q * r1, s2 = s0 - q * s1, t2 = t0 - q * t1;
    r0 = r1, r1 = r2, s0 = s1, s1 = s2, t0 = t1, t1 = t2;
  }
  if (r0 < 0) r0 = -r0, s0 = -s0, t0 = -t0;
  g = r0, s = s0, t = t0;
}

}  // namespace

std::vector<std::vector<Z>> integer_kernel(const std::vector<std::vector<Z>>& rows, std::size_t n) {
  const std::size_t k = rows.size();
  // Columns of [A; I], column operations only.
  std::vector<std::vector<Z>> cols(n, std::vector<Z>(k + n, 0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < k; ++i) cols[j][i] = rows[i][j];
    cols[j][k + j] = 1;
  }
  std::size_t p = 0;
  for (std::size_t r = 0; r < k && p < n; ++r) {
    for (std::size_t j = p + 1; j < n; ++j) {
      if (cols[j][r] == 0) continue;
      if (cols[p][r] == 0) {
        std::swap(cols[p], cols[j]);
        continue;
      }
      Z g, s, t;
      ext_gcd_z(cols[p][r], cols[j][r], g, s, t);
      Z a = cols[p][r] / g, b = cols[j][r] / g;
      std::vector<Z> np(k + n), nj(k + n);
      for (std::size_t i = 0; i < k + n; ++i) {
        np[i] = s * cols[p][i] + t * cols[j][i];
        nj[i] = -b * cols[p][i] + a * cols[j][i];
      }
      cols[p] = std::move(np);
      cols[j] = std::move(nj);
    }
    if (cols[p][r] != 0) ++p;
  }
  std::vector<std::vector<Z>> out;
  for (std::size_t j = p; j < n; ++j) out.emplace_back(cols[j].begin() + static_cast<long>(k), cols[j].end());
  return out;
}

std::vector<std::vector<Z>> hermite_normal_form(std::vector<std::vector<Z>> rows) {
  if (rows.empty()) return rows;
  const std::size_t n = rows[0].size();
  std::size_t p = 0;
  for (std::size_t c = 0; c < n && p < rows.size(); ++c) {
    for (std::size_t i = p + 1; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      if (rows[p][c] == 0) {
        std::swap(rows[p], rows[i]);
        continue;
      }
      Z g, s, t;
      ext_gcd_z(rows[p][c], rows[i][c], g, s, t);
      Z a = rows[p][c] / g, b = rows[i][c] / g;
      std::vector<Z> np(n), ni(n);
      for (std::size_t j = 0; j < n; ++j) {
        np[j] = s * rows[p][j] + t * rows[i][j];
        ni[j] = -b * rows[p][j] + a * rows[i][j];
      }
      rows[p] = std::move(np);
      rows[i] = std::move(ni);
    }
    if (rows[p][c] == 0) continue;
    if (rows[p][c] < 0)
      for (auto& x : rows[p]) x = -x;
    for (std::size_t i = 0; i < p; ++i) {
      Z q;
      mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[p][c].get_mpz_t());
      if (q != 0)
        for (std::size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[p][j];
    }
    ++p;
  }
  rows.resize(p);
  return rows;
}

namespace {

/// Rows over Q of the condition sum m_i c_i = 0 for rational m.
std::vector<std::vector<Q>> expand_rows(const std::vector<Qt>& c) {
  QPoly den(Q(1));
  for (const auto& x : c) den = lcm(den, x.den());
  std::vector<QPoly> nums;
  int deg = -1;
  for (const auto& x : c) {
    nums.push_back(x.num() * (den / x.den()));
    deg = std::max(deg, nums.back().deg());
  }
  std::vector<std::vector<Q>> out;
  for (int k = 0; k <= deg; ++k) {
    std::vector<Q> row;
    bool nonzero = false;
    for (const auto& p : nums) {
      row.push_back(p.coeff(static_cast<std::size_t>(k)));
      nonzero = nonzero || row.back() != 0;
    }
    if (nonzero) out.push_back(std::move(row));
  }
  return out;
}

std::vector<Z> clear_denominators(const std::vector<Q>& row) {
  Z d = 1;
  for (const auto& q : row) d = lcm(d, Z(q.get_den()));
  std::vector<Z> out;
  for (const auto& q : row) out.push_back(Z(q * Q(d)));
  return out;
}

Q eval_generic(const Qt& a, const Q& t0) {
  return a.num().template eval<Q>(t0) / a.den().template eval<Q>(t0);
}

}  // namespace

CharacterLattice character_lattice(const std::vector<RatFunc>& diag, int m_bound) {
  const std::size_t n = diag.size();
  CharacterLattice lat;
  lat.m_bound = m_bound;
  if (n == 0) return lat;

  std::vector<std::vector<Q>> eqs;
  auto add_rows = [&](const std::vector<Qt>& c) {
    auto rs = expand_rows(c);
    eqs.insert(eqs.end(), rs.begin(), rs.end());
  };

  // Non-logarithmic parts must cancel.
  std::vector<RatFunc> hparts;
  for (const auto& a : diag) hparts.push_back(d_x(hermite_reduce(a).rational_part));
  {
    QtPoly D(Qt(1));
    for (const auto& h : hparts) D = lcm(D, h.den());
    int deg = -1;
    std::vector<QtPoly> nums;
    for (const auto& h : hparts) {
      nums.push_back(h.num() * (D / h.den()));
      deg = std::max(deg, nums.back().deg());
    }
    for (int k = 0; k <= deg; ++k) {
      std::vector<Qt> c;
      for (const auto& p : nums) c.push_back(p.coeff(static_cast<std::size_t>(k)));
      add_rows(c);
    }
  }

  // Residues: sum m_i e_i must be a rational constant on every piece.
  auto pieces = residue_pieces(diag);
  std::vector<std::vector<Qt>> constant_terms;
  for (const auto& piece : pieces) {
    int d = piece.pole.deg();
    for (int k = 1; k < d; ++k) {
      std::vector<Qt> c;
      for (const auto& e : piece.elements) c.push_back(e.coeff(static_cast<std::size_t>(k)));
      add_rows(c);
    }
    std::vector<Qt> c0, dc0;
    for (const auto& e : piece.elements) {
      c0.push_back(e.coeff(0));
      dc0.push_back(d_t(e.coeff(0)));
    }
    add_rows(dc0);
    constant_terms.push_back(c0);
  }

  std::vector<std::vector<Z>> zrows;
  for (const auto& r : eqs) zrows.push_back(clear_denominators(r));
  auto K = integer_kernel(zrows, n);  // Z-basis of the rational kernel meet Z^n
  const std::size_t r = K.size();

  // Integrality of the constant residues.
  Q t0 = 0;
  for (long c = 2;; ++c) {
    bool ok = true;
    for (const auto& row : constant_terms)
      for (const auto& x : row)
        if (x.den().template eval<Q>(Q(c)) == 0) ok = false;
    if (ok) {
      t0 = c;
      break;
    }
  }
  std::vector<std::vector<Q>> G;  // forms on mu
  for (const auto& row : constant_terms) {
    std::vector<Q> g(r, Q(0));
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < n; ++i) g[j] += eval_generic(row[i], t0) * Q(K[j][i]);
    G.push_back(g);
  }
  std::vector<std::vector<Z>> mus;
  if (G.empty()) {
    for (std::size_t j = 0; j < r; ++j) {
      std::vector<Z> e(r, 0);
      e[j] = 1;
      mus.push_back(e);
    }
  } else {
    Z D = 1;
    for (const auto& g : G)
      for (const auto& q : g) D = lcm(D, Z(q.get_den()));
    const std::size_t k = G.size();
    std::vector<std::vector<Z>> rows(k, std::vector<Z>(r + k, 0));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < r; ++j) rows[i][j] = Z(G[i][j] * Q(D));
      rows[i][r + i] = D;
    }
    for (const auto& v : integer_kernel(rows, r + k)) mus.emplace_back(v.begin(), v.begin() + static_cast<long>(r));
  }
  std::vector<std::vector<Z>> gens;
  for (const auto& mu : mus) {
    std::vector<Z> m(n, 0);
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < n; ++i) m[i] += mu[j] * K[j][i];
    gens.push_back(m);
  }
  lat.generators = hermite_normal_form(gens);
  for (const auto& m : lat.generators) {
    RatFunc s;
    for (std::size_t i = 0; i < n; ++i) s += RatFunc(Qt(Q(m[i]))) * diag[i];
    auto ld = is_log_derivative(s, 1);
    if (!ld) throw std::logic_error("character lattice generator has no witness");
    lat.witnesses.push_back(ld->r);
  }
  if (!verify_lattice(diag, lat)) throw std::logic_error("character lattice failed verification");
  return lat;
}

bool verify_lattice(const std::vector<RatFunc>& diag, const CharacterLattice& lat) {
  if (lat.witnesses.size() != lat.generators.size()) return false;
  for (std::size_t g = 0; g < lat.generators.size(); ++g) {
    RatFunc s;
    for (std::size_t i = 0; i < diag.size(); ++i) s += RatFunc(Qt(Q(lat.generators[g][i]))) * diag[i];
    const RatFunc& r = lat.witnesses[g];
    if (is_zero(r) || !is_zero(s * r - d_x(r))) return false;
  }
  return true;
}

// ---- rank one groups ------------------------------------------------------------

GroupDescription rank1_group(const RatFunc& a, int max_order, int m_bound) {
  DPoly z = DPoly::var(0, 0);
  if (auto ld = is_log_derivative(a, m_bound)) {
    GroupDescription g = explicit_group(1, {z.pow(ld->m) - DPoly(1)});
    g.kind = GroupDescription::Kind::Named;
    g.family = ld->m == 1 ? "trivial" : "cyclic";
    g.data = {"order divides " + std::to_string(ld->m), "r = " + to_string(ld->r)};
    return g;
  }
  Telescoper tel = telescoper(d_t(a), max_order);
  if (!tel.op) {
    GroupDescription g = gl(1);
    g.add_flag("bound-limited");
    g.data = {"no telescoper of order <= " + std::to_string(max_order)};
    return g;
  }
  DPoly l = z.delta() * z.pow(-1), eq;
  for (std::size_t k = 0; k < tel.op->coeffs().size(); ++k) {
    eq += DPoly(tel.op->coeffs()[k]) * l;
    l = l.delta();
  }
  GroupDescription g = explicit_group(1, {eq});
  g.kind = GroupDescription::Kind::Named;
  g.family = "rank1";
  g.data = {"L = " + to_string(*tel.op), "L(z'/z) = 0"};
  return g;
}

// ---- diagonal groups ---------------------------------------------------------

namespace {

std::string vec_string(const std::vector<Z>& m) {
  std::string s = "(";
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + m[i].get_str();
  return s + ")";
}

}  // namespace

GroupDescription torus_group(const std::vector<RatFunc>& a, int max_order, int m_bound) {
  if (max_order < 0) throw std::invalid_argument("max_order must be non-negative");
  const std::size_t n = a.size(), K = static_cast<std::size_t>(max_order);
  CharacterLattice lat = character_lattice(a, m_bound);
  if (!verify_lattice(a, lat)) throw std::logic_error("character lattice failed verification");
  auto z = [](std::size_t i) { return DPoly::var(static_cast<int>(i), static_cast<int>(i)); };

  std::vector<DPoly> eqs;
  std::vector<std::string> data;
  for (std::size_t g = 0; g < lat.generators.size(); ++g) {
    DPoly pos(1), neg(1);
    for (std::size_t i = 0; i < n; ++i) {
      const Z& m = lat.generators[g][i];
      if (m > 0) pos *= z(i).pow(static_cast<int>(m.get_si()));
      if (m < 0) neg *= z(i).pow(static_cast<int>(-m.get_si()));
    }
    eqs.push_back(pos - neg);
    data.push_back("character " + vec_string(lat.generators[g]) + ": r = " + to_string(lat.witnesses[g]));
  }

  // Column k*n + i holds the remainder of δ^(k+1) a_i.
  std::vector<RatFunc> fs;
  for (std::size_t k = 0; k <= K; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      RatFunc f = d_t(a[i]);
      for (std::size_t j = 0; j < k; ++j) f = d_t(f);
      fs.push_back(f);
    }
  const std::size_t C = fs.size();
  auto vs = remainder_vectors(fs);
  std::vector<std::vector<Qt>> ker;
  if (vs.empty() || vs[0].empty()) {
    for (std::size_t c = 0; c < C; ++c) {
      std::vector<Qt> e(C, Qt(0));
      e[c] = Qt(1);
      ker.push_back(std::move(e));
    }
  } else {
    ker = qt_nullspace(columns(vs, C));
  }
  // Echelon form with the highest column leading; the lowest leader per
  // coordinate gives a generator of the relation module.
  QtMatrix R(ker.size(), C);
  for (std::size_t r = 0; r < ker.size(); ++r)
    for (std::size_t c = 0; c < C; ++c) R(r, C - 1 - c) = ker[r][c];
  auto piv = R.rref();
  std::vector<int> best(n, -1);
  std::vector<std::size_t> best_order(n, K + 1);
  for (std::size_t r = 0; r < piv.size(); ++r) {
    const std::size_t lead = C - 1 - piv[r], k = lead / n, i = lead % n;
    if (k < best_order[i]) best_order[i] = k, best[i] = static_cast<int>(r);
  }
  // Order-0 relations already implied by the character lattice are dropped.
  QtMatrix span(0, n);
  auto add_to_span = [&](const std::vector<Qt>& v) {
    QtMatrix m(span.rows() + 1, n);
    m.set_block(0, 0, span);
    for (std::size_t i = 0; i < n; ++i) m(span.rows(), i) = v[i];
    if (m.rank() == span.rows() + 1) {
      span = m;
      return true;
    }
    return false;
  };
  for (const auto& g : lat.generators) {
    std::vector<Qt> v;
    for (const auto& m : g) v.emplace_back(Q(m));
    add_to_span(v);
  }
  bool limited = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (best[i] < 0) {
      limited = true;
      continue;
    }
    std::vector<Qt> c(C);
    for (std::size_t col = 0; col < C; ++col) c[col] = R(static_cast<std::size_t>(best[i]), C - 1 - col);
    if (best_order[i] == 0) {
      std::vector<Qt> v(c.begin(), c.begin() + static_cast<long>(n));
      if (!add_to_span(v)) continue;
    }
    DPoly eq;
    std::string rel;
    for (std::size_t j = 0; j < n; ++j) {
      DPoly l = z(j).delta() * z(j).pow(-1);
      for (std::size_t k = 0; k <= K; ++k, l = l.delta()) {
        const Qt& cc = c[k * n + j];
        if (is_zero(cc)) continue;
        eq += DPoly(cc) * l;
        rel += (rel.empty() ? "" : " + ") + std::string("(") + to_string(cc) + ")*d^" + std::to_string(k) + "(z" +
               std::to_string(j + 1) + "'/z" + std::to_string(j + 1) + ")";
      }
    }
    eqs.push_back(eq);
    data.push_back("relation " + rel + " = 0");
  }
  GroupDescription g = diagonal_group(n, eqs, data);
  if (limited) g.add_flag("bound-limited");
  return g;
}

}  // namespace pdgal3
