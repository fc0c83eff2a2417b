#include "pdgal3/linear_solvers.hpp"

#include <algorithm>
#include <map>

namespace pdgal3 {

RMatrix d_x(const RMatrix& m) {
  return m.map([](const RatFunc& a) { return d_x(a); });
}
RMatrix d_t(const RMatrix& m) {
  return m.map([](const RatFunc& a) { return d_t(a); });
}
RVector d_x(const RVector& v) {
  RVector r;
  for (const auto& a : v) r.push_back(d_x(a));
  return r;
}
RVector apply(const RMatrix& m, const RVector& v) {
  if (m.cols() != v.size()) throw DimensionError("matrix-vector shape mismatch");
  RVector r(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!is_zero(m(i, j)) && !is_zero(v[j])) r[i] += m(i, j) * v[j];
  return r;
}
bool is_zero_vector(const RVector& v) {
  return std::all_of(v.begin(), v.end(), [](const RatFunc& a) { return is_zero(a); });
}

// ---- operators --------------------------------------------------------------

OreOp::OreOp(std::vector<Qt> coeffs) : c_(std::move(coeffs)) {
  while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
  if (c_.empty()) throw std::invalid_argument("zero operator");
  const Qt lc = c_.back();
  for (auto& c : c_) c /= lc;
}

OreOp OreOp::power(int k) {
  std::vector<Qt> c(static_cast<std::size_t>(k) + 1, Qt(0));
  c.back() = Qt(1);
  return OreOp(std::move(c));
}

Qt OreOp::apply(const Qt& f) const {
  Qt r(0), d = f;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (!is_zero(c_[i])) r += c_[i] * d;
    if (i + 1 < c_.size()) d = d_t(d);
  }
  return r;
}

RatFunc OreOp::apply(const RatFunc& f) const {
  RatFunc r(0), d = f;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (!is_zero(c_[i])) r += RatFunc(c_[i]) * d;
    if (i + 1 < c_.size()) d = d_t(d);
  }
  return r;
}

namespace {

/// delta * X for an operator given by its coefficient list.
std::vector<Qt> delta_times(const std::vector<Qt>& x) {
  std::vector<Qt> r(x.size() + 1, Qt(0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    r[i] += d_t(x[i]);
    r[i + 1] += x[i];
  }
  return r;
}

}  // namespace

OreOp operator*(const OreOp& a, const OreOp& b) {
  std::vector<Qt> acc(a.c_.size() + b.c_.size() - 1, Qt(0));
  std::vector<Qt> di = b.c_;  // delta^i * b
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t k = 0; k < di.size(); ++k)
      if (!is_zero(a.c_[i])) acc[k] += a.c_[i] * di[k];
    if (i + 1 < a.c_.size()) di = delta_times(di);
  }
  return OreOp(std::move(acc));
}

std::string to_string(const OreOp& op) {
  std::vector<std::string> terms;
  const auto& c = op.coeffs();
  for (int k = op.order(); k >= 0; --k) {
    const Qt& a = c[static_cast<std::size_t>(k)];
    if (is_zero(a)) continue;
    std::string d = k == 0 ? "" : (k == 1 ? "δ" : "δ^" + std::to_string(k));
    std::string cs = to_string(a);
    std::string term;
    if (k == 0)
      term = cs;
    else if (a == Qt(1))
      term = d;
    else if (a == Qt(-1))
      term = "-" + d;
    else if (cs.find(' ') != std::string::npos)
      term = "(" + cs + ")*" + d;
    else
      term = cs + "*" + d;
    terms.push_back(term);
  }
  std::string out = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i)
    out += terms[i][0] == '-' ? " - " + terms[i].substr(1) : " + " + terms[i];
  return out;
}

std::vector<Qt> right_remainder_power(const OreOp& L, int k) {
  const int h = L.order();
  std::vector<Qt> r(static_cast<std::size_t>(h), Qt(0));
  if (h == 0) return r;
  if (k < h) {
    r[static_cast<std::size_t>(k)] = Qt(1);
    return r;
  }
  r = right_remainder_power(L, h - 1);
  for (int j = h - 1; j < k; ++j) {
    std::vector<Qt> n = delta_times(r);
    const Qt top = n.back();
    n.pop_back();
    if (!is_zero(top))
      for (int i = 0; i < h; ++i) n[static_cast<std::size_t>(i)] -= top * L.coeffs()[static_cast<std::size_t>(i)];
    r = std::move(n);
  }
  return r;
}

std::vector<Qt> right_remainder(const std::vector<Qt>& op, const OreOp& L) {
  const int h = L.order();
  std::vector<Qt> r(static_cast<std::size_t>(h), Qt(0));
  if (h == 0) return r;
  std::vector<Qt> p;  // remainder of delta^k, updated incrementally
  for (std::size_t k = 0; k < op.size(); ++k) {
    if (static_cast<int>(k) < h) {
      p.assign(static_cast<std::size_t>(h), Qt(0));
      p[k] = Qt(1);
    } else {
      std::vector<Qt> n = delta_times(p);
      const Qt top = n.back();
      n.pop_back();
      if (!is_zero(top))
        for (int i = 0; i < h; ++i) n[static_cast<std::size_t>(i)] -= top * L.coeffs()[static_cast<std::size_t>(i)];
      p = std::move(n);
    }
    if (is_zero(op[k])) continue;
    for (int i = 0; i < h; ++i) r[static_cast<std::size_t>(i)] += op[k] * p[static_cast<std::size_t>(i)];
  }
  return r;
}

OreOp annihilator(const Qt& r) {
  if (is_zero(r)) return OreOp();
  return OreOp({-(d_t(r) / r), Qt(1)});
}

OreOp annihilator(const QtPoly& rho0, const QtPoly& p) {
  QtPoly rho = rho0 % p;
  if (rho.is_zero_poly()) return OreOp();
  const std::size_t d = static_cast<std::size_t>(p.deg());
  // Derivation on Q(t)[x]/(p) lifting delta: x' = -p_t / p_x.
  const QtPoly xprime = (-(d_t(p) * inverse_mod(p.derivative(), p))) % p;
  auto D = [&](const QtPoly& u) { return (d_t(u) + u.derivative() * xprime) % p; };
  std::vector<QtPoly> seq{rho};
  while (true) {
    const std::size_t h = seq.size();
    QtPoly next = D(seq.back());
    QtMatrix m(d, h);
    for (std::size_t j = 0; j < h; ++j)
      for (std::size_t i = 0; i < d; ++i) m(i, j) = seq[j].coeff(i);
    QtMatrix rhs(d, 1);
    for (std::size_t i = 0; i < d; ++i) rhs(i, 0) = -next.coeff(i);
    if (auto sol = m.solve(rhs)) {
      std::vector<Qt> c;
      for (std::size_t j = 0; j < h; ++j) c.push_back((*sol)(j, 0));
      c.emplace_back(1);
      return OreOp(std::move(c));
    }
    seq.push_back(next);
  }
}

OreOp lclm(const std::vector<OreOp>& ops) {
  std::vector<OreOp> nz;
  int lo = 0, hi = 0;
  for (const auto& L : ops) {
    if (L.order() == 0) continue;
    nz.push_back(L);
    lo = std::max(lo, L.order());
    hi += L.order();
  }
  if (nz.empty()) return OreOp();
  for (int N = lo; N <= hi; ++N) {
    std::size_t rows = 0;
    for (const auto& L : nz) rows += static_cast<std::size_t>(L.order());
    QtMatrix m(rows, static_cast<std::size_t>(N));
    QtMatrix rhs(rows, 1);
    std::size_t r0 = 0;
    for (const auto& L : nz) {
      for (int j = 0; j <= N; ++j) {
        auto rem = right_remainder_power(L, j);
        for (std::size_t i = 0; i < rem.size(); ++i) {
          if (j < N)
            m(r0 + i, static_cast<std::size_t>(j)) = rem[i];
          else
            rhs(r0 + i, 0) = -rem[i];
        }
      }
      r0 += static_cast<std::size_t>(L.order());
    }
    if (auto sol = m.solve(rhs)) {
      std::vector<Qt> c;
      for (int j = 0; j < N; ++j) c.push_back((*sol)(static_cast<std::size_t>(j), 0));
      c.emplace_back(1);
      return OreOp(std::move(c));
    }
  }
  throw std::logic_error("lclm: no common multiple found");
}

// ---- local data -------------------------------------------------------------

namespace {

int deg_at_infinity(const RatFunc& a) {
  if (is_zero(a)) return -(1 << 20);
  return a.num().deg() - a.den().deg();
}

}  // namespace

Matrix<QtPoly> residue_matrix(const RMatrix& A, const QtPoly& p) {
  Matrix<QtPoly> R(A.rows(), A.cols());
  const QtPoly dp = p.derivative();
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) {
      const RatFunc& a = A(i, j);
      if (is_zero(a)) continue;
      auto [w, rem] = a.den().divmod(p);
      if (!rem.is_zero_poly()) continue;
      R(i, j) = (a.num() * inverse_mod((w * dp) % p, p)) % p;
    }
  return R;
}

QtMatrix residue_at_infinity(const RMatrix& A) {
  QtMatrix R(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) {
      const RatFunc& a = A(i, j);
      if (deg_at_infinity(a) == -1) R(i, j) = a.num().lc() / a.den().lc();
    }
  return R;
}

QtPoly norm_charpoly(const Matrix<QtPoly>& R, const QtPoly& p) {
  const std::size_t n = R.rows(), d = static_cast<std::size_t>(p.deg());
  QtMatrix M(n * d, n * d);
  for (std::size_t i = 0; i < n; ++i) {
    QtPoly xj(Qt(1));
    for (std::size_t j = 0; j < d; ++j) {
      // Image of e_i x^j.
      for (std::size_t r = 0; r < n; ++r) {
        if (R(r, i).is_zero_poly()) continue;
        QtPoly c = (R(r, i) * xj) % p;
        for (std::size_t k = 0; k < d; ++k) M(r * d + k, i * d + j) = c.coeff(k);
      }
      xj = (xj * QtPoly::var()) % p;
    }
  }
  return M.charpoly();
}

std::vector<long> integer_roots(const QtPoly& f) {
  std::vector<long> out;
  if (f.deg() <= 0) return out;
  QPoly l(Q(1));
  for (const auto& c : f.coeffs()) l = lcm(l, c.den());
  // f * l = sum_j t^j h_j(lambda)
  std::vector<std::vector<Q>> h;
  for (std::size_t k = 0; k < f.coeffs().size(); ++k) {
    const Qt& c = f.coeffs()[k];
    QPoly g = c.num() * (l / c.den());
    for (std::size_t j = 0; j < g.coeffs().size(); ++j) {
      if (h.size() <= j) h.resize(j + 1, std::vector<Q>(f.coeffs().size(), Q(0)));
      h[j][k] = g.coeffs()[j];
    }
  }
  QPoly g;
  for (auto& hj : h) g = gcd(g, QPoly(hj));
  for (const Q& r : rational_roots(g))
    if (is_integer(r) && r.get_num().fits_slong_p()) out.push_back(r.get_num().get_si());
  return out;
}

bool is_fuchsian(const RMatrix& A) {
  std::vector<QtPoly> dens;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) {
      const RatFunc& a = A(i, j);
      if (deg_at_infinity(a) > -1) return false;
      if (gcd(a.den(), a.den().derivative()).deg() > 0) return false;
    }
  return true;
}

// ---- linear algebra over Q(t) ------------------------------------------------

namespace {

Q eval_at(const QPoly& p, const Q& t0) {
  Q v(0);
  for (std::size_t k = p.coeffs().size(); k-- > 0;) v = v * t0 + p.coeffs()[k];
  return v;
}

struct QRref {
  std::vector<std::size_t> pivots;
  std::vector<std::vector<Q>> rows;  // reduced, one per pivot
};

QRref rref(std::vector<std::vector<Q>> a, std::size_t C) {
  QRref out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[r], a[p]);
    const Q inv = 1 / a[r][c];
    for (std::size_t j = c; j < C; ++j) a[r][j] *= inv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Q f = a[i][c];
      for (std::size_t j = c; j < C; ++j)
        if (a[r][j] != 0) a[i][j] -= f * a[r][j];
    }
    out.pivots.push_back(c);
    ++r;
  }
  a.resize(r);
  out.rows = std::move(a);
  return out;
}

/// Polynomial through the first N points.
QPoly newton(const std::vector<Q>& xs, const std::vector<Q>& ys, std::size_t N) {
  std::vector<Q> dd(ys.begin(), ys.begin() + static_cast<long>(N));
  for (std::size_t k = 1; k < N; ++k)
    for (std::size_t i = N - 1; i >= k; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - k]);
  QPoly P;
  for (std::size_t k = N; k-- > 0;) P = P * QPoly(std::vector<Q>{-xs[k], Q(1)}) + QPoly(dd[k]);
  return P;
}

/// Rational function of degree sum < #points - 1 through (xs, ys), by the
/// extended Euclidean algorithm on the interpolating polynomial; the step
/// after the largest quotient is taken. The last point is held back as a check.
std::optional<Qt> reconstruct(const std::vector<Q>& xs, const std::vector<Q>& ys) {
  const std::size_t N = xs.size() - 1;
  const QPoly P = newton(xs, ys, N);
  QPoly m(Q(1));
  for (std::size_t k = 0; k < N; ++k) m *= QPoly(std::vector<Q>{-xs[k], Q(1)});
  // With r_i = s_i P mod m, deg r_i + deg s_i = N - deg(r_{i-1} div r_i).
  QPoly r0 = m, r1 = P, s0, s1(Q(1));
  QPoly best_r, best_s;
  int best_q = 1;
  while (!r1.is_zero_poly()) {
    auto [q, r2] = r0.divmod(r1);
    if (q.deg() > best_q) {
      best_q = q.deg();
      best_r = r1;
      best_s = s1;
    }
    QPoly s2 = s0 - q * s1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (P.is_zero_poly()) {
    best_r = QPoly();
    best_s = QPoly(Q(1));
  } else if (best_s.is_zero_poly()) {
    return std::nullopt;
  }
  for (std::size_t k = 0; k < N; ++k)
    if (eval_at(best_s, xs[k]) == 0) return std::nullopt;
  const Q sl = eval_at(best_s, xs[N]);
  if (sl == 0 || eval_at(best_r, xs[N]) / sl != ys[N]) return std::nullopt;
  return Qt(best_r, best_s);
}

/// Kernel over Q(t) of polynomial rows from values of the reduced kernel at
/// integer points t0. The reduced basis at the generic pivot set is unique,
/// so its entries are rational functions of t. Exact verification makes the
/// result sound; it is complete because a specialization only gains kernel.
std::optional<std::vector<std::vector<Qt>>> kernel_by_interpolation(const std::vector<std::vector<QPoly>>& a,
                                                                    std::size_t C) {
  // Kernel entries are ratios of minors; their degrees are at most the sum
  // of the largest row degrees.
  std::vector<int> rdeg;
  for (const auto& row : a) {
    int d = 0;
    for (const auto& e : row) d = std::max(d, e.deg());
    rdeg.push_back(d);
  }
  std::sort(rdeg.rbegin(), rdeg.rend());
  std::size_t bound = 0;
  for (std::size_t i = 0; i < std::min(rdeg.size(), C); ++i) bound += static_cast<std::size_t>(rdeg[i]);
  const std::size_t kMaxPoints = std::min<std::size_t>(400, 2 * bound + 4);
  std::vector<std::size_t> pivots;
  std::vector<Q> xs;
  // values[f][i]: entry at pivot i of the kernel vector of free column f.
  std::vector<std::vector<std::vector<Q>>> values;
  std::vector<std::size_t> frees;
  std::size_t next_try = 6;
  for (long step = 0; xs.size() < kMaxPoints; ++step) {
    const Q t0(step % 2 ? -(step + 1) / 2 : step / 2 + 1);
    std::vector<std::vector<Q>> m(a.size(), std::vector<Q>(C));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < C; ++j)
        if (!a[i][j].is_zero_poly()) m[i][j] = eval_at(a[i][j], t0);
    QRref red = rref(std::move(m), C);
    // Elimination over Q[t] is cheap at low rank.
    if (step == 0 && red.pivots.size() < 16) return std::nullopt;
    if (red.pivots != pivots) {
      // Generic pivots: largest rank, then lexicographically smallest.
      const bool better = red.pivots.size() > pivots.size() ||
                          (red.pivots.size() == pivots.size() && red.pivots < pivots);
      if (!better) continue;
      pivots = red.pivots;
      xs.clear();
      frees.clear();
      std::vector<bool> is_pivot(C, false);
      for (auto c : pivots) is_pivot[c] = true;
      for (std::size_t f = 0; f < C; ++f)
        if (!is_pivot[f]) frees.push_back(f);
      values.assign(frees.size(), std::vector<std::vector<Q>>(pivots.size()));
      next_try = 6;
    }
    if (frees.empty()) return std::vector<std::vector<Qt>>{};
    xs.push_back(t0);
    for (std::size_t k = 0; k < frees.size(); ++k)
      for (std::size_t i = 0; i < pivots.size(); ++i) values[k][i].push_back(-red.rows[i][frees[k]]);
    if (xs.size() < next_try) continue;
    next_try = xs.size() + std::max<std::size_t>(2, xs.size() / 3);
    // Entries share denominators (minors of the pivot columns): once one is
    // known, most entries only need a polynomial interpolation.
    const std::size_t N = xs.size();
    QPoly common(Q(1));
    std::vector<Q> common_at(N, Q(1));
    std::vector<std::vector<Qt>> out;
    bool ok = true;
    for (std::size_t k = 0; k < frees.size() && ok; ++k) {
      std::vector<Qt> v(C, Qt(0));
      v[frees[k]] = Qt(1);
      for (std::size_t i = 0; i < pivots.size() && ok; ++i) {
        std::vector<Q> scaled(N);
        for (std::size_t p = 0; p < N; ++p) scaled[p] = values[k][i][p] * common_at[p];
        const QPoly num = newton(xs, scaled, N - 1);
        if (eval_at(num, xs[N - 1]) == scaled[N - 1]) {
          v[pivots[i]] = Qt(num, common);
          continue;
        }
        auto e = reconstruct(xs, values[k][i]);
        if (!e) {
          ok = false;
          break;
        }
        v[pivots[i]] = std::move(*e);
        const QPoly den = e->den();
        if (den.deg() > 0) {
          common = lcm(common, den);
          for (std::size_t p = 0; p < N; ++p) common_at[p] = eval_at(common, xs[p]);
        }
      }
      out.push_back(std::move(v));
    }
    if (!ok) continue;
    for (const auto& row : a) {
      for (const auto& v : out) {
        Qt acc(0);
        for (std::size_t j = 0; j < C; ++j)
          if (!row[j].is_zero_poly() && !is_zero(v[j])) acc += Qt(row[j]) * v[j];
        if (!is_zero(acc)) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) return out;
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::vector<Qt>> qt_nullspace(const QtMatrix& M) {
  const std::size_t R = M.rows(), C = M.cols();
  // Rows cleared of denominators; fraction-free Gauss-Jordan over Q[t].
  std::vector<std::vector<QPoly>> a;
  for (std::size_t i = 0; i < R; ++i) {
    QPoly l(Q(1));
    bool nonzero = false;
    for (std::size_t j = 0; j < C; ++j)
      if (!is_zero(M(i, j))) {
        l = lcm(l, M(i, j).den());
        nonzero = true;
      }
    if (!nonzero) continue;
    std::vector<QPoly> row(C);
    for (std::size_t j = 0; j < C; ++j)
      if (!is_zero(M(i, j))) row[j] = M(i, j).num() * (l / M(i, j).den());
    a.push_back(std::move(row));
  }
  if (C >= 16 && !a.empty())
    if (auto k = kernel_by_interpolation(a, C)) return *k;
  QPoly prev(Q(1));
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < a.size(); ++c) {
    std::size_t best = a.size();
    for (std::size_t i = r; i < a.size(); ++i)
      if (!a[i][c].is_zero_poly() && (best == a.size() || a[i][c].deg() < a[best][c].deg())) best = i;
    if (best == a.size()) continue;
    std::swap(a[r], a[best]);
    const QPoly p = a[r][c];
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r) continue;
      const QPoly f = a[i][c];
      for (std::size_t j = 0; j < C; ++j) {
        QPoly v = p * a[i][j];
        if (!f.is_zero_poly() && !a[r][j].is_zero_poly()) v -= f * a[r][j];
        if (prev.deg() > 0 || prev.lc() != 1) {
          auto [q, rem] = v.divmod(prev);
          if (!rem.is_zero_poly()) throw std::logic_error("fraction-free elimination: inexact division");
          v = std::move(q);
        }
        a[i][j] = std::move(v);
      }
    }
    prev = p;
    pivots.push_back(c);
    ++r;
  }
  // Pivot entries all equal the last pivot d; the kernel vector of a free
  // column f has d at f and -a[i][f] at pivot i.
  std::vector<std::vector<Qt>> out;
  std::vector<bool> is_pivot(C, false);
  for (auto c : pivots) is_pivot[c] = true;
  for (std::size_t f = 0; f < C; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Qt> v(C, Qt(0));
    v[f] = Qt(1);
    for (std::size_t i = 0; i < pivots.size(); ++i)
      if (!a[i][f].is_zero_poly()) v[pivots[i]] = -Qt(a[i][f]) / Qt(a[i][pivots[i]]);
    out.push_back(std::move(v));
  }
  return out;
}

// ---- rational solutions -----------------------------------------------------

namespace {

QtPoly shift_up(const QtPoly& p, std::size_t k) {
  if (p.is_zero_poly() || k == 0) return p;
  std::vector<Qt> c(k, Qt(0));
  c.insert(c.end(), p.coeffs().begin(), p.coeffs().end());
  return QtPoly(std::move(c));
}

/// A(t0, x) over Q(x), where the variable of Qt stands for x. Empty when t0
/// is a pole of a coefficient or lowers the degree of an entry.
std::optional<QtMatrix> specialize(const RMatrix& A, const Q& t0) {
  auto spec = [&](const QtPoly& p) -> std::optional<QPoly> {
    std::vector<Q> c;
    for (const auto& a : p.coeffs()) {
      Q d = a.den().eval<Q>(t0);
      if (d == 0) return std::nullopt;
      c.push_back(a.num().eval<Q>(t0) / d);
    }
    QPoly q(std::move(c));
    if (q.deg() != p.deg()) return std::nullopt;
    return q;
  };
  QtMatrix out(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) {
      if (is_zero(A(i, j))) continue;
      auto n = spec(A(i, j).num()), d = spec(A(i, j).den());
      if (!n || !d) return std::nullopt;
      out(i, j) = Qt(*n) / Qt(*d);
    }
  return out;
}

int deg_at_infinity(const Qt& a) {
  if (is_zero(a)) return -(1 << 20);
  return a.num().deg() - a.den().deg();
}

/// Bound on deg_inf of rational solutions through a cyclic vector: the
/// scalar equation L(y) = 0 satisfied by y = c.Y forces deg y to be a root of
/// the indicial polynomial at infinity, and Y = Q^-1 (y, y', ...). Works on
/// a specialization of t, where the algebra is over Q(x).
std::optional<int> growth_bound_specialized(const QtMatrix& A) {
  const std::size_t n = A.rows();
  const Qt x = Qt::var();
  for (std::size_t attempt = 0; attempt < n + 5; ++attempt) {
    QtMatrix rows(n + 1, n);
    // Candidates: unit vectors, two dense constant vectors, then vectors
    // with polynomial entries, which are needed when A is constant with
    // repeated Jordan structure.
    for (std::size_t j = 0; j < n; ++j) {
      if (attempt < n)
        rows(0, j) = Qt(j == attempt ? 1 : 0);
      else if (attempt < n + 2)
        rows(0, j) = Qt(static_cast<long>((j + 1) * (attempt - n + 2) % 7 + 1));
      else
        rows(0, j) = pow(x + Qt(static_cast<long>(attempt - n - 2)), static_cast<int>(j));
    }
    for (std::size_t k = 1; k <= n; ++k) {
      QtMatrix prev = rows.block(k - 1, 0, 1, n);
      rows.set_block(k, 0, prev.map([](const Qt& a) { return d_t(a); }) + prev * A);
    }
    // Cheap screen: full rank at two numeric points of x.
    bool full = false;
    for (long x0 : {1009L, -2003L}) {
      Matrix<Q> num(n, n);
      bool pole = false;
      for (std::size_t i = 0; i < n && !pole; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          Q d = rows(i, j).den().eval<Q>(Q(x0));
          if (d == 0) {
            pole = true;
            break;
          }
          num(i, j) = rows(i, j).num().eval<Q>(Q(x0)) / d;
        }
      if (!pole && num.rank() == n) full = true;
    }
    if (!full) continue;
    // alpha with r_n = sum alpha_k r_k, and the inverse of the cyclic
    // matrix, both read off fraction-free kernels.
    QtMatrix ka(n, n + 1), ki(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        ka(i, k) = rows(k, i);
        ki(i, k) = rows(i, k);
      }
      ka(i, n) = -rows(n, i);
      ki(i, n + i) = Qt(-1);
    }
    auto kerA = qt_nullspace(ka);
    if (kerA.size() != 1 || is_zero(kerA[0][n])) continue;
    // y^(n) = sum alpha_k y^(k).
    std::vector<Qt> a(n + 1);
    for (std::size_t k = 0; k < n; ++k) a[k] = -kerA[0][k] / kerA[0][n];
    a[n] = Qt(1);
    auto kerI = qt_nullspace(ki);
    int w = -(1 << 20);
    for (std::size_t k = 0; k <= n; ++k)
      if (!is_zero(a[k])) w = std::max(w, deg_at_infinity(a[k]) - static_cast<int>(k));
    // Indicial polynomial sum lc(a_k) g (g-1) ... (g-k+1).
    QPoly ind;
    for (std::size_t k = 0; k <= n; ++k) {
      if (is_zero(a[k]) || deg_at_infinity(a[k]) - static_cast<int>(k) != w) continue;
      QPoly ff(Q(1));
      for (std::size_t i = 0; i < k; ++i) ff *= QPoly(std::vector<Q>{Q(-static_cast<long>(i)), Q(1)});
      ind += ff.scaled(a[k].num().lc() / a[k].den().lc());
    }
    int gy = -(1 << 20);
    for (const Q& r : rational_roots(ind))
      if (is_integer(r)) gy = std::max(gy, static_cast<int>(r.get_num().get_si()));
    if (gy == -(1 << 20)) return gy;
    int extra = -(1 << 20);
    for (const auto& v : kerI)
      for (std::size_t i = 0; i < n; ++i)
        if (!is_zero(v[i])) extra = std::max(extra, deg_at_infinity(v[i]));
    return gy + extra;
  }
  return std::nullopt;
}

/// The bound is taken at two specializations of t and the larger is used;
/// a generic t0 preserves the degrees involved.
std::optional<int> growth_bound_at_infinity(const RMatrix& A) {
  static const Q points[] = {Q(7), Q(-11), Q(13), Q(-17), Q(19), Q(-23), Q(29), Q(-31)};
  int found = 0, best = -(1 << 20);
  for (const Q& t0 : points) {
    auto s = specialize(A, t0);
    if (!s) continue;
    auto g = growth_bound_specialized(*s);
    if (!g) return std::nullopt;
    best = std::max(best, *g);
    if (++found == 2) break;
  }
  if (found == 0) return std::nullopt;
  return best;
}

struct Bounds {
  QtPoly denominator;
  int numerator_degree = -1;
  bool complete = true;
  bool specialized = false;  // degree bound at infinity from specializations
};

Bounds solution_bounds(const RMatrix& A, const std::vector<RVector>& rhs, const SolverOptions& opt) {
  const std::size_t n = A.rows();
  Bounds b;
  b.denominator = QtPoly(Qt(1));
  std::vector<QtPoly> dens;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dens.push_back(A(i, j).den());
  for (const auto& v : rhs)
    for (const auto& e : v) dens.push_back(e.den());
  for (const auto& p : gcd_free_basis(dens)) {
    int kA = 0, kb = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!is_zero(A(i, j))) kA = std::max(kA, valuation(A(i, j).den(), p));
    for (const auto& v : rhs)
      for (const auto& e : v)
        if (!is_zero(e)) kb = std::max(kb, valuation(e.den(), p));
    int e = std::max(0, kb - 1);
    if (kA == 1) {
      for (long k : integer_roots(norm_charpoly(residue_matrix(A, p), p)))
        if (-k > e) e = static_cast<int>(-k);
    } else if (kA > 1) {
      if (n == 1) {
        e = std::max(0, kb - kA);
      } else {
        b.complete = false;
        e = std::max(opt.max_pole_order, kb);
      }
    }
    if (e > 0) b.denominator *= pow(p, static_cast<unsigned>(e));
  }
  int kA = -(1 << 20), kb = -(1 << 20);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) kA = std::max(kA, deg_at_infinity(A(i, j)));
  for (const auto& v : rhs)
    for (const auto& e : v) kb = std::max(kb, deg_at_infinity(e));
  const bool has_rhs = kb > -(1 << 19);
  int g = has_rhs ? kb + 1 : -(1 << 20);
  if (kA <= -1) {
    for (long k : integer_roots(residue_at_infinity(A).charpoly()))
      if (k > g) g = static_cast<int>(k);
  } else if (n == 1) {
    g = has_rhs ? kb - kA : -(1 << 20);
  } else {
    // Work with the homogeneous system [[A, rhs], [0, 0]].
    const std::size_t m = rhs.size();
    RMatrix aug(n + m, n + m);
    aug.set_block(0, 0, A);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < n; ++i) aug(i, n + j) = rhs[j][i];
    if (auto cg = growth_bound_at_infinity(aug)) {
      g = *cg;
      b.specialized = true;
    } else {
      b.complete = false;
      g = std::max(g, opt.max_degree);
    }
  }
  b.numerator_degree = g < -(1 << 19) ? -1 : std::max(-1, b.denominator.deg() + g);
  return b;
}

}  // namespace

namespace {

/// Kernel of the linear system for numerators of degree <= D over the
/// denominator d; coordinates are the m rhs multipliers, then the numerator
/// coefficients component by component.
std::vector<std::vector<Qt>> bounded_kernel(const RMatrix& A, const std::vector<RVector>& rhs, const QtPoly& d,
                                            int D) {
  const std::size_t n = A.rows(), m = rhs.size();
  // L = lcm of all denominators.
  QtPoly L(Qt(1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) L = lcm(L, A(i, j).den());
  for (const auto& v : rhs)
    for (const auto& e : v) L = lcm(L, e.den());
  Matrix<QtPoly> LA(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) LA(i, j) = A(i, j).num() * (L / A(i, j).den()) * d;
  const QtPoly Ld = L * d, Ldp = L * d.derivative(), d2 = d * d;
  const std::size_t nN = D >= 0 ? n * static_cast<std::size_t>(D + 1) : 0;
  const std::size_t unknowns = nN + m;
  if (unknowns == 0) return {};
  // Columns: residual polynomials per component.
  std::vector<std::vector<QtPoly>> cols;
  cols.reserve(unknowns);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k <= D; ++k) {
      std::vector<QtPoly> c(n);
      QtPoly xk = QtPoly::monomial(Qt(1), static_cast<std::size_t>(k));
      for (std::size_t r = 0; r < n; ++r) {
        QtPoly v = -shift_up(LA(r, i), static_cast<std::size_t>(k));
        if (r == i) {
          if (k > 0) v += shift_up(Ld, static_cast<std::size_t>(k - 1)).scaled(Qt(static_cast<long>(k)));
          v -= shift_up(Ldp, static_cast<std::size_t>(k));
        }
        c[r] = std::move(v);
      }
      cols.push_back(std::move(c));
    }
  for (const auto& v : rhs) {
    std::vector<QtPoly> c(n);
    for (std::size_t r = 0; r < n; ++r) c[r] = -(v[r].num() * (L / v[r].den()) * d2);
    cols.push_back(std::move(c));
  }
  std::vector<int> maxdeg(n, -1);
  for (const auto& c : cols)
    for (std::size_t r = 0; r < n; ++r) maxdeg[r] = std::max(maxdeg[r], c[r].deg());
  std::size_t rows = 0;
  std::vector<std::size_t> offset(n);
  for (std::size_t r = 0; r < n; ++r) {
    offset[r] = rows;
    rows += static_cast<std::size_t>(maxdeg[r] + 1);
  }
  QtMatrix sys(rows, unknowns);
  for (std::size_t u = 0; u < unknowns; ++u)
    for (std::size_t r = 0; r < n; ++r)
      for (int k = 0; k <= cols[u][r].deg(); ++k)
        sys(offset[r] + static_cast<std::size_t>(k), u) = cols[u][r].coeffs()[static_cast<std::size_t>(k)];
  // Order unknowns so that the rhs multipliers come first in RREF; then
  // homogeneous solutions are separated from particular ones.
  QtMatrix perm(rows, unknowns);
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t r = 0; r < rows; ++r) perm(r, u) = sys(r, nN + u);
  for (std::size_t u = 0; u < nN; ++u)
    for (std::size_t r = 0; r < rows; ++r) perm(r, m + u) = sys(r, u);
  return qt_nullspace(perm);
}

std::optional<RatFunc> specialize_t(const RatFunc& a, const Q& t0) {
  auto spec = [&](const QtPoly& p) -> std::optional<QtPoly> {
    std::vector<Qt> c;
    for (const auto& e : p.coeffs()) {
      Q den = e.den().eval<Q>(t0);
      if (den == 0) return std::nullopt;
      c.push_back(Qt(e.num().eval<Q>(t0) / den));
    }
    QtPoly q(std::move(c));
    if (q.deg() != p.deg()) return std::nullopt;
    return q;
  };
  if (is_zero(a)) return a;
  auto n = spec(a.num()), d = spec(a.den());
  if (!n || !d) return std::nullopt;
  return RatFunc(*n, *d);
}

/// Largest numerator degree used by solutions at a specialization of t, or
/// nullopt when t0 is unsuitable.
std::optional<int> specialized_degree(const RMatrix& A, const std::vector<RVector>& rhs, const QtPoly& d, int D,
                                      const Q& t0) {
  const std::size_t n = A.rows(), m = rhs.size();
  RMatrix As(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto e = specialize_t(A(i, j), t0);
      if (!e) return std::nullopt;
      As(i, j) = *e;
    }
  std::vector<RVector> rs;
  for (const auto& v : rhs) {
    RVector w;
    for (const auto& e : v) {
      auto se = specialize_t(e, t0);
      if (!se) return std::nullopt;
      w.push_back(*se);
    }
    rs.push_back(std::move(w));
  }
  auto ds = specialize_t(RatFunc(d, QtPoly(Qt(1))), t0);
  if (!ds) return std::nullopt;
  int used = -1;
  for (const auto& kv : bounded_kernel(As, rs, ds->num(), D))
    for (std::size_t i = 0; i < n; ++i)
      for (int k = 0; k <= D; ++k)
        if (!is_zero(kv[m + i * static_cast<std::size_t>(D + 1) + static_cast<std::size_t>(k)])) used = std::max(used, k);
  return used;
}

}  // namespace

ParamSolutionSpace rational_solutions_param(const RMatrix& A, const std::vector<RVector>& rhs,
                                            const SolverOptions& opt) {
  if (!A.is_square()) throw DimensionError("system matrix must be square");
  const std::size_t n = A.rows(), m = rhs.size();
  for (const auto& v : rhs)
    if (v.size() != n) throw DimensionError("right-hand side has wrong length");
  Bounds bd = solution_bounds(A, rhs, opt);
  ParamSolutionSpace out;
  out.complete = bd.complete;
  int D = bd.numerator_degree;
  const QtPoly& d = bd.denominator;
  if (bd.specialized && D > 0) {
    // Same heuristic class as the bound itself: a Q(t)-solution keeps its
    // degree at a generic t0, so two specializations cap the degree.
    static const Q points[] = {Q(5), Q(-7), Q(11), Q(-13), Q(17), Q(-19)};
    int found = 0, cap = -1;
    for (const Q& t0 : points) {
      auto u = specialized_degree(A, rhs, d, D, t0);
      if (!u) continue;
      cap = std::max(cap, *u);
      if (++found == 2) break;
    }
    if (found == 2) D = cap;
  }
  for (const auto& kv : bounded_kernel(A, rhs, d, D)) {
    ParamSolution s;
    s.c.assign(kv.begin(), kv.begin() + static_cast<long>(m));
    s.y.assign(n, RatFunc(0));
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Qt> num(static_cast<std::size_t>(D + 1), Qt(0));
      for (int k = 0; k <= D; ++k) num[static_cast<std::size_t>(k)] = kv[m + i * static_cast<std::size_t>(D + 1) + static_cast<std::size_t>(k)];
      s.y[i] = RatFunc(QtPoly(std::move(num)), d);
    }
    out.basis.push_back(std::move(s));
  }
  return out;
}

SolutionSpace rational_solutions(const RMatrix& A, const RVector& b, const SolverOptions& opt) {
  SolutionSpace out;
  const bool inhom = !b.empty() && !is_zero_vector(b);
  std::vector<RVector> rhs;
  if (inhom) rhs.push_back(b);
  ParamSolutionSpace ps = rational_solutions_param(A, rhs, opt);
  out.complete = ps.complete;
  const ParamSolution* pivot = nullptr;
  for (const auto& s : ps.basis)
    if (inhom && !is_zero(s.c[0])) {
      pivot = &s;
      break;
    }
  if (pivot) {
    const RatFunc inv(Qt(1) / pivot->c[0]);
    RVector y;
    for (const auto& e : pivot->y) y.push_back(e * inv);
    out.particular = std::move(y);
  }
  for (const auto& s : ps.basis) {
    if (&s == pivot) continue;
    RVector y = s.y;
    if (inhom && !is_zero(s.c[0])) {
      const RatFunc f(s.c[0]);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= f * (*out.particular)[i];
    }
    out.basis.push_back(std::move(y));
  }
  return out;
}

// ---- hyperexponential solutions ----------------------------------------------

namespace {

struct PoleOption {
  QtPoly piece;
  std::vector<Qt> exponents;  // one per class modulo Z
};

/// Simple finite poles, and at infinity either A = O(1/x) or A = A0 + O(1/x)
/// with A0 nilpotent, so that exponents have no polynomial part.
bool admits_exponent_candidates(const RMatrix& A) {
  const std::size_t n = A.rows();
  QtMatrix A0(n, n);
  bool bounded = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const RatFunc& a = A(i, j);
      if (is_zero(a)) continue;
      if (gcd(a.den(), a.den().derivative()).deg() > 0) return false;
      const int d = deg_at_infinity(a);
      if (d > 0) return false;
      if (d == 0) {
        bounded = false;
        A0(i, j) = a.num().lc() / a.den().lc();
      }
    }
  if (bounded) return true;
  return A0.charpoly() == QtPoly::monomial(Qt(1), n);
}

bool differ_by_integer(const Qt& a, const Qt& b) {
  Qt d = a - b;
  return d.is_constant() && is_integer(d.constant_value());
}

}  // namespace

std::vector<HyperexpSolution> hyperexponential_solutions(const RMatrix& A, const SolverOptions& opt) {
  if (!A.is_square()) throw DimensionError("system matrix must be square");
  if (!admits_exponent_candidates(A)) throw NonFuchsian("system is not Fuchsian; supply a flag certificate");
  const std::size_t n = A.rows();
  std::vector<QtPoly> dens;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dens.push_back(A(i, j).den());
  std::vector<PoleOption> options;
  for (const auto& p : gcd_free_basis(dens)) {
    Matrix<QtPoly> R = residue_matrix(A, p);
    std::vector<Qt> eig = qt_roots(norm_charpoly(R, p));
    // Split p according to which eigenvalues occur at its roots.
    std::vector<std::pair<QtPoly, Qt>> where;
    for (const Qt& e : eig) {
      Matrix<QtPoly> S = R;
      for (std::size_t i = 0; i < n; ++i) S(i, i) = (S(i, i) - QtPoly(e)) % p;
      // det(S) mod p, computed over Q(t)(x) and reduced.
      RMatrix SR = S.map([](const QtPoly& q) { return RatFunc(q); });
      RatFunc det = SR.det();
      QtPoly dv = (det.num() * inverse_mod(det.den() % p, p)) % p;
      QtPoly g = dv.is_zero_poly() ? p : gcd(p, dv);
      if (g.deg() > 0) where.emplace_back(g, e);
    }
    std::vector<QtPoly> parts;
    for (auto& w : where) parts.push_back(w.first);
    for (const auto& piece : gcd_free_basis(parts)) {
      PoleOption o{piece, {}};
      for (auto& [g, e] : where) {
        if (!(g % piece).is_zero_poly()) continue;
        bool seen = false;
        for (const auto& x : o.exponents) seen = seen || differ_by_integer(x, e);
        if (!seen) o.exponents.push_back(e);
      }
      options.push_back(std::move(o));
    }
    // Roots of p without a Q(t) eigenvalue admit no candidate; they are
    // simply left out (the candidate then has residue 0 there).
  }
  std::vector<HyperexpSolution> out;
  std::vector<std::size_t> idx(options.size(), 0);
  while (true) {
    RatFunc r(0);
    for (std::size_t k = 0; k < options.size(); ++k) {
      const auto& o = options[k];
      r += RatFunc(o.exponents[idx[k]]) * RatFunc(o.piece.derivative(), o.piece);
    }
    RMatrix B = A;
    for (std::size_t i = 0; i < n; ++i) B(i, i) -= r;
    SolutionSpace s = rational_solutions(B, {}, opt);
    if (!s.basis.empty()) out.push_back({r, s.basis});
    std::size_t k = 0;
    while (k < options.size()) {
      if (++idx[k] < options[k].exponents.size()) break;
      idx[k] = 0;
      ++k;
    }
    if (k == options.size()) break;
  }
  return out;
}

}  // namespace pdgal3
