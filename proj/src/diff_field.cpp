#include "pdgal3/diff_field.hpp"

#include <cctype>
#include <cmath>
#include <complex>
#include <map>

#include "pdgal3/matrix.hpp"

namespace pdgal3 {

// ---- derivations --------------------------------------------------------

Qt d_t(const Qt& a) { return a.derivative(); }

QtPoly d_t(const QtPoly& p) {
  return p.map_coeffs([](const Qt& c) { return c.derivative(); });
}

RatFunc d_t(const RatFunc& a) {
  const QtPoly& n = a.num();
  const QtPoly& d = a.den();
  return RatFunc(d_t(n) * d - n * d_t(d), d * d);
}

RatFunc d_x(const RatFunc& a) { return a.derivative(); }

bool is_rational_constant(const Qt& a) { return a.is_constant(); }

bool is_rational_constant(const RatFunc& a) {
  return a.is_constant() && a.constant_value().is_constant();
}

// ---- printer ------------------------------------------------------------

namespace {

std::string join_terms(const std::vector<std::string>& terms) {
  if (terms.empty()) return "0";
  std::string out = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (terms[i][0] == '-')
      out += " - " + terms[i].substr(1);
    else
      out += " + " + terms[i];
  }
  return out;
}

std::string power_of(char var, int k) {
  std::string s(1, var);
  if (k > 1) s += "^" + std::to_string(k);
  return s;
}

bool is_sum(const std::string& s) { return s.find(' ') != std::string::npos; }

std::string qpoly_string(const QPoly& p, char var) {
  std::vector<std::string> terms;
  for (int k = p.deg(); k >= 0; --k) {
    const Q& c = p.coeffs()[k];
    if (is_zero(c)) continue;
    if (k == 0) {
      terms.push_back(to_string(c));
    } else if (c == 1) {
      terms.push_back(power_of(var, k));
    } else if (c == -1) {
      terms.push_back("-" + power_of(var, k));
    } else {
      terms.push_back(to_string(c) + "*" + power_of(var, k));
    }
  }
  return join_terms(terms);
}

std::string quotient_string(const std::string& n, const std::string& d) {
  std::string num = is_sum(n) ? "(" + n + ")" : n;
  std::string den = (is_sum(d) || d.find_first_of("*/") != std::string::npos) ? "(" + d + ")" : d;
  return num + "/" + den;
}

}  // namespace

std::string to_string(const Qt& a) {
  std::string n = qpoly_string(a.num(), 't');
  if (a.den().deg() == 0) return n;
  return quotient_string(n, qpoly_string(a.den(), 't'));
}

std::string to_string(const QtPoly& p, char var) {
  std::vector<std::string> terms;
  for (int k = p.deg(); k >= 0; --k) {
    const Qt& c = p.coeffs()[k];
    if (is_zero(c)) continue;
    std::string cs = to_string(c);
    if (k == 0) {
      terms.push_back(cs);
    } else if (c == Qt(1)) {
      terms.push_back(power_of(var, k));
    } else if (c == Qt(-1)) {
      terms.push_back("-" + power_of(var, k));
    } else if (is_sum(cs)) {
      terms.push_back("(" + cs + ")*" + power_of(var, k));
    } else {
      terms.push_back(cs + "*" + power_of(var, k));
    }
  }
  return join_terms(terms);
}

std::string to_string(const RatFunc& a) {
  std::string n = to_string(a.num(), 'x');
  if (a.den().deg() == 0) return n;
  return quotient_string(n, to_string(a.den(), 'x'));
}

bool display_less(const RatFunc& a, const RatFunc& b) { return to_string(a) < to_string(b); }

// ---- parser -------------------------------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  RatFunc parse() {
    RatFunc v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(what + " at position " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RatFunc expr() {
    RatFunc v = term();
    while (true) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }

  RatFunc term() {
    RatFunc v = unary();
    while (true) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        RatFunc d = unary();
        if (is_zero(d)) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  RatFunc unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  RatFunc power() {
    RatFunc b = atom();
    if (!eat('^')) return b;
    bool neg = eat('-');
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    if (pos_ - start > 6) fail("exponent too large");
    int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
    if (neg) {
      if (is_zero(b)) fail("division by zero");
      e = -e;
    }
    return pow(b, e);
  }

  RatFunc atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RatFunc v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (c == 'x') {
      ++pos_;
      return rf_x();
    }
    if (c == 't') {
      ++pos_;
      return rf_t();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      Z z(std::string(s_.substr(start, pos_ - start)));
      return RatFunc(Qt(QPoly(Q(z))));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

RatFunc parse_ratfunc(std::string_view text) { return Parser(text).parse(); }

Qt parse_qt(std::string_view text) {
  RatFunc v = parse_ratfunc(text);
  if (!v.is_constant()) throw ParseError("expression depends on x: '" + std::string(text) + "'");
  return v.constant_value();
}

// ---- Hermite reduction and partial fractions ----------------------------

namespace {

/// s with s*a + u*b = c and deg s < deg b (gcd(a, b) = 1).
std::pair<QtPoly, QtPoly> solve_bezout(const QtPoly& a, const QtPoly& b, const QtPoly& c) {
  auto e = ext_gcd(a, b);
  if (e.g.deg() != 0) throw DivisionByZero();
  QtPoly s = (e.s * c) % b;
  QtPoly u = (c - s * a) / b;
  return {s, u};
}

QtPoly integrate_poly(const QtPoly& p) {
  std::vector<Qt> c(p.coeffs().size() + 1, Qt(0));
  for (std::size_t k = 0; k < p.coeffs().size(); ++k) c[k + 1] = p.coeffs()[k] / Qt(static_cast<long>(k + 1));
  return QtPoly(std::move(c));
}

/// Residue element of the simple-pole function b/q on the factor piece | q.
QtPoly residue_element(const QtPoly& b, const QtPoly& q, const QtPoly& piece) {
  return (b * inverse_mod(q.derivative() % piece, piece)) % piece;
}

}  // namespace

HermiteReduction hermite_reduce(const RatFunc& a) {
  auto [poly, rem] = a.num().divmod(a.den());
  RatFunc g(integrate_poly(poly));
  QtPoly A = rem;
  const QtPoly& D = a.den();
  QtPoly Dm = gcd(D, D.derivative());
  QtPoly Ds = D / Dm;
  while (Dm.deg() > 0) {
    QtPoly Dm2 = gcd(Dm, Dm.derivative());
    QtPoly Dms = Dm / Dm2;
    QtPoly lhs = -(Ds * Dm.derivative() / Dm);
    auto [B, C] = solve_bezout(lhs, Dms, A);
    A = C - B.derivative() * (Ds / Dms);
    g += RatFunc(B, Dm);
    Dm = Dm2;
  }
  RatFunc h(A, Ds);
  auto [hp, hr] = h.num().divmod(h.den());
  if (!hp.is_zero_poly()) g += RatFunc(integrate_poly(hp));
  RatFunc rest(hr, h.den());
  return {g, rest.num(), rest.den()};
}

std::optional<RatFunc> rational_antiderivative(const RatFunc& a) {
  HermiteReduction h = hermite_reduce(a);
  if (!h.remainder_num.is_zero_poly()) return std::nullopt;
  return h.rational_part;
}

PartialFractions partial_fractions(const RatFunc& a) {
  PartialFractions pf;
  auto [poly, num] = a.num().divmod(a.den());
  pf.polynomial_part = poly;
  auto sqf = squarefree_factors(a.den());
  QtPoly rest = a.den();
  for (std::size_t i = 0; i < sqf.size(); ++i) {
    const QtPoly& f = sqf[i];
    if (f.deg() <= 0) continue;
    const int mult = static_cast<int>(i + 1);
    QtPoly fm = pow(f, static_cast<unsigned>(mult));
    QtPoly other = rest / fm;
    // num/(fm*other) = Ai/fm + num'/other
    QtPoly Ai = other.deg() > 0 ? (num * inverse_mod(other % fm, fm)) % fm : (num % fm).scaled(Qt(1) / other.lc());
    num = (num - Ai * other) / fm;
    rest = other;
    // Expand Ai in base f: Ai = sum c_k f^k.
    int k = 0;
    while (!Ai.is_zero_poly()) {
      auto [qq, c] = Ai.divmod(f);
      if (!c.is_zero_poly()) pf.terms.push_back({f, mult - k, c});
      Ai = qq;
      ++k;
    }
  }
  HermiteReduction h = hermite_reduce(a);
  if (!h.remainder_num.is_zero_poly()) {
    for (const auto& f : sqf) {
      QtPoly piece = gcd(h.remainder_den, f);
      if (piece.deg() <= 0) continue;
      QtPoly e = residue_element(h.remainder_num, h.remainder_den, piece);
      if (!e.is_zero_poly()) pf.residues.push_back({piece, e, 1});
    }
  }
  return pf;
}

RatFunc reconstruct(const PartialFractions& pf) {
  RatFunc r(pf.polynomial_part);
  for (const auto& t : pf.terms) r += RatFunc(t.numerator, pow(t.pole, static_cast<unsigned>(t.power)));
  return r;
}

// ---- residue pieces -----------------------------------------------------

namespace {

Matrix<Qt> multiplication_matrix(const QtPoly& rho, const QtPoly& p) {
  const std::size_t d = static_cast<std::size_t>(p.deg());
  Matrix<Qt> m(d, d);
  QtPoly xj(Qt(1));
  for (std::size_t j = 0; j < d; ++j) {
    QtPoly c = (xj * rho) % p;
    for (std::size_t i = 0; i < d; ++i) m(i, j) = c.coeff(i);
    xj = (xj * QtPoly::var()) % p;
  }
  return m;
}

void refine(const QtPoly& pole, const std::vector<QtPoly>& el, std::size_t k, std::vector<ResiduePiece>& out) {
  if (k == el.size()) {
    ResiduePiece piece{pole, {}, {}};
    for (const auto& e : el) {
      QtPoly r = e % pole;
      piece.elements.push_back(r);
      if (r.deg() <= 0)
        piece.values.push_back(r.constant_term());
      else
        piece.values.push_back(std::nullopt);
    }
    out.push_back(std::move(piece));
    return;
  }
  QtPoly rho = el[k] % pole;
  if (rho.deg() <= 0) {
    refine(pole, el, k + 1, out);
    return;
  }
  auto reduce_all = [&](const QtPoly& g) {
    std::vector<QtPoly> r;
    for (const auto& e : el) r.push_back(e % g);
    return r;
  };
  QtPoly rest = pole;
  for (const Qt& c : qt_roots(multiplication_matrix(rho, pole).charpoly())) {
    QtPoly g = gcd(rest, rho - QtPoly(c));
    if (g.deg() <= 0) continue;
    refine(g, reduce_all(g), k + 1, out);
    rest = rest / g;
  }
  if (rest.deg() > 0) refine(rest.monic(), reduce_all(rest.monic()), k + 1, out);
}

}  // namespace

std::vector<ResiduePiece> residue_pieces(const std::vector<RatFunc>& inputs) {
  std::vector<HermiteReduction> hs;
  std::vector<QtPoly> dens;
  for (const auto& a : inputs) {
    hs.push_back(hermite_reduce(a));
    if (!hs.back().remainder_num.is_zero_poly()) dens.push_back(hs.back().remainder_den);
  }
  std::vector<ResiduePiece> out;
  for (const auto& p : gcd_free_basis(dens)) {
    std::vector<QtPoly> el;
    for (const auto& h : hs) {
      if (h.remainder_num.is_zero_poly() || !(h.remainder_den % p).is_zero_poly())
        el.emplace_back();
      else
        el.push_back(residue_element(h.remainder_num, h.remainder_den, p));
    }
    refine(p, el, 0, out);
  }
  return out;
}

std::optional<LogDerivative> is_log_derivative(const RatFunc& a, int m_max) {
  if (is_zero(a)) return LogDerivative{1, RatFunc(1)};
  HermiteReduction h = hermite_reduce(a);
  if (!is_zero(d_x(h.rational_part))) return std::nullopt;
  auto pieces = residue_pieces({a});
  Z m = 1;
  for (const auto& p : pieces) {
    if (!p.values[0]) return std::nullopt;
    if (!p.values[0]->is_constant()) return std::nullopt;
    Q c = p.values[0]->constant_value();
    m = lcm(m, Z(c.get_den()));
  }
  if (m > m_max) return std::nullopt;
  const int mi = static_cast<int>(m.get_si());
  RatFunc r(1);
  for (const auto& p : pieces) {
    Q e = p.values[0]->constant_value() * mi;
    r *= pow(RatFunc(p.pole), static_cast<int>(e.get_num().get_si()));
  }
  if (d_x(r) != RatFunc(Qt(QPoly(Q(mi)))) * a * r) return std::nullopt;
  return LogDerivative{mi, r};
}

// ---- roots --------------------------------------------------------------

namespace {

Q eval_q(const QPoly& p, const Q& x) { return p.eval<Q>(x); }

/// Integer-coefficient primitive multiple of p.
std::vector<Z> integer_coeffs(const QPoly& p) {
  Z l = 1;
  for (const auto& c : p.coeffs()) l = lcm(l, Z(c.get_den()));
  std::vector<Z> out;
  for (const auto& c : p.coeffs()) {
    Q v = c * l;
    out.push_back(v.get_num());
  }
  return out;
}

std::vector<std::complex<long double>> durand_kerner(const std::vector<Z>& c) {
  using C = std::complex<long double>;
  const std::size_t n = c.size() - 1;
  std::vector<long double> a(n + 1);
  for (std::size_t i = 0; i <= n; ++i) a[i] = c[i].get_d() / c[n].get_d();
  auto f = [&](C z) {
    C r = 1;
    for (std::size_t i = n; i-- > 0;) r = r * z + a[i];
    return r;
  };
  long double bound = 1;
  for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, 1 + std::fabs(a[i]));
  std::vector<C> z(n);
  const C seed(0.4L, 0.9L);
  for (std::size_t i = 0; i < n; ++i) z[i] = bound * std::pow(seed, static_cast<int>(i));
  for (int it = 0; it < 2000; ++it) {
    long double delta = 0;
    for (std::size_t i = 0; i < n; ++i) {
      C den = 1;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= (z[i] - z[j]);
      if (std::abs(den) == 0) den = 1e-30L;
      C step = f(z[i]) / den;
      z[i] -= step;
      delta = std::max(delta, std::abs(step));
    }
    if (delta < 1e-24L) break;
  }
  return z;
}

}  // namespace

std::vector<Q> rational_roots(const QPoly& p0) {
  std::vector<Q> roots;
  if (p0.deg() <= 0) return roots;
  QPoly p = squarefree_part(p0);
  if (is_zero(p.constant_term())) {
    roots.push_back(Q(0));
    p = p / QPoly::var();
  }
  auto add = [&](const Q& r) {
    for (const auto& s : roots)
      if (s == r) return;
    if (is_zero(eval_q(p, r))) roots.push_back(r);
  };
  if (p.deg() == 1) {
    add(-p.coeff(0) / p.coeff(1));
  } else if (p.deg() == 2) {
    Q a = p.coeff(2), b = p.coeff(1), c = p.coeff(0);
    Q disc = b * b - 4 * a * c;
    if (sgn(disc) >= 0) {
      Z n = disc.get_num(), d = disc.get_den();
      if (mpz_perfect_square_p(n.get_mpz_t()) && mpz_perfect_square_p(d.get_mpz_t())) {
        Z sn, sd;
        mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
        mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
        Q s(sn, sd);
        s.canonicalize();
        add((-b + s) / (2 * a));
        add((-b - s) / (2 * a));
      }
    }
  } else if (p.deg() > 2) {
    std::vector<Z> c = integer_coeffs(p);
    const Z& an = c.back();
    for (const auto& z : durand_kerner(c)) {
      long double scaled = z.real() * an.get_d();
      if (!std::isfinite(scaled)) continue;
      Z k(std::floor(static_cast<double>(scaled) + 0.5));
      for (int dk = -1; dk <= 1; ++dk) {
        Q cand(k + dk, an);
        cand.canonicalize();
        add(cand);
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

namespace {

using Series = std::vector<Q>;

Series ser_mul(const Series& a, const Series& b, std::size_t n) {
  Series r(n, Q(0));
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    if (is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size() && i + j < n; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

Series poly_series(const QPoly& p, std::size_t n) {
  Series r(n, Q(0));
  for (std::size_t i = 0; i < n && i < p.coeffs().size(); ++i) r[i] = p.coeffs()[i];
  return r;
}

/// Coefficients of p in Q[t][x], primitive in x over Q(t).
std::vector<QPoly> clear_denominators(const QtPoly& p) {
  QPoly l(Q(1));
  for (const auto& c : p.coeffs()) l = lcm(l, c.den());
  std::vector<QPoly> g;
  for (const auto& c : p.coeffs()) g.push_back(c.num() * (l / c.den()));
  return g;
}

std::optional<Qt> lift_root(const std::vector<QPoly>& g, const Q& t0, const Q& r, int du, int dw) {
  const std::size_t N = static_cast<std::size_t>(du + dw + 2);
  const QPoly shift(std::vector<Q>{t0, Q(1)});
  std::vector<Series> G;
  for (const auto& gk : g) G.push_back(poly_series(gk.compose(shift), N));
  // dG/dlambda at (t0, r).
  Q dval = 0, rp = 1;
  for (std::size_t k = 1; k < g.size(); ++k) {
    dval += Q(static_cast<long>(k)) * G[k][0] * rp;
    rp *= r;
  }
  if (is_zero(dval)) return std::nullopt;
  Series lam(N, Q(0));
  lam[0] = r;
  for (std::size_t j = 1; j < N; ++j) {
    const std::size_t n = j + 1;
    Series e(n, Q(0));
    for (std::size_t k = g.size(); k-- > 0;) {
      e = ser_mul(e, lam, n);
      for (std::size_t i = 0; i < n; ++i) e[i] += G[k][i];
    }
    lam[j] = -e[j] / dval;
  }
  // Pade approximant u/w with deg u <= du, deg w <= dw.
  QPoly r0 = QPoly::monomial(Q(1), N), r1 = QPoly(lam), s0, s1(Q(1));
  while (r1.deg() > du) {
    auto [q, rr] = r0.divmod(r1);
    r0 = std::move(r1);
    r1 = std::move(rr);
    QPoly s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (s1.deg() > dw || is_zero(s1.constant_term())) return std::nullopt;
  const QPoly back(std::vector<Q>{-t0, Q(1)});
  return Qt(r1.compose(back), s1.compose(back));
}

}  // namespace

std::vector<Qt> qt_roots(const QtPoly& p0) {
  std::vector<Qt> roots;
  if (p0.deg() <= 0) return roots;
  QtPoly p = squarefree_part(p0);
  if (is_zero(p.constant_term())) {
    roots.emplace_back(0);
    p = p / QtPoly::var();
  }
  if (p.deg() == 1) {
    roots.push_back(-p.coeff(0) / p.coeff(1));
    return roots;
  }
  if (p.deg() <= 0) return roots;
  bool t_free = true;
  for (const auto& c : p.coeffs()) t_free = t_free && c.is_constant();
  if (t_free) {
    std::vector<Q> qc;
    for (const auto& c : p.coeffs()) qc.push_back(c.constant_value());
    for (const auto& r : rational_roots(QPoly(qc))) roots.emplace_back(r);
    return roots;
  }
  std::vector<QPoly> g = clear_denominators(p);
  const int du = g.front().deg(), dw = g.back().deg();
  for (int attempt = 0; attempt < 80; ++attempt) {
    const Q t0(attempt % 2 ? -(attempt + 1) / 2 : attempt / 2);
    std::vector<Q> spec;
    for (const auto& gk : g) spec.push_back(eval_q(gk, t0));
    QPoly G0(spec);
    if (G0.deg() != p.deg() || is_zero(G0.constant_term())) continue;
    if (gcd(G0, G0.derivative()).deg() > 0) continue;
    for (const auto& r : rational_roots(G0)) {
      auto c = lift_root(g, t0, r, du, dw);
      if (c && is_zero(p.eval<Qt>(*c))) roots.push_back(*c);
    }
    return roots;
  }
  return roots;
}

}  // namespace pdgal3
