// Field of fractions of F[v] for an exact field F, kept in canonical form.
#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "pdgal3/poly.hpp"

namespace pdgal3 {

/// num/den with gcd(num, den) = 1 and den monic. Two equal values always
/// have identical representations.
template <class F>
class Fraction {
 public:
  using PolyT = Poly<F>;

  Fraction() : num_(), den_(F(1)) {}
  Fraction(long c) : num_(F(c)), den_(F(1)) {}  // NOLINT
  Fraction(F c) : num_(std::move(c)), den_(F(1)) {}  // NOLINT
  Fraction(PolyT n) : num_(std::move(n)), den_(F(1)) {}  // NOLINT
  Fraction(PolyT n, PolyT d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

  static Fraction var() { return Fraction(PolyT::var()); }

  const PolyT& num() const { return num_; }
  const PolyT& den() const { return den_; }
  bool is_polynomial() const { return den_.deg() == 0; }
  bool is_constant() const { return den_.deg() == 0 && num_.deg() <= 0; }
  /// Value when is_constant().
  F constant_value() const { return num_.constant_term(); }

  friend Fraction operator+(const Fraction& a, const Fraction& b) { return add(a, b, false); }
  friend Fraction operator-(const Fraction& a, const Fraction& b) { return add(a, b, true); }
  friend Fraction operator-(const Fraction& a) {
    Fraction r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend Fraction operator*(const Fraction& a, const Fraction& b) {
    if (a.num_.is_zero_poly() || b.num_.is_zero_poly()) return Fraction();
    // Cross-cancel before multiplying to keep sizes small.
    PolyT g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
    Fraction r;
    r.num_ = (a.num_ / g1) * (b.num_ / g2);
    r.den_ = (a.den_ / g2) * (b.den_ / g1);
    r.fix_sign();
    return r;
  }
  friend Fraction operator/(const Fraction& a, const Fraction& b) {
    if (b.num_.is_zero_poly()) throw DivisionByZero();
    Fraction inv;
    inv.num_ = b.den_;
    inv.den_ = b.num_;
    inv.fix_sign();
    return a * inv;
  }
  Fraction& operator+=(const Fraction& o) { return *this = *this + o; }
  Fraction& operator-=(const Fraction& o) { return *this = *this - o; }
  Fraction& operator*=(const Fraction& o) { return *this = *this * o; }
  Fraction& operator/=(const Fraction& o) { return *this = *this / o; }

  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Fraction& a, const Fraction& b) { return !(a == b); }
  friend bool is_zero(const Fraction& a) { return a.num_.is_zero_poly(); }

  /// Derivative with respect to the fraction variable v.
  Fraction derivative() const {
    if (den_.deg() == 0) return Fraction(num_.derivative());
    PolyT g = gcd(den_, den_.derivative());
    PolyT dg = den_ / g;
    return Fraction(num_.derivative() * dg - num_ * (den_.derivative() / g), den_ * dg);
  }

  /// Apply a coefficient map (a field derivation extended by the quotient rule
  /// is handled by the callers; this is plain coefficient substitution).
  template <class Fn>
  Fraction map_coeffs(Fn&& f) const {
    return Fraction(num_.map_coeffs(f), den_.map_coeffs(f));
  }

 private:
  // Henrici's scheme: only gcds of the denominator parts are needed.
  static Fraction add(const Fraction& a, const Fraction& b, bool sub) {
    if (a.num_.is_zero_poly()) return sub ? -b : b;
    if (b.num_.is_zero_poly()) return a;
    Fraction r;
    if (a.den_ == b.den_) {
      PolyT n = sub ? a.num_ - b.num_ : a.num_ + b.num_;
      if (a.den_.deg() == 0) {
        r.num_ = std::move(n);
        r.den_ = a.den_;
        return r;
      }
      return Fraction(std::move(n), a.den_);
    }
    PolyT g = gcd(a.den_, b.den_);
    if (g.deg() == 0) {
      r.num_ = sub ? a.num_ * b.den_ - b.num_ * a.den_ : a.num_ * b.den_ + b.num_ * a.den_;
      r.den_ = a.den_ * b.den_;
      if (r.num_.is_zero_poly()) r.den_ = PolyT(F(1));
      return r;
    }
    PolyT ad = a.den_ / g, bd = b.den_ / g;
    PolyT n = sub ? a.num_ * bd - b.num_ * ad : a.num_ * bd + b.num_ * ad;
    if (n.is_zero_poly()) return Fraction();
    PolyT g2 = gcd(n, g);
    r.num_ = n / g2;
    r.den_ = ad * (b.den_ / g2);
    r.fix_sign();
    return r;
  }

  void normalize() {
    if (den_.is_zero_poly()) throw DivisionByZero();
    if (num_.is_zero_poly()) {
      den_ = PolyT(F(1));
      return;
    }
    PolyT g = gcd(num_, den_);
    if (g.deg() > 0) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
    fix_sign();
  }
  void fix_sign() {
    const F l = den_.lc();
    if (l == F(1)) return;
    F inv = F(1) / l;
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }

  PolyT num_;
  PolyT den_;
};

/// Rational function u/w with deg u + deg w < xs.size() taking the values ys,
/// through Newton interpolation and a maximal-quotient Pade step.
template <class F>
std::optional<Fraction<F>> rational_interpolate(const std::vector<F>& xs, const std::vector<F>& ys) {
  const std::size_t n = xs.size();
  std::vector<F> dd = ys;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
  Poly<F> p, m(F(1));
  for (std::size_t i = 0; i < n; ++i) {
    p += m.scaled(dd[i]);
    m *= Poly<F>(std::vector<F>{-xs[i], F(1)});
  }
  Poly<F> r0 = m, r1 = p, s0, s1(F(1));
  std::optional<std::pair<Poly<F>, Poly<F>>> best;
  int best_q = 1;
  while (!r1.is_zero_poly()) {
    auto [q, r] = r0.divmod(r1);
    // The pair (r1, s1) has total degree n - deg q.
    if (q.deg() > best_q) {
      best_q = q.deg();
      best = std::make_pair(r1, s1);
    }
    Poly<F> s2 = s0 - q * s1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (p.is_zero_poly()) return Fraction<F>();
  if (!best) return std::nullopt;
  if (gcd(best->second, m).deg() > 0) return std::nullopt;
  return Fraction<F>(best->first, best->second);
}

/// gcd over F(v)[x] by specializing v, interpolating the monic image
/// coefficients and checking exact division. The degree of the image gcd at a
/// point where leading coefficients survive bounds the true degree, so a
/// candidate of that degree dividing both inputs is the gcd.
template <class F>
std::optional<Poly<Fraction<F>>> gcd_hook(const Poly<Fraction<F>>& a, const Poly<Fraction<F>>& b) {
  using PF = Poly<Fraction<F>>;
  auto spec = [](const PF& q, const F& v, Poly<F>& out) {
    std::vector<F> c;
    for (const auto& x : q.coeffs()) {
      F d = x.den().eval(v);
      if (is_zero(d)) return false;
      c.push_back(x.num().eval(v) / d);
    }
    out = Poly<F>(std::move(c));
    return out.deg() == q.deg();
  };
  std::vector<F> xs;
  std::vector<Poly<F>> images;
  int d0 = 1 << 30;
  long next = 3;
  auto sample = [&]() {
    while (true) {
      const F v(next);
      next = next > 0 ? -next : -next + 1;
      Poly<F> sa, sb;
      if (!spec(a, v, sa) || !spec(b, v, sb)) continue;
      Poly<F> g = gcd(sa, sb);
      if (g.deg() < d0) {
        d0 = g.deg();
        xs.clear();
        images.clear();
      }
      if (g.deg() == d0) {
        xs.push_back(v);
        images.push_back(g);
        return;
      }
    }
  };
  sample();
  sample();
  if (d0 == 0) return PF(Fraction<F>(F(1)));
  if (d0 == std::min(a.deg(), b.deg())) {
    const PF& s = a.deg() <= b.deg() ? a : b;
    const PF& o = a.deg() <= b.deg() ? b : a;
    if ((o % s).is_zero_poly()) return s.monic();
  }
  for (std::size_t target = 4; target <= 96; target *= 2) {
    while (xs.size() < target) sample();
    if (d0 == 0) return PF(Fraction<F>(F(1)));
    std::vector<Fraction<F>> c(d0 + 1, Fraction<F>(F(0)));
    c[d0] = Fraction<F>(F(1));
    bool ok = true;
    for (int k = 0; k < d0 && ok; ++k) {
      std::vector<F> ys;
      for (const auto& g : images) ys.push_back(g.coeff(k));
      auto r = rational_interpolate(xs, ys);
      if (!r) ok = false;
      else c[k] = *r;
    }
    if (!ok) continue;
    PF cand(std::move(c));
    if ((a % cand).is_zero_poly() && (b % cand).is_zero_poly()) return cand;
  }
  return std::nullopt;
}

template <class F>
Fraction<F> pow(const Fraction<F>& a, int e) {
  if (e < 0) return Fraction<F>(1) / pow(a, -e);
  return Fraction<F>(pow(a.num(), static_cast<unsigned>(e)), pow(a.den(), static_cast<unsigned>(e)));
}

}  // namespace pdgal3
