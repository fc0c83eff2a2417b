// Dense univariate polynomials over an exact field.
#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pdgal3/rational.hpp"

namespace pdgal3 {

struct DivisionByZero : std::domain_error {
  DivisionByZero() : std::domain_error("division by zero") {}
};

/// Polynomial in one variable with coefficients in the field F, stored
/// lowest degree first. The zero polynomial has an empty coefficient list.
template <class F>
class Poly {
 public:
  Poly() = default;
  Poly(F c) {  // NOLINT: implicit constant embedding is intended
    if (!is_zero(c)) coef_.push_back(std::move(c));
  }
  explicit Poly(std::vector<F> c) : coef_(std::move(c)) { trim(); }

  static Poly monomial(F c, std::size_t k) {
    if (is_zero(c)) return {};
    std::vector<F> v(k + 1, F(0));
    v[k] = std::move(c);
    return Poly(std::move(v));
  }
  static Poly var() { return monomial(F(1), 1); }

  bool is_zero_poly() const { return coef_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int deg() const { return static_cast<int>(coef_.size()) - 1; }
  const F& lc() const { return coef_.back(); }
  F coeff(std::size_t k) const { return k < coef_.size() ? coef_[k] : F(0); }
  const std::vector<F>& coeffs() const { return coef_; }
  bool is_constant() const { return coef_.size() <= 1; }
  F constant_term() const { return coeff(0); }

  Poly& operator+=(const Poly& o) {
    if (o.coef_.size() > coef_.size()) coef_.resize(o.coef_.size(), F(0));
    for (std::size_t i = 0; i < o.coef_.size(); ++i) coef_[i] += o.coef_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.coef_.size() > coef_.size()) coef_.resize(o.coef_.size(), F(0));
    for (std::size_t i = 0; i < o.coef_.size(); ++i) coef_[i] -= o.coef_[i];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& c : a.coef_) c = -c;
    return a;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.coef_.empty() || b.coef_.empty()) return {};
    std::vector<F> r(a.coef_.size() + b.coef_.size() - 1, F(0));
    for (std::size_t i = 0; i < a.coef_.size(); ++i) {
      if (is_zero(a.coef_[i])) continue;
      for (std::size_t j = 0; j < b.coef_.size(); ++j) r[i + j] += a.coef_[i] * b.coef_[j];
    }
    return Poly(std::move(r));
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly scaled(const F& c) const {
    if (is_zero(c)) return {};
    Poly r = *this;
    for (auto& x : r.coef_) x *= c;
    return r;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.coef_ == b.coef_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Euclidean division: *this = q*d + r with deg r < deg d.
  std::pair<Poly, Poly> divmod(const Poly& d) const {
    if (d.coef_.empty()) throw DivisionByZero();
    if (deg() < d.deg()) return {Poly(), *this};
    std::vector<F> r = coef_;
    std::vector<F> q(coef_.size() - d.coef_.size() + 1, F(0));
    const F inv = F(1) / d.lc();
    const std::size_t dn = d.coef_.size();
    for (std::size_t k = q.size(); k-- > 0;) {
      F c = r[k + dn - 1] * inv;
      if (is_zero(c)) continue;
      for (std::size_t j = 0; j < dn; ++j) r[k + j] -= c * d.coef_[j];
      q[k] = std::move(c);
    }
    r.resize(dn - 1);
    return {Poly(std::move(q)), Poly(std::move(r))};
  }
  friend Poly operator/(const Poly& a, const Poly& b) { return a.divmod(b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return a.divmod(b).second; }

  Poly monic() const {
    if (coef_.empty()) return {};
    return scaled(F(1) / lc());
  }

  template <class G>
  G eval(const G& x) const {
    G r(0);
    for (std::size_t i = coef_.size(); i-- > 0;) r = r * x + G(coef_[i]);
    return r;
  }

  /// Derivative with respect to the polynomial variable.
  Poly derivative() const {
    if (coef_.size() <= 1) return {};
    std::vector<F> r(coef_.size() - 1, F(0));
    for (std::size_t i = 1; i < coef_.size(); ++i) r[i - 1] = coef_[i] * F(static_cast<long>(i));
    return Poly(std::move(r));
  }

  /// Apply f to every coefficient (f must be additive for the result to be meaningful).
  template <class Fn>
  Poly map_coeffs(Fn&& f) const {
    std::vector<F> r;
    r.reserve(coef_.size());
    for (const auto& c : coef_) r.push_back(f(c));
    return Poly(std::move(r));
  }

  /// Substitute another polynomial for the variable.
  Poly compose(const Poly& g) const {
    Poly r;
    for (std::size_t i = coef_.size(); i-- > 0;) r = r * g + Poly(coef_[i]);
    return r;
  }

 private:
  void trim() {
    while (!coef_.empty() && is_zero(coef_.back())) coef_.pop_back();
  }
  std::vector<F> coef_;
};

template <class F>
bool is_zero(const Poly<F>& p) {
  return p.is_zero_poly();
}

template <class F>
Poly<F> pow(const Poly<F>& p, unsigned e) {
  Poly<F> r(F(1)), b = p;
  while (e) {
    if (e & 1u) r *= b;
    b *= b;
    e >>= 1u;
  }
  return r;
}

/// Faster gcd for special coefficient fields; the generic version declines.
template <class F>
std::optional<Poly<F>> gcd_hook(const Poly<F>&, const Poly<F>&) {
  return std::nullopt;
}

/// Monic gcd; gcd(0,0) = 0.
template <class F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
  if (a.is_zero_poly()) return b.monic();
  if (b.is_zero_poly()) return a.monic();
  if (a.deg() == 0 || b.deg() == 0) return Poly<F>(F(1));
  if (auto g = gcd_hook(a, b)) return *g;
  while (!b.is_zero_poly()) {
    Poly<F> r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Extended gcd: returns (g, s, u) with s*a + u*b = g, g monic.
template <class F>
struct ExtGcd {
  Poly<F> g, s, t;
};

template <class F>
ExtGcd<F> ext_gcd(const Poly<F>& a, const Poly<F>& b) {
  Poly<F> r0 = a, r1 = b, s0(F(1)), s1, t0, t1(F(1));
  while (!r1.is_zero_poly()) {
    auto [q, r] = r0.divmod(r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly<F> s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    Poly<F> t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero_poly()) return {r0, s0, t0};
  F inv = F(1) / r0.lc();
  return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

/// Inverse of a modulo m (requires gcd(a, m) = 1).
template <class F>
Poly<F> inverse_mod(const Poly<F>& a, const Poly<F>& m) {
  auto e = ext_gcd(a % m, m);
  if (e.g.deg() != 0) throw DivisionByZero();
  return e.s % m;
}

template <class F>
Poly<F> lcm(const Poly<F>& a, const Poly<F>& b) {
  if (a.is_zero_poly() || b.is_zero_poly()) return {};
  return (a / gcd(a, b) * b).monic();
}

/// Resultant via the Euclidean algorithm over a field.
template <class F>
F resultant(Poly<F> a, Poly<F> b) {
  if (a.is_zero_poly() || b.is_zero_poly()) return F(0);
  F res(1);
  while (true) {
    const int da = a.deg(), db = b.deg();
    if (db == 0) {
      F lb = b.lc();
      F p(1);
      for (int i = 0; i < da; ++i) p *= lb;
      return res * p;
    }
    Poly<F> r = a % b;
    if (r.is_zero_poly()) return F(0);
    const int dr = r.deg();
    // res(a,b) = (-1)^(da*db) * lc(b)^(da-dr) * res(b, r)
    if ((da * db) % 2 == 1) res = -res;
    F lb = b.lc();
    for (int i = 0; i < da - dr; ++i) res *= lb;
    a = std::move(b);
    b = std::move(r);
  }
}

/// Squarefree factorisation (Yun): returns factors f_1, f_2, ... with
/// p = lc * prod f_i^i and each f_i monic squarefree, pairwise coprime.
/// Trailing entries may be 1 where a multiplicity is absent.
template <class F>
std::vector<Poly<F>> squarefree_factors(const Poly<F>& p) {
  std::vector<Poly<F>> out;
  if (p.deg() <= 0) return out;
  Poly<F> a = p.monic();
  Poly<F> ad = a.derivative();
  Poly<F> b = gcd(a, ad);
  Poly<F> c = a / b;
  Poly<F> d = ad / b - c.derivative();
  while (c.deg() > 0) {
    Poly<F> g = gcd(c, d);
    out.push_back(g);
    c = c / g;
    d = d / g - c.derivative();
  }
  return out;
}

template <class F>
Poly<F> squarefree_part(const Poly<F>& p) {
  if (p.deg() <= 0) return Poly<F>(F(1));
  return (p / gcd(p, p.derivative())).monic();
}

/// Multiplicity of the squarefree polynomial q in p (q non-constant).
template <class F>
int valuation(Poly<F> p, const Poly<F>& q) {
  if (p.is_zero_poly()) return 1 << 20;
  int v = 0;
  while (true) {
    auto [qq, r] = p.divmod(q);
    if (!r.is_zero_poly()) return v;
    p = std::move(qq);
    ++v;
  }
}

/// Refine a list of polynomials into a gcd-free basis: pairwise coprime,
/// monic, squarefree, non-constant polynomials such that every input is,
/// up to a constant, a product of powers of basis elements.
template <class F>
std::vector<Poly<F>> gcd_free_basis(const std::vector<Poly<F>>& input) {
  std::vector<Poly<F>> basis;
  for (const auto& p0 : input) {
    for (const auto& s : squarefree_factors(p0)) {
      if (s.deg() <= 0) continue;
      // Insert s, splitting against existing elements.
      std::vector<Poly<F>> pending{s};
      while (!pending.empty()) {
        Poly<F> q = pending.back();
        pending.pop_back();
        if (q.deg() <= 0) continue;
        bool merged = false;
        for (std::size_t i = 0; i < basis.size(); ++i) {
          Poly<F> g = gcd(basis[i], q);
          if (g.deg() <= 0) continue;
          Poly<F> b = basis[i];
          basis.erase(basis.begin() + static_cast<long>(i));
          pending.push_back(g);
          pending.push_back(b / g);
          pending.push_back(q / g);
          merged = true;
          break;
        }
        if (!merged) basis.push_back(q.monic());
      }
    }
  }
  // Remove duplicates that can appear after splitting equal factors.
  std::vector<Poly<F>> out;
  for (auto& b : basis) {
    bool dup = false;
    for (auto& o : out) dup = dup || o == b;
    if (!dup) out.push_back(b);
  }
  return out;
}

}  // namespace pdgal3
