#include "pdgal3/series_oracle.hpp"

namespace pdgal3 {

namespace {

QtPoly shifted(const QtPoly& p, const Q& x0) {
  return p.compose(QtPoly(std::vector<Qt>{Qt(x0), Qt(1)}));
}

}  // namespace

std::vector<Qt> expand(const RatFunc& a, const Q& x0, int order) {
  const std::size_t N = static_cast<std::size_t>(order);
  std::vector<Qt> out(N, Qt(0));
  if (is_zero(a)) return out;
  QtPoly u = shifted(a.num(), x0), v = shifted(a.den(), x0);
  if (is_zero(v.constant_term())) throw PoleAtExpansionPoint("expansion point is a pole");
  const Qt inv = Qt(1) / v.constant_term();
  for (std::size_t k = 0; k < N; ++k) {
    Qt s = u.coeff(k);
    for (std::size_t j = 1; j <= k; ++j)
      if (!is_zero(v.coeff(j))) s -= v.coeff(j) * out[k - j];
    out[k] = s * inv;
  }
  return out;
}

std::vector<QtMatrix> expand(const RMatrix& A, const Q& x0, int order) {
  std::vector<QtMatrix> out(static_cast<std::size_t>(order), QtMatrix(A.rows(), A.cols()));
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) {
      auto s = expand(A(i, j), x0, order);
      for (std::size_t k = 0; k < s.size(); ++k) out[k](i, j) = s[k];
    }
  return out;
}

Q ordinary_point(const RMatrix& A) {
  for (long c = 0;; ++c) {
    bool ok = true;
    for (std::size_t i = 0; i < A.rows() && ok; ++i)
      for (std::size_t j = 0; j < A.cols() && ok; ++j)
        ok = !is_zero(A(i, j).den().eval<Qt>(Qt(c)));
    if (ok) return Q(c);
  }
}

SeriesMatrix fundamental_series(const RMatrix& A, const Q& x0, int order) {
  const std::size_t n = A.rows();
  auto As = expand(A, x0, order);
  SeriesMatrix U{x0, order, {}};
  U.coeffs.push_back(QtMatrix::identity(n));
  for (int k = 0; k + 1 < order; ++k) {
    QtMatrix s(n, n);
    for (int j = 0; j <= k; ++j) s = s + As[static_cast<std::size_t>(j)] * U.coeffs[static_cast<std::size_t>(k - j)];
    U.coeffs.push_back(Qt(Q(1, k + 1)) * s);
  }
  return U;
}

SeriesMatrix delta_series(const SeriesMatrix& U) {
  SeriesMatrix r = U;
  for (auto& c : r.coeffs) c = c.map([](const Qt& a) { return d_t(a); });
  return r;
}

SeriesMatrix series_product(const SeriesMatrix& a, const SeriesMatrix& b) {
  SeriesMatrix r{a.x0, std::min(a.order, b.order), {}};
  for (int k = 0; k < r.order; ++k) {
    QtMatrix s(a.rows(), b.cols());
    for (int j = 0; j <= k; ++j) s = s + a.coeffs[static_cast<std::size_t>(j)] * b.coeffs[static_cast<std::size_t>(k - j)];
    r.coeffs.push_back(std::move(s));
  }
  return r;
}

SeriesMatrix series_kron(const SeriesMatrix& a, const SeriesMatrix& b) {
  SeriesMatrix r{a.x0, std::min(a.order, b.order), {}};
  for (int k = 0; k < r.order; ++k) {
    QtMatrix s(a.rows() * b.rows(), a.cols() * b.cols());
    for (int j = 0; j <= k; ++j) s = s + kron(a.coeffs[static_cast<std::size_t>(j)], b.coeffs[static_cast<std::size_t>(k - j)]);
    r.coeffs.push_back(std::move(s));
  }
  return r;
}

SeriesMatrix series_block(const SeriesMatrix& a, const SeriesMatrix& b, const SeriesMatrix& c) {
  const std::size_t n = a.rows();
  SeriesMatrix r{a.x0, std::min({a.order, b.order, c.order}), {}};
  for (int k = 0; k < r.order; ++k) {
    QtMatrix m(2 * n, 2 * n);
    m.set_block(0, 0, a.coeffs[static_cast<std::size_t>(k)]);
    m.set_block(0, n, b.coeffs[static_cast<std::size_t>(k)]);
    m.set_block(n, n, c.coeffs[static_cast<std::size_t>(k)]);
    r.coeffs.push_back(std::move(m));
  }
  return r;
}

SeriesMatrix series_inverse(const SeriesMatrix& a) {
  auto inv0 = a.coeffs[0].inverse();
  if (!inv0) throw std::invalid_argument("series constant term is singular");
  SeriesMatrix r{a.x0, a.order, {*inv0}};
  for (int k = 1; k < a.order; ++k) {
    QtMatrix s(a.rows(), a.cols());
    for (int j = 1; j <= k; ++j) s = s + a.coeffs[static_cast<std::size_t>(j)] * r.coeffs[static_cast<std::size_t>(k - j)];
    r.coeffs.push_back(-(*inv0 * s));
  }
  return r;
}

SeriesMatrix series_transpose(const SeriesMatrix& a) {
  SeriesMatrix r = a;
  for (auto& c : r.coeffs) c = c.transpose();
  return r;
}

bool satisfies(const RMatrix& A, const SeriesMatrix& U) {
  auto As = expand(A, U.x0, U.order);
  for (int k = 0; k + 1 < U.order; ++k) {
    QtMatrix lhs = Qt(Q(k + 1)) * U.coeffs[static_cast<std::size_t>(k + 1)];
    for (int j = 0; j <= k; ++j) lhs = lhs - As[static_cast<std::size_t>(j)] * U.coeffs[static_cast<std::size_t>(k - j)];
    if (!lhs.is_zero_matrix()) return false;
  }
  return true;
}

}  // namespace pdgal3
