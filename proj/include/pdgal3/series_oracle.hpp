// Truncated power-series fundamental matrices at an ordinary point.
#pragma once

#include <vector>

#include "pdgal3/linear_solvers.hpp"

namespace pdgal3 {

/// U = sum_k coeffs[k] (x - x0)^k, k < order.
struct SeriesMatrix {
  Q x0;
  int order = 0;
  std::vector<QtMatrix> coeffs;

  std::size_t rows() const { return coeffs.empty() ? 0 : coeffs[0].rows(); }
  std::size_t cols() const { return coeffs.empty() ? 0 : coeffs[0].cols(); }
};

struct PoleAtExpansionPoint : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Series of a at x0 through order terms; throws when x0 is a pole.
std::vector<Qt> expand(const RatFunc& a, const Q& x0, int order);
std::vector<QtMatrix> expand(const RMatrix& A, const Q& x0, int order);

/// Smallest non-negative integer that is not a pole of any entry.
Q ordinary_point(const RMatrix& A);

/// U(x0) = I and d_x U = A U through the given order.
SeriesMatrix fundamental_series(const RMatrix& A, const Q& x0, int order);
/// Termwise d_t.
SeriesMatrix delta_series(const SeriesMatrix& U);

SeriesMatrix series_product(const SeriesMatrix& a, const SeriesMatrix& b);
SeriesMatrix series_kron(const SeriesMatrix& a, const SeriesMatrix& b);
/// [[a, b], [0, c]] for equally sized square series.
SeriesMatrix series_block(const SeriesMatrix& a, const SeriesMatrix& b, const SeriesMatrix& c);
/// Truncated inverse (requires an invertible constant term).
SeriesMatrix series_inverse(const SeriesMatrix& a);
SeriesMatrix series_transpose(const SeriesMatrix& a);

/// d_x U - A U vanishes through degree order - 2.
bool satisfies(const RMatrix& A, const SeriesMatrix& U);

}  // namespace pdgal3
