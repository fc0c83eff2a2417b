#include "pdgal3/diff_module.hpp"

#include <random>

namespace pdgal3 {

DiffSystem direct_sum(const DiffSystem& a, const DiffSystem& b) {
  DiffSystem r(a.rows() + b.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), a.cols(), b);
  return r;
}

DiffSystem tensor(const DiffSystem& a, const DiffSystem& b) {
  return kron(a, RMatrix::identity(b.rows())) + kron(RMatrix::identity(a.rows()), b);
}

DiffSystem dual(const DiffSystem& a) { return -a.transpose(); }

DiffSystem hom(const DiffSystem& a, const DiffSystem& b) { return tensor(dual(a), b); }

namespace {

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

DiffSystem wedge(const DiffSystem& a, int k) {
  const int n = static_cast<int>(a.rows());
  if (k < 0 || k > n) throw DimensionError("wedge power out of range");
  auto sets = subsets(n, k);
  DiffSystem r(sets.size(), sets.size());
  auto index_of = [&](const std::vector<int>& s) {
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (sets[i] == s) return i;
    return sets.size();
  };
  for (std::size_t c = 0; c < sets.size(); ++c) {
    const auto& S = sets[c];
    // D(e_S) = sum over positions p, rows i of A(i, S[p]) e_{S with S[p] -> i}.
    for (std::size_t p = 0; p < S.size(); ++p)
      for (int i = 0; i < n; ++i) {
        const RatFunc& v = a(static_cast<std::size_t>(i), static_cast<std::size_t>(S[p]));
        if (is_zero(v)) continue;
        std::vector<int> T = S;
        T[p] = i;
        bool repeated = false;
        for (std::size_t q = 0; q < T.size(); ++q)
          if (q != p && T[q] == i) repeated = true;
        if (repeated) continue;
        // Sort T, tracking the sign of the permutation.
        int sign = 1;
        for (std::size_t x = 0; x < T.size(); ++x)
          for (std::size_t y = x + 1; y < T.size(); ++y)
            if (T[x] > T[y]) {
              std::swap(T[x], T[y]);
              sign = -sign;
            }
        std::size_t row = index_of(T);
        r(row, c) += sign > 0 ? v : -v;
      }
  }
  return r;
}

DiffSystem sym2(const DiffSystem& a) {
  if (a.rows() != 2) throw DimensionError("sym2 is implemented for 2-dim systems");
  const RatFunc two(2);
  DiffSystem r(3, 3);
  // columns: D(e1^2), D(e1 e2), D(e2^2)
  r(0, 0) = two * a(0, 0);
  r(1, 0) = two * a(1, 0);
  r(0, 1) = a(0, 1);
  r(1, 1) = a(0, 0) + a(1, 1);
  r(2, 1) = a(1, 0);
  r(1, 2) = two * a(0, 1);
  r(2, 2) = two * a(1, 1);
  return r;
}

DiffSystem prolong(const DiffSystem& a) {
  const std::size_t n = a.rows();
  DiffSystem r(2 * n, 2 * n);
  r.set_block(0, 0, a);
  r.set_block(0, n, d_t(a));
  r.set_block(n, n, a);
  return r;
}

DiffSystem gauge(const DiffSystem& a, const RMatrix& P) {
  auto inv = P.inverse();
  if (!inv) throw std::invalid_argument("gauge matrix is singular");
  return P * a * *inv + d_x(P) * *inv;
}

std::optional<RMatrix> is_invariant(const DiffSystem& a, const RMatrix& S) {
  if (S.rows() != a.rows()) throw DimensionError("subspace basis has wrong height");
  if (S.rank() != S.cols()) throw std::invalid_argument("subspace basis is rank deficient");
  return S.solve(a * S - d_x(S));
}

RMatrix complete_basis(const RMatrix& S) {
  const std::size_t n = S.rows();
  RMatrix T = S;
  for (std::size_t j = 0; j < n && T.cols() < n; ++j) {
    RMatrix E(n, T.cols() + 1);
    E.set_block(0, 0, T);
    E(j, T.cols()) = RatFunc(1);
    if (E.rank() == E.cols()) T = E;
  }
  return T;
}

MorphismSpace morphisms(const DiffSystem& from, const DiffSystem& to, const SolverOptions& opt) {
  const std::size_t n1 = from.rows(), n2 = to.rows();
  SolutionSpace s = rational_solutions(hom(from, to), {}, opt);
  MorphismSpace out;
  out.complete = s.complete;
  for (const auto& v : s.basis) {
    RMatrix U(n2, n1);
    for (std::size_t j = 0; j < n1; ++j)
      for (std::size_t i = 0; i < n2; ++i) U(i, j) = v[j * n2 + i];
    out.basis.push_back(std::move(U));
  }
  return out;
}

std::optional<RMatrix> invertible_member(const MorphismSpace& m) {
  if (m.basis.empty() || !m.basis[0].is_square()) return std::nullopt;
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> dist(-9, 9);
  for (int attempt = 0; attempt < 4; ++attempt) {
    RMatrix U(m.basis[0].rows(), m.basis[0].cols());
    for (std::size_t k = 0; k < m.basis.size(); ++k) {
      int c = attempt == 0 && m.basis.size() == 1 ? 1 : dist(rng);
      if (c == 0) c = 1;
      U = U + RatFunc(c) * m.basis[k];
    }
    if (!is_zero(U.det())) return U;
  }
  return std::nullopt;
}

SplitResult split_extension(const DiffSystem& a, const RMatrix& S, const SolverOptions& opt) {
  if (!is_invariant(a, S)) throw std::invalid_argument("split_extension: subspace is not invariant");
  const std::size_t n = a.rows(), k = S.cols();
  RMatrix T = complete_basis(S);
  RMatrix Ti = *T.inverse();
  RMatrix At = gauge(a, Ti);
  RMatrix A11 = At.block(0, 0, k, k), A12 = At.block(0, k, k, n - k), A22 = At.block(k, k, n - k, n - k);
  // d_x F = A11 F - F A22 + A12, F: k x (n-k), column-major vec.
  RMatrix sys = kron(RMatrix::identity(n - k), A11) - kron(A22.transpose(), RMatrix::identity(k));
  RVector rhs;
  for (std::size_t j = 0; j < n - k; ++j)
    for (std::size_t i = 0; i < k; ++i) rhs.push_back(A12(i, j));
  SplitResult out;
  SolutionSpace s = rational_solutions(sys, rhs, opt);
  out.complete = s.complete;
  if (!s.particular && !is_zero_vector(rhs)) return out;
  RVector f = s.particular ? *s.particular : RVector(k * (n - k));
  RMatrix W(n, n - k);
  for (std::size_t j = 0; j < n - k; ++j) {
    for (std::size_t i = 0; i < k; ++i) W(i, j) = f[j * k + i];
    W(k + j, j) = RatFunc(1);
  }
  RMatrix C = T * W;
  if (!is_invariant(a, C)) throw std::logic_error("split_extension: complement failed verification");
  out.complement = C;
  return out;
}

bool verify_flag(const DiffSystem& a, FlagCertificate& cert) {
  cert.verified = false;
  std::size_t prev = 0;
  for (std::size_t i = 0; i < cert.subspaces.size(); ++i) {
    const RMatrix& S = cert.subspaces[i];
    if (S.rows() != a.rows() || S.cols() <= prev || S.cols() >= a.rows()) return false;
    if (S.rank() != S.cols()) return false;
    if (!is_invariant(a, S)) return false;
    if (i > 0) {
      const RMatrix& R = cert.subspaces[i - 1];
      RMatrix both(a.rows(), R.cols() + S.cols());
      both.set_block(0, 0, S);
      both.set_block(0, S.cols(), R);
      if (both.rank() != S.cols()) return false;
    }
    prev = S.cols();
  }
  cert.verified = true;
  return true;
}

std::vector<std::size_t> ModuleDiag::sizes() const {
  std::vector<std::size_t> s;
  for (const auto& f : factors) s.push_back(f.rows());
  return s;
}

std::size_t ModuleDiag::offset(std::size_t i) const {
  std::size_t o = 0;
  for (std::size_t k = 0; k < i; ++k) o += factors[k].rows();
  return o;
}

std::optional<RMatrix> find_invariant_line(const DiffSystem& a, const SolverOptions& opt) {
  for (const auto& h : hyperexponential_solutions(a, opt)) {
    if (h.basis.empty()) continue;
    return RMatrix::column(h.basis[0]);
  }
  return std::nullopt;
}

namespace {

RMatrix block_diag(const RMatrix& a, const RMatrix& b) { return direct_sum(a, b); }

/// Kernel basis of the row vector w (n entries), as columns.
RMatrix kernel_of_row(const RVector& w) {
  RMatrix row(1, w.size());
  for (std::size_t j = 0; j < w.size(); ++j) row(0, j) = w[j];
  auto ker = row.nullspace();
  RMatrix S(w.size(), ker.size());
  for (std::size_t j = 0; j < ker.size(); ++j) S.set_col(j, ker[j]);
  return S;
}

ModuleDiag decompose_rec(const DiffSystem& a, const SolverOptions& opt) {
  const std::size_t n = a.rows();
  ModuleDiag d;
  d.P = RMatrix::identity(n);
  d.triangular = a;
  if (n == 1) {
    d.factors = {a};
    return d;
  }
  std::optional<RMatrix> S = find_invariant_line(a, opt);
  if (!S) {
    std::optional<RMatrix> w = find_invariant_line(dual(a), opt);
    if (w) S = kernel_of_row(w->col(0));
  }
  if (!S) {
    d.factors = {a};
    return d;
  }
  const std::size_t k = S->cols();
  RMatrix T = complete_basis(*S);
  RMatrix P1 = *T.inverse();
  RMatrix At = gauge(a, P1);
  ModuleDiag top = decompose_rec(At.block(0, 0, k, k), opt);
  ModuleDiag bottom = decompose_rec(At.block(k, k, n - k, n - k), opt);
  d.P = block_diag(top.P, bottom.P) * P1;
  d.triangular = gauge(a, d.P);
  d.factors = top.factors;
  d.factors.insert(d.factors.end(), bottom.factors.begin(), bottom.factors.end());
  d.complete = top.complete && bottom.complete;
  return d;
}

}  // namespace

ModuleDiag diag_decompose(const DiffSystem& a, const std::optional<FlagCertificate>& cert, const SolverOptions& opt) {
  if (!a.is_square()) throw DimensionError("system matrix must be square");
  if (!cert) return decompose_rec(a, opt);
  FlagCertificate c = *cert;
  if (!verify_flag(a, c)) throw std::invalid_argument("flag certificate does not verify");
  const std::size_t n = a.rows();
  RMatrix T = complete_basis(c.subspaces.back());
  // Rebuild T so that its first columns span each flag member in turn.
  RMatrix basis(n, 0);
  for (const auto& S : c.subspaces) {
    for (std::size_t j = 0; j < S.cols(); ++j) {
      RMatrix E(n, basis.cols() + 1);
      E.set_block(0, 0, basis);
      E.set_col(basis.cols(), S.col(j));
      if (E.rank() == E.cols()) basis = E;
    }
  }
  T = complete_basis(basis);
  ModuleDiag d;
  d.P = *T.inverse();
  d.triangular = gauge(a, d.P);
  std::size_t prev = 0;
  for (const auto& S : c.subspaces) {
    d.factors.push_back(d.triangular.block(prev, prev, S.cols() - prev, S.cols() - prev));
    prev = S.cols();
  }
  d.factors.push_back(d.triangular.block(prev, prev, n - prev, n - prev));
  return d;
}

}  // namespace pdgal3
