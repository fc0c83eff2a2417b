#include "pdgal3/group_model.hpp"

#include <algorithm>
#include <set>

namespace pdgal3 {

namespace {

bool qt_zero(const Qt& c) { return is_zero(c); }

}  // namespace

// ---- DPoly ------------------------------------------------------------------

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
  auto ia = a.rbegin(), ib = b.rbegin();
  for (; ia != a.rend() && ib != b.rend(); ++ia, ++ib) {
    if (ia->first < ib->first) return true;
    if (ib->first < ia->first) return false;
    if (ia->second != ib->second) return ia->second < ib->second;
  }
  return ia == a.rend() && ib != b.rend();
}

DPoly::DPoly(const Qt& c) {
  if (!qt_zero(c)) terms_[Monomial{}] = c;
}

DPoly DPoly::var(int i, int j, int order, int set) {
  return monomial(Monomial{{DVar{set, i, j, order}, 1}});
}

DPoly DPoly::monomial(const Monomial& m, const Qt& c) {
  DPoly p;
  p.add_term(m, c);
  return p;
}

void DPoly::add_term(const Monomial& m, const Qt& c) {
  if (qt_zero(c)) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (qt_zero(it->second)) terms_.erase(it);
}

int DPoly::max_order() const {
  int o = -1;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m) o = std::max(o, v.order);
  return o;
}

DPoly DPoly::operator-() const {
  DPoly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

DPoly operator+(const DPoly& a, const DPoly& b) {
  DPoly r = a;
  for (const auto& [m, c] : b.terms_) r.add_term(m, c);
  return r;
}

DPoly operator-(const DPoly& a, const DPoly& b) { return a + (-b); }

namespace {

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r = a;
  for (const auto& [v, e] : b) {
    int& x = r[v];
    x += e;
    if (x == 0) r.erase(v);
  }
  return r;
}

}  // namespace

DPoly operator*(const DPoly& a, const DPoly& b) {
  DPoly r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(mono_mul(ma, mb), ca * cb);
  return r;
}

DPoly DPoly::pow(int e) const {
  if (e < 0) {
    if (terms_.size() != 1) throw std::invalid_argument("negative power of a non-monomial");
    const auto& [m, c] = *terms_.begin();
    Monomial inv;
    for (const auto& [v, x] : m) inv[v] = x * e;
    Qt ci = Qt(1);
    for (int k = 0; k < -e; ++k) ci = ci / c;
    return monomial(inv, ci);
  }
  DPoly r(Qt(1)), b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

DPoly DPoly::delta() const {
  DPoly r;
  for (const auto& [m, c] : terms_) {
    r.add_term(m, d_t(c));
    for (const auto& [v, e] : m) {
      Monomial n = m;
      if (--n[v] == 0) n.erase(v);
      DVar w = v;
      ++w.order;
      n = mono_mul(n, Monomial{{w, 1}});
      r.add_term(n, c * Qt(e));
    }
  }
  return r;
}

DPoly DPoly::substitute(const std::function<DPoly(const DVar&)>& f) const {
  std::map<DVar, DPoly> cache;
  DPoly r;
  for (const auto& [m, c] : terms_) {
    DPoly t(c);
    for (const auto& [v, e] : m) {
      auto it = cache.find(v);
      if (it == cache.end()) it = cache.emplace(v, f(v)).first;
      t = t * it->second.pow(e);
    }
    r += t;
  }
  return r;
}

Qt DPoly::eval(const std::function<Qt(const DVar&)>& f) const {
  std::map<DVar, Qt> cache;
  Qt s(0);
  for (const auto& [m, c] : terms_) {
    Qt t = c;
    for (const auto& [v, e] : m) {
      auto it = cache.find(v);
      if (it == cache.end()) it = cache.emplace(v, f(v)).first;
      if (e < 0 && qt_zero(it->second)) throw SingularMatrix("division by a vanishing entry");
      for (int k = 0; k < std::abs(e); ++k) t = e > 0 ? t * it->second : t / it->second;
    }
    s += t;
  }
  return s;
}

DPoly DPoly::normalized() const {
  if (terms_.empty()) return *this;
  std::map<DVar, int> lo;
  std::set<DVar> vars;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m) vars.insert(v);
  for (const auto& v : vars) {
    int mn = 0;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      auto it = m.find(v);
      int e = it == m.end() ? 0 : it->second;
      mn = first ? e : std::min(mn, e);
      first = false;
    }
    if (mn < 0) lo[v] = -mn;
  }
  DPoly r;
  const Qt lead = terms_.rbegin()->second;
  for (const auto& [m, c] : terms_) r.add_term(mono_mul(m, lo), c / lead);
  return r;
}

std::string to_string(const DVar& v) {
  static const char* names = "yab";
  std::string s(1, names[std::min(v.set, 2)]);
  s += std::to_string(v.i + 1) + std::to_string(v.j + 1);
  s += std::string(static_cast<std::size_t>(v.order), '\'');
  return s;
}

std::string to_string(const DPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    std::string mono;
    for (auto vt = m.rbegin(); vt != m.rend(); ++vt) {
      if (!mono.empty()) mono += "*";
      mono += to_string(vt->first);
      if (vt->second != 1) mono += "^" + std::to_string(vt->second);
    }
    bool negative = false;
    std::string coeff;
    if (is_rational_constant(c)) {
      Q q = c.num().constant_term() / c.den().constant_term();
      negative = q < 0;
      if (negative) q = -q;
      if (q != 1 || mono.empty()) coeff = to_string(q);
    } else {
      coeff = to_string(c);
      if (coeff[0] == '-' && coeff.find_first_of("+-/ ", 1) == std::string::npos) {
        negative = true;
        coeff = coeff.substr(1);
      } else if (coeff.find_first_of("+-/ ") != std::string::npos) {
        coeff = "(" + coeff + ")";
      }
    }
    std::string term = coeff;
    if (!mono.empty()) term += (coeff.empty() ? "" : "*") + mono;
    if (first)
      out = (negative ? "-" : "") + term;
    else
      out += (negative ? " - " : " + ") + term;
    first = false;
  }
  return out;
}

// ---- RepMap -------------------------------------------------------------------

std::vector<std::vector<DPoly>> generic_matrix(std::size_t n, int set) {
  std::vector<std::vector<DPoly>> y(n, std::vector<DPoly>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) y[i][j] = DPoly::var(static_cast<int>(i), static_cast<int>(j), 0, set);
  return y;
}

RepMap RepMap::identity(std::size_t n) { return {"identity", n, n, generic_matrix(n)}; }

RepMap RepMap::select(std::size_t n, const std::vector<int>& idx, std::string name) {
  RepMap r{name.empty() ? "select" : std::move(name), n, idx.size(), {}};
  r.entries.assign(idx.size(), std::vector<DPoly>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) r.entries[a][b] = DPoly::var(idx[a], idx[b]);
  return r;
}

namespace {

DPoly det_of(const std::vector<std::vector<DPoly>>& y) {
  const std::size_t n = y.size();
  if (n == 0) return DPoly(Qt(1));
  if (n == 1) return y[0][0];
  DPoly s;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<DPoly>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<DPoly> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(y[i][j]);
      minor.push_back(std::move(row));
    }
    DPoly t = y[0][c] * det_of(minor);
    s = c % 2 ? s - t : s + t;
  }
  return s;
}

}  // namespace

RepMap RepMap::det(std::size_t n) { return {"det", n, 1, {{det_of(generic_matrix(n))}}}; }

RepMap RepMap::diagonal(std::size_t n) {
  RepMap r{"diagonal", n, n, {}};
  r.entries.assign(n, std::vector<DPoly>(n));
  for (std::size_t i = 0; i < n; ++i) r.entries[i][i] = DPoly::var(static_cast<int>(i), static_cast<int>(i));
  return r;
}

RepMap RepMap::prolongation(const RepMap& r) {
  const std::size_t m = r.target_dim;
  RepMap p{"prolongation(" + r.name + ")", r.source_dim, 2 * m, {}};
  p.entries.assign(2 * m, std::vector<DPoly>(2 * m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      p.entries[i][j] = r.entries[i][j];
      p.entries[m + i][m + j] = r.entries[i][j];
      p.entries[i][m + j] = r.entries[i][j].delta();
    }
  return p;
}

RepMap RepMap::direct_sum(const RepMap& a, const RepMap& b) {
  if (a.source_dim != b.source_dim) throw DimensionError("direct sum of representations with different sources");
  const std::size_t m = a.target_dim + b.target_dim;
  RepMap r{a.name + "+" + b.name, a.source_dim, m, {}};
  r.entries.assign(m, std::vector<DPoly>(m));
  for (std::size_t i = 0; i < a.target_dim; ++i)
    for (std::size_t j = 0; j < a.target_dim; ++j) r.entries[i][j] = a.entries[i][j];
  for (std::size_t i = 0; i < b.target_dim; ++i)
    for (std::size_t j = 0; j < b.target_dim; ++j) r.entries[a.target_dim + i][a.target_dim + j] = b.entries[i][j];
  return r;
}

std::vector<std::vector<DPoly>> RepMap::apply(const std::vector<std::vector<DPoly>>& y) const {
  auto f = [&](const DVar& v) {
    DPoly p = y[static_cast<std::size_t>(v.i)][static_cast<std::size_t>(v.j)];
    for (int k = 0; k < v.order; ++k) p = p.delta();
    return p;
  };
  std::vector<std::vector<DPoly>> out(target_dim, std::vector<DPoly>(target_dim));
  for (std::size_t i = 0; i < target_dim; ++i)
    for (std::size_t j = 0; j < target_dim; ++j) out[i][j] = entries[i][j].substitute(f);
  return out;
}

RepMap RepMap::compose(const RepMap& outer, const RepMap& inner) {
  if (outer.source_dim != inner.target_dim) throw DimensionError("representation composition mismatch");
  return {outer.name + "." + inner.name, inner.source_dim, outer.target_dim, outer.apply(inner.entries)};
}

std::vector<std::vector<Qt>> RepMap::eval(const QtMatrix& m) const {
  auto f = [&](const DVar& v) {
    Qt a = m(static_cast<std::size_t>(v.i), static_cast<std::size_t>(v.j));
    for (int k = 0; k < v.order; ++k) a = d_t(a);
    return a;
  };
  std::vector<std::vector<Qt>> out(target_dim, std::vector<Qt>(target_dim));
  for (std::size_t i = 0; i < target_dim; ++i)
    for (std::size_t j = 0; j < target_dim; ++j) out[i][j] = entries[i][j].eval(f);
  return out;
}

bool is_multiplicative(const RepMap& r) {
  const std::size_t n = r.source_dim, m = r.target_dim;
  auto a = generic_matrix(n, 1), b = generic_matrix(n, 2);
  std::vector<std::vector<DPoly>> ab(n, std::vector<DPoly>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) ab[i][j] += a[i][k] * b[k][j];
  auto ra = r.apply(a), rb = r.apply(b), rab = r.apply(ab);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      DPoly s;
      for (std::size_t k = 0; k < m; ++k) s += ra[i][k] * rb[k][j];
      if (s != rab[i][j]) return false;
    }
  return true;
}

// ---- GroupDescription ---------------------------------------------------------

void GroupDescription::add_flag(const std::string& f) {
  if (!has_flag(f)) flags.push_back(f);
}

bool GroupDescription::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

std::string to_string(GroupDescription::Kind k) {
  switch (k) {
    case GroupDescription::Kind::Explicit: return "explicit";
    case GroupDescription::Kind::Named: return "named";
    case GroupDescription::Kind::Pullback: return "pullback";
    case GroupDescription::Kind::Deferred: return "deferred";
  }
  return "?";
}

std::vector<DPoly> normalize_equations(const std::vector<DPoly>& eqs) {
  // Entries forced to vanish (an equation that is a single entry) are
  // substituted into the others, together with their derivatives.
  std::set<std::tuple<int, int, int>> zero;
  for (const auto& e : eqs) {
    if (e.terms().size() != 1) continue;
    const auto& m = e.terms().begin()->first;
    if (m.size() == 1 && m.begin()->second == 1 && m.begin()->first.order == 0) {
      const DVar& v = m.begin()->first;
      zero.insert({v.set, v.i, v.j});
    }
  }
  auto is_killed = [&](const DVar& v) { return zero.count({v.set, v.i, v.j}) > 0; };
  std::vector<std::pair<std::string, DPoly>> keyed;
  for (const auto& e0 : eqs) {
    DPoly e = e0;
    bool negative = false, touches = false;
    for (const auto& [m, c] : e.terms())
      for (const auto& [v, x] : m)
        if (is_killed(v)) {
          touches = true;
          negative = negative || x < 0;
        }
    bool single = e.terms().size() == 1 && e.terms().begin()->first.size() == 1;
    if (touches && !negative && !single)
      e = e.substitute([&](const DVar& v) { return is_killed(v) ? DPoly() : DPoly::monomial(Monomial{{v, 1}}); });
    if (e.is_zero()) continue;
    DPoly n = e.normalized();
    keyed.emplace_back(to_string(n), n);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  std::vector<DPoly> out;
  for (std::size_t k = 0; k < keyed.size(); ++k)
    if (k == 0 || keyed[k].first != keyed[k - 1].first) out.push_back(keyed[k].second);
  return out;
}

GroupDescription explicit_group(std::size_t n, const std::vector<DPoly>& eqs) {
  GroupDescription g;
  g.kind = GroupDescription::Kind::Explicit;
  g.dim = n;
  g.equations = normalize_equations(eqs);
  return g;
}

namespace {

GroupDescription named(std::size_t n, std::string family, const std::vector<DPoly>& eqs) {
  GroupDescription g = explicit_group(n, eqs);
  g.kind = GroupDescription::Kind::Named;
  g.family = std::move(family);
  return g;
}

DPoly y(std::size_t i, std::size_t j, int order = 0) {
  return DPoly::var(static_cast<int>(i), static_cast<int>(j), order);
}

}  // namespace

GroupDescription gl(std::size_t n) { return named(n, "GL" + std::to_string(n), {}); }

GroupDescription sl(std::size_t n) {
  return named(n, "SL" + std::to_string(n), {RepMap::det(n).entries[0][0] - DPoly(Qt(1))});
}

GroupDescription borel(std::size_t n) {
  std::vector<DPoly> eqs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) eqs.push_back(y(i, j));
  return named(n, "Borel", eqs);
}

GroupDescription block_triangular(const std::vector<std::size_t>& sizes) {
  std::size_t n = 0;
  std::vector<std::size_t> block;
  for (std::size_t b = 0; b < sizes.size(); ++b)
    for (std::size_t k = 0; k < sizes[b]; ++k, ++n) block.push_back(b);
  std::vector<DPoly> eqs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (block[i] > block[j]) eqs.push_back(y(i, j));
  return named(n, "block-triangular", eqs);
}

GroupDescription diagonal_group(std::size_t n, const std::vector<DPoly>& eqs, std::vector<std::string> data) {
  std::vector<DPoly> all = eqs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) all.push_back(y(i, j));
  GroupDescription g = named(n, "torus", all);
  g.data = std::move(data);
  return g;
}

GroupDescription additive(const OreOp& L) {
  DPoly lu;
  for (std::size_t k = 0; k < L.coeffs().size(); ++k) lu += DPoly(L.coeffs()[k]) * y(0, 1, static_cast<int>(k));
  GroupDescription g = named(2, "additive", {y(0, 0) - DPoly(1), y(1, 1) - DPoly(1), y(1, 0), lu});
  g.data = {"L = " + to_string(L)};
  return g;
}

GroupDescription constant_group(std::size_t n, bool special, const std::string& witness) {
  std::vector<DPoly> eqs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) eqs.push_back(y(i, j, 1));
  if (special) eqs.push_back(RepMap::det(n).entries[0][0] - DPoly(Qt(1)));
  GroupDescription g = named(n, special ? "SL2-constant-conjugate" : "constant-conjugate", eqs);
  g.data = {"witness B = " + witness};
  g.add_flag("up to conjugation");
  return g;
}

GroupDescription deferred(std::size_t n, const std::string& reduction, const std::vector<DPoly>& partial) {
  GroupDescription g = explicit_group(n, partial);
  g.kind = GroupDescription::Kind::Deferred;
  g.reduction = reduction;
  g.add_flag("deferred");
  return g;
}

GroupDescription pullback(const RepMap& rep, const GroupDescription& g) {
  if (rep.target_dim != g.dim) throw DimensionError("pullback: representation target does not match group");
  auto f = [&](const DVar& v) {
    DPoly p = rep.entries[static_cast<std::size_t>(v.i)][static_cast<std::size_t>(v.j)];
    for (int k = 0; k < v.order; ++k) p = p.delta();
    return p;
  };
  std::vector<DPoly> eqs;
  for (const auto& e : g.equations) eqs.push_back(e.substitute(f));
  GroupDescription out = explicit_group(rep.source_dim, eqs);
  if (g.kind == GroupDescription::Kind::Deferred) {
    out.kind = GroupDescription::Kind::Deferred;
    out.reduction = g.reduction;
  }
  out.flags = g.flags;
  return out;
}

GroupDescription pullback_intersection(std::size_t n, const std::vector<std::pair<RepMap, GroupDescription>>& parts,
                                       const std::vector<DPoly>& ambient) {
  GroupDescription g;
  g.kind = GroupDescription::Kind::Pullback;
  g.dim = n;
  g.ambient = normalize_equations(ambient);
  std::vector<DPoly> eqs = ambient;
  for (const auto& [rep, h] : parts) {
    GroupDescription p = pullback(rep, h);
    eqs.insert(eqs.end(), p.equations.begin(), p.equations.end());
    for (const auto& f : h.flags) g.add_flag(f);
    if (h.kind == GroupDescription::Kind::Deferred) {
      g.kind = GroupDescription::Kind::Deferred;
      g.reduction = h.reduction;
    }
    g.components.push_back({rep, {h}});
  }
  g.equations = normalize_equations(eqs);
  return g;
}

GroupDescription intersect(const std::vector<GroupDescription>& groups) {
  GroupDescription g;
  g.kind = GroupDescription::Kind::Explicit;
  std::vector<DPoly> eqs;
  for (const auto& h : groups) {
    if (g.dim == 0) g.dim = h.dim;
    if (h.dim != g.dim) throw DimensionError("intersect: groups of different dimensions");
    eqs.insert(eqs.end(), h.equations.begin(), h.equations.end());
    for (const auto& f : h.flags) g.add_flag(f);
    if (h.kind == GroupDescription::Kind::Deferred) {
      g.kind = GroupDescription::Kind::Deferred;
      g.reduction = h.reduction;
    }
  }
  g.equations = normalize_equations(eqs);
  return g;
}

std::vector<DPoly> violated(const GroupDescription& g, const QtMatrix& m) {
  if (m.rows() != g.dim || m.cols() != g.dim) throw DimensionError("member: matrix size does not match group");
  if (is_zero(m.det())) throw SingularMatrix("member: singular matrix");
  std::vector<DPoly> bad;
  auto f = [&](const DVar& v) {
    Qt a = m(static_cast<std::size_t>(v.i), static_cast<std::size_t>(v.j));
    for (int k = 0; k < v.order; ++k) a = d_t(a);
    return a;
  };
  for (const auto& e : g.equations)
    if (!is_zero(e.eval(f))) bad.push_back(e);
  return bad;
}

bool member(const GroupDescription& g, const QtMatrix& m) { return violated(g, m).empty(); }

}  // namespace pdgal3
