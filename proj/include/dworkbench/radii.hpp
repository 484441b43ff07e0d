#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "diffmod.hpp"

namespace dwb {

// All radii are p^x with x an exact rational "log radius"; empty means -infinity.
using LogValue = std::optional<mpq_class>;

inline mpq_class omega_log(std::uint64_t p) { return mpq_class(-1, static_cast<unsigned long>(p - 1)); }

struct RadiusConfig {
  std::int64_t iterates = 200;
  std::int64_t series_window = 400;  // extra order kept for series entries
  std::vector<mpq_class> samples = {mpq_class(1, 4), mpq_class(1, 8), mpq_class(1, 16), mpq_class(1, 32)};
  double fit_tol = 1e-3;
  std::size_t budget = 50'000'000;  // total stored coefficients across one iterate matrix
};

template <class F>
struct IterateMatrices {
  std::int64_t depth = 0;
  std::map<std::int64_t, SeriesMatrix<F>> kept;  // N_s for the requested indices
};

template <class F>
std::size_t stored_size(const SeriesMatrix<F>& a) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) n += static_cast<std::size_t>(a(i, j).size());
  return n;
}

// N_0 = I, N_{s+1} = A N_s + d(N_s); column j of N_s holds D^s(e_j).
template <class F>
void for_each_iterate(const DifferentialModule<F>& m, std::int64_t depth, const std::function<void(std::int64_t, const SeriesMatrix<F>&)>& visit,
                      std::size_t budget = RadiusConfig{}.budget) {
  SeriesMatrix<F> n = identity_matrix(m.rank(), m.field());
  visit(0, n);
  for (std::int64_t s = 1; s <= depth; ++s) {
    SeriesMatrix<F> next = m.connection() * n;
    for (std::size_t i = 0; i < next.rows(); ++i)
      for (std::size_t j = 0; j < next.cols(); ++j) next(i, j) = next(i, j) + derive(n(i, j));
    n = std::move(next);
    if (stored_size(n) > budget) throw std::length_error("iterate matrices exceed the configured size budget at s = " + std::to_string(s));
    visit(s, n);
  }
}

template <class F>
IterateMatrices<F> iterate_matrices(const DifferentialModule<F>& m, std::int64_t depth, const std::set<std::int64_t>& keep = {}) {
  IterateMatrices<F> out;
  out.depth = depth;
  for_each_iterate<F>(m, depth, [&](std::int64_t s, const SeriesMatrix<F>& n) {
    if (keep.empty() || keep.count(s)) out.kept.emplace(s, n);
  });
  return out;
}

// log_p max |entry|_rho over a matrix.
template <class F>
GaussNorm matrix_gauss_norm(const SeriesMatrix<F>& a, const mpq_class& r, const F& field) {
  GaussNorm best;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      auto g = gauss_norm(a(i, j), r, field);
      best.precision_limited |= g.precision_limited;
      if (g.log_value && (!best.log_value || *g.log_value > *best.log_value)) {
        bool flag = best.at_boundary;
        best.log_value = g.log_value;
        best.index = g.index;
        best.at_boundary = flag || g.at_boundary;
      } else {
        best.at_boundary |= g.at_boundary && g.log_value && best.log_value && *g.log_value == *best.log_value;
      }
    }
  return best;
}

// log_p of the largest Gauss norm among all k x k minors, for k = 1..m.
template <class F>
std::vector<LogValue> minor_norms(const SeriesMatrix<F>& a, const mpq_class& r, const F& field, bool* boundary = nullptr) {
  const std::size_t m = a.rows();
  std::vector<LogValue> out(m);
  for (std::size_t k = 1; k <= m; ++k) {
    auto subsets = wedge_basis(m, k);
    for (const auto& rows : subsets)
      for (const auto& cols : subsets) {
        SeriesMatrix<F> sub(k, k);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub(i, j) = a(rows[i], cols[j]);
        auto g = gauss_norm(determinant(sub, field), r, field);
        if (boundary && g.at_boundary) *boundary = true;
        if (g.log_value && (!out[k - 1] || *g.log_value > *out[k - 1])) out[k - 1] = g.log_value;
      }
  }
  return out;
}

inline std::pair<std::int64_t, std::int64_t> secant_indices(std::uint64_t p, std::int64_t depth) {
  std::int64_t s2 = 1;
  while (s2 * static_cast<std::int64_t>(p) <= depth) s2 *= static_cast<std::int64_t>(p);
  std::int64_t s1 = s2 / static_cast<std::int64_t>(p);
  if (s1 < 1) throw std::invalid_argument("iterate depth " + std::to_string(depth) + " is below p^2");
  return {s1, s2};
}

struct R1Estimate {
  mpq_class log_radius;
  LogValue tail_rate;       // max over the tail of log_p |N_s|_rho / s
  LogValue first_half_rate;  // same over the first half of the tail, for the trend
  bool stabilized = true;
  bool boundary = false;
};

// min(rho, omega / max_s |N_s|_rho^(1/s)) with s over the last half of 1..T.
template <class F>
std::vector<R1Estimate> r1_estimate(const DifferentialModule<F>& m, const std::vector<mpq_class>& rs, std::int64_t depth) {
  std::vector<R1Estimate> out(rs.size());
  const std::int64_t lo = std::max<std::int64_t>(1, depth / 2), mid = (lo + depth) / 2;
  for_each_iterate<F>(m, depth, [&](std::int64_t s, const SeriesMatrix<F>& n) {
    if (s < lo) return;
    for (std::size_t k = 0; k < rs.size(); ++k) {
      auto g = matrix_gauss_norm(n, rs[k], m.field());
      out[k].boundary |= g.at_boundary;
      if (!g.log_value) continue;
      mpq_class rate = *g.log_value / mpq_class(static_cast<long>(s));
      if (!out[k].tail_rate || rate > *out[k].tail_rate) out[k].tail_rate = rate;
      if (s <= mid && (!out[k].first_half_rate || rate > *out[k].first_half_rate)) out[k].first_half_rate = rate;
    }
  });
  const mpq_class w = omega_log(m.prime());
  for (std::size_t k = 0; k < rs.size(); ++k) {
    auto& e = out[k];
    e.log_radius = -rs[k];
    if (e.tail_rate) e.log_radius = std::min<mpq_class>(e.log_radius, w - *e.tail_rate);
    if (e.tail_rate && e.first_half_rate) e.stabilized = abs(*e.tail_rate - *e.first_half_rate) <= mpq_class(1, 100);
  }
  return out;
}

struct RadiusSample {
  mpq_class r;                       // rho = p^(-r)
  std::vector<mpq_class> log_radii;  // ascending, each <= -r
  std::vector<LogValue> rates;       // growth rate of the k x k minors of N_s / s!
  std::int64_t s1 = 0, s2 = 0;
  bool reordered = false;  // singular-value gaps were not monotone
  bool boundary = false;   // a Gauss norm was attained at a truncation boundary
};

// Subsidiary radii at rho = p^(-r) from the growth of the ultrametric singular
// values of the Taylor matrices N_s / s!, read off along s = p^(k-1), p^k.
template <class F>
RadiusSample radius_multiset(const DifferentialModule<F>& m, const IterateMatrices<F>& it, const mpq_class& r) {
  RadiusSample out;
  out.r = r;
  auto [s1, s2] = secant_indices(m.prime(), it.depth);
  out.s1 = s1;
  out.s2 = s2;
  auto f1 = it.kept.find(s1), f2 = it.kept.find(s2);
  if (f1 == it.kept.end() || f2 == it.kept.end()) throw std::invalid_argument("radius_multiset: iterates at p-power indices were not kept");
  auto n1 = minor_norms(f1->second, r, m.field(), &out.boundary);
  auto n2 = minor_norms(f2->second, r, m.field(), &out.boundary);
  const std::size_t dim = m.rank();
  const mpq_class v1(static_cast<long>(factorial_valuation(s1, m.prime())));
  const mpq_class v2(static_cast<long>(factorial_valuation(s2, m.prime())));
  out.rates.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    if (!n1[k] || !n2[k]) continue;
    mpq_class kk(static_cast<long>(k + 1));
    mpq_class a = *n1[k] + kk * v1, b = *n2[k] + kk * v2;
    out.rates[k] = (b - a) / mpq_class(static_cast<long>(s2 - s1));
  }
  LogValue prev = mpq_class(0);
  std::optional<mpq_class> last_gap;
  for (std::size_t k = 0; k < dim; ++k) {
    mpq_class lr = -r;
    if (out.rates[k] && prev) {
      mpq_class gap = *out.rates[k] - *prev;
      if (last_gap && gap > *last_gap) out.reordered = true;
      last_gap = gap;
      lr = std::min<mpq_class>(lr, -gap);
    }
    prev = out.rates[k];
    out.log_radii.push_back(lr);
  }
  std::sort(out.log_radii.begin(), out.log_radii.end());
  return out;
}

template <class F>
std::set<std::int64_t> radius_keep_set(const DifferentialModule<F>& m, std::int64_t depth) {
  auto [s1, s2] = secant_indices(m.prime(), depth);
  return {s1, s2};
}

// Series entries only need enough terms to survive `depth` derivatives plus a window.
template <class F>
DifferentialModule<F> iterate_ready(const DifferentialModule<F>& m, const RadiusConfig& cfg) {
  if (m.valid() == kInfinitePrecision) return m;
  std::int64_t need = cfg.iterates + cfg.series_window;
  if (m.valid() < need) throw std::invalid_argument("connection tracked to order " + std::to_string(m.valid()) + ", radii need " + std::to_string(need));
  return truncated(m, need);
}

struct AffineFit {
  mpq_class intercept, slope;
  double residual = 0;
  std::size_t points = 0;
};

inline AffineFit fit_affine(const std::vector<mpq_class>& x, const std::vector<mpq_class>& y) {
  AffineFit f;
  const std::size_t n = x.size();
  f.points = n;
  mpq_class mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<long>(n);
  my /= static_cast<long>(n);
  mpq_class sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  f.slope = sgn(sxx) == 0 ? mpq_class(0) : mpq_class(sxy / sxx);
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    mpq_class e = y[i] - (f.intercept + f.slope * x[i]);
    f.residual = std::max(f.residual, std::abs(e.get_d()));
  }
  return f;
}

struct BoundaryRadius {
  mpq_class log_radius;         // extrapolated log_p R_i(M, 1), capped at 0
  mpq_class raw_intercept;      // -intercept before capping
  mpq_class direct_log_radius;  // estimator evaluated at rho = 1 directly
  AffineFit fit;
  bool flagged = false;
};

struct BoundaryRadii {
  std::vector<RadiusSample> samples;
  std::vector<BoundaryRadius> radii;
  RadiusSample direct;
};

// Extrapolates -log R_i along the samples nearest rho = 1 with an affine fit.
template <class F>
BoundaryRadii boundary_radii(const DifferentialModule<F>& m, const IterateMatrices<F>& it, const RadiusConfig& cfg) {
  BoundaryRadii out;
  std::vector<mpq_class> rs = cfg.samples;
  std::sort(rs.begin(), rs.end());
  if (rs.size() < 2) throw std::invalid_argument("boundary_radii: need at least two samples");
  for (const auto& r : rs) out.samples.push_back(radius_multiset(m, it, r));
  out.direct = radius_multiset(m, it, mpq_class(0));
  for (std::size_t i = 0; i < m.rank(); ++i) {
    BoundaryRadius b;
    for (std::size_t len = rs.size(); len >= 2; --len) {
      std::vector<mpq_class> x(rs.begin(), rs.begin() + static_cast<long>(len)), y;
      for (std::size_t k = 0; k < len; ++k) y.push_back(-out.samples[k].log_radii[i]);
      auto f = fit_affine(x, y);
      if (f.residual <= cfg.fit_tol || len == 2) {
        b.fit = f;
        b.flagged = f.residual > cfg.fit_tol;
        break;
      }
    }
    b.raw_intercept = -b.fit.intercept;
    b.log_radius = std::min<mpq_class>(mpq_class(0), b.raw_intercept);
    b.direct_log_radius = out.direct.log_radii[i];
    if (std::abs(mpq_class(b.log_radius - b.direct_log_radius).get_d()) > cfg.fit_tol) b.flagged = true;
    out.radii.push_back(b);
  }
  return out;
}

struct FProfile {
  std::vector<mpq_class> rs;
  std::vector<std::vector<mpq_class>> f;  // f[k][i] = F_{i+1}(r_k) in log_p units
  std::vector<bool> convex;               // per i
  bool trivial_law = false;               // F_m(r) = m r on the grid
  bool coarse = false;                    // fewer than three grid points
};

template <class F>
FProfile f_profile(const DifferentialModule<F>& m, const IterateMatrices<F>& it, std::vector<mpq_class> rs) {
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
  FProfile out;
  out.rs = rs;
  out.coarse = rs.size() < 3;
  for (const auto& r : rs) {
    auto s = radius_multiset(m, it, r);
    std::vector<mpq_class> row;
    mpq_class acc = 0;
    for (const auto& lr : s.log_radii) {
      acc -= lr;
      row.push_back(acc);
    }
    out.f.push_back(row);
  }
  const std::size_t dim = m.rank();
  out.trivial_law = true;
  for (std::size_t k = 0; k < rs.size(); ++k)
    if (out.f[k][dim - 1] != mpq_class(static_cast<long>(dim)) * rs[k]) out.trivial_law = false;
  for (std::size_t i = 0; i < dim; ++i) {
    bool ok = true;
    for (std::size_t k = 1; k + 1 < rs.size(); ++k) {
      mpq_class s1 = (out.f[k][i] - out.f[k - 1][i]) / (rs[k] - rs[k - 1]);
      mpq_class s2 = (out.f[k + 1][i] - out.f[k][i]) / (rs[k + 1] - rs[k]);
      if (s2 < s1) ok = false;
    }
    out.convex.push_back(ok);
  }
  return out;
}

template <class F>
struct CyclicNewton {
  mpq_class log_radius;
  std::string vector_name;
  std::vector<LogValue> coefficient_norms;  // log_p |a_k|_rho of P(T) = sum a_k T^k, a_m = 1
  std::vector<Series<F>> numerators;        // a_k = numerators[k] / denominator
  Series<F> denominator;
};

namespace detail {

// Connected blocks of the nonzero pattern of A (the module splits along them).
template <class F>
std::vector<std::vector<std::size_t>> connection_blocks(const DifferentialModule<F>& m) {
  const std::size_t n = m.rank();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!m.connection()(i, j).is_exact_zero()) parent[find(i)] = find(j);
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [k, v] : groups) out.push_back(v);
  return out;
}

template <class F>
std::optional<CyclicNewton<F>> cyclic_block(const DifferentialModule<F>& m, const mpq_class& r) {
  const std::size_t n = m.rank();
  const auto& field = m.field();
  std::vector<std::pair<std::string, SeriesVector<F>>> cands;
  SeriesVector<F> e1(n), tw(n), all(n);
  e1[0] = Series<F>::constant(field.from_int(1));
  for (std::size_t j = 0; j < n; ++j) {
    tw[j] = Series<F>::monomial(field.from_int(1), static_cast<std::int64_t>(j));
    all[j] = Series<F>::constant(field.from_int(1));
  }
  cands.emplace_back("e_1", e1);
  cands.emplace_back("sum t^(j-1) e_j", tw);
  cands.emplace_back("sum e_j", all);
  for (std::size_t j = 1; j < n; ++j) {
    SeriesVector<F> e(n);
    e[j] = Series<F>::constant(field.from_int(1));
    cands.emplace_back("e_" + std::to_string(j + 1), e);
  }
  for (auto& [name, v] : cands) {
    std::vector<SeriesVector<F>> it{v};
    for (std::size_t k = 0; k < n; ++k) it.push_back(apply_d(m, it.back()));
    SeriesMatrix<F> w(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) w(i, j) = it[j][i];
    Series<F> det = determinant(w, field);
    if (det.is_zero()) continue;
    CyclicNewton<F> out;
    out.vector_name = name;
    out.denominator = det;
    auto gd = gauss_norm(det, r, field);
    LogValue root;
    for (std::size_t k = 0; k < n; ++k) {
      SeriesMatrix<F> wk = w;
      for (std::size_t i = 0; i < n; ++i) wk(i, k) = it[n][i];
      Series<F> num = -determinant(wk, field);  // a_k = -b_k with D^n v = sum b_k D^k v
      auto g = gauss_norm(num, r, field);
      LogValue lk;
      if (g.log_value) lk = *g.log_value - *gd.log_value;
      out.coefficient_norms.push_back(lk);
      out.numerators.push_back(std::move(num));
      if (lk) {
        mpq_class c = *lk / mpq_class(static_cast<long>(n - k));
        if (!root || c > *root) root = c;
      }
    }
    out.coefficient_norms.push_back(mpq_class(0));
    const mpq_class w0 = omega_log(m.prime());
    mpq_class spec = w0 + r;
    if (root && *root > spec) spec = *root;
    out.log_radius = std::min<mpq_class>(-r, w0 - spec);
    return out;
  }
  return std::nullopt;
}

}  // namespace detail

// Christol-Dwork style cross-check of R_1 through a cyclic vector.  Modules
// whose connection is block diagonal are treated block by block.
template <class F>
CyclicNewton<F> cyclic_newton_r1(const DifferentialModule<F>& m, const mpq_class& r) {
  std::optional<CyclicNewton<F>> best;
  for (const auto& block : detail::connection_blocks(m)) {
    SeriesMatrix<F> a(block.size(), block.size());
    for (std::size_t i = 0; i < block.size(); ++i)
      for (std::size_t j = 0; j < block.size(); ++j) a(i, j) = m.connection()(block[i], block[j]);
    auto c = detail::cyclic_block(DifferentialModule<F>(m.field(), std::move(a)), r);
    if (!c) throw std::domain_error("cyclic_newton_r1: no cyclic vector among the candidates");
    if (!best || c->log_radius < best->log_radius) best = std::move(c);
  }
  return *best;
}

}  // namespace dwb
