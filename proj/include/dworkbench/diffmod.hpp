#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "parallel.hpp"

namespace dwb {

// Free module with basis e_1..e_m and D(e_j) = sum_i A(i, j) e_i.
template <class F>
class DifferentialModule {
 public:
  DifferentialModule() = default;
  DifferentialModule(F field, SeriesMatrix<F> connection, std::string label = {})
      : field_(std::move(field)), a_(std::move(connection)), label_(std::move(label)) {
    if (a_.rows() != a_.cols()) throw std::invalid_argument("connection matrix must be square");
  }

  std::size_t rank() const { return a_.rows(); }
  const SeriesMatrix<F>& connection() const { return a_; }
  const F& field() const { return field_; }
  std::uint64_t prime() const { return field_.p; }
  const std::string& label() const { return label_; }
  std::int64_t valid() const { return min_valid(a_); }

 private:
  F field_{};
  SeriesMatrix<F> a_;
  std::string label_;
};

template <class F>
SeriesVector<F> apply_d(const DifferentialModule<F>& m, const SeriesVector<F>& v) {
  if (v.size() != m.rank()) throw std::invalid_argument("apply_d: vector length differs from the rank");
  SeriesVector<F> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Series<F> s = derive(v[i]);
    for (std::size_t j = 0; j < v.size(); ++j)
      if (!m.connection()(i, j).is_exact_zero()) s = s + convolve(m.connection()(i, j), v[j]);
      else s = s.truncated(v[j].valid());
    out[i] = std::move(s);
  }
  return out;
}

template <class F>
DifferentialModule<F> trivial_module(const F& field, std::size_t m, std::string label = "trivial") {
  return DifferentialModule<F>(field, SeriesMatrix<F>(m, m), std::move(label));
}

template <class F>
DifferentialModule<F> truncated(const DifferentialModule<F>& m, std::int64_t order) {
  SeriesMatrix<F> a = m.connection();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = a(i, j).truncated(order);
  return DifferentialModule<F>(m.field(), std::move(a), m.label());
}

template <class F>
DifferentialModule<F> dual(const DifferentialModule<F>& m) {
  SeriesMatrix<F> a(m.rank(), m.rank());
  for (std::size_t i = 0; i < m.rank(); ++i)
    for (std::size_t j = 0; j < m.rank(); ++j) a(i, j) = -m.connection()(j, i);
  return DifferentialModule<F>(m.field(), std::move(a), "dual(" + m.label() + ")");
}

template <class F>
DifferentialModule<F> direct_sum(const DifferentialModule<F>& x, const DifferentialModule<F>& y) {
  if (x.prime() != y.prime()) throw std::invalid_argument("direct_sum: different primes");
  std::size_t m = x.rank(), n = y.rank();
  SeriesMatrix<F> a(m + n, m + n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a(i, j) = x.connection()(i, j);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(m + i, m + j) = y.connection()(i, j);
  return DifferentialModule<F>(x.field(), std::move(a), x.label() + "+" + y.label());
}

// Basis e_i (x) f_j has index i * rank(y) + j.
template <class F>
DifferentialModule<F> tensor(const DifferentialModule<F>& x, const DifferentialModule<F>& y) {
  if (x.prime() != y.prime()) throw std::invalid_argument("tensor: different primes");
  std::size_t m = x.rank(), n = y.rank();
  SeriesMatrix<F> a(m * n, m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t col = i * n + j;
      for (std::size_t k = 0; k < m; ++k) a(k * n + j, col) = a(k * n + j, col) + x.connection()(k, i);
      for (std::size_t l = 0; l < n; ++l) a(i * n + l, col) = a(i * n + l, col) + y.connection()(l, j);
    }
  return DifferentialModule<F>(x.field(), std::move(a), x.label() + "*" + y.label());
}

// Increasing k-subsets of {0..m-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> wedge_basis(std::size_t m, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(k);
  std::iota(cur.begin(), cur.end(), std::size_t{0});
  if (k > m) return out;
  while (true) {
    out.push_back(cur);
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == m - k + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

// Sorts `idx` in place; returns the sign of the permutation, or 0 on a repeat.
inline int sort_sign(std::vector<std::size_t>& idx) {
  int sign = 1;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) sign = -sign;
    }
  std::sort(idx.begin(), idx.end());
  return sign;
}

inline std::size_t wedge_index(const std::vector<std::vector<std::size_t>>& basis, const std::vector<std::size_t>& s) {
  return static_cast<std::size_t>(std::lower_bound(basis.begin(), basis.end(), s) - basis.begin());
}

template <class F>
DifferentialModule<F> wedge_power(const DifferentialModule<F>& m, std::size_t k) {
  if (k > m.rank()) throw std::invalid_argument("wedge_power: k exceeds the rank");
  auto basis = wedge_basis(m.rank(), k);
  SeriesMatrix<F> a(basis.size(), basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c)
    for (std::size_t pos = 0; pos < k; ++pos)
      for (std::size_t l = 0; l < m.rank(); ++l) {
        const auto& entry = m.connection()(l, basis[c][pos]);
        if (entry.is_exact_zero()) continue;
        auto idx = basis[c];
        idx[pos] = l;
        int sign = sort_sign(idx);
        if (sign == 0) continue;
        std::size_t r = wedge_index(basis, idx);
        a(r, c) = sign > 0 ? a(r, c) + entry : a(r, c) - entry;
      }
  return DifferentialModule<F>(m.field(), std::move(a), "wedge" + std::to_string(k) + "(" + m.label() + ")");
}

// Coordinates of v_1 ^ ... ^ v_k on the lexicographic basis: the k x k minors.
template <class F>
SeriesVector<F> wedge_vectors(const std::vector<SeriesVector<F>>& vs, std::size_t m, const F& field) {
  std::size_t k = vs.size();
  auto basis = wedge_basis(m, k);
  SeriesVector<F> out;
  for (const auto& rows : basis) {
    SeriesMatrix<F> sub(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sub(i, j) = vs[j][rows[i]];
    out.push_back(determinant(sub, field));
  }
  return out;
}

// Change of basis v = P w: the new connection is P^-1 A P + P^-1 d(P).
template <class F>
DifferentialModule<F> gauge_transform(const DifferentialModule<F>& m, const SeriesMatrix<F>& p, const SeriesMatrix<F>& p_inv) {
  SeriesMatrix<F> dp(p.rows(), p.cols());
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) dp(i, j) = derive(p(i, j));
  SeriesMatrix<F> ap = m.connection() * p;
  for (std::size_t i = 0; i < ap.rows(); ++i)
    for (std::size_t j = 0; j < ap.cols(); ++j) ap(i, j) = ap(i, j) + dp(i, j);
  return DifferentialModule<F>(m.field(), p_inv * ap, "gauge(" + m.label() + ")");
}

inline DifferentialModule<PadicField> to_padic(const DifferentialModule<RationalField>& m, std::int64_t precision,
                                               std::int64_t order = kInfinitePrecision) {
  PadicField f{m.prime(), precision};
  SeriesMatrix<PadicField> a(m.rank(), m.rank());
  for (std::size_t i = 0; i < m.rank(); ++i)
    for (std::size_t j = 0; j < m.rank(); ++j) {
      const auto& s = m.connection()(i, j);
      std::int64_t valid = std::min(s.valid(), order);
      std::vector<PadicNumber> c(static_cast<std::size_t>(std::min<std::int64_t>(s.size(), valid)));
      for (std::size_t k = 0; k < c.size(); ++k) c[k] = f.from_rational(s.coeffs()[k]);
      a(i, j) = Series<PadicField>(std::move(c), valid);
    }
  return DifferentialModule<PadicField>(f, std::move(a), m.label());
}

template <class F>
bool is_zero_vector(const SeriesVector<F>& v) {
  return std::all_of(v.begin(), v.end(), [](const Series<F>& s) { return s.is_zero(); });
}

enum class Convergence { kConvergent, kDivergent, kInconclusive };

inline const char* to_string(Convergence c) {
  switch (c) {
    case Convergence::kConvergent: return "convergent";
    case Convergence::kDivergent: return "divergent";
    case Convergence::kInconclusive: return "inconclusive";
  }
  return "?";
}

struct SolverConfig {
  std::int64_t order = 400;
  double eps_conv = 0.01;
  double eps_margin = 0.005;
  std::size_t tail_rows = 4;
  unsigned jobs = 1;
};

struct HorizontalSection {
  std::vector<PadicNumber> initial;
  SeriesVector<PadicField> coords;
  std::int64_t order = 0;
  std::int64_t last_sound_order = 0;
  bool precision_exhausted = false;
  GrowthProfile growth;  // max over coordinates
  Convergence verdict = Convergence::kInconclusive;
};

inline Convergence classify(const GrowthProfile& g, const SolverConfig& cfg) {
  if (!g.lambda) return Convergence::kConvergent;
  double l = g.lambda->get_d();
  if (l <= cfg.eps_conv - cfg.eps_margin) return Convergence::kConvergent;
  if (l >= cfg.eps_conv + cfg.eps_margin) return Convergence::kDivergent;
  return Convergence::kInconclusive;
}

// Growth data of a vector of series over lo..hi: lambda and delta are maxima over coordinates.
inline GrowthProfile vector_growth(const SeriesVector<PadicField>& v, std::int64_t lo, std::int64_t hi, const PadicField& f) {
  GrowthProfile out;
  out.lo = lo;
  out.hi = hi;
  for (const auto& s : v) {
    GrowthProfile g;
    try {
      g = growth_profile(s, lo, hi, f);
    } catch (const PrecisionError&) {
      continue;
    }
    if (g.lambda && (!out.lambda || *g.lambda > *out.lambda)) {
      out.lambda = g.lambda;
      out.lambda_index = g.lambda_index;
    }
    if (g.delta > out.delta) {
      out.delta = g.delta;
      out.delta_index = g.delta_index;
    }
  }
  return out;
}

// Solves d(f) + A f = 0 with f(0) = c0 through c_{s+1} = -[A f]_s / (s+1).
inline HorizontalSection horizontal_solve(const DifferentialModule<PadicField>& m, const std::vector<PadicNumber>& c0,
                                          std::int64_t order, const SolverConfig& cfg = {}) {
  const std::size_t r = m.rank();
  if (c0.size() != r) throw std::invalid_argument("horizontal_solve: initial vector has wrong length");
  if (m.valid() < order) throw std::invalid_argument("horizontal_solve: connection tracked to order " + std::to_string(m.valid()) + " < " + std::to_string(order));
  const auto& a = m.connection();
  std::vector<std::vector<std::int64_t>> supp_a(r * r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      for (std::int64_t k = 0; k < std::min(a(i, j).size(), order); ++k)
        if (!a(i, j)[k].is_exact_zero()) supp_a[i * r + j].push_back(k);

  std::vector<std::vector<PadicNumber>> c(r, std::vector<PadicNumber>(static_cast<std::size_t>(order + 1)));
  std::vector<std::vector<std::int64_t>> supp_f(r);
  std::vector<std::optional<std::int64_t>> last_val(r);
  HorizontalSection out;
  out.initial = c0;
  out.order = order;
  out.last_sound_order = order;
  auto record = [&](std::size_t i, std::int64_t s) {
    const auto& x = c[i][static_cast<std::size_t>(s)];
    if (!x.is_exact_zero()) supp_f[i].push_back(s);
    if (!x.is_zero()) last_val[i] = x.valuation();
    else if (x.kind() == PadicNumber::Kind::kInexactZero && last_val[i] && x.absolute_precision() <= *last_val[i] &&
             !out.precision_exhausted) {
      out.precision_exhausted = true;
      out.last_sound_order = s - 1;
    }
  };
  for (std::size_t i = 0; i < r; ++i) {
    c[i][0] = c0[i];
    record(i, 0);
  }
  for (std::int64_t s = 0; s < order; ++s) {
    for (std::size_t i = 0; i < r; ++i) {
      PadicNumber acc;
      for (std::size_t j = 0; j < r; ++j) {
        const auto& sa = supp_a[i * r + j];
        if (sa.empty() || supp_f[j].empty()) continue;
        const auto& aij = a(i, j);
        if (sa.size() <= supp_f[j].size()) {
          for (std::int64_t k : sa) {
            if (k > s) break;
            const auto& f = c[j][static_cast<std::size_t>(s - k)];
            if (!f.is_exact_zero()) acc += aij[k] * f;
          }
        } else {
          for (std::int64_t idx : supp_f[j]) {
            std::int64_t k = s - idx;
            if (k < 0) break;
            if (k >= aij.size()) continue;
            const auto& x = aij[k];
            if (!x.is_exact_zero()) acc += x * c[j][static_cast<std::size_t>(idx)];
          }
        }
      }
      if (!acc.is_exact_zero()) c[i][static_cast<std::size_t>(s + 1)] = -acc.div_int(s + 1);
    }
    for (std::size_t i = 0; i < r; ++i) record(i, s + 1);
  }
  for (std::size_t i = 0; i < r; ++i) out.coords.emplace_back(std::move(c[i]), order + 1);
  std::int64_t lo = std::max<std::int64_t>(1, order / 4);
  std::int64_t hi = out.last_sound_order;
  if (hi < lo) {
    out.verdict = Convergence::kInconclusive;
    return out;
  }
  out.growth = vector_growth(out.coords, lo, hi, m.field());
  out.verdict = out.precision_exhausted && out.last_sound_order < order ? Convergence::kInconclusive : classify(out.growth, cfg);
  if (out.precision_exhausted && classify(out.growth, cfg) == Convergence::kDivergent) out.verdict = Convergence::kDivergent;
  return out;
}

struct H0Result {
  std::size_t n = 0;
  std::vector<HorizontalSection> sections;  // basis of the convergent solutions
  std::vector<HorizontalSection> standard;  // solutions from e_1..e_m
  bool inconclusive = false;
  std::vector<std::string> notes;
};

namespace detail {

inline PadicNumber reconstruct_or_keep(const PadicNumber& x) {
  if (x.is_exact()) return x;
  if (x.is_zero()) return PadicNumber::exact_zero(x.prime());
  auto q = reconstruct(x);
  if (!q) return x;
  return PadicNumber::from_rational_exact(*q, x.prime(), x.relative_precision());
}

}  // namespace detail

// Solves from each e_j, then looks for combinations of the divergent solutions
// whose tails cancel (ultrametric elimination on the last coefficient blocks),
// lifts them to exact initial vectors when possible and re-solves.
inline H0Result h0_basis(const DifferentialModule<PadicField>& m, const SolverConfig& cfg = {}) {
  const std::size_t r = m.rank();
  const auto& f = m.field();
  H0Result out;
  out.standard.resize(r);
  parallel_for(r, cfg.jobs, [&](std::size_t j) {
    std::vector<PadicNumber> e(r, PadicNumber::exact_zero(f.p));
    e[j] = f.from_int(1);
    out.standard[j] = horizontal_solve(m, e, cfg.order, cfg);
  });
  std::vector<std::size_t> div;
  for (std::size_t j = 0; j < r; ++j) {
    switch (out.standard[j].verdict) {
      case Convergence::kConvergent: out.sections.push_back(out.standard[j]); break;
      case Convergence::kDivergent: div.push_back(j); break;
      case Convergence::kInconclusive: out.inconclusive = true; out.notes.push_back("solution from e_" + std::to_string(j + 1) + " is inconclusive"); break;
    }
  }
  if (div.size() >= 2) {
    // Columns: tail blocks of the divergent solutions; alpha: their coefficients on e_1..e_m.
    std::vector<std::vector<PadicNumber>> col(div.size()), alpha(div.size(), std::vector<PadicNumber>(r, PadicNumber::exact_zero(f.p)));
    const std::int64_t tail = static_cast<std::int64_t>(std::min<std::size_t>(cfg.tail_rows, static_cast<std::size_t>(cfg.order)));
    for (std::size_t c = 0; c < div.size(); ++c) {
      const auto& sec = out.standard[div[c]];
      for (std::int64_t s = cfg.order - tail + 1; s <= cfg.order; ++s)
        for (std::size_t i = 0; i < r; ++i) col[c].push_back(sec.coords[i][s]);
      alpha[c][div[c]] = f.from_int(1);
    }
    std::vector<bool> used(div.size(), false);
    std::vector<std::size_t> candidates;
    for (std::size_t step = 0; step < div.size(); ++step) {
      std::optional<std::int64_t> best;
      std::size_t bc = 0, br = 0;
      for (std::size_t c = 0; c < div.size(); ++c) {
        if (used[c]) continue;
        for (std::size_t row = 0; row < col[c].size(); ++row) {
          const auto& x = col[c][row];
          if (x.is_zero()) continue;
          if (!best || x.valuation() < *best) {
            best = x.valuation();
            bc = c;
            br = row;
          }
        }
      }
      if (!best) {
        for (std::size_t c = 0; c < div.size(); ++c)
          if (!used[c]) candidates.push_back(c);
        break;
      }
      used[bc] = true;
      if (step > 0) candidates.push_back(bc);
      for (std::size_t c = 0; c < div.size(); ++c) {
        if (used[c] || col[c][br].is_zero()) continue;
        PadicNumber factor = col[c][br] / col[bc][br];
        for (std::size_t row = 0; row < col[c].size(); ++row) col[c][row] -= factor * col[bc][row];
        for (std::size_t i = 0; i < r; ++i) alpha[c][i] -= factor * alpha[bc][i];
      }
    }
    for (std::size_t c : candidates) {
      std::vector<PadicNumber> a0(r);
      for (std::size_t i = 0; i < r; ++i) a0[i] = detail::reconstruct_or_keep(alpha[c][i]);
      auto sec = horizontal_solve(m, a0, cfg.order, cfg);
      if (sec.verdict == Convergence::kConvergent) out.sections.push_back(std::move(sec));
      else if (sec.verdict == Convergence::kInconclusive) {
        out.inconclusive = true;
        out.notes.push_back("recombined solution is inconclusive");
      }
    }
  }
  out.n = out.sections.size();
  return out;
}

}  // namespace dwb
