#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "series.hpp"

namespace dwb {

template <class F>
using SeriesMatrix = Matrix<Series<F>>;

template <class F>
using SeriesVector = std::vector<Series<F>>;

template <class F>
SeriesMatrix<F> identity_matrix(std::size_t m, const F& field) {
  SeriesMatrix<F> id(m, m);
  for (std::size_t i = 0; i < m; ++i) id(i, i) = Series<F>::constant(field.from_int(1));
  return id;
}

template <class F>
std::int64_t min_valid(const SeriesMatrix<F>& a) {
  std::int64_t v = kInfinitePrecision;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) v = std::min(v, a(i, j).valid());
  return v;
}

template <class F>
std::int64_t min_valid(const SeriesVector<F>& a) {
  std::int64_t v = kInfinitePrecision;
  for (const auto& x : a) v = std::min(v, x.valid());
  return v;
}

// Determinant by expansion over column subsets (fine for the small ranks used here).
template <class F>
Series<F> determinant(const SeriesMatrix<F>& a, const F& field) {
  std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("determinant: matrix is not square");
  if (n > 20) throw std::invalid_argument("determinant: rank too large");
  std::vector<Series<F>> f(std::size_t{1} << n);
  f[0] = Series<F>::constant(field.from_int(1));
  for (std::size_t s = 1; s < f.size(); ++s) {
    std::size_t k = static_cast<std::size_t>(__builtin_popcountll(s));
    Series<F> acc;
    int after = 0;
    for (std::size_t jj = n; jj-- > 0;) {
      if (!(s >> jj & 1)) continue;
      Series<F> term = convolve(a(k - 1, jj), f[s & ~(std::size_t{1} << jj)]);
      acc = (after % 2 == 0) ? acc + term : acc - term;
      ++after;
    }
    f[s] = std::move(acc);
  }
  return f.back();
}

template <class F>
struct SmithDecomposition {
  SeriesMatrix<F> u, v;
  std::vector<Series<F>> divisors;
  std::vector<std::int64_t> orders;  // t-adic order of each divisor, -1 for zero
  std::size_t rank = 0;
};

// Smith form over Q_p[t]/(t^window): pivot on minimal t-order, then maximal
// norm of the leading coefficient, then row-major position.
template <class F>
SmithDecomposition<F> smith_normal_form(const SeriesMatrix<F>& a, const F& field, std::int64_t order = 256) {
  const std::size_t m = a.rows(), n = a.cols();
  SeriesMatrix<F> w = a;
  SmithDecomposition<F> out;
  out.u = identity_matrix(m, field);
  out.v = identity_matrix(n, field);
  std::int64_t window = std::min(min_valid(a), order);
  const std::size_t r = std::min(m, n);
  std::size_t k = 0;
  for (; k < r; ++k) {
    std::optional<std::int64_t> best_e, best_v;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = k; i < m; ++i)
      for (std::size_t j = k; j < n; ++j) {
        auto e = w(i, j).order();
        if (!e || *e >= window) continue;
        std::int64_t v = *field.valuation(w(i, j)[*e]);
        if (!best_e || *e < *best_e || (*e == *best_e && v < *best_v)) {
          best_e = e;
          best_v = v;
          bi = i;
          bj = j;
        }
      }
    if (!best_e) break;
    const std::int64_t e = *best_e;
    w.swap_rows(k, bi);
    out.u.swap_rows(k, bi);
    w.swap_cols(k, bj);
    out.v.swap_cols(k, bj);

    Series<F> unit = shift_down(w(k, k), e);
    bool trivial_unit = unit.size() == 1 && unit[0] == field.from_int(1);
    if (!trivial_unit) {
      Series<F> inv;
      if (unit.size() == 1 && unit.is_exact()) inv = Series<F>::constant(field.from_int(1) / unit[0]);
      else inv = inverse(unit, window - e);
      for (std::size_t j = 0; j < n; ++j) w(k, j) = convolve(w(k, j), inv);
      for (std::size_t j = 0; j < m; ++j) out.u(k, j) = convolve(out.u(k, j), inv);
    }
    w(k, k) = Series<F>::monomial(field.from_int(1), e).truncated(w(k, k).valid());

    for (std::size_t i = k + 1; i < m; ++i) {
      if (w(i, k).is_zero()) {
        w(i, k) = Series<F>::zero(w(i, k).valid());
        continue;
      }
      Series<F> q = shift_down(w(i, k), e);
      for (std::size_t j = k + 1; j < n; ++j) w(i, j) = w(i, j) - convolve(q, w(k, j));
      for (std::size_t j = 0; j < m; ++j) out.u(i, j) = out.u(i, j) - convolve(q, out.u(k, j));
      w(i, k) = Series<F>::zero(w(i, k).valid());
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      if (w(k, j).is_zero()) {
        w(k, j) = Series<F>::zero(w(k, j).valid());
        continue;
      }
      Series<F> q = shift_down(w(k, j), e);
      for (std::size_t i = 0; i < n; ++i) out.v(i, j) = out.v(i, j) - convolve(out.v(i, k), q);
      w(k, j) = Series<F>::zero(w(k, j).valid());
    }
  }
  out.rank = k;
  for (std::size_t i = 0; i < r; ++i) {
    out.divisors.push_back(i < k ? w(i, i) : Series<F>::zero(w(i, i).valid()));
    out.orders.push_back(i < k ? *w(i, i).order() : -1);
  }
  return out;
}

// Divides by the lowest common power of t, then by the constant term of the
// first entry whose constant term has maximal norm.
template <class F>
SeriesVector<F> remove_content(SeriesVector<F> x, const F& field) {
  std::optional<std::int64_t> lo;
  for (const auto& s : x)
    if (auto o = s.order()) lo = lo ? std::min(*lo, *o) : *o;
  if (!lo) return x;
  for (auto& s : x) s = shift_down(s, *lo);
  std::optional<std::int64_t> best;
  std::size_t at = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto v = field.valuation(x[i][0]);
    if (v && (!best || *v < *best)) {
      best = v;
      at = i;
    }
  }
  typename F::value_type c = field.from_int(1) / x[at][0];
  for (auto& s : x) s = scale(s, c);
  return x;
}

template <class F>
std::vector<SeriesVector<F>> kernel_basis(const SeriesMatrix<F>& a, const F& field, std::int64_t order = 256) {
  auto snf = smith_normal_form(a, field, order);
  std::vector<SeriesVector<F>> basis;
  for (std::size_t j = snf.rank; j < a.cols(); ++j) basis.push_back(remove_content(snf.v.column(j), field));
  return basis;
}

template <class F>
struct LinearSolution {
  bool solvable = false;
  SeriesVector<F> x;
  std::int64_t obstruction = -1;  // index of the obstructing divisor or row
  std::string reason;
};

template <class F>
LinearSolution<F> solve_linear(const SeriesMatrix<F>& a, const SeriesVector<F>& b, const F& field, std::int64_t order = 256) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_linear: right-hand side has wrong length");
  auto snf = smith_normal_form(a, field, order);
  SeriesVector<F> c = snf.u * b;
  LinearSolution<F> out;
  SeriesVector<F> y(a.cols());
  std::int64_t window = std::min(min_valid(c), std::min(min_valid(a), order));
  for (std::size_t k = 0; k < a.rows(); ++k) {
    if (k < snf.rank) {
      std::int64_t e = snf.orders[k];
      auto o = c[k].order();
      if (o && *o < e && *o < window) {
        out.obstruction = static_cast<std::int64_t>(k);
        out.reason = "elementary divisor t^" + std::to_string(e) + " does not divide the right-hand side";
        return out;
      }
      y[k] = shift_down(c[k].truncated(window), e);
    } else {
      auto o = c[k].order();
      if (o && *o < window) {
        out.obstruction = static_cast<std::int64_t>(k);
        out.reason = "inconsistent system: zero elementary divisor against a nonzero entry";
        return out;
      }
    }
  }
  for (std::size_t k = snf.rank; k < a.cols(); ++k) y[k] = Series<F>::zero(window);
  out.solvable = true;
  out.x = snf.v * y;
  return out;
}

}  // namespace dwb
