#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "field.hpp"

namespace dwb {

enum class Verdict { kPass, kFail, kInconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "PASS";
    case Verdict::kFail: return "FAIL";
    case Verdict::kInconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

// Power series known modulo t^valid.  valid == kInfinitePrecision marks an
// exact polynomial.  Coefficients past the stored ones are exact zeros.
template <class F>
class Series {
 public:
  using value_type = typename F::value_type;

  Series() = default;
  explicit Series(std::vector<value_type> c, std::int64_t valid = kInfinitePrecision) : c_(std::move(c)), valid_(valid) {
    if (valid_ < 0) throw std::invalid_argument("Series: negative truncation order");
    if (static_cast<std::int64_t>(c_.size()) > valid_) c_.resize(static_cast<std::size_t>(valid_));
    trim();
  }

  static Series constant(value_type c) { return Series(std::vector<value_type>{std::move(c)}); }
  static Series monomial(value_type c, std::int64_t k) {
    std::vector<value_type> v(static_cast<std::size_t>(k + 1));
    v[static_cast<std::size_t>(k)] = std::move(c);
    return Series(std::move(v));
  }
  static Series zero(std::int64_t valid = kInfinitePrecision) { return Series({}, valid); }

  const std::vector<value_type>& coeffs() const { return c_; }
  std::int64_t size() const { return static_cast<std::int64_t>(c_.size()); }
  std::int64_t valid() const { return valid_; }
  bool is_exact() const { return valid_ == kInfinitePrecision; }

  // Coefficient i; exact zero past the stored range (caller keeps i < valid).
  const value_type& operator[](std::int64_t i) const {
    static const value_type z{};
    return i >= 0 && i < size() ? c_[static_cast<std::size_t>(i)] : z;
  }

  const value_type& at(std::int64_t i) const {
    if (i < 0 || i >= valid_) throw std::out_of_range("coefficient beyond the valid truncation");
    return (*this)[i];
  }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const value_type& x) { return dwb::is_zero(x); });
  }
  bool is_exact_zero() const { return c_.empty(); }

  // Index of the first coefficient that is nonzero at its precision.
  std::optional<std::int64_t> order() const {
    for (std::int64_t i = 0; i < size(); ++i)
      if (!dwb::is_zero(c_[static_cast<std::size_t>(i)])) return i;
    return std::nullopt;
  }

  std::int64_t degree() const { return size() - 1; }

  Series truncated(std::int64_t n) const { return Series(c_, std::min(valid_, n)); }

  friend bool operator==(const Series& a, const Series& b) { return a.valid_ == b.valid_ && a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && dwb::is_exact_zero(c_.back())) c_.pop_back();
  }

  std::vector<value_type> c_;
  std::int64_t valid_ = kInfinitePrecision;
};

template <class F>
Series<F> operator+(const Series<F>& x, const Series<F>& y) {
  std::int64_t valid = std::min(x.valid(), y.valid());
  std::int64_t n = std::min(valid, std::max(x.size(), y.size()));
  std::vector<typename F::value_type> c(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = x[i] + y[i];
  return Series<F>(std::move(c), valid);
}

template <class F>
Series<F> operator-(const Series<F>& x) {
  std::vector<typename F::value_type> c(x.coeffs().size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = -x.coeffs()[i];
  return Series<F>(std::move(c), x.valid());
}

template <class F>
Series<F> operator-(const Series<F>& x, const Series<F>& y) {
  std::int64_t valid = std::min(x.valid(), y.valid());
  std::int64_t n = std::min(valid, std::max(x.size(), y.size()));
  std::vector<typename F::value_type> c(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = x[i] - y[i];
  return Series<F>(std::move(c), valid);
}

template <class F>
Series<F> scale(const Series<F>& x, const typename F::value_type& a) {
  if (is_exact_zero(a)) return Series<F>::zero(x.valid());
  std::vector<typename F::value_type> c(x.coeffs().size());
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!is_exact_zero(x.coeffs()[i])) c[i] = x.coeffs()[i] * a;
  return Series<F>(std::move(c), x.valid());
}

// Product; valid to the smaller of the two truncations.
template <class F>
Series<F> convolve(const Series<F>& x, const Series<F>& y) {
  std::int64_t valid = std::min(x.valid(), y.valid());
  if (valid == 0) throw std::domain_error("convolve: empty valid window");
  if (x.size() == 0 || y.size() == 0) return Series<F>::zero(valid);
  std::int64_t n = std::min(valid, x.size() + y.size() - 1);
  std::vector<typename F::value_type> c(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < std::min(n, x.size()); ++i) {
    const auto& xi = x.coeffs()[static_cast<std::size_t>(i)];
    if (is_exact_zero(xi)) continue;
    std::int64_t jmax = std::min(y.size(), n - i);
    for (std::int64_t j = 0; j < jmax; ++j) {
      const auto& yj = y.coeffs()[static_cast<std::size_t>(j)];
      if (is_exact_zero(yj)) continue;
      c[static_cast<std::size_t>(i + j)] += xi * yj;
    }
  }
  return Series<F>(std::move(c), valid);
}

template <class F>
Series<F> operator*(const Series<F>& x, const Series<F>& y) {
  return convolve(x, y);
}

template <class F>
Series<F> derive(const Series<F>& x) {
  std::int64_t valid = x.is_exact() ? kInfinitePrecision : std::max<std::int64_t>(x.valid() - 1, 0);
  std::vector<typename F::value_type> c(static_cast<std::size_t>(std::max<std::int64_t>(x.size() - 1, 0)));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = mul_int(x.coeffs()[i + 1], static_cast<std::int64_t>(i + 1));
  return Series<F>(std::move(c), valid);
}

// Multiplication by t^k.
template <class F>
Series<F> shift_up(const Series<F>& x, std::int64_t k) {
  if (x.size() == 0) return Series<F>::zero(detail::sat_add(x.valid(), k));
  std::vector<typename F::value_type> c(static_cast<std::size_t>(k));
  c.insert(c.end(), x.coeffs().begin(), x.coeffs().end());
  return Series<F>(std::move(c), detail::sat_add(x.valid(), k));
}

// Division by t^k; the first k coefficients must vanish at their precision.
template <class F>
Series<F> shift_down(const Series<F>& x, std::int64_t k) {
  for (std::int64_t i = 0; i < std::min(k, x.size()); ++i)
    if (!is_zero(x[i])) throw std::domain_error("shift_down: series not divisible by t^k");
  std::int64_t valid = x.is_exact() ? kInfinitePrecision : std::max<std::int64_t>(x.valid() - k, 0);
  std::vector<typename F::value_type> c;
  if (x.size() > k) c.assign(x.coeffs().begin() + k, x.coeffs().end());
  return Series<F>(std::move(c), valid);
}

// Inverse of a series with nonzero constant term, to order min(n, valid).
template <class F>
Series<F> inverse(const Series<F>& x, std::int64_t n) {
  if (is_zero(x[0])) throw PrecisionError("inverse: constant term is zero at current precision");
  std::int64_t valid = std::min(n, x.valid());
  if (valid == kInfinitePrecision) throw std::invalid_argument("inverse: needs a finite order");
  std::vector<typename F::value_type> c(static_cast<std::size_t>(valid));
  typename F::value_type inv0;
  if constexpr (std::is_same_v<typename F::value_type, PadicNumber>) {
    const auto& a = x[0];
    inv0 = PadicNumber::exact(1L, a.prime(), a.is_exact() ? a.cap() : a.relative_precision()) / a;
  } else {
    inv0 = 1 / x[0];
  }
  c[0] = inv0;
  for (std::int64_t k = 1; k < valid; ++k) {
    typename F::value_type s{};
    for (std::int64_t i = 1; i <= std::min(k, x.size() - 1); ++i) {
      const auto& xi = x[i];
      if (is_exact_zero(xi)) continue;
      const auto& cj = c[static_cast<std::size_t>(k - i)];
      if (is_exact_zero(cj)) continue;
      s += xi * cj;
    }
    if (!is_exact_zero(s)) c[static_cast<std::size_t>(k)] = -(s * inv0);
  }
  return Series<F>(std::move(c), valid);
}

// Radii are p^(-r) with r rational.  Norms are returned as log_p values.
struct GaussNorm {
  std::optional<mpq_class> log_value;  // empty: the norm is 0
  std::int64_t index = -1;
  bool at_boundary = false;        // sup attained in the last quarter of a truncated window
  bool precision_limited = false;  // some zero-at-precision term could exceed the sup
};

namespace detail {

template <class F>
GaussNorm gauss_norm_impl(const Series<F>& x, const mpq_class& r, const F& field, std::int64_t offset) {
  GaussNorm g;
  std::optional<mpq_class> zero_bound;
  for (std::int64_t i = 0; i < x.size(); ++i) {
    const auto& c = x[i];
    if (is_exact_zero(c)) continue;
    mpq_class ri = r * mpq_class(static_cast<long>(i + offset));
    auto v = field.valuation(c);
    if (!v) {
      mpq_class b = mpq_class(static_cast<long>(-field.zero_precision(c))) - ri;
      if (!zero_bound || b > *zero_bound) zero_bound = b;
      continue;
    }
    mpq_class val = mpq_class(static_cast<long>(-*v)) - ri;
    if (!g.log_value || val > *g.log_value) {
      g.log_value = val;
      g.index = i + offset;
    }
  }
  if (zero_bound && (!g.log_value || *zero_bound > *g.log_value)) g.precision_limited = true;
  if (!x.is_exact() && g.index >= 0) {
    std::int64_t len = x.valid();
    g.at_boundary = (g.index - offset) * 4 >= 3 * len && len > 1;
  }
  return g;
}

}  // namespace detail

template <class F>
GaussNorm gauss_norm(const Series<F>& x, const mpq_class& r, const F& field) {
  return detail::gauss_norm_impl(x, r, field, 0);
}

struct GrowthProfile {
  std::optional<mpq_class> lambda;  // empty: -infinity (exact-zero window)
  double delta = 0.0;
  std::int64_t lambda_index = -1;
  std::int64_t delta_index = -1;
  std::int64_t lo = 0, hi = 0;
};

inline double log_p(double x, std::uint64_t p) { return std::log(x) / std::log(static_cast<double>(p)); }

inline double to_double(const std::optional<mpq_class>& q, double if_empty) { return q ? q->get_d() : if_empty; }

// lambda = max log_p|x_i| / i and delta = max(0, max log_p|x_i| / log_p(i+1)) over lo <= i <= hi.
template <class F>
GrowthProfile growth_profile(const Series<F>& x, std::int64_t lo, std::int64_t hi, const F& field) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("growth_profile: empty window");
  if (hi >= x.valid()) throw std::out_of_range("growth_profile: window exceeds truncation");
  GrowthProfile g;
  g.lo = lo;
  g.hi = hi;
  bool any_known = false, any_inexact = false;
  double best_delta = 0.0;
  for (std::int64_t i = lo; i <= std::min(hi, x.size() - 1); ++i) {
    const auto& c = x[i];
    if (is_exact_zero(c)) {
      any_known = true;
      continue;
    }
    auto v = field.valuation(c);
    if (!v) {
      any_inexact = true;
      continue;
    }
    any_known = true;
    mpq_class l(static_cast<long>(-*v), static_cast<unsigned long>(i));
    l.canonicalize();
    if (!g.lambda || l > *g.lambda) {
      g.lambda = l;
      g.lambda_index = i;
    }
    double d = static_cast<double>(-*v) / log_p(static_cast<double>(i + 1), field.p);
    if (d > best_delta) {
      best_delta = d;
      g.delta_index = i;
    }
  }
  if (x.size() - 1 < hi) any_known = true;  // exact zeros beyond the stored range
  if (!g.lambda && any_inexact && !any_known) throw PrecisionError("growth_profile: window holds only zeros at current precision");
  g.delta = best_delta;
  return g;
}

struct FilMembership {
  Verdict verdict = Verdict::kInconclusive;
  double log_sup = -INFINITY;  // log_p of sup |x_i| / (i+1)^delta
  std::int64_t index = -1;
  bool stabilized = false;
};

// Is sup_i |x_i| / (i+1)^delta <= p^log_bound?  Inconclusive while the running
// sup still grows (by more than tol) in the final quarter of the window.
template <class F>
FilMembership fil_membership(const Series<F>& x, double delta, double log_bound, const F& field, double tol = 1e-3) {
  FilMembership m;
  std::int64_t len = x.is_exact() ? x.size() : x.valid();
  std::int64_t q = len - len / 4;
  double head = -INFINITY, tail = -INFINITY;
  for (std::int64_t i = 0; i < std::min(len, x.size()); ++i) {
    auto v = field.valuation(x[i]);
    if (!v) continue;
    double l = static_cast<double>(-*v) - delta * log_p(static_cast<double>(i + 1), field.p);
    if (l > m.log_sup) {
      m.log_sup = l;
      m.index = i;
    }
    if (i < q) head = std::max(head, l);
    else tail = std::max(tail, l);
  }
  m.stabilized = x.is_exact() || tail <= head + tol;
  if (m.log_sup > log_bound + 1e-12) m.verdict = Verdict::kFail;
  else m.verdict = m.stabilized ? Verdict::kPass : Verdict::kInconclusive;
  return m;
}

// t^low * body; terms below t^low are zero.
template <class F>
struct Laurent {
  std::int64_t low = 0;
  Series<F> body;

  const typename F::value_type& operator[](std::int64_t i) const { return body[i - low]; }
  std::int64_t high() const { return detail::sat_add(low, body.valid()); }
};

template <class F>
Laurent<F> convolve(const Laurent<F>& x, const Laurent<F>& y) {
  return {x.low + y.low, convolve(x.body, y.body)};
}

template <class F>
Laurent<F> derive(const Laurent<F>& x) {
  std::vector<typename F::value_type> c(x.body.coeffs().size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = mul_int(x.body.coeffs()[i], x.low + static_cast<std::int64_t>(i));
  std::int64_t valid = x.body.is_exact() ? kInfinitePrecision : x.body.valid();
  return {x.low - 1, Series<F>(std::move(c), valid)};
}

template <class F>
GaussNorm gauss_norm(const Laurent<F>& x, const mpq_class& r, const F& field) {
  return detail::gauss_norm_impl(x.body, r, field, x.low);
}

// alpha = p^(-inner), beta = p^(-outer); an empty inner means alpha = 0.
struct Annulus {
  std::optional<mpq_class> inner;
  mpq_class outer = 0;
  bool outer_open = true;
};

namespace detail {

inline std::vector<mpq_class> annulus_samples(const Annulus& a) {
  if (a.inner && *a.inner < a.outer) throw std::invalid_argument("annulus: alpha exceeds beta");
  mpq_class in = a.inner ? *a.inner : a.outer + 1;
  mpq_class width = in - a.outer;
  std::vector<mpq_class> rs;
  if (a.inner) rs.push_back(*a.inner);
  rs.push_back(a.outer + width / 2);
  rs.push_back(a.outer_open ? a.outer + width / 16 : a.outer);
  if (width == 0) rs = {a.outer};
  return rs;
}

}  // namespace detail

// Finite-window proxy for x being a unit of the bounded ring on the annulus.
template <class F>
bool unit_check(const Laurent<F>& x, const Annulus& annulus, const F& field, std::int64_t window = 64) {
  std::optional<std::int64_t> dominant;
  for (const auto& r : detail::annulus_samples(annulus)) {
    std::optional<mpq_class> best;
    std::int64_t arg = 0, ties = 0;
    for (std::int64_t i = 0; i < x.body.size(); ++i) {
      auto v = field.valuation(x.body[i]);
      if (!v) continue;
      mpq_class l = mpq_class(static_cast<long>(-*v)) - r * mpq_class(static_cast<long>(i + x.low));
      if (!best || l > *best) {
        best = l;
        arg = i + x.low;
        ties = 1;
      } else if (l == *best) {
        ++ties;
      }
    }
    if (!best || ties != 1) throw std::domain_error("unit_check: no dominant term at a sampled radius");
    if (dominant && *dominant != arg) return false;
    dominant = arg;
  }
  // y = x / (x_i0 t^i0) = 1 + h; invert by the Neumann series on the window [-window, window].
  const auto c0 = x[*dominant];
  std::int64_t lo = -window;
  std::vector<typename F::value_type> h(static_cast<std::size_t>(2 * window + 1));
  for (std::int64_t i = 0; i < x.body.size(); ++i) {
    std::int64_t k = i + x.low - *dominant;
    if (k < lo || k > window || is_exact_zero(x.body[i])) continue;
    h[static_cast<std::size_t>(k - lo)] = x.body[i] / c0;
  }
  h[static_cast<std::size_t>(-lo)] = typename F::value_type{};
  Laurent<F> hl{lo, Series<F>(h, 2 * window + 1)};
  auto clip = [&](const Laurent<F>& z) {
    std::vector<typename F::value_type> c(static_cast<std::size_t>(2 * window + 1));
    for (std::int64_t k = lo; k <= window; ++k)
      if (k - z.low >= 0 && k - z.low < z.body.size()) c[static_cast<std::size_t>(k - lo)] = z.body[k - z.low];
    return Laurent<F>{lo, Series<F>(std::move(c), 2 * window + 1)};
  };
  std::vector<typename F::value_type> one(static_cast<std::size_t>(2 * window + 1));
  one[static_cast<std::size_t>(-lo)] = field.from_int(1);
  Laurent<F> term{lo, Series<F>(one, 2 * window + 1)};
  Laurent<F> sum = term;
  for (std::int64_t k = 0; k < 2 * window; ++k) {
    term = clip(convolve(term, hl));
    term.body = -term.body;
    sum.body = sum.body + term.body;
    if (term.body.is_zero()) break;
  }
  for (const auto& r : detail::annulus_samples(annulus)) {
    auto g = gauss_norm(sum, r, field);
    if (!g.log_value) return false;
    std::int64_t pos = g.index - lo;
    if (pos < (2 * window + 1) / 8 || pos > 7 * (2 * window + 1) / 8) return false;
  }
  return true;
}

}  // namespace dwb
