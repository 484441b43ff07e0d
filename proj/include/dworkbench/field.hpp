#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>

#include "padic.hpp"

namespace dwb {

// Coefficient fields.  Both carry the prime so that valuations are available;
// RationalField computes exactly in Q, PadicField in Q_p at a precision cap.

inline bool is_exact_zero(const mpq_class& x) { return sgn(x) == 0; }
inline bool is_exact_zero(const PadicNumber& x) { return x.is_exact_zero(); }
inline bool is_zero(const mpq_class& x) { return sgn(x) == 0; }
inline bool is_zero(const PadicNumber& x) { return x.is_zero(); }
inline mpq_class mul_int(const mpq_class& x, std::int64_t k) { return x * mpq_class(static_cast<long>(k)); }
inline PadicNumber mul_int(const PadicNumber& x, std::int64_t k) { return x.mul_int(k); }
inline mpq_class div_int(const mpq_class& x, std::int64_t k) {
  mpq_class r = x / mpq_class(static_cast<long>(k));
  r.canonicalize();
  return r;
}
inline PadicNumber div_int(const PadicNumber& x, std::int64_t k) { return x.div_int(k); }

inline std::int64_t q_valuation(const mpq_class& x, std::uint64_t p) {
  return detail::valuation(x.get_num(), p) - detail::valuation(x.get_den(), p);
}

struct RationalField {
  using value_type = mpq_class;
  std::uint64_t p = 0;

  value_type from_int(std::int64_t k) const { return mpq_class(static_cast<long>(k)); }
  value_type from_rational(const mpq_class& q) const { return q; }
  std::optional<std::int64_t> valuation(const value_type& x) const {
    if (sgn(x) == 0) return std::nullopt;
    return q_valuation(x, p);
  }
  // Absolute precision of a zero coefficient: exact in Q.
  std::int64_t zero_precision(const value_type&) const { return kInfinitePrecision; }
  mpq_class to_rational(const value_type& x) const { return x; }
  bool operator==(const RationalField& o) const { return p == o.p; }
};

struct PadicField {
  using value_type = PadicNumber;
  std::uint64_t p = 0;
  std::int64_t precision = PadicNumber::kDefaultCap;

  value_type from_int(std::int64_t k) const { return PadicNumber::exact(static_cast<long>(k), p, precision); }
  value_type from_rational(const mpq_class& q) const { return PadicNumber::from_rational_exact(q, p, precision); }
  std::optional<std::int64_t> valuation(const value_type& x) const {
    if (x.is_zero()) return std::nullopt;
    return x.valuation();
  }
  std::int64_t zero_precision(const value_type& x) const { return x.absolute_precision(); }
  mpq_class to_rational(const value_type& x) const { return x.lift(); }
  bool operator==(const PadicField& o) const { return p == o.p && precision == o.precision; }
};

}  // namespace dwb
