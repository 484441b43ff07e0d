#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <vector>

#include "dworkbench/dworkbench.hpp"

namespace dwb::testing {

inline constexpr std::uint64_t kSeed = 0x5eed2024u;
inline constexpr int kCases = 1000;

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(kSeed);
  return g;
}

inline long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

// Small random rational; `p_heavy` mixes in powers of p.
inline mpq_class random_rational(std::uint64_t p, bool nonzero = false, bool p_heavy = true) {
  while (true) {
    mpz_class num(uniform(-40, 40)), den(uniform(1, 30));
    if (p_heavy) {
      for (long k = uniform(0, 3); k > 0; --k) num *= static_cast<unsigned long>(p);
      for (long k = uniform(0, 2); k > 0; --k) den *= static_cast<unsigned long>(p);
    }
    mpq_class q(num, den);
    q.canonicalize();
    if (!nonzero || q != 0) return q;
  }
}

inline std::int64_t v_p(const mpq_class& q, std::uint64_t p) {
  mpz_class a = q.get_num(), b = q.get_den();
  std::int64_t v = 0;
  while (a != 0 && a % p == 0) { a /= p; ++v; }
  while (b % p == 0) { b /= p; --v; }
  return v;
}

inline mpz_class pow_p(std::uint64_t p, std::int64_t k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(k));
  return r;
}

// Legendre: v_p(s!) = (s - digit sum of s in base p) / (p - 1).
inline std::int64_t legendre(std::int64_t s, std::uint64_t p) {
  std::int64_t digits = 0;
  for (std::int64_t x = s; x > 0; x /= static_cast<std::int64_t>(p)) digits += x % static_cast<std::int64_t>(p);
  return (s - digits) / static_cast<std::int64_t>(p - 1);
}

inline Series<RationalField> random_poly(std::uint64_t p, int max_deg = 5) {
  std::vector<mpq_class> c(static_cast<std::size_t>(uniform(0, max_deg) + 1));
  for (auto& x : c) x = random_rational(p);
  return Series<RationalField>(c);
}

inline DifferentialModule<RationalField> ex44(std::uint64_t p) {
  using S = Series<RationalField>;
  SeriesMatrix<RationalField> a(2, 2);
  a(0, 1) = S::constant(-1);
  a(1, 0) = S::constant(1);
  a(1, 1) = S::monomial(-1, 1);
  return DifferentialModule<RationalField>(RationalField{p}, a, "ex44");
}

inline DifferentialModule<RationalField> scalar_module(std::uint64_t p, const mpq_class& c) {
  SeriesMatrix<RationalField> a(1, 1);
  a(0, 0) = Series<RationalField>::constant(c);
  return DifferentialModule<RationalField>(RationalField{p}, a, "[" + c.get_str() + "]");
}

// Exact rational value claimed by x is consistent with q on every digit.
inline bool claims_consistent(const PadicNumber& x, const mpq_class& q, std::uint64_t p) {
  if (x.is_exact()) return x.lift() == q;
  if (q == 0) return x.is_zero();
  if (x.is_zero()) return v_p(q, p) >= x.absolute_precision();
  if (v_p(q, p) != x.valuation()) return false;
  mpq_class diff = q - x.lift();
  return diff == 0 || v_p(diff, p) >= x.absolute_precision();
}

}  // namespace dwb::testing
