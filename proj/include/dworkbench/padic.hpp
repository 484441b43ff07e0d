#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace dwb {

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::int64_t kInfinitePrecision = std::numeric_limits<std::int64_t>::max();

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  mpz_class z(static_cast<unsigned long>(p));
  return mpz_probab_prime_p(z.get_mpz_t(), 40) > 0;
}

inline void require_prime(std::uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
}

// v_p(s!) by Legendre's formula.
inline std::int64_t factorial_valuation(std::int64_t s, std::uint64_t p) {
  if (s < 0) throw std::invalid_argument("factorial_valuation: negative argument");
  std::int64_t v = 0;
  for (std::int64_t q = s / static_cast<std::int64_t>(p); q > 0; q /= static_cast<std::int64_t>(p)) v += q;
  return v;
}

namespace detail {

// Stable references: the deque never relocates existing elements on push_back.
inline const mpz_class& ppow(std::uint64_t p, std::int64_t k) {
  thread_local std::unordered_map<std::uint64_t, std::deque<mpz_class>> cache;
  auto& d = cache[p];
  if (d.empty()) d.emplace_back(1);
  while (static_cast<std::int64_t>(d.size()) <= k) d.emplace_back(d.back() * static_cast<unsigned long>(p));
  return d[static_cast<std::size_t>(k)];
}

// Strips all factors of p from z (z != 0) and returns how many were removed.
inline std::int64_t remove_p(mpz_class& z, std::uint64_t p) {
  mpz_class pp(static_cast<unsigned long>(p));
  return static_cast<std::int64_t>(mpz_remove(z.get_mpz_t(), z.get_mpz_t(), pp.get_mpz_t()));
}

inline std::int64_t valuation(const mpz_class& z, std::uint64_t p) {
  mpz_class w = z;
  return remove_p(w, p);
}

inline mpz_class reduce(const mpz_class& z, std::uint64_t p, std::int64_t k) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), z.get_mpz_t(), ppow(p, k).get_mpz_t());
  return r;
}

inline mpz_class inverse_mod(const mpz_class& u, std::uint64_t p, std::int64_t k) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), u.get_mpz_t(), ppow(p, k).get_mpz_t()) == 0)
    throw std::domain_error("inverse_mod: not a unit");
  return r;
}

inline std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  if (a == kInfinitePrecision || b == kInfinitePrecision) return kInfinitePrecision;
  return a + b;
}

}  // namespace detail

// Element of Q_p with capped relative precision.  Besides the usual capped
// values there are two zeros (the exact zero and O(p^a)) and an exact mode for
// values p^v * u with u an integer, which is closed under ring operations and
// division by +-p^k.  Exact values fall back to capped precision `cap` when a
// genuine division happens or the integer grows too large.
class PadicNumber {
 public:
  enum class Kind : std::uint8_t { kExactZero, kInexactZero, kCapped, kExact };
  static constexpr std::int64_t kDefaultCap = 64;
  static constexpr std::size_t kExactBitLimit = 1u << 16;

  PadicNumber() = default;

  static PadicNumber exact_zero(std::uint64_t p = 0) {
    PadicNumber x;
    x.p_ = p;
    return x;
  }

  static PadicNumber zero_at(std::uint64_t p, std::int64_t absolute_precision) {
    PadicNumber x;
    x.p_ = p;
    x.kind_ = Kind::kInexactZero;
    x.v_ = absolute_precision;
    return x;
  }

  static PadicNumber exact(const mpz_class& z, std::uint64_t p, std::int64_t cap = kDefaultCap, std::int64_t shift = 0) {
    if (z == 0) return exact_zero(p);
    mpz_class u = z;
    std::int64_t v = detail::remove_p(u, p) + shift;
    return make_exact(p, v, std::move(u), cap);
  }

  static PadicNumber exact(long z, std::uint64_t p, std::int64_t cap = kDefaultCap) { return exact(mpz_class(z), p, cap); }

  static PadicNumber from_rational(const mpz_class& num, const mpz_class& den, std::uint64_t p, std::int64_t precision) {
    require_prime(p);
    if (den == 0) throw std::invalid_argument("from_rational: zero denominator");
    if (precision < 1) throw std::invalid_argument("from_rational: precision must be positive");
    if (num == 0) return exact_zero(p);
    mpz_class a = num, b = den;
    std::int64_t v = detail::remove_p(a, p) - detail::remove_p(b, p);
    mpz_class u = detail::reduce(a * detail::inverse_mod(detail::reduce(b, p, precision), p, precision), p, precision);
    return capped(p, v, std::move(u), precision);
  }

  static PadicNumber from_rational(const mpq_class& q, std::uint64_t p, std::int64_t precision) {
    return from_rational(q.get_num(), q.get_den(), p, precision);
  }

  // Rationals whose denominator is a power of p stay exact; everything else is capped at `precision`.
  static PadicNumber from_rational_exact(const mpq_class& q, std::uint64_t p, std::int64_t precision) {
    if (q == 0) return exact_zero(p);
    mpz_class b = q.get_den();
    std::int64_t vb = detail::remove_p(b, p);
    if (b == 1) return exact(q.get_num(), p, precision, -vb);
    return from_rational(q, p, precision);
  }

  // Normalizes p^v * u + O(p^(v+N)); u may be divisible by p.
  static PadicNumber capped(std::uint64_t p, std::int64_t v, mpz_class u, std::int64_t n) {
    std::int64_t abs = v + n;
    u = detail::reduce(u, p, n);
    if (u == 0) return zero_at(p, abs);
    std::int64_t w = detail::remove_p(u, p);
    PadicNumber x;
    x.p_ = p;
    x.kind_ = Kind::kCapped;
    x.v_ = v + w;
    x.n_ = n - w;
    x.u_ = std::move(u);
    return x;
  }

  std::uint64_t prime() const { return p_; }
  Kind kind() const { return kind_; }
  bool is_exact_zero() const { return kind_ == Kind::kExactZero; }
  bool is_zero() const { return kind_ == Kind::kExactZero || kind_ == Kind::kInexactZero; }
  bool is_exact() const { return kind_ == Kind::kExactZero || kind_ == Kind::kExact; }

  // For O(p^a) this is a, a lower bound.
  std::int64_t valuation() const { return kind_ == Kind::kExactZero ? kInfinitePrecision : v_; }

  std::int64_t relative_precision() const {
    switch (kind_) {
      case Kind::kCapped: return n_;
      case Kind::kInexactZero: return 0;
      default: return kInfinitePrecision;
    }
  }

  std::int64_t absolute_precision() const {
    switch (kind_) {
      case Kind::kCapped: return v_ + n_;
      case Kind::kInexactZero: return v_;
      default: return kInfinitePrecision;
    }
  }

  const mpz_class& unit() const { return u_; }
  std::int64_t cap() const { return kind_ == Kind::kExact ? n_ : 0; }

  // log_p |x| = -v; empty for both zeros.
  std::optional<std::int64_t> log_norm() const {
    if (is_zero()) return std::nullopt;
    return -v_;
  }

  mpq_class lift() const {
    if (is_zero()) return 0;
    mpq_class r(u_);
    if (v_ >= 0) r *= detail::ppow(p_, v_);
    else r /= detail::ppow(p_, -v_);
    r.canonicalize();
    return r;
  }

  PadicNumber operator-() const {
    PadicNumber x = *this;
    if (kind_ == Kind::kExact) x.u_ = -u_;
    else if (kind_ == Kind::kCapped) x.u_ = detail::ppow(p_, n_) - u_;
    return x;
  }

  friend PadicNumber operator+(const PadicNumber& x, const PadicNumber& y) {
    if (x.is_exact_zero()) return y.p_ ? y : y.with_prime(x.p_);
    if (y.is_exact_zero()) return x;
    std::uint64_t p = common_prime(x, y);
    if (x.kind_ == Kind::kExact && y.kind_ == Kind::kExact) {
      std::int64_t vm = std::min(x.v_, y.v_);
      mpz_class s = x.u_ * detail::ppow(p, x.v_ - vm) + y.u_ * detail::ppow(p, y.v_ - vm);
      if (s == 0) return exact_zero(p);
      std::int64_t w = detail::remove_p(s, p);
      return make_exact(p, vm + w, std::move(s), std::max(x.n_, y.n_));
    }
    std::int64_t a = std::min(x.absolute_precision(), y.absolute_precision());
    const PadicNumber* nz[2];
    int k = 0;
    if (!x.is_zero() && x.v_ < a) nz[k++] = &x;
    if (!y.is_zero() && y.v_ < a) nz[k++] = &y;
    if (k == 0) return zero_at(p, a);
    std::int64_t vm = nz[0]->v_;
    if (k == 2) vm = std::min(vm, nz[1]->v_);
    mpz_class s = 0;
    for (int i = 0; i < k; ++i) s += nz[i]->u_ * detail::ppow(p, nz[i]->v_ - vm);
    return capped(p, vm, std::move(s), a - vm);
  }

  friend PadicNumber operator-(const PadicNumber& x, const PadicNumber& y) { return x + (-y); }

  friend PadicNumber operator*(const PadicNumber& x, const PadicNumber& y) {
    if (x.is_exact_zero() || y.is_exact_zero()) return exact_zero(x.p_ ? x.p_ : y.p_);
    std::uint64_t p = common_prime(x, y);
    if (x.kind_ == Kind::kInexactZero || y.kind_ == Kind::kInexactZero) return zero_at(p, x.v_ + y.v_);
    if (x.kind_ == Kind::kExact && y.kind_ == Kind::kExact)
      return make_exact(p, x.v_ + y.v_, x.u_ * y.u_, std::max(x.n_, y.n_));
    std::int64_t n = std::min(x.relative_precision(), y.relative_precision());
    return capped(p, x.v_ + y.v_, x.u_ * y.u_, n);
  }

  friend PadicNumber operator/(const PadicNumber& x, const PadicNumber& y) {
    if (y.is_zero()) throw PrecisionError("division by a value indistinguishable from zero (precision exhausted)");
    if (x.is_exact_zero()) return exact_zero(y.p_);
    std::uint64_t p = common_prime(x, y);
    if (x.kind_ == Kind::kInexactZero) return zero_at(p, x.v_ - y.v_);
    if (x.kind_ == Kind::kExact && y.kind_ == Kind::kExact) {
      if (y.u_ == 1 || y.u_ == -1) return make_exact(p, x.v_ - y.v_, x.u_ * y.u_, std::max(x.n_, y.n_));
      std::int64_t n = std::max(x.n_, y.n_);
      return capped(p, x.v_ - y.v_, x.u_ * detail::inverse_mod(detail::reduce(y.u_, p, n), p, n), n);
    }
    std::int64_t n = std::min(x.relative_precision(), y.relative_precision());
    return capped(p, x.v_ - y.v_, x.u_ * detail::inverse_mod(detail::reduce(y.u_, p, n), p, n), n);
  }

  PadicNumber& operator+=(const PadicNumber& y) { return *this = *this + y; }
  PadicNumber& operator-=(const PadicNumber& y) { return *this = *this - y; }
  PadicNumber& operator*=(const PadicNumber& y) { return *this = *this * y; }
  PadicNumber& operator/=(const PadicNumber& y) { return *this = *this / y; }

  PadicNumber mul_int(std::int64_t k) const {
    if (is_exact_zero() || k == 1) return *this;
    return *this * exact(mpz_class(static_cast<long>(k)), p_, cap_hint());
  }

  PadicNumber div_int(std::int64_t k) const {
    if (k == 0) throw std::invalid_argument("div_int: division by zero");
    if (is_exact_zero() || k == 1) return *this;
    return *this / exact(mpz_class(static_cast<long>(k)), p_, cap_hint());
  }

  // True when `refined` is consistent with every digit this value claims.
  bool agrees_with(const PadicNumber& refined) const {
    switch (kind_) {
      case Kind::kExactZero: return refined.is_exact_zero();
      case Kind::kExact: return refined.kind_ == Kind::kExact && refined.v_ == v_ && refined.u_ == u_;
      case Kind::kInexactZero: return refined.valuation() >= v_;
      case Kind::kCapped:
        if (refined.is_zero() || refined.v_ != v_) return false;
        return detail::reduce(refined.u_, p_, n_) == u_;
    }
    return false;
  }

  friend bool operator==(const PadicNumber& x, const PadicNumber& y) {
    if (x.kind_ != y.kind_) return false;
    if (x.kind_ == Kind::kExactZero) return true;
    return x.p_ == y.p_ && x.v_ == y.v_ && x.u_ == y.u_ && x.n_ == y.n_;
  }

  std::string to_string() const {
    std::string ps = std::to_string(p_);
    switch (kind_) {
      case Kind::kExactZero: return "0";
      case Kind::kInexactZero: return "O(" + ps + "^" + std::to_string(v_) + ")";
      case Kind::kExact: return ps + "^" + std::to_string(v_) + "*" + u_.get_str() + " (exact)";
      case Kind::kCapped:
        return ps + "^" + std::to_string(v_) + "*" + u_.get_str() + " + O(" + ps + "^" + std::to_string(v_ + n_) + ")";
    }
    return {};
  }

 private:
  static std::uint64_t common_prime(const PadicNumber& x, const PadicNumber& y) {
    if (x.p_ && y.p_ && x.p_ != y.p_) throw std::invalid_argument("p-adic operands over different primes");
    return x.p_ ? x.p_ : y.p_;
  }

  static PadicNumber make_exact(std::uint64_t p, std::int64_t v, mpz_class u, std::int64_t cap) {
    if (mpz_sizeinbase(u.get_mpz_t(), 2) > kExactBitLimit) return capped(p, v, std::move(u), cap);
    PadicNumber x;
    x.p_ = p;
    x.kind_ = Kind::kExact;
    x.v_ = v;
    x.n_ = cap;
    x.u_ = std::move(u);
    return x;
  }

  std::int64_t cap_hint() const { return kind_ == Kind::kExact ? n_ : (kind_ == Kind::kCapped ? n_ : kDefaultCap); }

  PadicNumber with_prime(std::uint64_t p) const {
    PadicNumber x = *this;
    x.p_ = p;
    return x;
  }

  std::uint64_t p_ = 0;
  Kind kind_ = Kind::kExactZero;
  std::int64_t v_ = 0;
  std::int64_t n_ = 0;
  mpz_class u_;
};

// Rational a/b with |a|, |b| <= sqrt(p^k / 2) congruent to u mod p^k, if any.
inline std::optional<mpq_class> rational_reconstruction(const mpz_class& u, std::uint64_t p, std::int64_t k) {
  const mpz_class& m = detail::ppow(p, k);
  mpz_class bound;
  mpz_class half = m / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  mpz_class r0 = m, r1 = detail::reduce(u, p, k), s0 = 0, s1 = 1;
  while (r1 > bound) {
    mpz_class q = r0 / r1;
    mpz_class r2 = r0 - q * r1, s2 = s0 - q * s1;
    r0 = r1; r1 = r2; s0 = s1; s1 = s2;
  }
  if (s1 == 0 || abs(s1) > bound) return std::nullopt;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), s1.get_mpz_t(), m.get_mpz_t());
  if (g != 1) return std::nullopt;
  mpq_class q(r1, s1);
  q.canonicalize();
  return q;
}

// Best rational guess for a p-adic value: exact values lift exactly.
inline std::optional<mpq_class> reconstruct(const PadicNumber& x) {
  if (x.is_zero()) return mpq_class(0);
  if (x.is_exact()) return x.lift();
  auto q = rational_reconstruction(x.unit(), x.prime(), x.relative_precision());
  if (!q) return std::nullopt;
  mpq_class r = *q;
  std::int64_t v = x.valuation();
  if (v >= 0) r *= detail::ppow(x.prime(), v);
  else r /= detail::ppow(x.prime(), -v);
  r.canonicalize();
  return r;
}

}  // namespace dwb
