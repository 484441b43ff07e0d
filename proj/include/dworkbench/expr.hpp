#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"
#include "series.hpp"

namespace dwb {

struct ParseError : std::runtime_error {
  std::size_t column;  // 1-based
  ParseError(const std::string& what, std::size_t col) : std::runtime_error(what + " at column " + std::to_string(col)), column(col) {}
};

// Gauss hypergeometric 2F1(a, b; c; t) to `order` terms; exact when a or b is a
// non-positive integer.
inline Series<RationalField> hyp2f1(const mpq_class& a, const mpq_class& b, const mpq_class& c, std::int64_t order) {
  auto nonpos_int = [](const mpq_class& x) { return x.get_den() == 1 && sgn(x) <= 0; };
  if (nonpos_int(c)) throw std::invalid_argument("hyp2f1: c is a non-positive integer");
  std::vector<mpq_class> co;
  mpq_class term = 1;
  std::int64_t valid = order;
  for (std::int64_t k = 0; k < order; ++k) {
    co.push_back(term);
    mpq_class kk(static_cast<long>(k));
    term = term * (a + kk) * (b + kk) / ((c + kk) * (kk + 1));
    term.canonicalize();
    if (sgn(term) == 0) {
      valid = kInfinitePrecision;
      break;
    }
  }
  return Series<RationalField>(std::move(co), valid);
}

// Entry grammar, over exact rationals:
//   expr  := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*
//   unary := ('+'|'-') unary | power
//   power := atom ('^' integer)?
//   atom  := integer | 't' | '(' expr ')' | 'd(' expr ')' | 'hyp2f1(' q ',' q ',' q ')'
// Division is by series with nonzero constant term; non-polynomial results are
// kept to `order` coefficients.
class EntryParser {
 public:
  EntryParser(std::string text, RationalField field, std::int64_t order) : s_(std::move(text)), f_(field), order_(order) {}

  Series<RationalField> parse() {
    skip();
    if (pos_ >= s_.size()) fail("empty expression");
    auto v = expr();
    skip();
    if (pos_ < s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return v;
  }

 private:
  using S = Series<RationalField>;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_ + 1); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(pos_ < s_.size() ? std::string("expected '") + c + "', found '" + s_[pos_] + "'" : std::string("expected '") + c + "' at end of input");
  }

  S fit(S x) const { return x.is_exact() ? x : x.truncated(order_); }

  S expr() {
    S v = term();
    while (true) {
      if (eat('+')) v = fit(v + term());
      else if (eat('-')) v = fit(v - term());
      else return v;
    }
  }

  S term() {
    S v = unary();
    while (true) {
      if (eat('*')) {
        v = fit(convolve(v, unary()));
      } else if (eat('/')) {
        std::size_t at = pos_;
        S d = unary();
        if (d.is_exact_zero() || sgn(d[0]) == 0) {
          pos_ = at;
          fail("division by a series with zero constant term");
        }
        if (d.size() == 1) {
          mpq_class inv = 1 / d[0];
          v = scale(v, inv);
        } else {
          v = fit(convolve(v, inverse(d.truncated(order_), order_)));
        }
      } else {
        return v;
      }
    }
  }

  S unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  S power() {
    S base = atom();
    if (!eat('^')) return base;
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a non-negative integer exponent");
    long e = std::stol(s_.substr(start, pos_ - start));
    if (e > 100000) fail("exponent too large");
    S out = S::constant(mpq_class(1));
    for (long k = 0; k < e; ++k) out = fit(convolve(out, base));
    return out;
  }

  mpz_class integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail(pos_ < s_.size() ? std::string("unexpected '") + s_[pos_] + "'" : "unexpected end of input");
    return mpz_class(s_.substr(start, pos_ - start));
  }

  mpq_class signed_rational() {
    bool neg = eat('-');
    if (!neg) eat('+');
    mpq_class q(integer());
    if (eat('/')) {
      std::size_t at = pos_;
      mpz_class d = integer();
      if (d == 0) {
        pos_ = at;
        fail("zero denominator");
      }
      q /= mpq_class(d);
      q.canonicalize();
    }
    return neg ? mpq_class(-q) : q;
  }

  bool keyword(const char* w) {
    skip();
    std::size_t n = std::char_traits<char>::length(w);
    if (s_.compare(pos_, n, w) != 0) return false;
    if (pos_ + n < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_ + n]))) return false;
    pos_ += n;
    return true;
  }

  S atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return S::constant(mpq_class(integer()));
    if (eat('(')) {
      S v = expr();
      expect(')');
      return v;
    }
    if (keyword("hyp2f1")) {
      expect('(');
      mpq_class a = signed_rational();
      expect(',');
      mpq_class b = signed_rational();
      expect(',');
      std::size_t at = pos_;
      mpq_class cc = signed_rational();
      expect(')');
      if (cc.get_den() == 1 && sgn(cc) <= 0) {
        pos_ = at;
        fail("hyp2f1: c is a non-positive integer");
      }
      return hyp2f1(a, b, cc, order_);
    }
    if (keyword("d")) {
      expect('(');
      S v = expr();
      expect(')');
      return derive(v);
    }
    if (keyword("t")) return S::monomial(mpq_class(1), 1);
    fail(std::string("unexpected '") + c + "'");
  }

  std::string s_;
  RationalField f_;
  std::int64_t order_;
  std::size_t pos_ = 0;
};

inline Series<RationalField> parse_entry(const std::string& text, const RationalField& field, std::int64_t order) {
  return EntryParser(text, field, order).parse();
}

}  // namespace dwb
