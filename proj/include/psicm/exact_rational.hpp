#ifndef PSICM_EXACT_RATIONAL_HPP
#define PSICM_EXACT_RATIONAL_HPP

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

#include "psicm/errors.hpp"

namespace psicm {

/// Arbitrary-precision signed rational, always held in lowest terms with a
/// positive denominator.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)

  ExactRational(const mpz_class& numerator, const mpz_class& denominator) {
    if (denominator == 0) {
      throw DomainError("ExactRational: zero denominator");
    }
    value_ = mpq_class(numerator, denominator);
    value_.canonicalize();
  }

  ExactRational(long numerator, long denominator)
      : ExactRational(mpz_class(numerator), mpz_class(denominator)) {}

  /// Parses "p" or "p/q" in base 10.
  static ExactRational parse(const std::string& text) {
    ExactRational r;
    if (r.value_.set_str(text, 10) != 0) {
      throw DomainError("ExactRational: cannot parse '" + text + "'");
    }
    if (r.value_.get_den() == 0) {
      throw DomainError("ExactRational: zero denominator");
    }
    r.value_.canonicalize();
    return r;
  }

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }

  double to_double() const { return value_.get_d(); }
  std::string to_string() const { return value_.get_str(10); }

  /// Converts to a GMP float of the given bit precision.
  mpf_class to_mpf(mp_bitcnt_t precision) const {
    mpf_class out(0, precision);
    out = value_;
    return out;
  }

  const mpq_class& raw() const { return value_; }

  ExactRational& operator+=(const ExactRational& o) {
    value_ += o.value_;
    return *this;
  }
  ExactRational& operator-=(const ExactRational& o) {
    value_ -= o.value_;
    return *this;
  }
  ExactRational& operator*=(const ExactRational& o) {
    value_ *= o.value_;
    return *this;
  }
  ExactRational& operator/=(const ExactRational& o) {
    if (o.is_zero()) {
      throw DomainError("ExactRational: division by zero");
    }
    value_ /= o.value_;
    return *this;
  }

  friend ExactRational operator+(ExactRational a, const ExactRational& b) { return a += b; }
  friend ExactRational operator-(ExactRational a, const ExactRational& b) { return a -= b; }
  friend ExactRational operator*(ExactRational a, const ExactRational& b) { return a *= b; }
  friend ExactRational operator/(ExactRational a, const ExactRational& b) { return a /= b; }
  friend ExactRational operator-(ExactRational a) {
    a.value_ = -a.value_;
    return a;
  }

  friend bool operator==(const ExactRational& a, const ExactRational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExactRational& r) { return os << r.to_string(); }

 private:
  static ExactRational from_mpq(mpq_class q) {
    ExactRational r;
    r.value_ = std::move(q);
    r.value_.canonicalize();
    return r;
  }
  friend class BernoulliTable;

  mpq_class value_{0};
};

}  // namespace psicm

#endif
