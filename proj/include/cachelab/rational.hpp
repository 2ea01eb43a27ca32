#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace cachelab {

/// Arbitrary-precision fraction kept in lowest terms with a positive
/// denominator. Every operation is exact.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  ExactRational(int value) : q_(value) {}   // NOLINT(google-explicit-constructor)
  ExactRational(std::int64_t numerator, std::int64_t denominator);
  explicit ExactRational(const mpz_class& integer) : q_(integer) {}
  explicit ExactRational(mpq_class q);

  /// Accepts "p/q" or "p" with an optional leading sign. Decimal forms such
  /// as "0.5", and zero denominators, are rejected with ErrorCode::ParseError.
  static ExactRational parse(std::string_view text);

  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  bool is_integer() const { return q_.get_den() == 1; }
  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }

  mpz_class floor() const;
  mpz_class ceil() const;

  /// Converts an integral value to int64; throws DomainError otherwise.
  std::int64_t to_int64() const;

  double to_double() const { return q_.get_d(); }

  /// "p/q", or "p" when the denominator is 1.
  std::string str() const;

  /// Fixed-point rendering used only for plot columns.
  std::string decimal(int digits) const;

  ExactRational& operator+=(const ExactRational& o);
  ExactRational& operator-=(const ExactRational& o);
  ExactRational& operator*=(const ExactRational& o);
  ExactRational& operator/=(const ExactRational& o);

  friend ExactRational operator+(ExactRational a, const ExactRational& b) { return a += b; }
  friend ExactRational operator-(ExactRational a, const ExactRational& b) { return a -= b; }
  friend ExactRational operator*(ExactRational a, const ExactRational& b) { return a *= b; }
  friend ExactRational operator/(ExactRational a, const ExactRational& b) { return a /= b; }
  ExactRational operator-() const;

  friend bool operator==(const ExactRational& a, const ExactRational& b) {
    return cmp(a.q_, b.q_) == 0;
  }
  friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  const mpq_class& raw() const { return q_; }

 private:
  mpq_class q_;
};

inline const ExactRational& min(const ExactRational& a, const ExactRational& b) {
  return b < a ? b : a;
}
inline const ExactRational& max(const ExactRational& a, const ExactRational& b) {
  return a < b ? b : a;
}

/// max(x, 0)
ExactRational positive_part(const ExactRational& x);

std::ostream& operator<<(std::ostream& os, const ExactRational& r);

/// Integer ceil(a / b) for b > 0.
std::int64_t ceil_div(std::int64_t a, std::int64_t b);

}  // namespace cachelab
