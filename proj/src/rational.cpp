#include "cachelab/rational.hpp"

#include <cctype>
#include <limits>
#include <utility>

#include "cachelab/error.hpp"

namespace cachelab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InsufficientCollectiveStorage: return "InsufficientCollectiveStorage";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DivisibilityError: return "DivisibilityError";
    case ErrorCode::NotCorner: return "NotCorner";
    case ErrorCode::PlacementMismatch: return "PlacementMismatch";
    case ErrorCode::DecodeFailure: return "DecodeFailure";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

ExactRational::ExactRational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) {
    throw Error(ErrorCode::DomainError, "zero denominator");
  }
  q_ = mpq_class(mpz_class(static_cast<long>(numerator)),
                 mpz_class(static_cast<long>(denominator)));
  q_.canonicalize();
}

ExactRational::ExactRational(mpq_class q) : q_(std::move(q)) {
  if (q_.get_den() == 0) {
    throw Error(ErrorCode::DomainError, "zero denominator");
  }
  q_.canonicalize();
}

namespace {

bool parse_integer(std::string_view s, mpz_class& out) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  if (i == s.size()) return false;
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
  }
  std::string digits(s);
  if (digits[0] == '+') digits.erase(0, 1);
  return out.set_str(digits, 10) == 0;
}

}  // namespace

ExactRational ExactRational::parse(std::string_view text) {
  const auto slash = text.find('/');
  mpz_class num;
  mpz_class den = 1;
  const bool ok = slash == std::string_view::npos
                      ? parse_integer(text, num)
                      : parse_integer(text.substr(0, slash), num) &&
                            parse_integer(text.substr(slash + 1), den);
  if (!ok) {
    throw Error(ErrorCode::ParseError,
                "expected an integer or p/q fraction, got '" + std::string(text) + "'");
  }
  if (den == 0) {
    throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
  }
  return ExactRational(mpq_class(num, den));
}

mpz_class ExactRational::floor() const {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

mpz_class ExactRational::ceil() const {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

std::int64_t ExactRational::to_int64() const {
  if (!is_integer() || !q_.get_num().fits_slong_p()) {
    throw Error(ErrorCode::DomainError, "not a machine integer: " + str());
  }
  return q_.get_num().get_si();
}

std::string ExactRational::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string ExactRational::decimal(int digits) const {
  // Round half away from zero at the requested number of digits.
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  mpq_class scaled = abs(q_) * scale + mpq_class(1, 2);
  mpz_class units;
  mpz_fdiv_q(units.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  std::string body = units.get_str();
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits)) {
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    }
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  }
  const bool negative = sgn(q_) < 0 && units != 0;
  return negative ? "-" + body : body;
}

ExactRational& ExactRational::operator+=(const ExactRational& o) {
  q_ += o.q_;
  return *this;
}
ExactRational& ExactRational::operator-=(const ExactRational& o) {
  q_ -= o.q_;
  return *this;
}
ExactRational& ExactRational::operator*=(const ExactRational& o) {
  q_ *= o.q_;
  return *this;
}
ExactRational& ExactRational::operator/=(const ExactRational& o) {
  if (o.is_zero()) throw Error(ErrorCode::DomainError, "division by zero");
  q_ /= o.q_;
  return *this;
}

ExactRational ExactRational::operator-() const { return ExactRational(mpq_class(-q_)); }

ExactRational positive_part(const ExactRational& x) {
  return x.sign() > 0 ? x : ExactRational(0);
}

std::ostream& operator<<(std::ostream& os, const ExactRational& r) { return os << r.str(); }

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  if (b <= 0) throw Error(ErrorCode::DomainError, "ceil_div requires a positive divisor");
  const std::int64_t q = a / b;
  return (a % b != 0 && a > 0) ? q + 1 : q;
}

}  // namespace cachelab
