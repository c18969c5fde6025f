#ifndef OBSTRUCT_NUMERIC_HPP
#define OBSTRUCT_NUMERIC_HPP

#include <cstdint>
#include <string>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace obstruct {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using HighFloat = boost::multiprecision::mpfr_float;

// Natural logarithm of a positive big integer, accurate to double precision
// even when the integer is far outside the double range.
double log_of(const BigInt& x);

double to_double(const Rational& q);

// Sets the default MPFR working precision (in bits) for the lifetime of the
// guard and restores the previous precision on exit.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_digits10_;
};

unsigned bits_to_digits10(unsigned bits);

// Exact element a + b*sqrt(d) of a real quadratic field Q(sqrt d), with d a
// square-free integer >= 2. Rationals are the special case b = 0, for which
// the radicand is reported as 0. Arithmetic between numbers with different
// nonzero radicands throws std::domain_error.
class QuadraticNumber {
 public:
  QuadraticNumber() = default;
  QuadraticNumber(long long v);  // NOLINT(google-explicit-constructor)
  QuadraticNumber(Rational r);   // NOLINT(google-explicit-constructor)
  QuadraticNumber(Rational a, Rational b, long long radicand);

  // sqrt(n) for n >= 0, with square factors pulled out.
  static QuadraticNumber sqrt_of(long long n);

  const Rational& rational_part() const { return a_; }
  const Rational& irrational_part() const { return b_; }
  long long radicand() const { return d_; }
  bool is_rational() const { return b_ == 0; }

  int sign() const;
  QuadraticNumber conjugate() const;
  QuadraticNumber inverse() const;
  QuadraticNumber pow(long long exponent) const;

  // Greatest integer <= *this.
  BigInt floor() const;

  double to_double() const;
  HighFloat to_high() const;  // at the current default MPFR precision

  // "a", or "a+b*sqrt(d)" with a, b printed as p or p/q.
  std::string to_string() const;

  QuadraticNumber& operator+=(const QuadraticNumber& o);
  QuadraticNumber& operator-=(const QuadraticNumber& o);
  QuadraticNumber& operator*=(const QuadraticNumber& o);
  QuadraticNumber& operator/=(const QuadraticNumber& o);
  QuadraticNumber operator-() const;

  friend QuadraticNumber operator+(QuadraticNumber x, const QuadraticNumber& y) { return x += y; }
  friend QuadraticNumber operator-(QuadraticNumber x, const QuadraticNumber& y) { return x -= y; }
  friend QuadraticNumber operator*(QuadraticNumber x, const QuadraticNumber& y) { return x *= y; }
  friend QuadraticNumber operator/(QuadraticNumber x, const QuadraticNumber& y) { return x /= y; }

  friend bool operator==(const QuadraticNumber& x, const QuadraticNumber& y);
  friend bool operator<(const QuadraticNumber& x, const QuadraticNumber& y) { return (x - y).sign() < 0; }
  friend bool operator!=(const QuadraticNumber& x, const QuadraticNumber& y) { return !(x == y); }
  friend bool operator>(const QuadraticNumber& x, const QuadraticNumber& y) { return y < x; }
  friend bool operator<=(const QuadraticNumber& x, const QuadraticNumber& y) { return !(y < x); }
  friend bool operator>=(const QuadraticNumber& x, const QuadraticNumber& y) { return !(x < y); }

 private:
  void normalize();
  long long common_radicand(const QuadraticNumber& o) const;

  Rational a_{0};
  Rational b_{0};
  long long d_ = 0;
};

// Parses an exact real: integers, decimals ("1.5"), fractions ("3/2"),
// "phi", "sqrt(n)", and +,-,*,/ with parentheses over these.
QuadraticNumber parse_quadratic(const std::string& text);

}  // namespace obstruct

#endif  // OBSTRUCT_NUMERIC_HPP
