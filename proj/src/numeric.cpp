#include "obstruct/numeric.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "obstruct/errors.hpp"

namespace obstruct {

namespace mp = boost::multiprecision;

double log_of(const BigInt& x) {
  if (x <= 0) {
    throw std::domain_error("log_of: argument must be positive");
  }
  long exponent = 0;
  double mantissa = mpz_get_d_2exp(&exponent, x.backend().data());
  return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

unsigned bits_to_digits10(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

PrecisionGuard::PrecisionGuard(unsigned bits)
    : saved_digits10_(HighFloat::default_precision()) {
  HighFloat::default_precision(bits_to_digits10(bits));
}

PrecisionGuard::~PrecisionGuard() { HighFloat::default_precision(saved_digits10_); }

namespace {

HighFloat rational_to_high(const Rational& q) {
  return HighFloat(mp::numerator(q)) / HighFloat(mp::denominator(q));
}

std::string rational_string(const Rational& q) {
  std::ostringstream out;
  out << mp::numerator(q);
  if (mp::denominator(q) != 1) {
    out << '/' << mp::denominator(q);
  }
  return out.str();
}

}  // namespace

QuadraticNumber::QuadraticNumber(long long v) : a_(v) {}

QuadraticNumber::QuadraticNumber(Rational r) : a_(std::move(r)) {}

QuadraticNumber::QuadraticNumber(Rational a, Rational b, long long radicand)
    : a_(std::move(a)), b_(std::move(b)), d_(radicand) {
  if (b_ != 0) {
    QuadraticNumber root = sqrt_of(radicand);
    // root = r0 + r1*sqrt(d'), with exactly one part nonzero
    a_ += b_ * root.a_;
    b_ *= root.b_;
    d_ = root.d_;
  }
  normalize();
}

QuadraticNumber QuadraticNumber::sqrt_of(long long n) {
  if (n < 0) {
    throw std::domain_error("sqrt_of: negative radicand");
  }
  long long factor = 1;
  long long rest = n;
  for (long long p = 2; p * p <= rest; ++p) {
    while (rest % (p * p) == 0) {
      rest /= p * p;
      factor *= p;
    }
  }
  QuadraticNumber out;
  if (rest <= 1) {
    out.a_ = Rational(factor * rest);
  } else {
    out.b_ = Rational(factor);
    out.d_ = rest;
  }
  return out;
}

void QuadraticNumber::normalize() {
  if (b_ == 0) {
    d_ = 0;
  }
}

long long QuadraticNumber::common_radicand(const QuadraticNumber& o) const {
  if (d_ == 0) return o.d_;
  if (o.d_ == 0 || o.d_ == d_) return d_;
  throw std::domain_error("quadratic numbers from different fields");
}

int QuadraticNumber::sign() const {
  int sa = a_.sign();
  int sb = b_.sign();
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  Rational a2 = a_ * a_;
  Rational b2d = b_ * b_ * d_;
  return a2 > b2d ? sa : sb;
}

QuadraticNumber QuadraticNumber::conjugate() const {
  QuadraticNumber out = *this;
  out.b_ = -out.b_;
  return out;
}

QuadraticNumber QuadraticNumber::inverse() const {
  if (sign() == 0) {
    throw std::domain_error("division by zero");
  }
  Rational norm = a_ * a_ - b_ * b_ * d_;
  QuadraticNumber out;
  out.a_ = a_ / norm;
  out.b_ = -b_ / norm;
  out.d_ = d_;
  out.normalize();
  return out;
}

QuadraticNumber QuadraticNumber::pow(long long exponent) const {
  QuadraticNumber base = exponent < 0 ? inverse() : *this;
  unsigned long long e = exponent < 0 ? static_cast<unsigned long long>(-exponent)
                                      : static_cast<unsigned long long>(exponent);
  QuadraticNumber result(1);
  while (e > 0) {
    if (e & 1ULL) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

BigInt QuadraticNumber::floor() const {
  BigInt k;
  {
    PrecisionGuard guard(256);
    HighFloat approx = mp::floor(to_high());
    k = approx.convert_to<BigInt>();
  }
  while (*this < QuadraticNumber(Rational(k))) --k;
  while (*this >= QuadraticNumber(Rational(k + 1))) ++k;
  return k;
}

double QuadraticNumber::to_double() const {
  if (b_ == 0) return obstruct::to_double(a_);
  PrecisionGuard guard(128);
  return to_high().convert_to<double>();
}

HighFloat QuadraticNumber::to_high() const {
  HighFloat out = rational_to_high(a_);
  if (b_ != 0) {
    out += rational_to_high(b_) * mp::sqrt(HighFloat(d_));
  }
  return out;
}

std::string QuadraticNumber::to_string() const {
  if (b_ == 0) return rational_string(a_);
  std::string out = rational_string(a_);
  out += b_.sign() < 0 ? "-" : "+";
  out += rational_string(mp::abs(b_));
  out += "*sqrt(" + std::to_string(d_) + ")";
  return out;
}

QuadraticNumber& QuadraticNumber::operator+=(const QuadraticNumber& o) {
  d_ = common_radicand(o);
  a_ += o.a_;
  b_ += o.b_;
  normalize();
  return *this;
}

QuadraticNumber& QuadraticNumber::operator-=(const QuadraticNumber& o) {
  d_ = common_radicand(o);
  a_ -= o.a_;
  b_ -= o.b_;
  normalize();
  return *this;
}

QuadraticNumber& QuadraticNumber::operator*=(const QuadraticNumber& o) {
  long long d = common_radicand(o);
  Rational a = a_ * o.a_ + b_ * o.b_ * d;
  Rational b = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(a);
  b_ = std::move(b);
  d_ = d;
  normalize();
  return *this;
}

QuadraticNumber& QuadraticNumber::operator/=(const QuadraticNumber& o) {
  return *this *= o.inverse();
}

QuadraticNumber QuadraticNumber::operator-() const {
  QuadraticNumber out = *this;
  out.a_ = -out.a_;
  out.b_ = -out.b_;
  return out;
}

bool operator==(const QuadraticNumber& x, const QuadraticNumber& y) {
  return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_ == 0 || x.d_ == y.d_);
}

namespace {

class QuadraticParser {
 public:
  explicit QuadraticParser(const std::string& text) : text_(text) {}

  QuadraticNumber parse() {
    QuadraticNumber v = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  QuadraticNumber expression() {
    QuadraticNumber v = term();
    for (;;) {
      skip_space();
      if (accept('+')) {
        v += term();
      } else if (accept('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  QuadraticNumber term() {
    QuadraticNumber v = factor();
    for (;;) {
      skip_space();
      if (accept('*')) {
        v *= factor();
      } else if (accept('/')) {
        QuadraticNumber divisor = factor();
        if (divisor.sign() == 0) fail("division by zero");
        v /= divisor;
      } else {
        return v;
      }
    }
  }

  QuadraticNumber factor() {
    skip_space();
    if (accept('-')) return -factor();
    if (accept('(')) {
      QuadraticNumber v = expression();
      skip_space();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    if (keyword("phi")) {
      return (QuadraticNumber(1) + QuadraticNumber::sqrt_of(5)) / QuadraticNumber(2);
    }
    if (keyword("sqrt")) {
      skip_space();
      if (!accept('(')) fail("expected '(' after sqrt");
      QuadraticNumber arg = expression();
      skip_space();
      if (!accept(')')) fail("expected ')'");
      if (!arg.is_rational() || mp::denominator(arg.rational_part()) != 1 ||
          arg.sign() < 0) {
        fail("sqrt takes a non-negative integer");
      }
      return QuadraticNumber::sqrt_of(arg.rational_part().convert_to<long long>());
    }
    return number();
  }

  QuadraticNumber number() {
    std::size_t start = pos_;
    std::string integer_digits;
    std::string fraction_digits;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      integer_digits += text_[pos_++];
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        fraction_digits += text_[pos_++];
      }
    }
    if (integer_digits.empty() && fraction_digits.empty()) {
      pos_ = start;
      fail("expected a number");
    }
    BigInt numerator(integer_digits.empty() ? std::string("0") : integer_digits);
    BigInt denominator = 1;
    for (char c : fraction_digits) {
      numerator = numerator * 10 + (c - '0');
      denominator *= 10;
    }
    return QuadraticNumber(Rational(numerator, denominator));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool keyword(const char* word) {
    std::string w(word);
    if (text_.compare(pos_, w.size(), w) == 0) {
      pos_ += w.size();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("cannot parse number '" + text_ + "' at offset " +
                                std::to_string(pos_) + ": " + what);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

QuadraticNumber parse_quadratic(const std::string& text) {
  return QuadraticParser(text).parse();
}

}  // namespace obstruct
