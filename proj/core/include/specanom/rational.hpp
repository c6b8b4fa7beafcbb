#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "specanom/common.hpp"

namespace specanom {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q" or "p".
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);
double to_double(const Rational& r);
bool is_integer(const Rational& r);
/// Closest fraction with denominator ≤ max_den (continued fractions).
Rational rational_approx(double x, long max_den = 1000);

/// Exact Gaussian rational re + i·im.
struct ComplexRational {
  Rational re = 0;
  Rational im = 0;

  ComplexRational() = default;
  ComplexRational(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  ComplexRational(int r) : re(r) {}                  // NOLINT(google-explicit-constructor)
  ComplexRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  [[nodiscard]] bool is_zero() const { return re == 0 && im == 0; }
  [[nodiscard]] cplx to_cplx() const { return {to_double(re), to_double(im)}; }

  ComplexRational& operator+=(const ComplexRational& o);
  ComplexRational& operator-=(const ComplexRational& o);
  ComplexRational& operator*=(const ComplexRational& o);
  ComplexRational& operator/=(const Rational& r);
  ComplexRational& operator/=(const ComplexRational& o);

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator/(ComplexRational a, const Rational& r) { return a /= r; }
  friend ComplexRational operator/(ComplexRational a, const ComplexRational& o) { return a /= o; }
  friend ComplexRational operator-(ComplexRational a) {
    a.re = -a.re;
    a.im = -a.im;
    return a;
  }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) { return a.re == b.re && a.im == b.im; }
};

std::string to_string(const ComplexRational& z);

}  // namespace specanom
