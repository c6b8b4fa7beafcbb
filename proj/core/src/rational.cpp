#include "specanom/rational.hpp"

#include <cmath>

namespace specanom {

using boost::multiprecision::cpp_int;

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(cpp_int(text));
    const cpp_int num(text.substr(0, slash));
    const cpp_int den(text.substr(slash + 1));
    if (den == 0) throw DomainError("rational: zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const DomainError*>(&e) != nullptr) throw;
    throw DomainError("rational: malformed number '" + text + "'");
  }
}

std::string to_string(const Rational& r) {
  const cpp_int num = boost::multiprecision::numerator(r);
  const cpp_int den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

bool is_integer(const Rational& r) { return boost::multiprecision::denominator(r) == 1; }

ComplexRational& ComplexRational::operator+=(const ComplexRational& o) {
  re += o.re;
  im += o.im;
  return *this;
}

ComplexRational& ComplexRational::operator-=(const ComplexRational& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

ComplexRational& ComplexRational::operator*=(const ComplexRational& o) {
  Rational r = re * o.re - im * o.im;
  Rational i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

ComplexRational& ComplexRational::operator/=(const Rational& r) {
  if (r == 0) throw DomainError("rational: division by zero");
  re /= r;
  im /= r;
  return *this;
}

ComplexRational& ComplexRational::operator/=(const ComplexRational& o) {
  const Rational norm = o.re * o.re + o.im * o.im;
  if (norm == 0) throw DomainError("rational: division by zero");
  *this *= ComplexRational(o.re, -o.im);
  return *this /= norm;
}

Rational rational_approx(double x, long max_den) {
  if (!std::isfinite(x)) throw DomainError("rational: non-finite value");
  // Convergents h/k of the continued fraction of x.
  cpp_int h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rest = x;
  for (int i = 0; i < 64; ++i) {
    const double a = std::floor(rest);
    const cpp_int ai(static_cast<long long>(a));
    const cpp_int h2 = ai * h1 + h0;
    const cpp_int k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double frac = rest - a;
    if (frac < 1e-12) break;
    rest = 1.0 / frac;
  }
  return Rational(h1, k1);
}

std::string to_string(const ComplexRational& z) {
  if (z.im == 0) return to_string(z.re);
  return to_string(z.re) + (z.im < 0 ? "-" : "+") + to_string(boost::multiprecision::abs(z.im)) + "i";
}

}  // namespace specanom
