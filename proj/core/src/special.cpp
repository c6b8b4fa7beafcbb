#include "specanom/special.hpp"

#include <array>
#include <cmath>

namespace specanom {
namespace {

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// B_{2k} as p/q for k = 1..20.
constexpr std::array<std::pair<double, double>, 20> kBernoulliEven = {{
    {1.0, 6.0},
    {-1.0, 30.0},
    {1.0, 42.0},
    {-1.0, 30.0},
    {5.0, 66.0},
    {-691.0, 2730.0},
    {7.0, 6.0},
    {-3617.0, 510.0},
    {43867.0, 798.0},
    {-174611.0, 330.0},
    {854513.0, 138.0},
    {-236364091.0, 2730.0},
    {8553103.0, 6.0},
    {-23749461029.0, 870.0},
    {8615841276005.0, 14322.0},
    {-7709321041217.0, 510.0},
    {2577687858367.0, 6.0},
    {-26315271553053477373.0, 1919190.0},
    {2929993913841559.0, 6.0},
    {-261082718496449122051.0, 13530.0},
}};

cplx gamma_right(cplx z) {
  // Valid for Re z >= 1/2.
  z -= 1.0;
  cplx x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const cplx t = z + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

// Euler–Maclaurin remainder Σ_{n≥0} (n+x)^{-s} − (head already summed) at start x,
// together with its s-derivative.
struct EmPair {
  cplx value;
  cplx dvalue;
};

EmPair em_remainder(cplx s, double x, int order) {
  const double lx = std::log(x);
  const cplx xs = std::exp(-s * lx);  // x^{-s}
  // x^{1-s}/(s-1)
  cplx value = x * xs / (s - 1.0);
  cplx dvalue = -lx * x * xs / (s - 1.0) - x * xs / ((s - 1.0) * (s - 1.0));
  value += 0.5 * xs;
  dvalue += -0.5 * lx * xs;

  // Σ_k B_2k/(2k)! (s)_{2k-1} x^{-s-2k+1}
  cplx poch = s;         // (s)_{2k-1}, rising factorial
  cplx dpoch = 1.0;      // d/ds (s)_{2k-1}
  cplx xpow = xs / x;    // x^{-s-1}
  for (int k = 1; k <= order; ++k) {
    const double b = bernoulli_even_over_factorial(k);
    value += b * poch * xpow;
    dvalue += b * (dpoch - lx * poch) * xpow;
    // advance (s)_{2k-1} -> (s)_{2k+1}
    const cplx f1 = s + static_cast<double>(2 * k - 1);
    const cplx f2 = s + static_cast<double>(2 * k);
    dpoch = dpoch * f1 * f2 + poch * (f1 + f2);
    poch = poch * f1 * f2;
    xpow /= x * x;
  }
  return {value, dvalue};
}

EmPair hurwitz_pair(cplx s, double a) {
  if (!(a > 0.0)) throw DomainError("hurwitz_zeta: offset a must be positive");
  if (std::abs(s - 1.0) < 1e-300) throw DomainError("hurwitz_zeta: pole at s = 1");
  const int shift = 16 + static_cast<int>(std::ceil(std::abs(s)));
  cplx value = 0.0;
  cplx dvalue = 0.0;
  for (int n = 0; n < shift; ++n) {
    const double x = n + a;
    const double lx = std::log(x);
    const cplx term = std::exp(-s * lx);
    value += term;
    dvalue -= lx * term;
  }
  const EmPair rem = em_remainder(s, shift + a, 20);
  return {value + rem.value, dvalue + rem.dvalue};
}

}  // namespace

cplx gamma(cplx z) {
  if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * gamma_right(1.0 - z));
  return gamma_right(z);
}

cplx rgamma(cplx z) {
  if (z.real() < 0.5) return std::sin(kPi * z) * gamma_right(1.0 - z) / kPi;
  return 1.0 / gamma_right(z);
}

double bernoulli_even_over_factorial(int k) {
  if (k < 1 || k > static_cast<int>(kBernoulliEven.size())) {
    throw DomainError("bernoulli_even_over_factorial: k out of table range");
  }
  double fact = 1.0;
  for (int i = 2; i <= 2 * k; ++i) fact *= i;
  const auto& [p, q] = kBernoulliEven[static_cast<std::size_t>(k - 1)];
  return p / q / fact;
}

cplx hurwitz_zeta(cplx s, double a) { return hurwitz_pair(s, a).value; }

cplx hurwitz_zeta_ds(cplx s, double a) { return hurwitz_pair(s, a).dvalue; }

cplx euler_maclaurin_tail(cplx s, double x0, int log_degree, int order) {
  const EmPair p = em_remainder(s, x0, order);
  if (log_degree == 0) return p.value;
  if (log_degree == 1) return -p.dvalue;
  throw DomainError("euler_maclaurin_tail: log degree must be 0 or 1");
}

}  // namespace specanom
