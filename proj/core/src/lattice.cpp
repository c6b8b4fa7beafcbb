#include "specanom/lattice.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <map>
#include <mutex>

#include "specanom/special.hpp"
#include "specanom/spectra.hpp"

namespace specanom::lattice {
namespace {

constexpr std::int64_t kDirectTerms = 2000;
constexpr int kGaussPoints = 20;

double theta_direct(double t) {
  double acc = 1.0;
  for (int n = 1;; ++n) {
    const double term = 2.0 * std::exp(-static_cast<double>(n) * n * t);
    acc += term;
    if (term < 1e-18 * acc) break;
  }
  return acc;
}

// Gauss–Legendre nodes mapped to [a, b], appended as (t, w).
void add_panel(double a, double b, std::vector<double>& t, std::vector<double>& w) {
  using rule = boost::math::quadrature::gauss<double, kGaussPoints>;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const auto& x = rule::abscissa();
  const auto& wt = rule::weights();
  for (std::size_t i = 0; i < x.size(); ++i) {
    t.push_back(mid + half * x[i]);
    w.push_back(half * wt[i]);
    t.push_back(mid - half * x[i]);
    w.push_back(half * wt[i]);
  }
}

}  // namespace

double theta(double t) {
  if (!(t > 0.0)) throw DomainError("theta: t must be positive");
  if (t >= 1.0) return theta_direct(t);
  return std::sqrt(kPi / t) * theta_direct(kPi * kPi / t);
}

EpsteinZeta::EpsteinZeta(int dim, double mass) : dim_(dim), mass_(mass) {
  if (dim < 1 || dim > 4) throw DomainError("EpsteinZeta: dimension must be in {1,2,3,4}");
  if (mass < 0.0) throw DomainError("EpsteinZeta: mass must be nonnegative");
  const auto counts = lattice_counts(dim, kDirectTerms);
  counts_.assign(counts.begin(), counts.end());

  const double half_d = 0.5 * dim;
  const double pi_half_d = std::pow(kPi, half_d);
  const double kernel = mass == 0.0 ? 1.0 : 0.0;

  std::vector<double> t;
  std::vector<double> w;
  // Small-t remainder R(t) = θ(π²/t)^d − 1 is flat to all orders at 0.
  const int near_panels = 24;
  const double lo = 0.02;
  for (int i = 0; i < near_panels; ++i) {
    add_panel(lo + (1.0 - lo) * i / near_panels, lo + (1.0 - lo) * (i + 1) / near_panels, t, w);
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = std::pow(theta_direct(kPi * kPi / t[i]), dim) - 1.0;
    near_log_t_.push_back(std::log(t[i]));
    near_weight_.push_back(w[i] * pi_half_d * std::exp(-mass * t[i]) * r);
  }

  t.clear();
  w.clear();
  double a = 1.0;
  while (a < 30.0) {
    add_panel(a, a + 1.0, t, w);
    a += 1.0;
  }
  while (a < 80.0 || (mass > 0.0 && mass * a < 80.0)) {
    add_panel(a, 1.5 * a, t, w);
    a *= 1.5;
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double h = std::pow(theta_direct(t[i]), dim) * std::exp(-mass * t[i]) - kernel;
    far_log_t_.push_back(std::log(t[i]));
    far_weight_.push_back(w[i] * h);
  }
}

std::shared_ptr<const EpsteinZeta> EpsteinZeta::cached(int dim, double mass) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::shared_ptr<const EpsteinZeta>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{dim, mass}];
  if (!slot) slot = std::make_shared<const EpsteinZeta>(dim, mass);
  return slot;
}

cplx EpsteinZeta::operator()(cplx w) const {
  if (w.real() >= 0.5 * dim_ + 6.0) return direct(w);
  return mellin(w);
}

cplx EpsteinZeta::direct(cplx w) const {
  cplx acc = 0.0;
  for (std::int64_t n = kDirectTerms; n >= 0; --n) {
    const double c = counts_[static_cast<std::size_t>(n)];
    const double v = static_cast<double>(n) + mass_;
    if (c == 0.0 || v == 0.0) continue;
    acc += c * std::exp(-w * std::log(v));
  }
  const double half_d = 0.5 * dim_;
  const double edge = static_cast<double>(kDirectTerms) + 0.5 + mass_;
  acc += std::pow(kPi, half_d) / std::tgamma(half_d) * std::exp((half_d - w) * std::log(edge)) / (w - half_d);
  return acc;
}

cplx EpsteinZeta::mellin(cplx w) const {
  const double half_d = 0.5 * dim_;
  const double pi_half_d = std::pow(kPi, half_d);
  cplx series = 0.0;
  double factor = 1.0;  // (−μ)^j / j!
  for (int j = 0; j < 400; ++j) {
    const cplx term = factor / (w - half_d + static_cast<double>(j));
    series += term;
    if (j > 4 && std::abs(factor) < 1e-18) break;
    factor *= -mass_ / (j + 1);
  }
  cplx near = 0.0;
  for (std::size_t i = 0; i < near_log_t_.size(); ++i) {
    near += near_weight_[i] * std::exp((w - half_d - 1.0) * near_log_t_[i]);
  }
  cplx far = 0.0;
  for (std::size_t i = 0; i < far_log_t_.size(); ++i) {
    far += far_weight_[i] * std::exp((w - 1.0) * far_log_t_[i]);
  }
  cplx small = pi_half_d * series + near;
  if (mass_ == 0.0) small -= 1.0 / w;
  return rgamma(w) * (small + far);
}

cplx two_mass_zeta(int dim, double m1, double m2, cplx t) {
  if (!(m1 > 0.0) || !(m2 > 0.0)) throw DomainError("two_mass_zeta: masses must be positive");
  if (m1 == m2) return (*EpsteinZeta::cached(dim, m1))(2.0 * t);
  const double mu = 0.5 * (m1 + m2);
  const double delta2 = 0.25 * (m2 - m1) * (m2 - m1);
  const auto zeta = EpsteinZeta::cached(dim, mu);
  cplx sum = 0.0;
  cplx coeff = 1.0;  // (t)_k δ^{2k} / k!
  for (int k = 0; k < 400; ++k) {
    const cplx term = coeff * (*zeta)(2.0 * t + 2.0 * k);
    sum += term;
    if (k >= 2 && std::abs(term) < 1e-17 * std::max(std::abs(sum), 1e-300)) return sum;
    coeff *= (t + static_cast<double>(k)) * delta2 / static_cast<double>(k + 1);
  }
  throw ContinuationError("two_mass_zeta: binomial expansion did not converge");
}

}  // namespace specanom::lattice
