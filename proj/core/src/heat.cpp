#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "specanom/czeta.hpp"
#include "specanom/lattice.hpp"

namespace specanom {
namespace {

constexpr int kGridPoints = 24;
constexpr double kEpsLo = 1e-4;
constexpr double kEpsHi = 1e-1;
constexpr double kMaxExponent = 4.0;

double real_or_throw(cplx v, const char* what) {
  if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real()))) {
    throw DomainError(std::string("heat trace: ") + what + " must be real");
  }
  return v.real();
}

// tr(A e^{−εQ}) by direct summation (rays, extras) and θ-functions (lattice).
double heat_trace(const Multiplier& a, const Spectrum& q, const KernelPolicy& kernel, double eps) {
  double acc = 0.0;
  for (std::size_t i = 0; i < q.rays().size(); ++i) {
    const Ray& r = q.rays()[i];
    const RayMultiplier& m = a.rays()[i];
    const double c = r.scale.real();
    long double ray_sum = 0.0L;
    for (std::int64_t k = 0;; ++k) {
      const double x = r.offset + static_cast<double>(k);
      const double lambda = r.value(x).real();
      const double e = eps * lambda;
      ray_sum += static_cast<long double>(real_or_throw(m.value(x), "multiplier")) * std::exp(-static_cast<long double>(e));
      if (e > 50.0 && c * std::pow(x, r.power) * eps > 50.0) break;
    }
    acc += r.multiplicity * static_cast<double>(ray_sum);
  }
  for (std::size_t i = 0; i < q.extras().size(); ++i) {
    const Eigenvalue& e = q.extras()[i];
    double lambda = e.value.real();
    if (std::abs(e.value) < 1e-13) {
      if (kernel.mode == KernelPolicy::Mode::exclude) continue;
      lambda = kernel.fill_value;
    }
    acc += e.multiplicity * real_or_throw(a.extras()[i], "multiplier") * std::exp(-eps * lambda);
  }
  if (q.lattice()) {
    const LatticeTail& l = *q.lattice();
    const LatticeMultiplier& m = *a.lattice();
    if (!m.logs.empty()) throw DomainError("heat trace: lattice multipliers must be constant");
    const double alpha = real_or_throw(m.constant, "multiplier");
    double sum = 0.0;
    if (l.masses.size() == 1 && l.power == 1.0) {
      const double t = eps * l.scale;
      sum = std::exp(-t * l.masses[0]) * std::pow(lattice::theta(t), l.dim);
    } else {
      const double edge = std::pow(60.0 / (eps * l.scale), 1.0 / (l.power * l.masses.size()));
      const auto counts = lattice_counts(l.dim, static_cast<std::int64_t>(edge) + 1);
      for (std::size_t n = 0; n < counts.size(); ++n) {
        if (counts[n] == 0) continue;
        sum += static_cast<double>(counts[n]) * std::exp(-eps * l.value(static_cast<std::int64_t>(n)));
      }
    }
    const bool has_kernel = std::any_of(l.masses.begin(), l.masses.end(), [](double v) { return v == 0.0; });
    if (has_kernel) {
      sum -= 1.0;
      if (kernel.mode == KernelPolicy::Mode::fill) sum += std::exp(-eps * kernel.fill_value);
    }
    acc += alpha * sum;
  }
  return acc;
}

void add_exponent(std::vector<double>& exps, double e) {
  if (e > kMaxExponent + 1e-9) return;
  for (double x : exps) {
    if (std::abs(x - e) < 1e-9) return;
  }
  exps.push_back(e);
}

}  // namespace

HeatFit heat_trace_fp(const Multiplier& a, const Spectrum& q, const KernelPolicy& kernel) {
  if (!a.compatible_with(q)) throw DomainError("heat trace: multiplier and weight are not simultaneously diagonal");
  if (!q.flags().positive && !(q.kernel_dimension() > 0 && q.is_real())) {
    throw DomainError("heat trace: the weight must be positive");
  }
  for (const auto& r : q.rays()) {
    if (r.scale.imag() != 0.0 || !(r.scale.real() > 0.0) || !(r.power > 0.0)) {
      throw DomainError("heat trace: the weight must be positive");
    }
  }
  for (const auto& e : q.extras()) {
    if (e.value.real() < -1e-13 || std::abs(e.value.imag()) > 0.0) throw DomainError("heat trace: the weight must be positive");
  }

  // Exponents of ε in the small-ε expansion: (j − r − 1)/p per ray term,
  // (j − d/2)/p on lattices, and the integer powers of the Taylor part.
  std::vector<double> exps;
  std::vector<double> log_powers{0.0};
  for (std::size_t i = 0; i < q.rays().size(); ++i) {
    const double p = q.rays()[i].power;
    const bool pure = q.rays()[i].pure_power() && !a.rays()[i].exact;
    for (const auto& t : a.rays()[i].terms) {
      if (t.log_degree != 0) throw DomainError("heat trace: log multipliers are not supported");
      const int depth = pure && t.series.size() == 1 ? 1 : 64;
      for (int j = 0; j < depth; ++j) {
        const double e = (j - t.power - 1.0) / p;
        add_exponent(exps, e);
        const double k = std::round(e);
        if (k >= 1.0 && k <= kMaxExponent && std::abs(e - k) < 1e-9 &&
            std::find(log_powers.begin(), log_powers.end(), k) == log_powers.end()) {
          log_powers.push_back(k);
        }
      }
    }
  }
  if (q.lattice()) {
    const LatticeTail& l = *q.lattice();
    const double p = l.power * static_cast<double>(l.masses.size());
    for (int j = 0; j < 64; ++j) add_exponent(exps, (j - 0.5 * l.dim) / p);
  }
  for (int k = 1; k <= static_cast<int>(kMaxExponent); ++k) add_exponent(exps, k);
  exps.erase(std::remove_if(exps.begin(), exps.end(), [](double e) { return std::abs(e) < 1e-9; }), exps.end());
  std::sort(exps.begin(), exps.end());

  std::vector<double> grid(kGridPoints);
  std::vector<double> values(kGridPoints);
  double scale = 0.0;
  for (int i = 0; i < kGridPoints; ++i) {
    grid[static_cast<std::size_t>(i)] =
        kEpsLo * std::pow(kEpsHi / kEpsLo, static_cast<double>(i) / (kGridPoints - 1));
    values[static_cast<std::size_t>(i)] = heat_trace(a, q, kernel, grid[static_cast<std::size_t>(i)]);
    scale = std::max(scale, std::abs(values[static_cast<std::size_t>(i)]));
  }

  // Columns: constant, log ε, ε^k log ε (resonant k), then powers.
  const std::size_t cols = 1 + log_powers.size() + exps.size();
  if (cols >= static_cast<std::size_t>(kGridPoints)) throw ContinuationError("heat trace: expansion has too many terms");
  Eigen::MatrixXd m(kGridPoints, static_cast<Eigen::Index>(cols));
  Eigen::VectorXd rhs(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i) {
    const double eps = grid[static_cast<std::size_t>(i)];
    Eigen::Index c = 0;
    m(i, c++) = 1.0;
    for (double k : log_powers) m(i, c++) = std::pow(eps, k) * std::log(eps);
    for (double e : exps) m(i, c++) = std::pow(eps, e);
    rhs(i) = values[static_cast<std::size_t>(i)];
  }
  Eigen::VectorXd norms = m.colwise().norm();
  for (Eigen::Index c = 0; c < m.cols(); ++c) m.col(c) /= norms(c);
  const Eigen::VectorXd coeffs = m.colPivHouseholderQr().solve(rhs);
  const double residual = (m * coeffs - rhs).cwiseAbs().maxCoeff();

  HeatFit fit;
  fit.finite_part = coeffs(0) / norms(0);
  fit.log_coefficient = coeffs(1) / norms(1);
  fit.residual = residual;
  fit.scale = scale;
  if (!(residual <= 1e-6 * std::max(scale, 1.0))) {
    throw ContinuationError("heat trace: fit residual above tolerance; expansion model does not match");
  }
  return fit;
}

AnomalyReport gamma_relation_check(const Multiplier& a, const Spectrum& q, double tolerance,
                                   const KernelPolicy& kernel) {
  ZetaOptions options;
  options.kernel = kernel;
  const MeromorphicGerm germ = weighted_trace_germ(a, q, options);
  const HeatFit heat = heat_trace_fp(a, q, kernel);
  const double order = q.order();
  const cplx res = order * germ.residue;
  const cplx lhs = germ.finite_part - heat.finite_part;
  const cplx unsigned_rhs = kEulerGamma / order * res;

  nlohmann::json inputs{{"weight_order", order}, {"weight_kind", to_string(q.kind())}};
  AnomalyReport r = AnomalyReport::compare("gamma_relation", inputs, lhs, double(kHeatZetaGammaSign) * unsigned_rhs, tolerance);
  nlohmann::json matching = nlohmann::json::array();
  for (int sign : {+1, -1}) {
    if (std::abs(lhs - double(sign) * unsigned_rhs) <= tolerance) matching.push_back(sign);
  }
  if (matching.empty()) throw ContinuationError("gamma relation: neither sign of the Euler-constant term matches");
  r.details["fp_zeta"] = complex_json(germ.finite_part);
  r.details["fp_heat"] = heat.finite_part;
  r.details["log_coefficient"] = heat.log_coefficient;
  r.details["residue"] = complex_json(res);
  r.details["resolved_sign"] = kHeatZetaGammaSign;
  r.details["matching_signs"] = matching;
  return r;
}

}  // namespace specanom
