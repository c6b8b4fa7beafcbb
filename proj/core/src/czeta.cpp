#include "specanom/czeta.hpp"

#include <algorithm>
#include <cmath>

#include "specanom/lattice.hpp"
#include "specanom/special.hpp"

namespace specanom {
namespace {

constexpr std::size_t kTailSeries = 10;
constexpr int kPoleCandidates = 48;

double correction_factor(const std::vector<double>& corrections, double x) {
  double corr = 1.0;
  double w = 1.0;
  for (double c : corrections) {
    w /= x;
    corr += c * w;
  }
  return corr;
}

struct RayPlan {
  Ray weight;
  RayMultiplier mult;
  cplx log_c;
  series::Series log_corr;  // log(1 + Σ c_j w^j)
  bool closed_form = false;
  std::vector<cplx> head_alpha;
  std::vector<cplx> head_log_lambda;
  double top_power = -1.0;  // largest multiplier power
};

constexpr double kHeadMagnitudeDigits = 4.0;
constexpr int kMinHeadTerms = 200;

// Head length whose largest partial sum stays near 10^4 at Re z = re_z.
std::size_t head_length(double top_power, double weight_power, double re_z, std::size_t available) {
  const double growth = top_power + 1.0 - weight_power * re_z;
  if (growth <= 0.0) return available;
  const double cap = std::max<double>(kMinHeadTerms, std::pow(10.0, kHeadMagnitudeDigits / growth));
  return std::min(available, static_cast<std::size_t>(cap));
}

struct ExtraPlan {
  cplx alpha;
  cplx log_lambda;
};

struct LatticePlan {
  cplx constant;
  LatticeTail tail;
  std::shared_ptr<const lattice::EpsteinZeta> single;
  bool fill_kernel = false;
  double fill_value = 1.0;
};

bool vanishing_logs(const LatticeMultiplier& m, const LatticeTail& layout) {
  if (m.logs.empty()) return true;
  const bool has_kernel = std::any_of(layout.masses.begin(), layout.masses.end(), [](double v) { return v == 0.0; });
  std::vector<double> probes;
  for (int n = has_kernel ? 1 : 0; n <= 200; ++n) probes.push_back(n);
  probes.push_back(1e6);
  probes.push_back(1e12);
  for (double n : probes) {
    cplx v = m.constant;
    for (const auto& l : m.logs) {
      double log_value = std::log(l.tail.scale);
      for (double mass : l.tail.masses) log_value += l.tail.power * std::log(n + mass);
      v += l.coeff * log_value;
    }
    if (std::abs(v) > 1e-9) return false;
  }
  return true;
}

}  // namespace

struct SpectralSum::Impl {
  ZetaOptions options;
  std::vector<RayPlan> rays;
  std::vector<ExtraPlan> extras;
  std::optional<LatticePlan> lattice;
  bool lattice_zero = false;
  GermMethod method = GermMethod::hurwitz;
  std::vector<cplx> poles;

  cplx eval_ray(const RayPlan& r, cplx z) const {
    const cplx prefactor = static_cast<double>(r.weight.multiplicity) * std::exp(-z * r.log_c);
    const double p = r.weight.power;
    if (r.closed_form) {
      cplx acc = 0.0;
      for (const auto& t : r.mult.terms) {
        const cplx s = p * z - t.power;
        const cplx h = t.log_degree == 0 ? hurwitz_zeta(s, r.weight.offset) : -hurwitz_zeta_ds(s, r.weight.offset);
        acc += t.coeff * t.series[0] * h;
      }
      return prefactor * acc;
    }
    const std::size_t n = head_length(r.top_power, p, z.real(), r.head_alpha.size());
    const double tail_start = r.weight.offset + static_cast<double>(n);
    // Neumaier summation of the head.
    cplx head = 0.0;
    cplx carry = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const cplx term = r.head_alpha[k] * std::exp(-z * r.head_log_lambda[k]);
      const cplx sum = head + term;
      const auto lost = [](double big, double small, double total) {
        return std::abs(big) >= std::abs(small) ? (big - total) + small : (small - total) + big;
      };
      carry += cplx(lost(head.real(), term.real(), sum.real()), lost(head.imag(), term.imag(), sum.imag()));
      head = sum;
    }
    head += carry;
    const series::Series corr = series::exp(series::scale(r.log_corr, -z), kTailSeries);
    cplx tail = 0.0;
    for (const auto& t : r.mult.terms) {
      const series::Series g = series::mul(t.series, corr, kTailSeries);
      cplx acc = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (g[j] == 0.0) continue;
        const cplx s = p * z - t.power + static_cast<double>(j);
        acc += g[j] * euler_maclaurin_tail(s, tail_start, t.log_degree, options.em_order);
      }
      tail += t.coeff * acc;
    }
    return static_cast<double>(r.weight.multiplicity) * head + prefactor * tail;
  }

  cplx eval_lattice(cplx z) const {
    if (lattice_zero) return 0.0;
    const LatticePlan& l = *lattice;
    const cplx w = l.tail.power * z;
    cplx value;
    if (l.single) {
      value = (*l.single)(w);
    } else {
      value = lattice::two_mass_zeta(l.tail.dim, l.tail.masses[0], l.tail.masses[1], w);
    }
    value *= std::exp(-z * std::log(l.tail.scale));
    if (l.fill_kernel) value += std::exp(-z * std::log(l.fill_value));
    return l.constant * value;
  }

  cplx eval(cplx z) const {
    cplx acc = 0.0;
    for (const auto& r : rays) acc += eval_ray(r, z);
    for (const auto& e : extras) acc += e.alpha * std::exp(-z * e.log_lambda);
    if (lattice) acc += eval_lattice(z);
    return acc;
  }
};

SpectralSum::SpectralSum(const Multiplier& a, const Spectrum& q, const ZetaOptions& options)
    : impl_(std::make_unique<Impl>()) {
  Impl& im = *impl_;
  im.options = options;
  if (!a.compatible_with(q)) throw DomainError("weighted trace: multiplier and weight are not simultaneously diagonal");
  if (!(q.order() > 0.0)) throw DomainError("weighted trace: the weight must have positive order");
  q.check_cut(options.cut);

  bool any_em = false;
  for (std::size_t i = 0; i < q.rays().size(); ++i) {
    const Ray& ray = q.rays()[i];
    if (!(ray.power > 0.0)) throw DomainError("weighted trace: weight rays must grow");
    RayPlan plan;
    plan.weight = ray;
    plan.mult = a.rays()[i];
    plan.log_c = options.cut.log(ray.scale);
    plan.log_corr = ray.pure_power() ? series::Series{0.0}
                                     : series::log(series::one_plus(ray.corrections, kTailSeries), kTailSeries);
    for (const auto& t : plan.mult.terms) {
      if (t.log_degree > 1) throw DomainError("weighted trace: log powers above 1 are not supported");
    }
    const bool affine = ray.pure_power() && plan.mult.affine();
    switch (options.backend) {
      case Backend::automatic:
        plan.closed_form = affine;
        break;
      case Backend::hurwitz:
        if (!affine) throw DomainError("weighted trace: hurwitz backend needs affine rays and multipliers");
        plan.closed_form = true;
        break;
      case Backend::euler_maclaurin:
        plan.closed_form = false;
        break;
      case Backend::heat_mellin:
        throw DomainError("weighted trace: heat_mellin backend applies to lattice spectra only");
    }
    if (!plan.closed_form) {
      any_em = true;
      // Head sums of growing terms lose digits to cancellation against the
      // tail; the stored head covers the |z| = 1/4 contour and evaluation
      // shortens it further where Re z is more negative.
      for (const auto& t : plan.mult.terms) plan.top_power = std::max(plan.top_power, t.power);
      const int n = static_cast<int>(
          head_length(plan.top_power, ray.power, -0.25, static_cast<std::size_t>(std::max(options.head_terms, 64))));
      plan.head_alpha.reserve(static_cast<std::size_t>(n));
      plan.head_log_lambda.reserve(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) {
        const double x = ray.offset + k;
        plan.head_alpha.push_back(plan.mult.value(x));
        plan.head_log_lambda.push_back(plan.log_c + ray.power * std::log(x) +
                                       std::log(correction_factor(ray.corrections, x)));
      }
    }
    for (const auto& t : plan.mult.terms) {
      for (int j = 0; j < kPoleCandidates; ++j) im.poles.emplace_back((t.power + 1.0 - j) / ray.power, 0.0);
    }
    im.rays.push_back(std::move(plan));
  }

  for (std::size_t i = 0; i < q.extras().size(); ++i) {
    const Eigenvalue& e = q.extras()[i];
    const cplx alpha = a.extras()[i] * static_cast<double>(e.multiplicity);
    if (std::abs(e.value) < 1e-13) {
      if (options.kernel.mode == KernelPolicy::Mode::exclude) continue;
      if (!(options.kernel.fill_value > 0.0)) throw DomainError("kernel policy: fill value must be positive");
      im.extras.push_back({alpha, std::log(options.kernel.fill_value)});
    } else {
      im.extras.push_back({alpha, options.cut.log(e.value)});
    }
  }

  if (q.lattice()) {
    if (options.backend == Backend::hurwitz) throw DomainError("weighted trace: hurwitz backend cannot sum lattices");
    const LatticeTail& tail = *q.lattice();
    const LatticeMultiplier& m = *a.lattice();
    if (!(tail.scale > 0.0) || !(tail.power > 0.0)) throw DomainError("weighted trace: lattice weight must be positive");
    LatticePlan plan{m.constant, tail, nullptr, false, options.kernel.fill_value};
    if (!m.logs.empty()) {
      if (!vanishing_logs(m, tail)) {
        throw DomainError("weighted trace: lattice multipliers must be constant or a vanishing log combination");
      }
      im.lattice_zero = true;
    }
    if (tail.masses.size() == 1) {
      plan.single = lattice::EpsteinZeta::cached(tail.dim, tail.masses[0]);
      plan.fill_kernel = tail.masses[0] == 0.0 && options.kernel.mode == KernelPolicy::Mode::fill;
      for (int j = 0; j < kPoleCandidates; ++j) im.poles.emplace_back((0.5 * tail.dim - j) / tail.power, 0.0);
    } else {
      for (int j = 0; j < 2 * kPoleCandidates; ++j) im.poles.emplace_back((0.5 * tail.dim - j) / (2.0 * tail.power), 0.0);
    }
    im.lattice = plan;
    im.method = GermMethod::heat_mellin;
  } else {
    im.method = any_em ? GermMethod::euler_maclaurin : GermMethod::hurwitz;
  }
}

SpectralSum::~SpectralSum() = default;
SpectralSum::SpectralSum(SpectralSum&&) noexcept = default;
SpectralSum& SpectralSum::operator=(SpectralSum&&) noexcept = default;

cplx SpectralSum::operator()(cplx z) const { return impl_->eval(z); }

GermMethod SpectralSum::method() const { return impl_->method; }

double SpectralSum::contour_radius(cplx center) const {
  double nearest = 1.0;
  for (const cplx p : impl_->poles) {
    const double d = std::abs(p - center);
    if (d > 1e-9) nearest = std::min(nearest, d);
  }
  const double radius = std::min(0.25, 0.5 * nearest);
  if (radius < 1e-4) throw ContinuationError("contour: poles accumulate near the evaluation point");
  return radius;
}

bool SpectralSum::near_pole(cplx s, double tol) const {
  return std::any_of(impl_->poles.begin(), impl_->poles.end(), [&](cplx p) { return std::abs(p - s) < tol; });
}

MeromorphicGerm SpectralSum::germ_at(cplx center) const {
  MeromorphicGerm g =
      laurent_at([this](cplx z) { return impl_->eval(z); }, center, contour_radius(center), impl_->options.contour_points);
  g.method = impl_->method;
  return g;
}

MeromorphicGerm weighted_trace_germ(const Multiplier& a, const Spectrum& q, const ZetaOptions& options) {
  return SpectralSum(a, q, options).germ_at(0.0);
}

MeromorphicGerm zeta_germ(const Spectrum& spec, cplx s, const ZetaOptions& options) {
  return SpectralSum(Multiplier::identity_on(spec), spec, options).germ_at(s);
}

cplx zeta(const Spectrum& spec, cplx s, const ZetaOptions& options) {
  SpectralSum sum(Multiplier::identity_on(spec), spec, options);
  if (!sum.near_pole(s, 1e-6)) return sum(s);
  const MeromorphicGerm g = sum.germ_at(s);
  const double tol = 1e-8 * std::max(1.0, std::abs(g.finite_part));
  if (std::abs(g.residue) > tol || std::abs(g.double_pole) > tol) {
    throw ContinuationError("zeta: s is a pole of the spectral zeta function");
  }
  return g.finite_part;
}

cplx zeta_derivative_at_zero(const Spectrum& spec, const ZetaOptions& options) {
  const bool closed = !spec.lattice() && options.backend != Backend::euler_maclaurin &&
                      std::all_of(spec.rays().begin(), spec.rays().end(), [](const Ray& r) { return r.pure_power(); });
  if (!closed) {
    const MeromorphicGerm g = zeta_germ(spec, 0.0, options);
    if (std::abs(g.residue) > 1e-8 || std::abs(g.double_pole) > 1e-8) {
      throw ContinuationError("zeta: pole at the origin");
    }
    return *g.next;
  }
  spec.check_cut(options.cut);
  cplx acc = 0.0;
  for (const auto& r : spec.rays()) {
    if (!(r.power > 0.0)) throw DomainError("zeta: rays must grow");
    const cplx log_c = options.cut.log(r.scale);
    acc += static_cast<double>(r.multiplicity) *
           (-log_c * hurwitz_zeta(0.0, r.offset) + r.power * hurwitz_zeta_ds(0.0, r.offset));
  }
  for (const auto& e : spec.extras()) {
    if (std::abs(e.value) < 1e-13) {
      if (options.kernel.mode == KernelPolicy::Mode::fill) {
        acc -= static_cast<double>(e.multiplicity) * std::log(options.kernel.fill_value);
      }
    } else {
      acc -= static_cast<double>(e.multiplicity) * options.cut.log(e.value);
    }
  }
  return acc;
}

}  // namespace specanom
