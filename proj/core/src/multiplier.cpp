#include "specanom/multiplier.hpp"

#include <cmath>
#include <limits>

namespace specanom {
namespace {

constexpr std::size_t kLen = series::kDefaultLength;

bool is_zero(cplx v) { return std::abs(v) < 1e-13; }

double correction_factor(const std::vector<double>& corrections, double x) {
  double corr = 1.0;
  double w = 1.0;
  for (double c : corrections) {
    w /= x;
    corr += c * w;
  }
  return corr;
}

}  // namespace

cplx MultiplierTerm::value(double x) const {
  cplx v = coeff * std::pow(x, power) * series::eval(series, 1.0 / x);
  for (int l = 0; l < log_degree; ++l) v *= std::log(x);
  return v;
}

cplx RayMultiplier::value(double x) const {
  if (exact) return exact(x);
  cplx v = 0.0;
  for (const auto& t : terms) v += t.value(x);
  return v;
}

bool RayMultiplier::affine() const {
  if (exact) return false;
  for (const auto& t : terms) {
    for (std::size_t j = 1; j < t.series.size(); ++j) {
      if (t.series[j] != 0.0) return false;
    }
  }
  return true;
}

cplx LatticeMultiplier::value(std::int64_t n) const {
  cplx v = constant;
  for (const auto& l : logs) v += l.coeff * std::log(l.tail.value(n));
  return v;
}

void Multiplier::take_layout(const Spectrum& layout) {
  geometry_.clear();
  for (const auto& r : layout.rays()) geometry_.push_back({r.offset, r.multiplicity, r.side, r.mode_shift});
  extras_count_ = layout.extras().size();
  if (layout.lattice()) lattice_dim_ = layout.lattice()->dim;
}

Multiplier Multiplier::from_parts(const Spectrum& layout, std::vector<RayMultiplier> rays, std::vector<cplx> extras,
                                  std::optional<LatticeMultiplier> lattice) {
  if (rays.size() != layout.rays().size() || extras.size() != layout.extras().size() ||
      lattice.has_value() != layout.lattice().has_value()) {
    throw DomainError("multiplier: parts do not match the layout spectrum");
  }
  Multiplier m;
  m.take_layout(layout);
  m.rays_ = std::move(rays);
  m.extras_ = std::move(extras);
  m.lattice_ = std::move(lattice);
  return m;
}

Multiplier Multiplier::constant_on(const Spectrum& layout, cplx c) {
  std::vector<RayMultiplier> rays(layout.rays().size());
  for (auto& r : rays) r.terms.push_back({c, 0.0, 0, {1.0}});
  std::vector<cplx> extras(layout.extras().size(), c);
  std::optional<LatticeMultiplier> lattice;
  if (layout.lattice()) lattice = LatticeMultiplier{c, {}};
  return from_parts(layout, std::move(rays), std::move(extras), std::move(lattice));
}

Multiplier Multiplier::from_spectrum(const Spectrum& spec) {
  if (spec.lattice()) throw DomainError("multiplier: lattice eigenvalues are only available through log_of");
  std::vector<RayMultiplier> rays;
  for (const auto& r : spec.rays()) {
    RayMultiplier rm;
    rm.terms.push_back({r.scale, r.power, 0, series::one_plus(r.corrections, kLen)});
    if (r.corrections.size() + 1 > kLen) rm.exact = [r](double x) { return r.value(x); };
    rays.push_back(std::move(rm));
  }
  std::vector<cplx> extras;
  for (const auto& e : spec.extras()) extras.push_back(e.value);
  return from_parts(spec, std::move(rays), std::move(extras));
}

Multiplier Multiplier::power_of(const Spectrum& spec, double r, const SpectralCut& cut) {
  if (r == 0.0) return identity_on(spec);
  if (spec.lattice()) throw DomainError("multiplier: powers of lattice spectra are not supported");
  std::vector<RayMultiplier> rays;
  for (const auto& ray : spec.rays()) {
    cut.check(ray.scale);
    const cplx log_c = cut.log(ray.scale);
    RayMultiplier rm;
    rm.terms.push_back({std::exp(r * log_c), ray.power * r, 0, series::pow(series::one_plus(ray.corrections, kLen), r, kLen)});
    if (!ray.pure_power()) {
      rm.exact = [ray, log_c, r](double x) {
        return std::exp(r * (log_c + ray.power * std::log(x) + std::log(correction_factor(ray.corrections, x))));
      };
    }
    rays.push_back(std::move(rm));
  }
  std::vector<cplx> extras;
  for (const auto& e : spec.extras()) extras.push_back(is_zero(e.value) ? cplx(0.0) : std::exp(r * cut.log(e.value)));
  return from_parts(spec, std::move(rays), std::move(extras));
}

Multiplier Multiplier::log_of(const Spectrum& spec, const SpectralCut& cut) {
  std::vector<RayMultiplier> rays;
  for (const auto& ray : spec.rays()) {
    cut.check(ray.scale);
    const cplx log_c = cut.log(ray.scale);
    RayMultiplier rm;
    rm.terms.push_back({log_c, 0.0, 0, {1.0}});
    rm.terms.push_back({ray.power, 0.0, 1, {1.0}});
    if (!ray.pure_power()) {
      rm.terms.push_back({1.0, 0.0, 0, series::log(series::one_plus(ray.corrections, kLen), kLen)});
      rm.exact = [ray, log_c](double x) {
        return log_c + ray.power * std::log(x) + std::log(correction_factor(ray.corrections, x));
      };
    }
    rays.push_back(std::move(rm));
  }
  std::vector<cplx> extras;
  for (const auto& e : spec.extras()) extras.push_back(is_zero(e.value) ? cplx(0.0) : cut.log(e.value));
  std::optional<LatticeMultiplier> lattice;
  if (spec.lattice()) lattice = LatticeMultiplier{0.0, {{1.0, *spec.lattice()}}};
  return from_parts(spec, std::move(rays), std::move(extras), std::move(lattice));
}

Multiplier Multiplier::sign_of(const Spectrum& spec) {
  auto sgn = [](cplx v) { return v.real() < 0.0 ? -1.0 : 1.0; };
  std::vector<RayMultiplier> rays;
  for (const auto& ray : spec.rays()) {
    if (ray.scale.real() == 0.0) throw DomainError("multiplier: sign of a purely imaginary ray");
    RayMultiplier rm;
    rm.terms.push_back({sgn(ray.scale), 0.0, 0, {1.0}});
    rays.push_back(std::move(rm));
  }
  std::vector<cplx> extras;
  for (const auto& e : spec.extras()) extras.push_back(is_zero(e.value) ? 1.0 : sgn(e.value));
  std::optional<LatticeMultiplier> lattice;
  if (spec.lattice()) lattice = LatticeMultiplier{sgn(spec.lattice()->scale), {}};
  return from_parts(spec, std::move(rays), std::move(extras), std::move(lattice));
}

double Multiplier::order() const {
  double order = -std::numeric_limits<double>::infinity();
  for (const auto& r : rays_) {
    for (const auto& t : r.terms) {
      if (t.coeff != 0.0) order = std::max(order, t.power);
    }
  }
  if (lattice_ && (lattice_->constant != 0.0 || !lattice_->logs.empty())) order = std::max(order, 0.0);
  return order;
}

bool Multiplier::compatible_with(const Spectrum& weight) const {
  if (weight.rays().size() != geometry_.size() || weight.extras().size() != extras_count_) return false;
  if (weight.lattice().has_value() != lattice_dim_.has_value()) return false;
  if (lattice_dim_ && weight.lattice()->dim != *lattice_dim_) return false;
  for (std::size_t i = 0; i < geometry_.size(); ++i) {
    const Ray& r = weight.rays()[i];
    if (std::abs(r.offset - geometry_[i].offset) > 1e-12 || r.multiplicity != geometry_[i].multiplicity) return false;
  }
  return true;
}

double Multiplier::tail_consistency() const {
  double worst = 0.0;
  for (const auto& r : rays_) {
    if (!r.exact) continue;
    for (double x : {1e3, 1e4}) {
      cplx asym = 0.0;
      for (const auto& t : r.terms) asym += t.value(x);
      const cplx ex = r.exact(x);
      worst = std::max(worst, std::abs(asym - ex) / std::max(1.0, std::abs(ex)));
    }
  }
  return worst;
}

void Multiplier::check_layout(const Multiplier& other) const {
  bool same = geometry_.size() == other.geometry_.size() && extras_count_ == other.extras_count_ &&
              lattice_dim_ == other.lattice_dim_;
  for (std::size_t i = 0; same && i < geometry_.size(); ++i) {
    same = std::abs(geometry_[i].offset - other.geometry_[i].offset) < 1e-12 &&
           geometry_[i].multiplicity == other.geometry_[i].multiplicity;
  }
  if (!same) throw DomainError("multiplier: operands live on different enumerations");
}

Multiplier& Multiplier::operator+=(const Multiplier& other) {
  check_layout(other);
  for (std::size_t i = 0; i < rays_.size(); ++i) {
    RayMultiplier& a = rays_[i];
    const RayMultiplier& b = other.rays_[i];
    if (a.exact || b.exact) {
      a.exact = [ca = a, cb = b](double x) { return ca.value(x) + cb.value(x); };
    }
    a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
  }
  for (std::size_t i = 0; i < extras_.size(); ++i) extras_[i] += other.extras_[i];
  if (lattice_) {
    lattice_->constant += other.lattice_->constant;
    lattice_->logs.insert(lattice_->logs.end(), other.lattice_->logs.begin(), other.lattice_->logs.end());
  }
  return *this;
}

Multiplier& Multiplier::operator*=(cplx c) {
  for (auto& r : rays_) {
    for (auto& t : r.terms) t.coeff *= c;
    if (r.exact) r.exact = [f = r.exact, c](double x) { return c * f(x); };
  }
  for (auto& e : extras_) e *= c;
  if (lattice_) {
    lattice_->constant *= c;
    for (auto& l : lattice_->logs) l.coeff *= c;
  }
  return *this;
}

Multiplier Multiplier::times(const Multiplier& other) const {
  check_layout(other);
  Multiplier out = *this;
  for (std::size_t i = 0; i < rays_.size(); ++i) {
    const RayMultiplier& a = rays_[i];
    const RayMultiplier& b = other.rays_[i];
    RayMultiplier prod;
    for (const auto& ta : a.terms) {
      for (const auto& tb : b.terms) {
        prod.terms.push_back({ta.coeff * tb.coeff, ta.power + tb.power, ta.log_degree + tb.log_degree,
                              series::mul(ta.series, tb.series, kLen)});
      }
    }
    if (a.exact || b.exact) prod.exact = [a, b](double x) { return a.value(x) * b.value(x); };
    out.rays_[i] = std::move(prod);
  }
  for (std::size_t i = 0; i < extras_.size(); ++i) out.extras_[i] = extras_[i] * other.extras_[i];
  if (lattice_) {
    const LatticeMultiplier& a = *lattice_;
    const LatticeMultiplier& b = *other.lattice_;
    if (!a.logs.empty() && !b.logs.empty()) throw DomainError("multiplier: product of two lattice logarithms");
    LatticeMultiplier p;
    const LatticeMultiplier& scalar = a.logs.empty() ? a : b;
    const LatticeMultiplier& rest = a.logs.empty() ? b : a;
    p.constant = scalar.constant * rest.constant;
    for (auto l : rest.logs) {
      l.coeff *= scalar.constant;
      p.logs.push_back(l);
    }
    out.lattice_ = p;
  }
  return out;
}

}  // namespace specanom
