#include "specanom/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace specanom {
namespace {

constexpr double kZeroTol = 1e-13;

bool is_zero(cplx v) { return std::abs(v) < kZeroTol; }

std::vector<double> poly_product(const std::vector<double>& a, const std::vector<double>& b) {
  // (1 + Σ a_j w^j)(1 + Σ b_j w^j) − 1, coefficients from w^1 upward.
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<double> out(a.size() + b.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t j = 0; j < b.size(); ++j) out[j] += b[j];
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j + 1] += a[i] * b[j];
  }
  while (!out.empty() && out.back() == 0.0) out.pop_back();
  return out;
}

// Deterministic tie-break key for equal moduli: positive reals first, then
// increasing |arg|, upper half-plane before lower.
double order_key(cplx v) {
  const double a = std::arg(v);
  return std::abs(a) * 2.0 + (a < 0.0 ? 1.0 : 0.0);
}

void merge_sorted(std::vector<Eigenvalue>& values) {
  std::sort(values.begin(), values.end(), [](const Eigenvalue& x, const Eigenvalue& y) {
    const double ax = std::abs(x.value);
    const double ay = std::abs(y.value);
    if (std::abs(ax - ay) > 1e-12 * std::max(1.0, ax)) return ax < ay;
    return order_key(x.value) < order_key(y.value);
  });
  std::vector<Eigenvalue> merged;
  for (const auto& e : values) {
    if (!merged.empty() && std::abs(merged.back().value - e.value) <= 1e-12 * std::max(1.0, std::abs(e.value))) {
      merged.back().multiplicity += e.multiplicity;
    } else {
      merged.push_back(e);
    }
  }
  values = std::move(merged);
}

const nlohmann::json& require(const nlohmann::json& d, const char* key) {
  if (!d.contains(key)) throw DomainError(std::string("model descriptor: missing required field '") + key + "'");
  return d.at(key);
}

double require_number(const nlohmann::json& d, const char* key) {
  const auto& v = require(d, key);
  if (!v.is_number()) throw DomainError(std::string("model descriptor: field '") + key + "' must be a number");
  return v.get<double>();
}

void reject_unknown(const nlohmann::json& d, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : d.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw DomainError("model descriptor: unknown key '" + key + "'");
    }
  }
}

}  // namespace

std::string to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::affine:
      return "affine";
    case SpectrumKind::torus:
      return "torus";
    case SpectrumKind::generic:
      return "generic";
  }
  return "unknown";
}

cplx Ray::value(double x) const {
  double corr = 1.0;
  double w = 1.0;
  for (double c : corrections) {
    w /= x;
    corr += c * w;
  }
  return scale * std::pow(x, power) * corr;
}

double LatticeTail::value(std::int64_t n) const {
  double v = scale;
  for (double m : masses) v *= std::pow(static_cast<double>(n) + m, power);
  return v;
}

bool SpectralCut::is_principal() const { return std::abs(angle - kPi) < 1e-15; }

double SpectralCut::arg(cplx value) const {
  double a = std::arg(value);
  while (a > angle) a -= 2.0 * kPi;
  while (a <= angle - 2.0 * kPi) a += 2.0 * kPi;
  return a;
}

cplx SpectralCut::log(cplx value) const { return {std::log(std::abs(value)), arg(value)}; }

void SpectralCut::check(cplx value) const {
  if (is_principal() || is_zero(value)) return;
  if (std::abs(arg(value) - angle) < 1e-12) {
    throw DomainError("spectral cut: eigenvalue lies on the cut ray");
  }
}

Spectrum Spectrum::from_rays(std::vector<Ray> rays, std::vector<Eigenvalue> extras, double order,
                             bool self_adjoint) {
  if (order == 0.0 || !std::isfinite(order)) throw DomainError("spectrum: order must be nonzero");
  Spectrum s;
  s.rays_ = std::move(rays);
  s.extras_ = std::move(extras);
  s.order_ = order;
  s.flags_.self_adjoint = self_adjoint;
  s.kind_ = std::all_of(s.rays_.begin(), s.rays_.end(), [](const Ray& r) { return r.pure_power(); })
                ? SpectrumKind::affine
                : SpectrumKind::generic;
  for (const auto& r : s.rays_) {
    if (r.multiplicity < 1) throw DomainError("spectrum: multiplicities must be >= 1");
    if (!(r.offset > 0.0)) throw DomainError("spectrum: ray offsets must be positive");
  }
  for (const auto& e : s.extras_) {
    if (e.multiplicity < 1) throw DomainError("spectrum: multiplicities must be >= 1");
  }
  s.refresh_flags();
  return s;
}

Spectrum Spectrum::from_lattice(LatticeTail lattice, bool self_adjoint) {
  if (lattice.dim < 1 || lattice.dim > 4) throw DomainError("torus spectrum: dimension must be in {1,2,3,4}");
  if (lattice.masses.empty() || lattice.masses.size() > 2) {
    throw DomainError("torus spectrum: one or two mass terms supported");
  }
  for (double m : lattice.masses) {
    if (m < 0.0) throw DomainError("torus spectrum: masses must be nonnegative");
  }
  Spectrum s;
  s.kind_ = SpectrumKind::torus;
  s.order_ = 2.0 * lattice.power * static_cast<double>(lattice.masses.size());
  if (s.order_ == 0.0) throw DomainError("spectrum: order must be nonzero");
  s.lattice_ = std::move(lattice);
  s.flags_.self_adjoint = self_adjoint;
  s.refresh_flags();
  return s;
}

Spectrum Spectrum::finite(std::vector<Eigenvalue> values, double order, bool self_adjoint) {
  return from_rays({}, std::move(values), order, self_adjoint);
}

void Spectrum::refresh_flags() {
  bool positive = true;
  bool invertible = true;
  bool real = true;
  for (const auto& r : rays_) {
    if (std::abs(r.scale.imag()) > 0.0) real = false;
    if (!(r.scale.real() > 0.0 && r.scale.imag() == 0.0)) positive = false;
  }
  for (const auto& e : extras_) {
    if (is_zero(e.value)) invertible = false;
    if (std::abs(e.value.imag()) > 0.0) real = false;
    if (!(e.value.real() > kZeroTol && e.value.imag() == 0.0)) positive = false;
  }
  if (lattice_) {
    for (double m : lattice_->masses) {
      if (m == 0.0) invertible = false;
    }
    if (!(lattice_->scale > 0.0)) positive = false;
  }
  flags_.positive = positive && invertible;
  flags_.invertible = invertible;
  if (!real) flags_.self_adjoint = false;
}

int Spectrum::kernel_dimension() const {
  int dim = 0;
  for (const auto& e : extras_) {
    if (is_zero(e.value)) dim += e.multiplicity;
  }
  if (lattice_ && std::any_of(lattice_->masses.begin(), lattice_->masses.end(), [](double m) { return m == 0.0; })) {
    dim += 1;
  }
  return dim;
}

bool Spectrum::is_real() const {
  for (const auto& r : rays_) {
    if (r.scale.imag() != 0.0) return false;
  }
  for (const auto& e : extras_) {
    if (std::abs(e.value.imag()) > kZeroTol) return false;
  }
  return true;
}

std::vector<Eigenvalue> Spectrum::eigenvalues_up_to(double bound) const {
  std::vector<Eigenvalue> out;
  for (const auto& e : extras_) {
    if (std::abs(e.value) <= bound) out.push_back(e);
  }
  for (const auto& r : rays_) {
    if (r.power <= 0.0) throw DomainError("enumeration: rays with nonpositive power accumulate at zero");
    for (double x = r.offset;; x += 1.0) {
      const cplx v = r.value(x);
      if (std::abs(v) > bound && std::abs(r.scale) * std::pow(x, r.power) > 2.0 * bound) break;
      if (std::abs(v) <= bound) out.push_back({v, r.multiplicity});
    }
  }
  if (lattice_) {
    if (lattice_->power <= 0.0) throw DomainError("enumeration: lattice with nonpositive power");
    std::int64_t max_n = 0;
    while (std::abs(lattice_->value(max_n + 1)) <= bound) ++max_n;
    const auto counts = lattice_counts(lattice_->dim, max_n);
    for (std::int64_t n = 0; n <= max_n; ++n) {
      if (counts[static_cast<std::size_t>(n)] == 0) continue;
      const double v = lattice_->value(n);
      if (std::abs(v) <= bound) out.push_back({v, static_cast<int>(counts[static_cast<std::size_t>(n)])});
    }
  }
  merge_sorted(out);
  return out;
}

std::vector<Eigenvalue> Spectrum::prefix(std::size_t count) const {
  double bound = 1.0;
  for (const auto& e : extras_) bound = std::max(bound, std::abs(e.value));
  for (int iter = 0; iter < 200; ++iter) {
    auto values = eigenvalues_up_to(bound);
    if (values.size() >= count + 1 || (rays_.empty() && !lattice_)) {
      if (values.size() > count) values.resize(count);
      return values;
    }
    bound *= 2.0;
  }
  throw DomainError("enumeration: could not collect the requested prefix");
}

bool Spectrum::same_enumeration(const Spectrum& other) const {
  if (lattice_.has_value() != other.lattice_.has_value()) return false;
  if (lattice_) return lattice_->dim == other.lattice_->dim && extras_.size() == other.extras_.size();
  if (rays_.size() != other.rays_.size() || extras_.size() != other.extras_.size()) return false;
  for (std::size_t i = 0; i < rays_.size(); ++i) {
    const Ray& a = rays_[i];
    const Ray& b = other.rays_[i];
    if (std::abs(a.offset - b.offset) > 1e-12 || a.multiplicity != b.multiplicity || a.side != b.side) return false;
  }
  for (std::size_t i = 0; i < extras_.size(); ++i) {
    if (extras_[i].multiplicity != other.extras_[i].multiplicity) return false;
  }
  return true;
}

void Spectrum::check_cut(const SpectralCut& cut) const {
  for (const auto& r : rays_) cut.check(r.scale);
  for (const auto& e : extras_) cut.check(e.value);
  if (lattice_) cut.check(lattice_->scale);
}

Spectrum circle_dirac(double a) {
  const double floor_a = std::floor(a);
  double frac = a - floor_a;
  std::vector<Eigenvalue> extras;
  Ray plus{1.0, frac, 1.0, 1, {}, RaySide::plus, a};
  Ray minus{-1.0, 1.0 - frac, 1.0, 1, {}, RaySide::minus, -a};
  if (frac < kZeroTol || 1.0 - frac < kZeroTol) {
    plus.offset = 1.0;
    minus.offset = 1.0;
    extras.push_back({0.0, 1});
  }
  return Spectrum::from_rays({plus, minus}, std::move(extras), 1.0, true);
}

Spectrum circle_modulus(double scale) { return asymmetric_modulus(scale, scale); }

Spectrum asymmetric_modulus(double plus, double minus) {
  if (!(plus > 0.0) || !(minus > 0.0)) throw DomainError("asymmetric_modulus: ray scales must be positive");
  Ray p{plus, 1.0, 1.0, 1, {}, RaySide::plus, 0.0};
  Ray m{minus, 1.0, 1.0, 1, {}, RaySide::minus, 0.0};
  return Spectrum::from_rays({p, m}, {}, 1.0, true);
}

Spectrum torus_laplacian_shifted(int d, double m2) {
  if (d < 1 || d > 4) throw DomainError("torus_laplacian_shifted: d must be in {1,2,3,4}");
  if (m2 < 0.0) throw DomainError("torus_laplacian_shifted: m2 must be nonnegative");
  return Spectrum::from_lattice(LatticeTail{d, {m2}, 1.0, 1.0}, true);
}

Spectrum generic_spectrum(double c, double p, std::vector<double> coeffs) {
  if (c == 0.0 || !(p > 0.0)) throw DomainError("generic_spectrum: need c != 0 and p > 0");
  Ray r{c, 1.0, p, 1, std::move(coeffs), RaySide::none, 0.0};
  for (double k = 1.0; k <= 64.0; k += 1.0) {
    if (!(std::abs(r.value(k)) > 0.0) || (r.value(k) / c).real() <= 0.0) {
      throw DomainError("generic_spectrum: correction factor must stay positive");
    }
  }
  return Spectrum::from_rays({r}, {}, p, true);
}

Spectrum transform(const Spectrum& spec, const SpectrumOp& op) {
  std::vector<Ray> rays = spec.rays();
  std::vector<Eigenvalue> extras = spec.extras();
  std::optional<LatticeTail> lattice = spec.lattice();
  double order = spec.order();
  bool self_adjoint = spec.flags().self_adjoint;

  switch (op.kind) {
    case SpectrumOp::Kind::abs:
      for (auto& r : rays) r.scale = std::abs(r.scale);
      for (auto& e : extras) e.value = std::abs(e.value);
      if (lattice) lattice->scale = std::abs(lattice->scale);
      self_adjoint = true;
      break;
    case SpectrumOp::Kind::square:
      for (auto& r : rays) {
        r.scale *= r.scale;
        r.power *= 2.0;
        r.corrections = poly_product(r.corrections, r.corrections);
      }
      for (auto& e : extras) e.value *= e.value;
      if (lattice) lattice->power *= 2.0;
      order *= 2.0;
      break;
    case SpectrumOp::Kind::scale:
      if (!(op.value > 0.0)) throw DomainError("transform: scale factor must be positive");
      for (auto& r : rays) r.scale *= op.value;
      for (auto& e : extras) e.value *= op.value;
      if (lattice) lattice->scale *= op.value;
      break;
    case SpectrumOp::Kind::shift: {
      if (!spec.flags().self_adjoint) throw DomainError("transform: shift needs a real spectrum");
      const double alpha = op.value;
      std::vector<Ray> shifted;
      for (auto r : rays) {
        if (!r.pure_power() || r.power != 1.0) throw DomainError("transform: shift needs affine rays");
        const double c = r.scale.real();
        double a = r.offset - alpha / c;
        r.mode_shift -= alpha / c;
        while (a <= kZeroTol) {
          const double v = std::abs(a) < kZeroTol ? 0.0 : c * a;
          extras.push_back({v, r.multiplicity});
          a += 1.0;
        }
        r.offset = a;
        shifted.push_back(r);
      }
      rays = std::move(shifted);
      for (auto& e : extras) {
        if (&e - extras.data() < static_cast<std::ptrdiff_t>(spec.extras().size())) {
          e.value -= alpha;
          if (is_zero(e.value)) e.value = 0.0;
        }
      }
      if (lattice) {
        if (lattice->masses.size() != 1 || lattice->power != 1.0) {
          throw DomainError("transform: shift of a lattice needs a single mass and power 1");
        }
        const double m = lattice->masses[0] - alpha / lattice->scale;
        if (m < -kZeroTol) throw DomainError("transform: shifted lattice would have a negative mass");
        lattice->masses[0] = std::max(m, 0.0);
      }
      break;
    }
    case SpectrumOp::Kind::power: {
      const double s = op.value;
      if (s == 0.0) throw DomainError("transform: power 0 has no order");
      if (!spec.flags().positive) throw DomainError("transform: power of a non-positive spectrum without a cut");
      for (auto& r : rays) {
        if (!r.pure_power()) throw DomainError("transform: power of a ray with corrections is not supported");
        r.scale = std::pow(r.scale.real(), s);
        r.power *= s;
      }
      for (auto& e : extras) e.value = std::pow(e.value.real(), s);
      if (lattice) {
        lattice->scale = std::pow(lattice->scale, s);
        lattice->power *= s;
      }
      order *= s;
      break;
    }
    case SpectrumOp::Kind::invert_on_complement:
      for (auto& r : rays) {
        if (!r.pure_power()) throw DomainError("transform: inverse of a ray with corrections is not supported");
        r.scale = 1.0 / r.scale;
        r.power = -r.power;
      }
      for (auto& e : extras) {
        if (!is_zero(e.value)) e.value = 1.0 / e.value;
      }
      if (lattice) {
        if (spec.kernel_dimension() > 0) throw DomainError("transform: lattice inverse needs an invertible lattice");
        lattice->scale = 1.0 / lattice->scale;
        lattice->power = -lattice->power;
      }
      order = -order;
      break;
  }
  if (lattice) return Spectrum::from_lattice(*lattice, self_adjoint);
  return Spectrum::from_rays(std::move(rays), std::move(extras), order, self_adjoint);
}

Spectrum skew_double(const Spectrum& d) {
  if (!d.flags().self_adjoint) throw DomainError("skew_double: D must be self-adjoint");
  if (d.lattice()) throw DomainError("skew_double: lattice spectra are not supported");
  std::vector<Ray> rays;
  for (const auto& r : d.rays()) {
    Ray up = r;
    up.scale = cplx(0.0, 1.0) * r.scale;
    up.side = RaySide::none;
    Ray down = r;
    down.scale = cplx(0.0, -1.0) * r.scale;
    down.side = RaySide::none;
    rays.push_back(up);
    rays.push_back(down);
  }
  std::vector<Eigenvalue> extras;
  for (const auto& e : d.extras()) {
    extras.push_back({cplx(0.0, 1.0) * e.value, e.multiplicity});
    extras.push_back({cplx(0.0, -1.0) * e.value, e.multiplicity});
  }
  return Spectrum::from_rays(std::move(rays), std::move(extras), d.order(), false);
}

Spectrum product(const Spectrum& a, const Spectrum& b) {
  if (!a.same_enumeration(b)) throw DomainError("product: spectra do not share an enumeration");
  if (a.lattice()) {
    const LatticeTail& la = *a.lattice();
    const LatticeTail& lb = *b.lattice();
    if (la.masses.size() != 1 || lb.masses.size() != 1 || la.power != lb.power) {
      throw DomainError("product: lattice factors must be single-mass with equal powers");
    }
    LatticeTail out = la;
    out.scale = la.scale * lb.scale;
    if (la.masses[0] == lb.masses[0]) {
      out.power = la.power + lb.power;
    } else {
      out.masses = {la.masses[0], lb.masses[0]};
    }
    return Spectrum::from_lattice(out, a.flags().self_adjoint && b.flags().self_adjoint);
  }
  std::vector<Ray> rays;
  for (std::size_t i = 0; i < a.rays().size(); ++i) {
    Ray r = a.rays()[i];
    const Ray& s = b.rays()[i];
    if (std::abs(r.mode_shift - s.mode_shift) > 1e-12) {
      throw DomainError("product: rays are not aligned on the same modes");
    }
    r.scale *= s.scale;
    r.power += s.power;
    r.corrections = poly_product(r.corrections, s.corrections);
    rays.push_back(std::move(r));
  }
  std::vector<Eigenvalue> extras;
  for (std::size_t i = 0; i < a.extras().size(); ++i) {
    extras.push_back({a.extras()[i].value * b.extras()[i].value, a.extras()[i].multiplicity});
  }
  return Spectrum::from_rays(std::move(rays), std::move(extras), a.order() + b.order(),
                             a.flags().self_adjoint && b.flags().self_adjoint);
}

GradedSpectrum graded(Spectrum plus, Spectrum minus) {
  if (std::abs(plus.order() - minus.order()) > 1e-12) throw DomainError("graded: parts must share the same order");
  return {std::move(plus), std::move(minus)};
}

Spectrum empty_spectrum(double order) { return Spectrum::finite({}, order, true); }

std::int64_t eig_count_in(const Spectrum& spec, double lo, double hi) {
  if (lo > hi) throw DomainError("eig_count_in: need lo <= hi");
  if (!spec.is_real()) throw DomainError("eig_count_in: spectrum is not real");
  const double bound = std::max(std::abs(lo), std::abs(hi)) + 1e-9;
  std::int64_t count = 0;
  for (const auto& e : spec.eigenvalues_up_to(bound)) {
    const double v = e.value.real();
    if (v >= lo - 1e-12 && v <= hi + 1e-12) count += e.multiplicity;
  }
  return count;
}

std::vector<std::int64_t> lattice_counts(int dim, std::int64_t max_n) {
  const auto size = static_cast<std::size_t>(max_n + 1);
  std::vector<std::int64_t> one(size, 0);
  for (std::int64_t k = 0; k * k <= max_n; ++k) one[static_cast<std::size_t>(k * k)] += (k == 0 ? 1 : 2);
  std::vector<std::int64_t> acc = one;
  for (int d = 1; d < dim; ++d) {
    std::vector<std::int64_t> next(size, 0);
    for (std::int64_t k = 0; k * k <= max_n; ++k) {
      const auto sq = static_cast<std::size_t>(k * k);
      const std::int64_t w = (k == 0 ? 1 : 2);
      for (std::size_t n = 0; n + sq < size; ++n) next[n + sq] += w * acc[n];
    }
    acc = std::move(next);
  }
  return acc;
}

Spectrum spectrum_from_json(const nlohmann::json& d, const ModelResolver& resolve) {
  if (!d.is_object()) throw DomainError("model descriptor must be an object");
  const std::string kind = require(d, "kind").get<std::string>();
  auto sub = [&](const char* key) -> Spectrum {
    const auto& v = require(d, key);
    if (v.is_string()) {
      if (!resolve) throw DomainError("model descriptor: cannot resolve reference '" + v.get<std::string>() + "'");
      return resolve(v.get<std::string>());
    }
    return spectrum_from_json(v, resolve);
  };

  if (kind == "circle_dirac") {
    reject_unknown(d, {"kind", "a"});
    return circle_dirac(require_number(d, "a"));
  }
  if (kind == "circle_modulus") {
    reject_unknown(d, {"kind", "scale"});
    return circle_modulus(d.contains("scale") ? require_number(d, "scale") : 1.0);
  }
  if (kind == "asymmetric_modulus") {
    reject_unknown(d, {"kind", "plus", "minus"});
    return asymmetric_modulus(require_number(d, "plus"), require_number(d, "minus"));
  }
  if (kind == "torus") {
    reject_unknown(d, {"kind", "d", "m2"});
    const double dim = require_number(d, "d");
    if (dim != std::floor(dim)) throw DomainError("model descriptor: 'd' must be an integer");
    return torus_laplacian_shifted(static_cast<int>(dim), require_number(d, "m2"));
  }
  if (kind == "generic") {
    reject_unknown(d, {"kind", "c", "p", "corrections"});
    std::vector<double> corr;
    if (d.contains("corrections")) corr = d.at("corrections").get<std::vector<double>>();
    return generic_spectrum(require_number(d, "c"), require_number(d, "p"), std::move(corr));
  }
  if (kind == "finite") {
    reject_unknown(d, {"kind", "values", "order", "self_adjoint"});
    std::vector<Eigenvalue> values;
    for (const auto& v : require(d, "values")) {
      if (v.is_number()) {
        values.push_back({v.get<double>(), 1});
      } else {
        values.push_back({cplx(v.value("re", 0.0), v.value("im", 0.0)), v.value("mult", 1)});
      }
    }
    return Spectrum::finite(std::move(values), require_number(d, "order"), d.value("self_adjoint", true));
  }
  if (kind == "transform") {
    reject_unknown(d, {"kind", "base", "op", "value"});
    const Spectrum base = sub("base");
    const std::string op = require(d, "op").get<std::string>();
    if (op == "abs") return transform(base, SpectrumOp::abs());
    if (op == "square") return transform(base, SpectrumOp::square());
    if (op == "invert") return transform(base, SpectrumOp::invert_on_complement());
    const double value = require_number(d, "value");
    if (op == "scale") return transform(base, SpectrumOp::scale(value));
    if (op == "shift") return transform(base, SpectrumOp::shift(value));
    if (op == "power") return transform(base, SpectrumOp::power(value));
    throw DomainError("model descriptor: unknown transform op '" + op + "'");
  }
  if (kind == "skew_double") {
    reject_unknown(d, {"kind", "base"});
    return skew_double(sub("base"));
  }
  if (kind == "product") {
    reject_unknown(d, {"kind", "left", "right"});
    return product(sub("left"), sub("right"));
  }
  throw DomainError("model descriptor: unknown model kind '" + kind + "' (key 'kind')");
}

}  // namespace specanom
