#include "specanom/invariants.hpp"

#include <cmath>

#include "specanom/special.hpp"

namespace specanom {
namespace {

constexpr std::size_t kLen = series::kDefaultLength;

nlohmann::json describe(const Spectrum& s) {
  nlohmann::json j{{"kind", to_string(s.kind())}, {"order", s.order()}};
  if (s.lattice()) j["dim"] = s.lattice()->dim;
  return j;
}

bool is_circle(const Spectrum& s) {
  if (s.lattice() || s.rays().empty()) return false;
  bool plus = false;
  bool minus = false;
  for (const auto& r : s.rays()) {
    plus = plus || r.side == RaySide::plus;
    minus = minus || r.side == RaySide::minus;
  }
  return plus && minus;
}

bool is_torus(const Spectrum& s) { return s.lattice().has_value() && s.rays().empty() && s.extras().empty(); }

// Classical part of log A on the circle, with ord A.
std::pair<NumericSymbol, double> circle_log(const Spectrum& s) {
  const NumericSymbol sym = multiplier_to_symbol(Multiplier::from_spectrum(s));
  const auto log_s = log_symbol(sym);
  return {log_s.classical(), to_double(log_s.log_weight)};
}

// log λ(|ξ|) = weight·log|ξ| + Σ_k c_k u^k on the torus, u = |ξ|^{−2}.
struct RadialLog {
  int dim = 0;
  double weight = 0.0;
  series::Series classical;
};

RadialLog radial_log(const Spectrum& s) {
  const LatticeTail& l = *s.lattice();
  RadialLog r{l.dim, 2.0 * l.power * static_cast<double>(l.masses.size()), series::Series(kLen, 0.0)};
  r.classical[0] = std::log(l.scale);
  for (double m : l.masses) {
    double mk = 1.0;
    for (std::size_t k = 1; k < kLen; ++k) {
      mk *= -m;
      r.classical[k] -= l.power * mk / static_cast<double>(k);
    }
  }
  return r;
}

void require_classical(double log_weight) {
  if (std::abs(log_weight) > 1e-10) throw SymbolError("log combination keeps a log|ξ| term; it is not classical");
}

double sphere_volume(int d) { return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d); }

// −ζ′(0) on the cut.
cplx log_det(const Spectrum& s, const ZetaOptions& options = {}) { return -zeta_derivative_at_zero(s, options); }

double real_part_checked(cplx v, const char* what) {
  if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v.real()))) {
    throw ContinuationError(std::string(what) + " has an imaginary part on a self-adjoint spectrum");
  }
  return v.real();
}

bool has_negative(const Spectrum& s) {
  for (const auto& r : s.rays()) {
    if (r.scale.real() < 0.0) return true;
  }
  for (const auto& e : s.extras()) {
    if (e.value.real() < -1e-13) return true;
  }
  return s.lattice() && s.lattice()->scale < 0.0;
}

// Σ (1/2a)res(L_A²) + (1/2b)res(L_B²) through the residue path.
cplx eq10_residue_terms(const Spectrum& a, const Spectrum& b, const Spectrum& ab) {
  const double oa = a.order();
  const double ob = b.order();
  const double ratio_a = oa / (oa + ob);
  const double ratio_b = ob / (oa + ob);
  const std::vector<std::pair<double, Spectrum>> la{{1.0, a}, {-ratio_a, ab}};
  const std::vector<std::pair<double, Spectrum>> lb{{1.0, b}, {-ratio_b, ab}};
  return log_product_residue(la, la) / (2.0 * oa) + log_product_residue(lb, lb) / (2.0 * ob);
}

// Σ log λ over modes of A that the layout's rays start after; they sit in the
// layout's kernel and enter tr^Q through the fill-in.
cplx skipped_log_sum(const Spectrum& a, const Spectrum& layout, const SpectralCut& cut) {
  if (a.same_enumeration(layout)) return 0.0;
  cplx sum = 0.0;
  for (const Ray& l : layout.rays()) {
    for (const Ray& r : a.rays()) {
      if (r.side != l.side) continue;
      const double first = l.offset + r.mode_shift - l.mode_shift - r.offset;
      const auto skipped = static_cast<int>(std::llround(first));
      for (int k = 0; k < skipped; ++k) sum += static_cast<double>(r.multiplicity) * cut.log(r.value(r.offset + k));
    }
  }
  return sum;
}

// tr^Q(log A) with A's modes in ker Q taken by the kernel policy.
cplx weighted_log_trace(const Spectrum& a, const Spectrum& q, const ZetaOptions& options = {}) {
  cplx t = weighted_trace_germ(log_multiplier_on(a, q, options.cut), q, options).finite_part;
  if (options.kernel.mode == KernelPolicy::Mode::fill) t += skipped_log_sum(a, q, options.cut);
  return t;
}

ZetaOptions options_for(const Spectrum& s) {
  ZetaOptions o;
  if (s.lattice() && s.kernel_dimension() > 0) o.kernel = KernelPolicy::exclude();
  return o;
}

}  // namespace

DetValue det_zeta(const Spectrum& spec, const ZetaOptions& options) {
  if (spec.flags().self_adjoint && spec.is_real() && has_negative(spec)) {
    const SelfAdjointDet sa = phase_and_det_selfadjoint(spec, kTolerance1D, options);
    DetValue d = sa.det;
    d.phase = wrap_phase(sa.realized_sign * sa.det.phase);
    d.method = "eta_phase";
    return d;
  }
  const SpectralSum sum(Multiplier::identity_on(spec), spec, options);
  return DetValue::from_log(log_det(spec, options), to_string(sum.method()), 0.0);
}

double eta(const Spectrum& spec, const ZetaOptions& options) {
  if (!spec.is_real()) throw DomainError("eta: spectrum must be real");
  const Spectrum abs_spec = transform(spec, SpectrumOp::abs());
  const MeromorphicGerm g = weighted_trace_germ(Multiplier::sign_of(spec), abs_spec, options);
  if (std::abs(g.residue) > 1e-9) throw ContinuationError("eta: Σ sgn(λ)|λ|^{-z} has a pole at z = 0");
  return real_part_checked(g.finite_part, "eta");
}

SelfAdjointDet phase_and_det_selfadjoint(const Spectrum& spec, double tolerance, const ZetaOptions& options) {
  if (!spec.flags().self_adjoint || !spec.is_real()) throw DomainError("phase: spectrum must be self-adjoint");
  const Spectrum abs_spec = transform(spec, SpectrumOp::abs());
  SelfAdjointDet out;
  out.eta = eta(spec, options);
  out.zeta_abs_at_zero = real_part_checked(zeta(abs_spec, 0.0, options), "zeta(0)");
  const double log_mod = real_part_checked(log_det(abs_spec, options), "log det|A|");
  const double phi = 0.5 * kPi * (out.eta - out.zeta_abs_at_zero);
  out.det = {log_mod, phi, "eta_phase", 0.0};

  const cplx direct = log_det(spec, options);
  out.direct = DetValue::from_log(direct, "direct", 0.0);
  const double dmod = std::abs(direct.real() - log_mod);
  for (int s : {+1, -1}) {
    if (std::abs(wrap_phase(direct.imag() - s * phi)) <= 1e-7 && dmod <= 1e-7) {
      out.realized_sign = s;
      break;
    }
  }
  if (out.realized_sign == 0) throw ContinuationError("phase: direct determinant matches neither phase sign");

  // tr^A(log A) = −ζ′_A(0) against f.p. Σ log λ·|λ|^{−z}, same branch.
  const MeromorphicGerm g = weighted_trace_germ(Multiplier::log_of(spec, options.cut), abs_spec, options);
  out.log_trace_check = AnomalyReport::compare("log_trace_weights", describe(spec), direct, g.finite_part, tolerance);
  return out;
}

AnomalyReport pfaffian_anomaly(const Spectrum& d, double tolerance) {
  const SelfAdjointDet sa = phase_and_det_selfadjoint(d, tolerance);
  const cplx det_d = sa.direct.value();
  const Spectrum skew = skew_double(d);
  const DetValue det_skew = DetValue::from_log(log_det(skew), "direct", 0.0);
  const double exponent = kPi * (sa.eta - sa.zeta_abs_at_zero);
  const cplx rhs = det_skew.value() * std::exp(cplx(0.0, sa.realized_sign * exponent));
  AnomalyReport r = AnomalyReport::compare("pfaffian", describe(d), det_d * det_d, rhs, tolerance);
  r.details["eta"] = sa.eta;
  r.details["zeta_abs_at_zero"] = sa.zeta_abs_at_zero;
  r.details["realized_sign"] = sa.realized_sign;
  r.details["ratio"] = complex_json(det_d * det_d / det_skew.value());
  const cplx abs_sq = std::exp(2.0 * sa.det.log_modulus);
  r.absorb("skew_double_vs_abs_squared",
           AnomalyReport::compare("skew_double_det", describe(d), det_skew.value(), abs_sq, tolerance));
  r.absorb("log_trace_weights", sa.log_trace_check);
  return r;
}

cplx log_product_residue(const std::vector<std::pair<double, Spectrum>>& x,
                         const std::vector<std::pair<double, Spectrum>>& y) {
  if (x.empty() || y.empty()) return 0.0;
  const bool circle = is_circle(x.front().second);
  auto check = [&](const auto& list) {
    for (const auto& [c, s] : list) {
      if (circle ? !is_circle(s) : !is_torus(s)) {
        throw SymbolError("log residue: spectra must all be circle multipliers or all torus lattices");
      }
    }
  };
  check(x);
  check(y);
  if (circle) {
    auto combine = [](const auto& list) {
      NumericSymbol acc(0);
      double weight = 0.0;
      for (const auto& [c, s] : list) {
        auto [sym, order] = circle_log(s);
        acc += sym * cplx(c);
        weight += c * order;
      }
      require_classical(weight);
      return acc;
    };
    return wres(compose(combine(x), combine(y)));
  }
  const int dim = x.front().second.lattice()->dim;
  auto combine = [dim](const auto& list) {
    series::Series acc(kLen, 0.0);
    double weight = 0.0;
    for (const auto& [c, s] : list) {
      const RadialLog r = radial_log(s);
      if (r.dim != dim) throw SymbolError("log residue: torus dimensions differ");
      acc = series::add(acc, series::scale(r.classical, c));
      weight += c * r.weight;
    }
    require_classical(weight);
    return acc;
  };
  if (dim % 2 != 0) return 0.0;
  const series::Series prod = series::mul(combine(x), combine(y), kLen);
  return sphere_volume(dim) * prod[static_cast<std::size_t>(dim / 2)];
}

AnomalyReport mult_anomaly(const Spectrum& a, const Spectrum& b, double tolerance) {
  if (!a.same_enumeration(b)) throw DomainError("multiplicative anomaly: inputs do not commute on a common enumeration");
  if (!a.flags().positive || !b.flags().positive) throw DomainError("multiplicative anomaly: inputs must be positive");
  const Spectrum ab = product(a, b);
  const bool torus = is_torus(a);
  if (!torus && !is_circle(a)) throw SymbolError("multiplicative anomaly: no residue path for this spectrum class");
  if (tolerance <= 0.0) tolerance = torus ? kToleranceTorus : kTolerance1D;

  const cplx log_f_direct = log_det(ab, options_for(ab)) - log_det(a, options_for(a)) - log_det(b, options_for(b));
  const cplx residue_terms = eq10_residue_terms(a, b, ab);
  const Multiplier third = Multiplier::log_of(ab) - log_multiplier_on(a, ab) - log_multiplier_on(b, ab);
  const cplx third_term = weighted_trace_germ(third, ab, options_for(ab)).finite_part;
  const cplx log_f_residue = residue_terms + third_term;

  nlohmann::json inputs{{"a", describe(a)}, {"b", describe(b)}};
  AnomalyReport r = AnomalyReport::compare("multiplicative", inputs, std::exp(log_f_direct), std::exp(log_f_residue),
                                           tolerance);
  r.details["log_F_direct"] = complex_json(log_f_direct);
  r.details["log_F_residue"] = complex_json(log_f_residue);
  r.details["residue_terms"] = complex_json(residue_terms);
  r.details["third_term"] = complex_json(third_term);
  r.details["path"] = torus ? "radial" : "symbols";
  return r;
}

Multiplier log_multiplier_on(const Spectrum& a, const Spectrum& layout, const SpectralCut& cut) {
  if (a.same_enumeration(layout)) {
    Multiplier m = Multiplier::log_of(a, cut);
    if (m.compatible_with(layout)) return m;
  }
  if (!is_circle(a) || !is_circle(layout) || !layout.extras().empty()) {
    throw DomainError("log multiplier: spectra do not share an enumeration of circle modes");
  }
  if (!a.extras().empty()) throw DomainError("log multiplier: extra eigenvalues need a shared enumeration");
  std::vector<RayMultiplier> rays;
  for (const Ray& l : layout.rays()) {
    const Ray* match = nullptr;
    for (const Ray& r : a.rays()) {
      if (r.side != l.side) continue;
      if (match != nullptr) throw DomainError("log multiplier: several rays on one half-line");
      match = &r;
    }
    if (match == nullptr || match->multiplicity != l.multiplicity) {
      throw DomainError("log multiplier: half-lines do not match");
    }
    const Ray ray = *match;
    // Ray variable of A at the layout point x: x + δ.
    const double delta = ray.mode_shift - l.mode_shift;
    const double first = l.offset + delta - ray.offset;
    if (first < -1e-9 || std::abs(first - std::round(first)) > 1e-9) {
      throw DomainError("log multiplier: layout modes are not eigenmodes of the operator");
    }
    cut.check(ray.scale);
    const cplx log_c = cut.log(ray.scale);
    RayMultiplier rm;
    rm.terms.push_back({ray.power, 0.0, 1, {1.0}});
    // log c + p·log(1 + δw) + log(1 + Σ c_j (w/(1 + δw))^j), w = 1/x.
    series::Series rest = series::scale(series::log({1.0, delta}, kLen), ray.power);
    if (!ray.pure_power()) {
      series::Series inner(kLen, 0.0);
      double p = 1.0;
      for (std::size_t k = 1; k < kLen; ++k) {
        inner[k] = p;
        p *= -delta;
      }
      rest = series::add(rest, series::compose(series::log(series::one_plus(ray.corrections, kLen), kLen), inner, kLen));
    }
    rest[0] += log_c;
    rm.terms.push_back({1.0, 0.0, 0, rest});
    rm.exact = [ray, delta, cut](double x) { return cut.log(ray.value(x + delta)); };
    rays.push_back(std::move(rm));
  }
  return Multiplier::from_parts(layout, std::move(rays), {});
}

AnomalyReport okikiolu_diff(const Spectrum& a, const Spectrum& q1, const Spectrum& q2, double tolerance) {
  if (!is_circle(a) || !is_circle(q1) || !is_circle(q2)) {
    throw SymbolError("okikiolu: symbol path is available for circle multipliers only");
  }
  const cplx t1 = weighted_log_trace(a, q1);
  const cplx t2 = weighted_log_trace(a, q2);
  const double oa = a.order();
  const double o1 = q1.order();
  const double o2 = q2.order();
  const std::vector<std::pair<double, Spectrum>> diff{{1.0 / o1, q1}, {-1.0 / o2, q2}};
  const std::vector<std::pair<double, Spectrum>> x1{{1.0, a}, {-oa / o1, q1}};
  const std::vector<std::pair<double, Spectrum>> x2{{1.0, a}, {-oa / o2, q2}};
  const cplx rhs = -0.5 * log_product_residue(x1, diff) - 0.5 * log_product_residue(x2, diff);
  nlohmann::json inputs{{"a", describe(a)}, {"q1", describe(q1)}, {"q2", describe(q2)}};
  AnomalyReport r = AnomalyReport::compare("okikiolu", inputs, t1 - t2, rhs, tolerance);
  r.details["tr_q1_log_a"] = complex_json(t1);
  r.details["tr_q2_log_a"] = complex_json(t2);
  return r;
}

WeightedDet weighted_det(const Spectrum& a, const Spectrum& q, double tolerance) {
  if (!is_circle(a) || !is_circle(q)) throw SymbolError("weighted det: symbol path is available for circle multipliers only");
  WeightedDet out;
  const cplx tr = weighted_log_trace(a, q);
  out.weighted = DetValue::from_log(tr, "weighted", 0.0);
  const double oa = a.order();
  const std::vector<std::pair<double, Spectrum>> diff{{1.0 / q.order(), q}, {-1.0 / oa, a}};
  const cplx res = log_product_residue(diff, diff);
  const cplx lhs = log_det(a);
  out.relation = AnomalyReport::compare("weighted_det", {{"a", describe(a)}, {"q", describe(q)}}, lhs,
                                        tr - 0.5 * oa * res, tolerance);
  out.relation.details["log_weighted_det"] = complex_json(tr);
  out.relation.details["residue"] = complex_json(res);
  return out;
}

Spectrum PositiveFamily::at(double t) const {
  Spectrum s = base;
  const double gv = g(t);
  if (gv != 1.0) s = transform(s, SpectrumOp::power(gv));
  const double fv = f(t);
  if (fv != 1.0) s = transform(s, SpectrumOp::scale(fv));
  return s;
}

Multiplier PositiveFamily::log_derivative(double t) const {
  const Spectrum layout = at(t);
  Multiplier m = Multiplier::constant_on(layout, fdot(t) / f(t));
  const double gd = gdot(t);
  if (gd != 0.0) m += log_multiplier_on(base, layout) * cplx(gd);
  return m;
}

PositiveFamily PositiveFamily::scaled(Spectrum base, double rate) {
  return {"scaled", std::move(base), [rate](double t) { return 1.0 + rate * t; }, [rate](double) { return rate; },
          [](double) { return 1.0; }, [](double) { return 0.0; }};
}

PositiveFamily PositiveFamily::power(Spectrum base, double rate) {
  return {"power", std::move(base), [](double) { return 1.0; }, [](double) { return 0.0; },
          [rate](double t) { return 1.0 + rate * t; }, [rate](double) { return rate; }};
}

PositiveFamily PositiveFamily::constant(Spectrum base) { return scaled(std::move(base), 0.0); }

AnomalyReport log_det_variation(const PositiveFamily& family, double t, double tolerance, double h) {
  if (!family.base.flags().positive) throw DomainError("log det variation: family must be positive");
  auto logdet = [&](double s) {
    const Spectrum sp = family.at(s);
    return log_det(sp, options_for(sp));
  };
  auto centered = [&](double step) { return (logdet(t + step) - logdet(t - step)) / (2.0 * step); };
  const cplx d1 = centered(h);
  const cplx d2 = centered(h / 2);
  const cplx d4 = centered(h / 4);
  const cplx r1 = (4.0 * d2 - d1) / 3.0;
  const cplx r2 = (4.0 * d4 - d2) / 3.0;
  if (std::abs(r1 - r2) > tolerance) throw ContinuationError("log det variation: finite differences are unstable");
  const Spectrum at = family.at(t);
  const cplx rhs = weighted_trace_germ(family.log_derivative(t), at, options_for(at)).finite_part;
  AnomalyReport r = AnomalyReport::compare("log_det_variation", {{"family", family.name}, {"t", t}, {"base", describe(family.base)}},
                                           r2, rhs, tolerance);
  r.details["step"] = h;
  r.details["step_disagreement"] = std::abs(r1 - r2);
  return r;
}

AnomalyReport jacobian_anomaly(const Spectrum& q, const Spectrum& c, double tolerance) {
  const Spectrum cc = transform(c, SpectrumOp::square());
  if (!(cc.order() > 0.0)) throw DomainError("jacobian anomaly: C*C must have positive order");
  if (!q.same_enumeration(cc)) throw DomainError("jacobian anomaly: C does not commute with Q");
  const bool torus = is_torus(q);
  if (tolerance <= 0.0) tolerance = torus ? kToleranceTorus : kTolerance1D;
  const Spectrum cqc = product(q, cc);
  const cplx log_jq2 = log_det(cqc, options_for(cqc)) - log_det(q, options_for(q));
  const cplx log_jt2 = log_det(cc, options_for(cc));
  const Multiplier third = Multiplier::log_of(cqc) - log_multiplier_on(q, cqc) - log_multiplier_on(cc, cqc);
  const cplx log_f =
      eq10_residue_terms(q, cc, cqc) + weighted_trace_germ(third, cqc, options_for(cqc)).finite_part;
  // Logs keep the comparison relative; these determinants can be tiny.
  AnomalyReport r = AnomalyReport::compare("jacobian", {{"q", describe(q)}, {"c", describe(c)}}, log_jq2,
                                           log_f + log_jt2, tolerance);
  r.details["J_squared"] = complex_json(std::exp(log_jq2));
  r.details["log_F_residue"] = complex_json(log_f);
  r.details["log_Jtilde_sq"] = complex_json(log_jt2);
  return r;
}

MeromorphicGerm weighted_supertrace(const Multiplier& a_plus, const Multiplier& a_minus, const GradedSpectrum& q,
                                    const ZetaOptions& options) {
  MeromorphicGerm g = weighted_trace_germ(a_plus, q.plus, options);
  if (!q.minus.rays().empty() || !q.minus.extras().empty() || q.minus.lattice()) {
    const MeromorphicGerm m = weighted_trace_germ(a_minus, q.minus, options);
    g = g - m;
  }
  return g;
}

}  // namespace specanom
