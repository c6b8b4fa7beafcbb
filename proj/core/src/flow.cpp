#include "specanom/flow.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace specanom {
namespace {

constexpr double kZero = 1e-12;
constexpr double kTouch = 1e-10;
constexpr double kDerivativeStep = 1e-3;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Root of f on [a, b] with f(a), f(b) of opposite signs.
double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  while (b - a > kFlowBisectionTol) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if (sign_of(fm) == sign_of(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) throw ContinuationError("quadrature: adaptive Simpson did not converge");
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double window_bound(const OperatorFamily& f) { return 1.0 + f.lipschitz; }

std::vector<Branch> scan_branches(const OperatorFamily& f, double extra = 0.0) {
  if (!f.window) throw DomainError("family '" + f.name + "' has no branches");
  return f.window(window_bound(f) + extra);
}

// Crossings of one branch on the sampling grid; touches are errors.
void branch_crossings(const Branch& b, int samples, std::vector<Crossing>& out) {
  const double h = 1.0 / (samples - 1);
  std::vector<double> v(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) v[static_cast<std::size_t>(i)] = b.value(i * h);
  if (std::abs(v.front()) <= kZero || std::abs(v.back()) <= kZero) {
    throw DomainError("spectral flow: endpoint operator is not invertible (branch " + std::to_string(b.index) + ")");
  }
  auto record = [&](double t, int dir) { out.push_back({t, b.index, dir, b.multiplicity}); };
  auto tangential = [&](double t) {
    throw ContinuationError("spectral flow: branch " + std::to_string(b.index) + " touches zero tangentially at t = " +
                            std::to_string(t));
  };
  int last_sign = sign_of(v.front());
  for (int i = 0; i + 1 < samples; ++i) {
    const double t0 = i * h;
    const double t1 = t0 + h;
    const double v0 = v[static_cast<std::size_t>(i)];
    const double v1 = v[static_cast<std::size_t>(i + 1)];
    if (v1 == 0.0) continue;  // resolved at the next nonzero sample
    if (v0 == 0.0) {
      if (sign_of(v1) == last_sign) tangential(t0);
      record(t0, sign_of(v1));
    } else if (sign_of(v0) != sign_of(v1)) {
      const double t = bisect(b.value, t0, t1);
      record(t, sign_of(v1));
    } else if (b.derivative && sign_of(b.derivative(t0)) * sign_of(b.derivative(t1)) < 0) {
      // An extremum inside the cell may dip through zero between samples.
      const double te = bisect(b.derivative, t0, t1);
      const double ve = b.value(te);
      if (std::abs(ve) <= kTouch) tangential(te);
      if (sign_of(ve) != sign_of(v0)) {
        record(bisect(b.value, t0, te), sign_of(ve));
        record(bisect(b.value, te, t1), sign_of(v1));
      }
    }
    last_sign = sign_of(v1);
  }
}

// Level nearest zero avoiding every branch enclosure on the cell.
std::optional<double> free_level(const std::vector<std::pair<double, double>>& cover, double bound) {
  auto is_free = [&](double c) {
    return std::none_of(cover.begin(), cover.end(), [c](const auto& iv) { return iv.first <= c && c <= iv.second; });
  };
  if (is_free(0.0)) return 0.0;
  std::vector<double> edges{-bound, bound};
  for (const auto& [lo, hi] : cover) {
    edges.push_back(lo);
    edges.push_back(hi);
  }
  std::sort(edges.begin(), edges.end());
  std::optional<double> best;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double c = 0.5 * (edges[i] + edges[i + 1]);
    if (edges[i + 1] - edges[i] <= kZero || std::abs(c) >= bound || !is_free(c)) continue;
    if (!best || std::abs(c) < std::abs(*best)) best = c;
  }
  return best;
}

// Partition of [0, 1] with avoided levels, and the signed count over it.
void partition_count(const std::vector<Branch>& branches, double lipschitz, double bound, int samples,
                     FlowResult& r) {
  const double h = 1.0 / (samples - 1);
  std::vector<double> levels;
  std::vector<double> ends;
  for (int i = 0; i + 1 < samples; ++i) {
    const double t0 = i * h;
    const double t1 = t0 + h;
    std::vector<std::pair<double, double>> cover;
    for (const auto& b : branches) {
      const double v0 = b.value(t0);
      const double v1 = b.value(t1);
      const double pad = 0.5 * lipschitz * h + kZero;
      cover.emplace_back(std::min(v0, v1) - pad, std::max(v0, v1) + pad);
    }
    const auto c = free_level(cover, bound);
    if (!c) throw ContinuationError("spectral flow: no level avoids the spectrum on a grid cell");
    if (!levels.empty() && levels.back() == *c) {
      ends.back() = t1;
    } else {
      levels.push_back(*c);
      ends.push_back(t1);
    }
  }
  auto count = [&](double t, double lo, double hi) {
    int n = 0;
    for (const auto& b : branches) {
      const double v = b.value(t);
      if (lo <= v && v <= hi) n += b.multiplicity;
    }
    return n;
  };
  // λ_0 = λ_{N+1} = 0; the count at t_i runs between λ_i and λ_{i+1}.
  r.partition.clear();
  r.partition_sf = 0;
  const std::size_t n = levels.size();
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = i == 0 ? 0.0 : ends[i - 1];
    const double li = i == 0 ? 0.0 : levels[i - 1];
    const double lnext = i == n ? 0.0 : levels[i];
    if (i > 0) r.partition.emplace_back(t, li);
    r.partition_sf += sign_of(li - lnext) * count(t, std::min(li, lnext), std::max(li, lnext));
  }
}

double integrated_residue(const OperatorFamily& f) {
  if (!f.has_residue()) throw DomainError("family '" + f.name + "' has no residue integrand");
  return adaptive_simpson([&f](double t) { return f.residue(t); }, 0.0, 1.0);
}

double eta_phase(const Spectrum& s) {
  const SelfAdjointDet sa = phase_and_det_selfadjoint(s);
  return 0.5 * kPi * (sa.eta - sa.zeta_abs_at_zero);
}

nlohmann::json family_inputs(const OperatorFamily& f) { return {{"family", f.name}, {"order", f.order}}; }

}  // namespace

Spectrum OperatorFamily::at(double t) const {
  if (!spectrum) throw DomainError("family '" + name + "' has no spectrum");
  return spectrum(t);
}

double OperatorFamily::residue(double t) const {
  if (residue_integrand) return residue_integrand(t);
  return residue_from_symbols(t);
}

double OperatorFamily::residue_from_symbols(double t) const {
  if (!derivative_over_abs) throw DomainError("family '" + name + "' has no symbol for its derivative");
  const cplx r = wres(multiplier_to_symbol(derivative_over_abs(t)));
  return r.real();
}

OperatorFamily OperatorFamily::restricted(double s0, double s1) const {
  OperatorFamily out = *this;
  const double k = s1 - s0;
  auto tau = [s0, k](double t) { return s0 + k * t; };
  out.name = name + "[" + std::to_string(s0) + "," + std::to_string(s1) + "]";
  out.lipschitz = std::abs(k) * lipschitz;
  out.window = [base = window, tau, k](double bound) {
    std::vector<Branch> bs = base(bound);
    for (auto& b : bs) {
      b.value = [v = b.value, tau](double t) { return v(tau(t)); };
      if (b.derivative) b.derivative = [d = b.derivative, tau, k](double t) { return k * d(tau(t)); };
    }
    return bs;
  };
  if (spectrum) out.spectrum = [s = spectrum, tau](double t) { return s(tau(t)); };
  if (residue_integrand) out.residue_integrand = [r = residue_integrand, tau, k](double t) { return k * r(tau(t)); };
  if (derivative_over_abs) {
    out.derivative_over_abs = [d = derivative_over_abs, tau, k](double t) { return d(tau(t)) * cplx(k); };
  }
  return out;
}

OperatorFamily OperatorFamily::shifted(double alpha) const {
  OperatorFamily out = *this;
  out.name = name + "-" + std::to_string(alpha);
  out.window = [base = window, alpha](double bound) {
    std::vector<Branch> bs = base(bound + std::abs(alpha));
    for (auto& b : bs) b.value = [v = b.value, alpha](double t) { return v(t) - alpha; };
    return bs;
  };
  if (spectrum) {
    out.spectrum = [s = spectrum, alpha](double t) { return transform(s(t), SpectrumOp::shift(alpha)); };
  }
  // Shifting changes |A_t|^{−1} by order −2, which leaves the residue alone.
  if (!residue_integrand && derivative_over_abs) {
    out.residue_integrand = [base = *this](double t) { return base.residue_from_symbols(t); };
  }
  out.derivative_over_abs = nullptr;
  return out;
}

OperatorFamily dirac_family(double a0, double a1) {
  const double d = a1 - a0;
  auto a = [a0, d](double t) { return a0 + d * t; };
  OperatorFamily f;
  f.name = "dirac(" + std::to_string(a0) + "->" + std::to_string(a1) + ")";
  f.order = 1.0;
  f.lipschitz = std::abs(d);
  f.window = [a0, a1, a, d](double bound) {
    const auto lo = static_cast<int>(std::ceil(-std::max(a0, a1) - bound));
    const auto hi = static_cast<int>(std::floor(-std::min(a0, a1) + bound));
    std::vector<Branch> bs;
    for (int n = lo; n <= hi; ++n) {
      bs.push_back({n, 1, [n, a](double t) { return n + a(t); }, [d](double) { return d; }});
    }
    return bs;
  };
  f.spectrum = [a](double t) { return circle_dirac(a(t)); };
  f.residue_integrand = [d](double) { return 2.0 * d; };
  f.derivative_over_abs = [a, d](double t) {
    return Multiplier::power_of(transform(circle_dirac(a(t)), SpectrumOp::abs()), -1.0) * cplx(d);
  };
  return f;
}

Branch linear_branch(int index, double c0, double c1, int multiplicity) {
  return {index, multiplicity, [c0, c1](double t) { return c0 + c1 * t; }, [c1](double) { return c1; }};
}

OperatorFamily finite_family(std::string name, std::vector<Branch> branches) {
  OperatorFamily f;
  f.name = std::move(name);
  double lip = 0.0;
  for (const auto& b : branches) {
    if (b.multiplicity < 1) throw DomainError("finite family: multiplicity must be positive");
    constexpr int kProbe = 1024;
    for (int i = 0; i < kProbe; ++i) {
      const double t = static_cast<double>(i) / kProbe;
      const double slope = b.derivative ? b.derivative(t) : (b.value(t + 1.0 / kProbe) - b.value(t)) * kProbe;
      lip = std::max(lip, std::abs(slope));
    }
  }
  f.lipschitz = 1.1 * lip + kZero;
  f.window = [branches = std::move(branches)](double) { return branches; };
  return f;
}

OperatorFamily family_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw DomainError("family descriptor: object with 'kind' expected");
  auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : j.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
        throw DomainError("family descriptor: unknown key '" + key + "'");
      }
    }
  };
  const std::string kind = j.at("kind").get<std::string>();
  OperatorFamily f;
  if (kind == "dirac_family") {
    reject_unknown({"kind", "a0", "a1", "restrict", "shift"});
    f = dirac_family(j.at("a0").get<double>(), j.at("a1").get<double>());
  } else if (kind == "finite") {
    reject_unknown({"kind", "name", "branches", "restrict", "shift"});
    std::vector<Branch> bs;
    int index = 0;
    for (const auto& b : j.at("branches")) {
      bs.push_back(linear_branch(index++, b.at("c0").get<double>(), b.at("c1").get<double>(),
                                 b.value("multiplicity", 1)));
    }
    f = finite_family(j.value("name", std::string("finite")), std::move(bs));
  } else {
    throw DomainError("family descriptor: unknown kind '" + kind + "'");
  }
  if (j.contains("restrict")) {
    const auto& r = j.at("restrict");
    f = f.restricted(r.at(0).get<double>(), r.at(1).get<double>());
  }
  if (j.contains("shift")) f = f.shifted(j.at("shift").get<double>());
  return f;
}

nlohmann::json to_json(const FlowResult& r) {
  nlohmann::json crossings = nlohmann::json::array();
  for (const auto& c : r.crossings) {
    crossings.push_back({{"t", c.t}, {"branch", c.branch}, {"direction", c.direction}, {"multiplicity", c.multiplicity}});
  }
  nlohmann::json partition = nlohmann::json::array();
  for (const auto& [t, l] : r.partition) partition.push_back({{"t", t}, {"level", l}});
  return {{"sf", r.sf}, {"crossings", crossings}, {"partition", partition}, {"partition_sf", r.partition_sf}};
}

FlowResult spectral_flow(const OperatorFamily& family, int samples) {
  if (samples < 2) throw DomainError("spectral flow: at least two samples are needed");
  const std::vector<Branch> branches = scan_branches(family);
  FlowResult r;
  for (const auto& b : branches) branch_crossings(b, samples, r.crossings);
  std::sort(r.crossings.begin(), r.crossings.end(), [](const Crossing& x, const Crossing& y) {
    return x.t != y.t ? x.t < y.t : x.branch < y.branch;
  });
  for (const auto& c : r.crossings) r.sf += c.direction * c.multiplicity;
  partition_count(branches, family.lipschitz, window_bound(family), samples, r);
  if (r.partition_sf != r.sf) {
    throw ContinuationError("spectral flow: crossing count " + std::to_string(r.sf) + " disagrees with partition count " +
                            std::to_string(r.partition_sf));
  }
  return r;
}

AnomalyReport shift_check(const OperatorFamily& family, double alpha) {
  const int base = spectral_flow(family).sf;
  const int lhs = spectral_flow(family.shifted(alpha)).sf;
  auto between = [&](double t) -> std::int64_t {
    if (alpha == 0.0) return 0;
    const double lo = std::min(0.0, alpha);
    const double hi = std::max(0.0, alpha);
    if (family.spectrum) return eig_count_in(family.at(t), lo, hi);
    std::int64_t n = 0;
    for (const auto& b : scan_branches(family, std::abs(alpha))) {
      const double v = b.value(t);
      if (lo <= v && v <= hi) n += b.multiplicity;
    }
    return n;
  };
  const std::int64_t p0 = between(0.0);
  const std::int64_t p1 = between(1.0);
  const double rhs = base - sign_of(alpha) * static_cast<double>(p1 - p0);
  AnomalyReport r = AnomalyReport::compare("shift_rule", {{"family", family.name}, {"alpha", alpha}}, lhs, rhs, 0.5);
  r.details["sf"] = base;
  r.details["tr_P0"] = p0;
  r.details["tr_P1"] = p1;
  return r;
}

AnomalyReport eta_variation_report(const OperatorFamily& family, double tolerance) {
  const FlowResult flow = spectral_flow(family);
  const double integral = integrated_residue(family);
  const double lhs = eta(family.at(1.0)) - eta(family.at(0.0));
  const double rhs = 2.0 * flow.sf - integral / family.order;
  AnomalyReport r = AnomalyReport::compare("eta_variation", family_inputs(family), lhs, rhs, tolerance);
  r.details["sf"] = flow.sf;
  r.details["integrated_residue"] = integral;

  // dη/dt = −(1/q)res(Ȧ|A|^{−1}) at points clear of crossings.
  const double h = kDerivativeStep;
  for (int k = 0; k < 5; ++k) {
    const double t = (2 * k + 1) / 10.0;
    const bool near = std::any_of(flow.crossings.begin(), flow.crossings.end(),
                                  [&](const Crossing& c) { return std::abs(c.t - t) < 4.0 * h; });
    if (near) continue;
    auto centered = [&](double s) { return (eta(family.at(t + s)) - eta(family.at(t - s))) / (2.0 * s); };
    const double d = (4.0 * centered(h / 2) - centered(h)) / 3.0;
    r.absorb("pointwise_t" + std::to_string(k),
             AnomalyReport::compare("eta_derivative", {{"t", t}}, d, -family.residue(t) / family.order, tolerance));
  }
  if (family.residue_integrand && family.derivative_over_abs) {
    r.absorb("residue_symbols", AnomalyReport::compare("residue_integrand", {{"t", 0.5}}, family.residue_integrand(0.5),
                                                       family.residue_from_symbols(0.5), tolerance));
  }
  return r;
}

AnomalyReport phase_difference(const OperatorFamily& family, double tolerance) {
  const FlowResult flow = spectral_flow(family);
  if (flow.sf != 0) throw DomainError("phase difference: spectral flow is " + std::to_string(flow.sf) + ", not 0");
  const double lhs = eta_phase(family.at(1.0)) - eta_phase(family.at(0.0));
  const double integral = integrated_residue(family);
  const double rhs = -0.5 * kPi * integral / family.order;
  AnomalyReport r = AnomalyReport::compare("phase_difference", family_inputs(family), lhs, rhs, tolerance);
  r.details["integrated_residue"] = integral;
  return r;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

}  // namespace specanom
