#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "specanom/invariants.hpp"

namespace specanom {

inline constexpr int kFlowGridSamples = 256;
inline constexpr double kFlowBisectionTol = 1e-12;
inline constexpr double kFlowQuadratureTol = 1e-8;
inline constexpr double kFlowPointwiseTol = 1e-6;

/// One continuous eigenvalue branch t ↦ λ(t) on [0, 1].
struct Branch {
  int index = 0;
  int multiplicity = 1;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

/// Path of self-adjoint spectra A_t, t ∈ [0, 1].
struct OperatorFamily {
  std::string name;
  double order = 1.0;
  /// Bound on |λ̇| over all branches.
  double lipschitz = 0.0;
  /// Every branch with min_t |λ(t)| ≤ bound.
  std::function<std::vector<Branch>(double bound)> window;
  /// Spectrum of A_t; empty for finite families.
  std::function<Spectrum(double)> spectrum;
  /// Closed form of res(Ȧ_t|A_t|^{−1}), if known.
  std::function<double(double)> residue_integrand;
  /// Ȧ_t|A_t|^{−1} as a multiplier on the layout of |A_t|, for the symbol path.
  std::function<Multiplier(double)> derivative_over_abs;

  [[nodiscard]] Spectrum at(double t) const;
  [[nodiscard]] bool has_residue() const { return residue_integrand || derivative_over_abs; }
  /// res(Ȧ_t|A_t|^{−1}): the closed form when present, else the symbol residue.
  [[nodiscard]] double residue(double t) const;
  [[nodiscard]] double residue_from_symbols(double t) const;

  /// t ↦ A_{s0 + (s1 − s0)t}.
  [[nodiscard]] OperatorFamily restricted(double s0, double s1) const;
  [[nodiscard]] OperatorFamily reversed() const { return restricted(1.0, 0.0); }
  /// t ↦ A_t − α.
  [[nodiscard]] OperatorFamily shifted(double alpha) const;
};

/// D_{a(t)} on the circle with a(t) = a0 + (a1 − a0)t; branch n is n + a(t).
OperatorFamily dirac_family(double a0, double a1);
/// Finitely many branches and no spectrum; only spectral_flow applies.
OperatorFamily finite_family(std::string name, std::vector<Branch> branches);
/// Branch c0 + c1·t.
Branch linear_branch(int index, double c0, double c1, int multiplicity = 1);

/// {"kind": "dirac_family", "a0", "a1"} or {"kind": "finite", "branches":
/// [{"c0", "c1", "multiplicity"?}]}; optional "restrict": [s0, s1], "shift": α.
OperatorFamily family_from_json(const nlohmann::json& j);

struct Crossing {
  double t = 0.0;
  int branch = 0;
  int direction = 0;  // +1 when the branch rises through zero
  int multiplicity = 1;
};

struct FlowResult {
  int sf = 0;
  std::vector<Crossing> crossings;
  /// (t_i, λ_i): λ_i avoids Spec(A_t) on [t_{i−1}, t_i].
  std::vector<std::pair<double, double>> partition;
  int partition_sf = 0;
};

nlohmann::json to_json(const FlowResult& r);

/// Net signed zero crossings from grid sampling and bisection. Throws
/// DomainError for a non-invertible endpoint and ContinuationError for a
/// tangential touch or a disagreement with the partition count.
FlowResult spectral_flow(const OperatorFamily& family, int samples = kFlowGridSamples);

/// SF(A_t − α) against SF(A_t) − sgn(α)(tr P₁ − tr P₀), P_i counting the
/// eigenvalues of A_i strictly between 0 and α.
AnomalyReport shift_check(const OperatorFamily& family, double alpha);

/// η(A₁) − η(A₀) against 2·SF − (1/q)∫₀¹ res(Ȧ_t|A_t|^{−1})dt; absorbs
/// pointwise dη/dt = −(1/q)res(Ȧ_t|A_t|^{−1}) away from crossings.
AnomalyReport eta_variation_report(const OperatorFamily& family, double tolerance = kFlowPointwiseTol);

/// φ(A₁) − φ(A₀) against −(π/2q)∫₀¹ res(Ȧ_t|A_t|^{−1})dt, φ the eta phase.
/// Throws DomainError when the spectral flow is nonzero.
AnomalyReport phase_difference(const OperatorFamily& family, double tolerance = kFlowPointwiseTol);

/// Adaptive Simpson quadrature to an absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = kFlowQuadratureTol);

}  // namespace specanom
