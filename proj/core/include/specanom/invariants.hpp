#pragma once

#include <functional>
#include <string>

#include "specanom/czeta.hpp"
#include "specanom/report.hpp"
#include "specanom/spectra.hpp"
#include "specanom/symbols.hpp"

namespace specanom {

inline constexpr double kTolerance1D = 1e-8;
inline constexpr double kToleranceTorus = 1e-5;

/// With log λ = log|λ| + iπ for λ < 0, −ζ′_A(0) has phase −(π/2)(η − ζ_{|A|}(0)).
/// phase_and_det_selfadjoint re-derives this sign on every call.
inline constexpr int kRealizedPhaseSign = -1;

/// exp(−ζ′(0)). Self-adjoint spectra with negative eigenvalues go through
/// det_ζ|A| and the eta phase, cross-checked against the direct value.
DetValue det_zeta(const Spectrum& spec, const ZetaOptions& options = {});

/// Σ sgn(λ)|λ|^{−z} at z = 0; throws ContinuationError if a pole is present.
double eta(const Spectrum& spec, const ZetaOptions& options = {});

struct SelfAdjointDet {
  DetValue det;     // modulus det_ζ|A|, phase (π/2)(η − ζ_{|A|}(0))
  DetValue direct;  // exp(−ζ′_A(0)) on the chosen cut
  double eta = 0.0;
  double zeta_abs_at_zero = 0.0;
  int realized_sign = 0;  // direct phase = realized_sign · det.phase (mod 2π)
  /// tr^A(log A) against tr^{|A|}(log A).
  AnomalyReport log_trace_check;
};

SelfAdjointDet phase_and_det_selfadjoint(const Spectrum& spec, double tolerance = kTolerance1D,
                                         const ZetaOptions& options = {});

/// det_ζ(D)² against det_ζ(skew_double(D))·e^{i s π(η − ζ_{|D|}(0))}, s the
/// realized phase sign; absorbs det_ζ(skew_double(D)) = det_ζ(|D|)².
AnomalyReport pfaffian_anomaly(const Spectrum& d, double tolerance = kTolerance1D);

/// det_ζ(AB)/(det_ζ(A)det_ζ(B)) directly against the exponential of
/// Σ (1/2a)res((log A − a/(a+b) log AB)²) + tr^{AB}(log AB − log A − log B).
/// Circle data use symbol residues, torus data the radial |ξ|^{−d} coefficient.
/// A tolerance of 0 selects the default of the path.
AnomalyReport mult_anomaly(const Spectrum& a, const Spectrum& b, double tolerance = 0.0);

/// tr^{Q1}(log A) − tr^{Q2}(log A) against the two-residue formula with
/// log-differences from symbols. Circle data only.
AnomalyReport okikiolu_diff(const Spectrum& a, const Spectrum& q1, const Spectrum& q2,
                            double tolerance = kTolerance1D);

struct WeightedDet {
  DetValue weighted;  // exp tr^Q(log A)
  /// log det_ζ(A) against tr^Q(log A) − (a/2)·res((log Q/q − log A/a)²).
  AnomalyReport relation;
};

WeightedDet weighted_det(const Spectrum& a, const Spectrum& q, double tolerance = kTolerance1D);

/// A_t = f(t)·B^{g(t)} for a positive base B.
struct PositiveFamily {
  std::string name;
  Spectrum base;
  std::function<double(double)> f, fdot, g, gdot;

  [[nodiscard]] Spectrum at(double t) const;
  /// Ȧ_t A_t^{−1} = (ḟ/f)·I + ġ·log B, on the layout of A_t.
  [[nodiscard]] Multiplier log_derivative(double t) const;

  [[nodiscard]] static PositiveFamily scaled(Spectrum base, double rate);  // (1 + rate·t)·B
  [[nodiscard]] static PositiveFamily power(Spectrum base, double rate);   // B^{1 + rate·t}
  [[nodiscard]] static PositiveFamily constant(Spectrum base);
};

/// d/dt log det_ζ(A_t) by Richardson-extrapolated centered differences
/// against tr^{A_t}(Ȧ_t A_t^{−1}). Throws ContinuationError if the
/// extrapolations at steps (h, h/2) and (h/2, h/4) disagree beyond tolerance.
AnomalyReport log_det_variation(const PositiveFamily& family, double t, double tolerance = kTolerance1D,
                                double h = 1e-2);

/// log det_ζ(C*QC) − log det_ζ(Q) against log F_ζ(Q, C*C) + log det_ζ(C*C),
/// with F_ζ from the residue path of mult_anomaly; C is a positive multiplier
/// commuting with Q.
AnomalyReport jacobian_anomaly(const Spectrum& q, const Spectrum& c, double tolerance = 0.0);

/// Germ of tr(A₊Q₊^{−z}) − tr(A₋Q₋^{−z}).
MeromorphicGerm weighted_supertrace(const Multiplier& a_plus, const Multiplier& a_minus, const GradedSpectrum& q,
                                    const ZetaOptions& options = {});

/// log λ_k(A) on the modes enumerated by `layout`; A and layout must be circle
/// spectra with rays on both half-lines, or share one enumeration.
Multiplier log_multiplier_on(const Spectrum& a, const Spectrum& layout,
                             const SpectralCut& cut = SpectralCut::principal());

/// Residue of the product of two classical log-combinations: on the circle,
/// Σ c_i log A_i with Σ c_i·ord A_i = 0 and likewise for d_j.
cplx log_product_residue(const std::vector<std::pair<double, Spectrum>>& x,
                         const std::vector<std::pair<double, Spectrum>>& y);

}  // namespace specanom
