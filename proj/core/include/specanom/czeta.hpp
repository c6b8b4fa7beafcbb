#pragma once

#include <memory>

#include "specanom/germ.hpp"
#include "specanom/multiplier.hpp"
#include "specanom/report.hpp"
#include "specanom/spectra.hpp"

namespace specanom {

enum class Backend { automatic, hurwitz, euler_maclaurin, heat_mellin };

struct ZetaOptions {
  SpectralCut cut = SpectralCut::principal();
  KernelPolicy kernel = KernelPolicy::fill();
  Backend backend = Backend::automatic;
  int head_terms = 10000;  // explicit terms before the Euler–Maclaurin tail
  int em_order = 8;
  int contour_points = 64;
};

/// z ↦ Σ_k α_k m_k λ_k^{−z}, analytically continued. Head data are
/// precomputed once so repeated evaluation on a contour is cheap.
class SpectralSum {
 public:
  SpectralSum(const Multiplier& a, const Spectrum& q, const ZetaOptions& options = {});
  ~SpectralSum();
  SpectralSum(SpectralSum&&) noexcept;
  SpectralSum& operator=(SpectralSum&&) noexcept;

  [[nodiscard]] cplx operator()(cplx z) const;
  [[nodiscard]] GermMethod method() const;
  /// Radius of a circle around `center` that encloses no other possible pole.
  [[nodiscard]] double contour_radius(cplx center) const;
  /// True if s lies within tol of a possible pole (or removable singularity).
  [[nodiscard]] bool near_pole(cplx s, double tol) const;
  /// Laurent data around `center`.
  [[nodiscard]] MeromorphicGerm germ_at(cplx center) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Germ at z = 0 of tr(A Q^{−z}); finite_part is the weighted trace
/// tr^Q(A) and ord(Q)·residue is res(A).
MeromorphicGerm weighted_trace_germ(const Multiplier& a, const Spectrum& q, const ZetaOptions& options = {});

/// Germ of ζ_spec around s.
MeromorphicGerm zeta_germ(const Spectrum& spec, cplx s, const ZetaOptions& options = {});

/// ζ_spec(s) = Σ λ^{−s}; throws ContinuationError at a pole.
cplx zeta(const Spectrum& spec, cplx s, const ZetaOptions& options = {});

/// ζ′_spec(0): closed form through ζ_H′(0, a) on affine rays, contour
/// extraction otherwise.
cplx zeta_derivative_at_zero(const Spectrum& spec, const ZetaOptions& options = {});

/// Sign s in f.p. tr(A Q^{−z}) = f.p. tr(A e^{−εQ}) + s·(γ/ord Q)·res(A),
/// fixed by gamma_relation_check on the catalog pairs.
inline constexpr int kHeatZetaGammaSign = +1;

struct HeatFit {
  double finite_part = 0.0;
  double log_coefficient = 0.0;
  double residual = 0.0;  // max abs residual of the fit
  double scale = 0.0;     // max |tr(A e^{−εQ})| on the grid
};

/// tr(A e^{−εQ}) = Σ a_j ε^{e_j} + b log ε + c + o(1), fitted on 24 geometric
/// points in [1e−4, 1e−1]; returns (c, b). Throws ContinuationError if the
/// residual exceeds 1e−6·scale.
HeatFit heat_trace_fp(const Multiplier& a, const Spectrum& q, const KernelPolicy& kernel = KernelPolicy::fill());

/// Compares f.p. tr(A Q^{−z}) − f.p. tr(A e^{−εQ}) with ±(γ/ord Q)·res(A);
/// rhs uses kHeatZetaGammaSign, details record every sign that matches.
AnomalyReport gamma_relation_check(const Multiplier& a, const Spectrum& q, double tolerance = 1e-6,
                                   const KernelPolicy& kernel = KernelPolicy::fill());

}  // namespace specanom
