#pragma once

#include <memory>
#include <vector>

#include "specanom/common.hpp"

namespace specanom::lattice {

/// θ(t) = Σ_{n∈ℤ} e^{−n² t}, t > 0.
double theta(double t);

/// E(w) = Σ_{k∈ℤ^d, |k|²+μ ≠ 0} (|k|² + μ)^{−w}, continued to all w.
///
/// For Re w ≥ d/2 + 6 the lattice sum is taken directly; otherwise
/// Γ(w)E(w) is split at t = 1 into a Jacobi-transformed small-t part with
/// its poles in closed form and an exponentially decaying large-t integral.
/// Quadrature nodes and integrand values are computed once per (d, μ).
class EpsteinZeta {
 public:
  EpsteinZeta(int dim, double mass);

  [[nodiscard]] cplx operator()(cplx w) const;
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] double mass() const { return mass_; }

  /// Shared instance, built on first use; safe to call concurrently.
  static std::shared_ptr<const EpsteinZeta> cached(int dim, double mass);

 private:
  [[nodiscard]] cplx direct(cplx w) const;
  [[nodiscard]] cplx mellin(cplx w) const;

  int dim_;
  double mass_;
  std::vector<double> counts_;
  // Σ_i weight_i · t_i^{w−d/2−1} over (0, 1] and Σ_i weight_i · t_i^{w−1} over [1, ∞).
  std::vector<double> near_log_t_, near_weight_;
  std::vector<double> far_log_t_, far_weight_;
};

/// Σ_{k∈ℤ^d} [(|k|² + m1)(|k|² + m2)]^{−t} for m1, m2 > 0, from the binomial
/// expansion around the mean mass.
cplx two_mass_zeta(int dim, double m1, double m2, cplx t);

}  // namespace specanom::lattice
