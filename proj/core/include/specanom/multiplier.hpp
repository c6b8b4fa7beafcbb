#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "specanom/series.hpp"
#include "specanom/spectra.hpp"

namespace specanom {

/// coeff · x^power · (log x)^log_degree · S(1/x), the asymptotic form of a
/// multiplier coefficient along a ray variable x.
struct MultiplierTerm {
  cplx coeff = 1.0;
  double power = 0.0;
  int log_degree = 0;
  series::Series series{1.0};

  [[nodiscard]] cplx value(double x) const;
};

/// Coefficients α(x) along one ray of the weight. `exact`, when set, is used
/// for explicit head sums; `terms` always carry the large-x expansion.
struct RayMultiplier {
  std::vector<MultiplierTerm> terms;
  std::function<cplx(double)> exact;

  [[nodiscard]] cplx value(double x) const;
  /// Every term is a bare power times log power, so Hurwitz sums apply.
  [[nodiscard]] bool affine() const;
};

/// Coefficients on a lattice enumeration: constant + Σ coeff·log λ(n).
struct LatticeMultiplier {
  struct LogTerm {
    cplx coeff;
    LatticeTail tail;
  };
  cplx constant = 0.0;
  std::vector<LogTerm> logs;

  [[nodiscard]] cplx value(std::int64_t n) const;
};

/// Operator diagonal in the enumeration of a weight spectrum, acting by the
/// coefficient α_k on the k-th eigenspace.
class Multiplier {
 public:
  Multiplier() = default;

  [[nodiscard]] static Multiplier constant_on(const Spectrum& layout, cplx c);
  [[nodiscard]] static Multiplier identity_on(const Spectrum& layout) { return constant_on(layout, 1.0); }
  /// α_k = λ_k.
  [[nodiscard]] static Multiplier from_spectrum(const Spectrum& spec);
  /// α_k = λ_k^r on the chosen branch; zero eigenvalues map to 0.
  [[nodiscard]] static Multiplier power_of(const Spectrum& spec, double r,
                                           const SpectralCut& cut = SpectralCut::principal());
  /// α_k = log λ_k on the chosen branch; zero eigenvalues map to 0.
  [[nodiscard]] static Multiplier log_of(const Spectrum& spec, const SpectralCut& cut = SpectralCut::principal());
  /// α_k = sgn Re λ_k; a zero eigenvalue gets +1, matching the kernel fill-in.
  [[nodiscard]] static Multiplier sign_of(const Spectrum& spec);
  /// General constructor; the layout is taken from `layout`.
  [[nodiscard]] static Multiplier from_parts(const Spectrum& layout, std::vector<RayMultiplier> rays,
                                             std::vector<cplx> extras,
                                             std::optional<LatticeMultiplier> lattice = std::nullopt);

  [[nodiscard]] const std::vector<RayMultiplier>& rays() const { return rays_; }
  [[nodiscard]] const std::vector<cplx>& extras() const { return extras_; }
  [[nodiscard]] const std::optional<LatticeMultiplier>& lattice() const { return lattice_; }

  /// Largest real power among nonzero terms (−∞ for the zero multiplier).
  [[nodiscard]] double order() const;
  /// Same enumeration as the weight: identical ray geometry and extras count.
  [[nodiscard]] bool compatible_with(const Spectrum& weight) const;
  /// Compares the tail expansion with exact values at x = 10^3 and 10^4;
  /// returns the worst relative mismatch.
  [[nodiscard]] double tail_consistency() const;

  Multiplier& operator+=(const Multiplier& other);
  Multiplier& operator*=(cplx c);
  friend Multiplier operator+(Multiplier a, const Multiplier& b) { return a += b; }
  friend Multiplier operator-(Multiplier a, const Multiplier& b) { return a += b * cplx(-1.0); }
  friend Multiplier operator*(Multiplier a, cplx c) { return a *= c; }
  friend Multiplier operator*(cplx c, Multiplier a) { return a *= c; }
  /// Pointwise product (both multipliers on the same layout).
  [[nodiscard]] Multiplier times(const Multiplier& other) const;

  struct RayGeometry {
    double offset;
    int multiplicity;
    RaySide side;
    double mode_shift;
  };
  [[nodiscard]] const std::vector<RayGeometry>& geometry() const { return geometry_; }

 private:
  void take_layout(const Spectrum& layout);
  void check_layout(const Multiplier& other) const;

  std::vector<RayGeometry> geometry_;
  std::size_t extras_count_ = 0;
  std::optional<int> lattice_dim_;

  std::vector<RayMultiplier> rays_;
  std::vector<cplx> extras_;
  std::optional<LatticeMultiplier> lattice_;
};

}  // namespace specanom
