#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "specanom/common.hpp"

namespace specanom {

enum class SpectrumKind { affine, torus, generic };

std::string to_string(SpectrumKind kind);

/// Which half of the circle's Fourier modes a ray enumerates, for bridging
/// to symbols: `plus` covers modes ξ → +∞, `minus` modes ξ → −∞.
enum class RaySide : int { none = 0, plus = 1, minus = -1 };

/// Eigenvalues λ_n = scale · x^power · (1 + Σ_j corrections[j-1] x^{-j}),
/// x = n + offset, n = 0, 1, 2, ..., each with the given multiplicity.
///
/// For circle rays, x = |ξ| + mode_shift identifies the ray with the
/// Fourier modes on `side`.
struct Ray {
  cplx scale = 1.0;
  double offset = 1.0;
  double power = 1.0;
  int multiplicity = 1;
  std::vector<double> corrections;
  RaySide side = RaySide::none;
  double mode_shift = 0.0;

  [[nodiscard]] cplx value(double x) const;
  [[nodiscard]] bool pure_power() const { return corrections.empty(); }
};

struct Eigenvalue {
  cplx value;
  int multiplicity = 1;
};

/// λ_k = scale · Π_i (|k|² + masses[i])^power over k ∈ ℤ^dim. At most two
/// masses are supported (products of two commuting shifted Laplacians).
struct LatticeTail {
  int dim = 1;
  std::vector<double> masses;
  double scale = 1.0;
  double power = 1.0;

  [[nodiscard]] double value(std::int64_t n) const;  // at |k|² = n
};

struct SpectralFlags {
  bool self_adjoint = false;
  bool positive = false;
  bool invertible = false;
};

/// Spectral cut: branches of λ^{-z} and log λ take arg ∈ (θ − 2π, θ].
/// The default θ = π places negative reals on the cut, approached from
/// above: log λ = log|λ| + iπ for λ < 0.
struct SpectralCut {
  double angle = kPi;

  [[nodiscard]] static SpectralCut principal() { return {}; }
  [[nodiscard]] bool is_principal() const;
  /// arg of a nonzero complex number on this cut's branch.
  [[nodiscard]] double arg(cplx value) const;
  [[nodiscard]] cplx log(cplx value) const;
  /// Throws DomainError if the value lies on a non-principal cut ray.
  void check(cplx value) const;
};

/// How a zero eigenvalue enters zeta sums.
struct KernelPolicy {
  enum class Mode { fill, exclude };
  Mode mode = Mode::fill;
  double fill_value = 1.0;  // the kernel projection adds this eigenvalue

  [[nodiscard]] static KernelPolicy fill(double value = 1.0) { return {Mode::fill, value}; }
  [[nodiscard]] static KernelPolicy exclude() { return {Mode::exclude, 1.0}; }
};

/// Point transforms applied eigenvalue-wise.
struct SpectrumOp {
  enum class Kind { abs, square, scale, shift, power, invert_on_complement };
  Kind kind = Kind::abs;
  double value = 0.0;

  static SpectrumOp abs() { return {Kind::abs, 0.0}; }
  static SpectrumOp square() { return {Kind::square, 0.0}; }
  static SpectrumOp scale(double c) { return {Kind::scale, c}; }
  static SpectrumOp shift(double alpha) { return {Kind::shift, alpha}; }
  static SpectrumOp power(double s) { return {Kind::power, s}; }
  static SpectrumOp invert_on_complement() { return {Kind::invert_on_complement, 0.0}; }
};

/// Model operator spectrum: a finite list of exceptional eigenvalues plus
/// either a set of rays or a lattice tail. Immutable once built.
class Spectrum {
 public:
  Spectrum() = default;

  [[nodiscard]] static Spectrum from_rays(std::vector<Ray> rays, std::vector<Eigenvalue> extras,
                                          double order, bool self_adjoint);
  [[nodiscard]] static Spectrum from_lattice(LatticeTail lattice, bool self_adjoint = true);
  [[nodiscard]] static Spectrum finite(std::vector<Eigenvalue> values, double order,
                                       bool self_adjoint);

  [[nodiscard]] SpectrumKind kind() const { return kind_; }
  [[nodiscard]] double order() const { return order_; }
  [[nodiscard]] const SpectralFlags& flags() const { return flags_; }
  [[nodiscard]] const std::vector<Ray>& rays() const { return rays_; }
  [[nodiscard]] const std::vector<Eigenvalue>& extras() const { return extras_; }
  [[nodiscard]] const std::optional<LatticeTail>& lattice() const { return lattice_; }

  /// Total multiplicity of the zero eigenvalue.
  [[nodiscard]] int kernel_dimension() const;
  [[nodiscard]] bool is_real() const;

  /// Eigenvalues with |λ| ≤ bound, sorted by (|λ|, sign/arg), multiplicities merged.
  [[nodiscard]] std::vector<Eigenvalue> eigenvalues_up_to(double bound) const;
  /// The first `count` distinct eigenvalues in enumeration order.
  [[nodiscard]] std::vector<Eigenvalue> prefix(std::size_t count) const;

  /// Same ray layout / lattice geometry, so two spectra are simultaneously
  /// diagonal in a common enumeration.
  [[nodiscard]] bool same_enumeration(const Spectrum& other) const;

  /// Checks the smallest eigenvalues avoid a non-principal cut ray.
  void check_cut(const SpectralCut& cut) const;

 private:
  void refresh_flags();

  SpectrumKind kind_ = SpectrumKind::affine;
  double order_ = 1.0;
  std::vector<Ray> rays_;
  std::vector<Eigenvalue> extras_;
  std::optional<LatticeTail> lattice_;
  SpectralFlags flags_;
};

struct GradedSpectrum {
  Spectrum plus;
  Spectrum minus;
};

// Catalog constructors ------------------------------------------------------

/// {n + a : n ∈ ℤ}, the Dirac operator −i d/dx + a on the circle.
Spectrum circle_dirac(double a);

/// Λ = {|n| : n ≠ 0}, the modulus of the circle Dirac operator on the
/// complement of its kernel, scaled by `scale`.
Spectrum circle_modulus(double scale = 1.0);

/// |n|·plus for n > 0 and |n|·minus for n < 0; same enumeration as Λ.
Spectrum asymmetric_modulus(double plus, double minus);

/// {|k|² + m2 : k ∈ ℤ^d} for d ∈ {1, 2, 3, 4}.
Spectrum torus_laplacian_shifted(int d, double m2);

/// λ_k = c k^p (1 + Σ_j coeffs[j-1] k^{-j}), k ≥ 1.
Spectrum generic_spectrum(double c, double p, std::vector<double> coeffs);

Spectrum transform(const Spectrum& spec, const SpectrumOp& op);

/// {±iλ : λ ∈ D}: the spectrum of [[0, −D], [D, 0]].
Spectrum skew_double(const Spectrum& d);

/// Eigenvalue-wise product of two spectra sharing an enumeration.
Spectrum product(const Spectrum& a, const Spectrum& b);

GradedSpectrum graded(Spectrum plus, Spectrum minus);

/// Empty spectrum of the given order (the trivial graded part).
Spectrum empty_spectrum(double order);

/// Total multiplicity of eigenvalues in [lo, hi]; spectrum must be real.
std::int64_t eig_count_in(const Spectrum& spec, double lo, double hi);

// JSON model descriptors ----------------------------------------------------

/// Builds a spectrum from a descriptor such as
/// {"kind": "circle_dirac", "a": 0.25} or
/// {"kind": "transform", "base": {...}, "op": "square"}.
/// String values of "base", "left" or "right" are resolved through `resolve`.
using ModelResolver = std::function<Spectrum(const std::string&)>;
Spectrum spectrum_from_json(const nlohmann::json& descriptor, const ModelResolver& resolve = {});

/// Lattice point counts r_d(n) = #{k ∈ ℤ^d : |k|² = n} for n ≤ max_n.
std::vector<std::int64_t> lattice_counts(int dim, std::int64_t max_n);

}  // namespace specanom
