#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "specanom/czeta.hpp"
#include "specanom/multiplier.hpp"
#include "specanom/rational.hpp"

namespace specanom {

inline constexpr int kDefaultSymbolDepth = 6;

/// Finite Fourier series Σ_m c_m e^{imx}; zero coefficients are never stored.
template <class C>
using Fourier = std::map<int, C>;

/// a_j^±(x) of σ_{m−j}(x, ξ) = a_j^±(x)|ξ|^{m−j} on ±ξ > 0.
template <class C>
struct SymbolComponent {
  Fourier<C> plus;
  Fourier<C> minus;

  [[nodiscard]] const Fourier<C>& side(RaySide s) const { return s == RaySide::plus ? plus : minus; }
  [[nodiscard]] Fourier<C>& side(RaySide s) { return s == RaySide::plus ? plus : minus; }
};

/// Truncated classical symbol on the circle: components j = 0..depth of
/// degree order − j. Exact for C = ComplexRational.
template <class C>
class PolyhomSymbol {
 public:
  using coeff_type = C;

  PolyhomSymbol() : PolyhomSymbol(Rational(0)) {}
  explicit PolyhomSymbol(Rational order, int depth = kDefaultSymbolDepth);

  /// e^{imx}(c₊, c₋)|ξ|^order.
  [[nodiscard]] static PolyhomSymbol monomial(Rational order, const C& plus, const C& minus, int mode = 0,
                                              int depth = kDefaultSymbolDepth);
  [[nodiscard]] static PolyhomSymbol identity(int depth = kDefaultSymbolDepth);
  /// ξ/|ξ|.
  [[nodiscard]] static PolyhomSymbol sign(int depth = kDefaultSymbolDepth);

  [[nodiscard]] const Rational& order() const { return order_; }
  [[nodiscard]] int depth() const { return depth_; }
  /// Components below this degree are not computed.
  [[nodiscard]] Rational trusted_to() const { return order_ - depth_; }
  [[nodiscard]] const SymbolComponent<C>& component(int j) const;
  [[nodiscard]] C coefficient(int j, RaySide side, int mode) const;
  void add_to(int j, RaySide side, int mode, const C& value);

  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] bool x_independent() const;
  /// a_0^± nowhere zero: exact for constant data, on a 256-point grid otherwise.
  [[nodiscard]] bool elliptic() const;
  /// Component index of the given degree, if it is order − j for 0 ≤ j.
  [[nodiscard]] std::optional<int> index_of_degree(const Rational& degree) const;

  PolyhomSymbol& operator+=(const PolyhomSymbol& other);
  PolyhomSymbol& operator-=(const PolyhomSymbol& other);
  PolyhomSymbol& operator*=(const C& c);
  friend PolyhomSymbol operator+(PolyhomSymbol a, const PolyhomSymbol& b) { return a += b; }
  friend PolyhomSymbol operator-(PolyhomSymbol a, const PolyhomSymbol& b) { return a -= b; }
  friend PolyhomSymbol operator*(PolyhomSymbol a, const C& c) { return a *= c; }
  friend PolyhomSymbol operator*(const C& c, PolyhomSymbol a) { return a *= c; }
  /// Same order, depth and coefficients (coefficients compared exactly).
  friend bool operator==(const PolyhomSymbol& a, const PolyhomSymbol& b) {
    return a.order_ == b.order_ && a.depth_ == b.depth_ && a.comps_ == b.comps_;
  }

  /// Same symbol truncated to a smaller depth.
  [[nodiscard]] PolyhomSymbol truncated(int depth) const;

 private:
  Rational order_;
  int depth_;
  std::vector<SymbolComponent<C>> comps_;
};

template <class C>
bool operator==(const SymbolComponent<C>& a, const SymbolComponent<C>& b) {
  return a.plus == b.plus && a.minus == b.minus;
}

using ExactSymbol = PolyhomSymbol<ComplexRational>;
using NumericSymbol = PolyhomSymbol<cplx>;

NumericSymbol to_numeric(const ExactSymbol& s);

/// σ(AB) ~ Σ_k (1/k!) ∂_ξ^k σ_A · D_x^k σ_B, D_x = −i∂_x, truncated at the
/// smaller depth.
template <class C>
PolyhomSymbol<C> compose(const PolyhomSymbol<C>& a, const PolyhomSymbol<C>& b);

template <class C>
PolyhomSymbol<C> commutator(const PolyhomSymbol<C>& a, const PolyhomSymbol<C>& b);

/// Sum of the zeroth Fourier coefficients of the degree −1 component over
/// both half-lines. Throws SymbolError when that degree lies below the depth.
template <class C>
C wres(const PolyhomSymbol<C>& a);

/// Symbol of [log|ξ|, B]: Σ_{k≥1} ((−1)^{k−1}(±1)^k / k)|ξ|^{−k} D_x^k b.
template <class C>
PolyhomSymbol<C> log_bracket(const PolyhomSymbol<C>& b);

/// log Q = log_weight·log|ξ| + constant_± + rest, rest of order −1.
template <class C>
struct LogPolyhomSymbol {
  Rational log_weight;
  std::array<cplx, 2> constant{};  // log a_0^+, log a_0^−
  PolyhomSymbol<C> rest;

  /// Order-zero classical part constant_± + rest.
  [[nodiscard]] NumericSymbol classical() const;
};

/// Logarithm of an elliptic x-independent symbol of positive order with
/// leading coefficients off the cut.
template <class C>
LogPolyhomSymbol<C> log_symbol(const PolyhomSymbol<C>& q, const SpectralCut& cut = SpectralCut::principal());

/// log Q1/q1 − log Q2/q2, a classical symbol of order 0.
template <class C>
NumericSymbol log_difference(const LogPolyhomSymbol<C>& l1, const LogPolyhomSymbol<C>& l2);

/// Symbol of [log Q, B]; the ray constants commute with B and drop out.
template <class C>
PolyhomSymbol<C> bracket(const LogPolyhomSymbol<C>& log_q, const PolyhomSymbol<C>& b);

/// tr^Q([A, B]) = (1/q)·res(A[log Q, B]).
template <class C>
C radul_cocycle(const PolyhomSymbol<C>& a, const PolyhomSymbol<C>& b, const PolyhomSymbol<C>& q);

/// 2×2 block symbol on E⁺ ⊕ E⁻; blocks[r][c] maps E^c to E^r, index 0 is +.
template <class C>
struct GradedSymbol {
  std::array<std::array<PolyhomSymbol<C>, 2>, 2> blocks;
  int parity = 0;  // 0 even (diagonal), 1 odd (off-diagonal)

  [[nodiscard]] static GradedSymbol even(PolyhomSymbol<C> pp, PolyhomSymbol<C> mm);
  [[nodiscard]] static GradedSymbol odd(PolyhomSymbol<C> pm, PolyhomSymbol<C> mp);
};

template <class C>
GradedSymbol<C> compose(const GradedSymbol<C>& a, const GradedSymbol<C>& b);

/// res(ΓA) = res(A₊₊) − res(A₋₋).
template <class C>
C sres(const GradedSymbol<C>& a);

/// str^Q([A, B]_s) = (1/q)·sres(A[log Q, B]) for Q = diag(Q₊, Q₋) of one
/// order; [A, B]_s = AB − (−1)^{|A||B|}BA. Zero when the parities differ.
template <class C>
C radul_cocycle_graded(const GradedSymbol<C>& a, const GradedSymbol<C>& b, const PolyhomSymbol<C>& q_plus,
                       const PolyhomSymbol<C>& q_minus);

/// tr^{Q1}(A) − tr^{Q2}(A) = −res(A(log Q1/q1 − log Q2/q2)).
template <class C>
cplx weight_dependence(const PolyhomSymbol<C>& a, const PolyhomSymbol<C>& q1, const PolyhomSymbol<C>& q2);

/// d/dt tr^{Q_t}(A) = −(1/q)·res(A·d log Q_t).
cplx dtr_family(const NumericSymbol& a, const NumericSymbol& dlog_q, double q_order);
ComplexRational dtr_family(const ExactSymbol& a, const ExactSymbol& dlog_q, const Rational& q_order);

/// d/dt tr^{Q_t}(A) at t = 0 for Q_t = e^{−tB}Qe^{tB}; d log Q_t = [log Q, B].
template <class C>
C dtr_conjugation(const PolyhomSymbol<C>& a, const PolyhomSymbol<C>& b, const PolyhomSymbol<C>& q);

/// x-independent symbol of a multiplier diagonal in e^{inx}: the ± ray tails,
/// re-expanded in |ξ| when the ray variable is |n| + shift.
NumericSymbol multiplier_to_symbol(const Multiplier& m, int depth = kDefaultSymbolDepth);

/// The operator Op(a)e_n = Σ_{j,m} a_{j,m}^{sgn n}|n|^{order−j}e_{n+m} (zero on
/// e_0) and its products, summed on the diagonal against a weight spectrum
/// laid out on modes n ≠ 0; the zero mode is its extra eigenvalue if present,
/// otherwise the kernel fill-in.
class ModeOperatorTrace {
 public:
  explicit ModeOperatorTrace(const Spectrum& weight, const ZetaOptions& options = {});

  /// Diagonal multiplier of the sum of products, Σ_i c_i·Π_k Op(s_{i,k}).
  void add_product(cplx coeff, const std::vector<ExactSymbol>& factors);
  [[nodiscard]] MeromorphicGerm germ() const;

 private:
  Spectrum weight_;
  ZetaOptions options_;
  std::vector<RayMultiplier> rays_;
  cplx kernel_value_ = 0.0;
};

/// tr^Q([A, B]) by mode-sum continuation on the operator side.
cplx radul_operator_side(const ExactSymbol& a, const ExactSymbol& b, const Spectrum& weight,
                         const ZetaOptions& options = {});
/// str^Q([A, B]_s) by mode sums, Q = diag(weight₊, weight₋).
cplx radul_operator_side_graded(const GradedSymbol<ComplexRational>& a, const GradedSymbol<ComplexRational>& b,
                                const Spectrum& weight_plus, const Spectrum& weight_minus,
                                const ZetaOptions& options = {});

nlohmann::json to_json(const ExactSymbol& s);
nlohmann::json to_json(const NumericSymbol& s);
/// Accepts the to_json layout, or {"order", "depth"?, "terms": [{"j"?, "mode"?,
/// "plus", "minus"}]} with coefficients as "p/q" strings or {"re", "im"}.
ExactSymbol symbol_from_json(const nlohmann::json& j);

}  // namespace specanom
