#include <cmath>

#include "specanom/symbols.hpp"

namespace specanom {
namespace {

constexpr std::size_t kTailLength = series::kDefaultLength;

// Numeric copy of one factor: coeffs[j][side] maps Fourier mode → value.
struct Factor {
  double order = 0.0;
  std::vector<std::array<std::map<int, cplx>, 2>> coeffs;
  std::vector<int> modes;

  explicit Factor(const ExactSymbol& s) : order(to_double(s.order())) {
    for (int j = 0; j <= s.depth(); ++j) {
      std::array<std::map<int, cplx>, 2> c;
      for (const auto& [m, v] : s.component(j).plus) c[0][m] = v.to_cplx();
      for (const auto& [m, v] : s.component(j).minus) c[1][m] = v.to_cplx();
      for (const auto& side : c) {
        for (const auto& [m, v] : side) {
          if (std::find(modes.begin(), modes.end(), m) == modes.end()) modes.push_back(m);
        }
      }
      coeffs.push_back(std::move(c));
    }
  }

  // Matrix element ⟨e_{n+m}, Op e_n⟩; zero on the kernel mode.
  [[nodiscard]] cplx apply(std::int64_t n, int m) const {
    if (n == 0) return 0.0;
    const std::size_t side = n > 0 ? 0 : 1;
    const double x = std::abs(static_cast<double>(n));
    cplx acc = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      const auto it = coeffs[j][side].find(m);
      if (it != coeffs[j][side].end()) acc += it->second * std::pow(x, order - static_cast<double>(j));
    }
    return acc;
  }
};

void enumerate_paths(const std::vector<Factor>& factors, std::size_t i, int sum, std::vector<int>& path,
                     std::vector<std::vector<int>>& out) {
  if (i == factors.size()) {
    if (sum == 0) out.push_back(path);
    return;
  }
  for (int m : factors[i].modes) {
    path[i] = m;
    enumerate_paths(factors, i + 1, sum + m, path, out);
  }
}

// Π factors applied right to left along the mode path, starting at e_n.
cplx path_value(const std::vector<Factor>& factors, const std::vector<int>& path, std::int64_t n) {
  cplx v = 1.0;
  std::int64_t cur = n;
  for (std::size_t i = factors.size(); i-- > 0;) {
    v *= factors[i].apply(cur, path[i]);
    if (v == cplx(0.0)) return 0.0;
    cur += path[i];
  }
  return v;
}

void merge_term(std::vector<MultiplierTerm>& terms, MultiplierTerm t) {
  for (auto& e : terms) {
    if (std::abs(e.power - t.power) < 1e-12) {
      e.series = series::add(series::scale(e.series, e.coeff), series::scale(t.series, t.coeff));
      e.coeff = 1.0;
      return;
    }
  }
  terms.push_back(std::move(t));
}

}  // namespace

ModeOperatorTrace::ModeOperatorTrace(const Spectrum& weight, const ZetaOptions& options)
    : weight_(weight), options_(options) {
  bool plus = false;
  bool minus = false;
  for (const auto& r : weight.rays()) {
    const bool starts_at_one = std::abs(r.offset - 1.0) < 1e-12 && r.mode_shift == 0.0;
    if (!starts_at_one || r.multiplicity != 1 || r.side == RaySide::none) {
      throw DomainError("mode trace: the weight must enumerate the circle modes n ≠ 0 on two rays");
    }
    (r.side == RaySide::plus ? plus : minus) = true;
  }
  if (!plus || !minus || weight.rays().size() != 2 || weight.extras().size() > 1 || weight.lattice()) {
    throw DomainError("mode trace: the weight must enumerate the circle modes n ≠ 0 on two rays, plus at most the zero mode");
  }
  rays_.resize(2);
}

void ModeOperatorTrace::add_product(cplx coeff, const std::vector<ExactSymbol>& symbols) {
  if (symbols.empty()) throw DomainError("mode trace: empty product");
  std::vector<Factor> factors;
  factors.reserve(symbols.size());
  for (const auto& s : symbols) factors.emplace_back(s);
  std::vector<std::vector<int>> paths;
  std::vector<int> path(factors.size());
  enumerate_paths(factors, 0, 0, path, paths);

  for (const auto& p : paths) kernel_value_ += coeff * path_value(factors, p, 0);

  for (std::size_t ri = 0; ri < 2; ++ri) {
    const Ray& ray = weight_.rays()[ri];
    const int sigma = ray.side == RaySide::plus ? 1 : -1;
    const std::size_t side = sigma > 0 ? 0 : 1;
    RayMultiplier& target = rays_[ri];
    for (const auto& p : paths) {
      // Tail: factor i sees the mode σx + s_i with s_i the shift already applied.
      std::vector<MultiplierTerm> terms{{coeff, 0.0, 0, {1.0}}};
      int shift = 0;
      for (std::size_t i = factors.size(); i-- > 0;) {
        const Factor& f = factors[i];
        std::vector<MultiplierTerm> next;
        for (std::size_t j = 0; j < f.coeffs.size(); ++j) {
          const auto it = f.coeffs[j][side].find(p[i]);
          if (it == f.coeffs[j][side].end()) continue;
          const double power = f.order - static_cast<double>(j);
          const series::Series shifted = series::pow({1.0, double(sigma * shift)}, power, kTailLength);
          for (const auto& t : terms) {
            merge_term(next, {t.coeff * it->second, t.power + power, 0, series::mul(t.series, shifted, kTailLength)});
          }
        }
        terms = std::move(next);
        shift += p[i];
      }
      for (auto& t : terms) merge_term(target.terms, std::move(t));
    }
    auto previous = target.exact;
    target.exact = [factors, paths, coeff, sigma, previous](double x) {
      const auto n = static_cast<std::int64_t>(std::llround(x)) * sigma;
      cplx v = previous ? previous(x) : cplx(0.0);
      for (const auto& p : paths) v += coeff * path_value(factors, p, n);
      return v;
    };
  }
}

MeromorphicGerm ModeOperatorTrace::germ() const {
  if (weight_.extras().size() == 1) {
    return weighted_trace_germ(Multiplier::from_parts(weight_, rays_, {kernel_value_}), weight_, options_);
  }
  // Zero mode outside the weight's layout: it enters as the kernel fill-in,
  // whose single term λ^{−z} contributes its coefficient at z = 0.
  MeromorphicGerm g = weighted_trace_germ(Multiplier::from_parts(weight_, rays_, {}), weight_, options_);
  if (options_.kernel.mode == KernelPolicy::Mode::fill) g.finite_part += kernel_value_;
  return g;
}

cplx radul_operator_side(const ExactSymbol& a, const ExactSymbol& b, const Spectrum& weight,
                         const ZetaOptions& options) {
  ModeOperatorTrace t(weight, options);
  t.add_product(1.0, {a, b});
  t.add_product(-1.0, {b, a});
  return t.germ().finite_part;
}

cplx radul_operator_side_graded(const GradedSymbol<ComplexRational>& a, const GradedSymbol<ComplexRational>& b,
                                const Spectrum& weight_plus, const Spectrum& weight_minus,
                                const ZetaOptions& options) {
  if (a.parity != b.parity) return 0.0;
  const double eps = (a.parity * b.parity) % 2 == 0 ? 1.0 : -1.0;
  cplx total = 0.0;
  for (std::size_t r = 0; r < 2; ++r) {
    ModeOperatorTrace t(r == 0 ? weight_plus : weight_minus, options);
    bool any = false;
    for (std::size_t k = 0; k < 2; ++k) {
      if (!a.blocks[r][k].is_zero() && !b.blocks[k][r].is_zero()) {
        t.add_product(1.0, {a.blocks[r][k], b.blocks[k][r]});
        any = true;
      }
      if (!b.blocks[r][k].is_zero() && !a.blocks[k][r].is_zero()) {
        t.add_product(-eps, {b.blocks[r][k], a.blocks[k][r]});
        any = true;
      }
    }
    if (any) total += (r == 0 ? 1.0 : -1.0) * t.germ().finite_part;
  }
  return total;
}

NumericSymbol multiplier_to_symbol(const Multiplier& m, int depth) {
  if (m.lattice()) throw SymbolError("multiplier symbol: lattice multipliers have no circle symbol");
  const auto& geometry = m.geometry();
  std::array<int, 2> ray_of{-1, -1};
  for (std::size_t i = 0; i < geometry.size(); ++i) {
    if (geometry[i].side == RaySide::none) continue;
    int& slot = ray_of[geometry[i].side == RaySide::plus ? 0 : 1];
    if (slot >= 0) throw SymbolError("multiplier symbol: several rays on one half-line");
    slot = static_cast<int>(i);
  }
  if (ray_of[0] < 0 || ray_of[1] < 0) throw SymbolError("multiplier symbol: the layout does not cover both half-lines");

  double top = -std::numeric_limits<double>::infinity();
  for (int idx : ray_of) {
    for (const auto& t : m.rays()[static_cast<std::size_t>(idx)].terms) {
      if (t.coeff != cplx(0.0)) top = std::max(top, t.power);
    }
  }
  if (!std::isfinite(top)) return NumericSymbol(0, depth);
  const Rational order = rational_approx(top);
  if (std::abs(to_double(order) - top) > 1e-12) throw SymbolError("multiplier symbol: order is not rational");

  NumericSymbol out(order, depth);
  for (std::size_t si = 0; si < 2; ++si) {
    const auto idx = static_cast<std::size_t>(ray_of[si]);
    const RaySide side = si == 0 ? RaySide::plus : RaySide::minus;
    const double ms = geometry[idx].mode_shift;
    for (const auto& t : m.rays()[idx].terms) {
      if (t.coeff == cplx(0.0)) continue;
      if (t.log_degree != 0) throw SymbolError("multiplier symbol: log terms are not polyhomogeneous");
      const double gap = top - t.power;
      const double j0 = std::round(gap);
      if (std::abs(gap - j0) > 1e-9) throw SymbolError("multiplier symbol: powers differ by a non-integer");
      const int len = depth + 1 - static_cast<int>(j0);
      if (len <= 0) continue;
      // x = |ξ| + ms: x^r S(1/x) = |ξ|^r (1 + ms v)^r S(v/(1 + ms v)), v = 1/|ξ|.
      const auto n = static_cast<std::size_t>(len);
      series::Series w(n, 0.0);
      cplx p = 1.0;
      for (std::size_t k = 1; k < n; ++k) {
        w[k] = p;
        p *= -ms;
      }
      const series::Series inner = n > 1 ? series::compose(t.series, w, n) : series::truncate(t.series, 1);
      const series::Series full = series::mul(series::pow({1.0, ms}, t.power, n), inner, n);
      for (std::size_t k = 0; k < n && k < full.size(); ++k) {
        out.add_to(static_cast<int>(j0) + static_cast<int>(k), side, 0, t.coeff * full[k]);
      }
    }
  }
  return out;
}

}  // namespace specanom
