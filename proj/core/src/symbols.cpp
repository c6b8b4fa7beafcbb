#include "specanom/symbols.hpp"

#include <algorithm>
#include <cmath>

namespace specanom {
namespace {

constexpr std::array<RaySide, 2> kSides{RaySide::plus, RaySide::minus};

template <class C>
C from_rational(const Rational& r);
template <>
ComplexRational from_rational<ComplexRational>(const Rational& r) {
  return ComplexRational(r);
}
template <>
cplx from_rational<cplx>(const Rational& r) {
  return to_double(r);
}

bool coeff_is_zero(const ComplexRational& c) { return c.is_zero(); }
bool coeff_is_zero(const cplx& c) { return c == cplx(0.0); }
cplx as_cplx(const ComplexRational& c) { return c.to_cplx(); }
cplx as_cplx(const cplx& c) { return c; }

Rational falling(const Rational& s, int k) {
  Rational out = 1;
  for (int i = 0; i < k; ++i) out *= s - i;
  return out;
}

int integer_of(const Rational& r) { return boost::multiprecision::numerator(r).convert_to<int>(); }

template <class C>
NumericSymbol numeric(const PolyhomSymbol<C>& s) {
  if constexpr (std::is_same_v<C, cplx>) {
    return s;
  } else {
    return to_numeric(s);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// PolyhomSymbol

template <class C>
PolyhomSymbol<C>::PolyhomSymbol(Rational order, int depth) : order_(std::move(order)), depth_(depth) {
  if (depth < 0) throw SymbolError("symbol: negative truncation depth");
  comps_.resize(static_cast<std::size_t>(depth) + 1);
}

template <class C>
PolyhomSymbol<C> PolyhomSymbol<C>::monomial(Rational order, const C& plus, const C& minus, int mode, int depth) {
  PolyhomSymbol s(std::move(order), depth);
  s.add_to(0, RaySide::plus, mode, plus);
  s.add_to(0, RaySide::minus, mode, minus);
  return s;
}

template <class C>
PolyhomSymbol<C> PolyhomSymbol<C>::identity(int depth) {
  return monomial(0, from_rational<C>(1), from_rational<C>(1), 0, depth);
}

template <class C>
PolyhomSymbol<C> PolyhomSymbol<C>::sign(int depth) {
  return monomial(0, from_rational<C>(1), from_rational<C>(-1), 0, depth);
}

template <class C>
const SymbolComponent<C>& PolyhomSymbol<C>::component(int j) const {
  if (j < 0 || j > depth_) throw SymbolError("symbol: component index outside the truncation depth");
  return comps_[static_cast<std::size_t>(j)];
}

template <class C>
C PolyhomSymbol<C>::coefficient(int j, RaySide side, int mode) const {
  const auto& f = component(j).side(side);
  const auto it = f.find(mode);
  return it == f.end() ? C{} : it->second;
}

template <class C>
void PolyhomSymbol<C>::add_to(int j, RaySide side, int mode, const C& value) {
  if (j < 0) throw SymbolError("symbol: negative component index");
  if (j > depth_ || coeff_is_zero(value)) return;
  if (side == RaySide::none) throw SymbolError("symbol: coefficient needs a half-line");
  auto& f = comps_[static_cast<std::size_t>(j)].side(side);
  auto [it, inserted] = f.try_emplace(mode, value);
  if (!inserted) {
    it->second += value;
    if (coeff_is_zero(it->second)) f.erase(it);
  }
}

template <class C>
bool PolyhomSymbol<C>::is_zero() const {
  return std::all_of(comps_.begin(), comps_.end(), [](const auto& c) { return c.plus.empty() && c.minus.empty(); });
}

template <class C>
bool PolyhomSymbol<C>::x_independent() const {
  for (const auto& c : comps_) {
    for (RaySide s : kSides) {
      for (const auto& [mode, v] : c.side(s)) {
        if (mode != 0) return false;
      }
    }
  }
  return true;
}

template <class C>
bool PolyhomSymbol<C>::elliptic() const {
  for (RaySide s : kSides) {
    const auto& f = comps_[0].side(s);
    if (f.empty()) return false;
    if (x_independent()) continue;
    constexpr int kGrid = 256;
    double scale = 0.0;
    for (const auto& [mode, v] : f) scale += std::abs(as_cplx(v));
    for (int i = 0; i < kGrid; ++i) {
      const double x = 2.0 * kPi * i / kGrid;
      cplx acc = 0.0;
      for (const auto& [mode, v] : f) acc += as_cplx(v) * std::exp(cplx(0.0, mode * x));
      if (std::abs(acc) <= 1e-12 * scale) return false;
    }
  }
  return true;
}

template <class C>
std::optional<int> PolyhomSymbol<C>::index_of_degree(const Rational& degree) const {
  const Rational j = order_ - degree;
  if (!is_integer(j) || j < 0) return std::nullopt;
  return integer_of(j);
}

template <class C>
PolyhomSymbol<C>& PolyhomSymbol<C>::operator+=(const PolyhomSymbol& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = other;
  const Rational gap = order_ - other.order_;
  if (!is_integer(gap)) throw SymbolError("symbol: orders of summands differ by a non-integer");
  const Rational order = std::max(order_, other.order_);
  const Rational trusted = std::max(trusted_to(), other.trusted_to());
  PolyhomSymbol out(order, integer_of(order - trusted));
  for (const PolyhomSymbol* s : std::array<const PolyhomSymbol*, 2>{this, &other}) {
    const int shift = integer_of(order - s->order_);
    for (int j = 0; j <= s->depth_; ++j) {
      for (RaySide side : kSides) {
        for (const auto& [mode, v] : s->comps_[static_cast<std::size_t>(j)].side(side)) out.add_to(j + shift, side, mode, v);
      }
    }
  }
  return *this = std::move(out);
}

template <class C>
PolyhomSymbol<C>& PolyhomSymbol<C>::operator-=(const PolyhomSymbol& other) {
  return *this += other * from_rational<C>(-1);
}

template <class C>
PolyhomSymbol<C>& PolyhomSymbol<C>::operator*=(const C& c) {
  for (auto& comp : comps_) {
    for (RaySide side : kSides) {
      auto& f = comp.side(side);
      for (auto it = f.begin(); it != f.end();) {
        it->second *= c;
        it = coeff_is_zero(it->second) ? f.erase(it) : std::next(it);
      }
    }
  }
  return *this;
}

template <class C>
PolyhomSymbol<C> PolyhomSymbol<C>::truncated(int depth) const {
  if (depth > depth_) throw SymbolError("symbol: cannot extend a truncation");
  PolyhomSymbol out(order_, depth);
  for (int j = 0; j <= depth; ++j) out.comps_[static_cast<std::size_t>(j)] = comps_[static_cast<std::size_t>(j)];
  return out;
}

NumericSymbol to_numeric(const ExactSymbol& s) {
  NumericSymbol out(s.order(), s.depth());
  for (int j = 0; j <= s.depth(); ++j) {
    for (RaySide side : kSides) {
      for (const auto& [mode, v] : s.component(j).side(side)) out.add_to(j, side, mode, v.to_cplx());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Calculus

template <class C>
PolyhomSymbol<C> compose(const PolyhomSymbol<C>& a, const PolyhomSymbol<C>& b) {
  const int depth = std::min(a.depth(), b.depth());
  PolyhomSymbol<C> out(a.order() + b.order(), depth);
  for (int ja = 0; ja <= depth; ++ja) {
    const Rational degree_a = a.order() - ja;
    for (RaySide side : kSides) {
      const auto& fa = a.component(ja).side(side);
      if (fa.empty()) continue;
      const int sgn = side == RaySide::plus ? 1 : -1;
      for (int jb = 0; ja + jb <= depth; ++jb) {
        const auto& fb = b.component(jb).side(side);
        for (int k = 0; ja + jb + k <= depth; ++k) {
          // (1/k!)·∂_ξ^k|ξ|^s = (±1)^k·fall(s, k)/k!·|ξ|^{s−k}
          Rational factor = falling(degree_a, k);
          for (int i = 2; i <= k; ++i) factor /= i;
          if (k % 2 == 1) factor *= sgn;
          if (factor == 0) break;
          for (const auto& [ma, ca] : fa) {
            for (const auto& [mb, cb] : fb) {
              if (k > 0 && mb == 0) continue;
              Rational dx = 1;  // D_x^k e^{imx} = m^k e^{imx}
              for (int i = 0; i < k; ++i) dx *= mb;
              out.add_to(ja + jb + k, side, ma + mb, ca * cb * from_rational<C>(factor * dx));
            }
          }
        }
      }
    }
  }
  return out;
}

template <class C>
PolyhomSymbol<C> commutator(const PolyhomSymbol<C>& a, const PolyhomSymbol<C>& b) {
  return compose(a, b) - compose(b, a);
}

template <class C>
C wres(const PolyhomSymbol<C>& a) {
  const auto j = a.index_of_degree(Rational(-1));
  if (!j) return C{};
  if (*j > a.depth()) throw SymbolError("wres: depth exhausted before degree -1");
  return a.coefficient(*j, RaySide::plus, 0) + a.coefficient(*j, RaySide::minus, 0);
}

template <class C>
PolyhomSymbol<C> log_bracket(const PolyhomSymbol<C>& b) {
  if (b.depth() < 1) throw SymbolError("log bracket: depth exhausted");
  PolyhomSymbol<C> out(b.order() - 1, b.depth() - 1);
  for (int j = 0; j <= b.depth(); ++j) {
    for (RaySide side : kSides) {
      const int sgn = side == RaySide::plus ? 1 : -1;
      for (const auto& [m, c] : b.component(j).side(side)) {
        if (m == 0) continue;
        for (int k = 1; j + k <= b.depth(); ++k) {
          // ((−1)^{k−1}(±1)^k/k)·m^k
          Rational f(1, k);
          for (int i = 0; i < k; ++i) f *= -sgn * m;
          f = -f;
          out.add_to(j + k - 1, side, m, c * from_rational<C>(f));
        }
      }
    }
  }
  return out;
}

template <class C>
NumericSymbol LogPolyhomSymbol<C>::classical() const {
  NumericSymbol out(0, rest.depth() + 1);
  out.add_to(0, RaySide::plus, 0, constant[0]);
  out.add_to(0, RaySide::minus, 0, constant[1]);
  return out + numeric(rest);
}

template <class C>
LogPolyhomSymbol<C> log_symbol(const PolyhomSymbol<C>& q, const SpectralCut& cut) {
  if (!(q.order() > 0)) throw SymbolError("log symbol: the weight must have positive order");
  if (!q.x_independent()) throw SymbolError("log symbol: only x-independent weights are supported");
  if (!q.elliptic()) throw SymbolError("log symbol: the weight is not elliptic");
  if (q.depth() < 1) throw SymbolError("log symbol: depth exhausted");
  LogPolyhomSymbol<C> out;
  out.log_weight = q.order();
  out.rest = PolyhomSymbol<C>(Rational(-1), q.depth() - 1);
  const int n = q.depth();
  for (std::size_t si = 0; si < 2; ++si) {
    const RaySide side = kSides[si];
    const C a0 = q.coefficient(0, side, 0);
    cut.check(as_cplx(a0));
    out.constant[si] = cut.log(as_cplx(a0));
    // log(1 + Σ u_k v^k) = Σ g_k v^k, v = |ξ|^{−1}.
    std::vector<C> u(static_cast<std::size_t>(n) + 1);
    std::vector<C> g(static_cast<std::size_t>(n) + 1);
    for (int k = 1; k <= n; ++k) u[static_cast<std::size_t>(k)] = q.coefficient(k, side, 0) / a0;
    for (int k = 1; k <= n; ++k) {
      C acc{};
      for (int j = 1; j < k; ++j) {
        acc += from_rational<C>(Rational(j)) * g[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(k - j)];
      }
      g[static_cast<std::size_t>(k)] = u[static_cast<std::size_t>(k)] - acc * from_rational<C>(Rational(1, k));
      out.rest.add_to(k - 1, side, 0, g[static_cast<std::size_t>(k)]);
    }
  }
  return out;
}

template <class C>
NumericSymbol log_difference(const LogPolyhomSymbol<C>& l1, const LogPolyhomSymbol<C>& l2) {
  const double q1 = to_double(l1.log_weight);
  const double q2 = to_double(l2.log_weight);
  NumericSymbol out = l1.classical() * cplx(1.0 / q1);
  out -= l2.classical() * cplx(1.0 / q2);
  return out;
}

template <class C>
PolyhomSymbol<C> bracket(const LogPolyhomSymbol<C>& log_q, const PolyhomSymbol<C>& b) {
  PolyhomSymbol<C> out = log_bracket(b) * from_rational<C>(log_q.log_weight);
  out += commutator(log_q.rest, b);
  return out;
}

template <class C>
C radul_cocycle(const PolyhomSymbol<C>& a, const PolyhomSymbol<C>& b, const PolyhomSymbol<C>& q) {
  const auto log_q = log_symbol(q);
  return wres(compose(a, bracket(log_q, b))) * from_rational<C>(1 / q.order());
}

template <class C>
C dtr_conjugation(const PolyhomSymbol<C>& a, const PolyhomSymbol<C>& b, const PolyhomSymbol<C>& q) {
  return radul_cocycle(a, b, q) * from_rational<C>(Rational(-1));
}

template <class C>
cplx weight_dependence(const PolyhomSymbol<C>& a, const PolyhomSymbol<C>& q1, const PolyhomSymbol<C>& q2) {
  const NumericSymbol diff = log_difference(log_symbol(q1), log_symbol(q2));
  return -wres(compose(numeric(a), diff));
}

cplx dtr_family(const NumericSymbol& a, const NumericSymbol& dlog_q, double q_order) {
  if (!(q_order > 0.0)) throw SymbolError("dtr family: the weight must have positive order");
  return -wres(compose(a, dlog_q)) / q_order;
}

ComplexRational dtr_family(const ExactSymbol& a, const ExactSymbol& dlog_q, const Rational& q_order) {
  if (!(q_order > 0)) throw SymbolError("dtr family: the weight must have positive order");
  return -wres(compose(a, dlog_q)) / q_order;
}

// ---------------------------------------------------------------------------
// Graded symbols

template <class C>
GradedSymbol<C> GradedSymbol<C>::even(PolyhomSymbol<C> pp, PolyhomSymbol<C> mm) {
  GradedSymbol g;
  g.blocks[0][0] = std::move(pp);
  g.blocks[1][1] = std::move(mm);
  g.parity = 0;
  return g;
}

template <class C>
GradedSymbol<C> GradedSymbol<C>::odd(PolyhomSymbol<C> pm, PolyhomSymbol<C> mp) {
  GradedSymbol g;
  g.blocks[0][1] = std::move(pm);
  g.blocks[1][0] = std::move(mp);
  g.parity = 1;
  return g;
}

template <class C>
GradedSymbol<C> compose(const GradedSymbol<C>& a, const GradedSymbol<C>& b) {
  GradedSymbol<C> out;
  out.parity = (a.parity + b.parity) % 2;
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      for (std::size_t k = 0; k < 2; ++k) {
        if (a.blocks[r][k].is_zero() || b.blocks[k][c].is_zero()) continue;
        out.blocks[r][c] += compose(a.blocks[r][k], b.blocks[k][c]);
      }
    }
  }
  return out;
}

template <class C>
C sres(const GradedSymbol<C>& a) {
  return wres(a.blocks[0][0]) - wres(a.blocks[1][1]);
}

template <class C>
C radul_cocycle_graded(const GradedSymbol<C>& a, const GradedSymbol<C>& b, const PolyhomSymbol<C>& q_plus,
                       const PolyhomSymbol<C>& q_minus) {
  if (q_plus.order() != q_minus.order()) throw SymbolError("graded cocycle: both weight blocks need one order");
  if (a.parity != b.parity) return C{};
  const std::array<LogPolyhomSymbol<C>, 2> logs{log_symbol(q_plus), log_symbol(q_minus)};
  // [log Q, B]_rc = log Q_r B_rc − B_rc log Q_c. The ray constants enter
  // through (const_r − const_c)·B_rc, which vanishes on the diagonal.
  GradedSymbol<C> br;
  br.parity = b.parity;
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      const PolyhomSymbol<C>& blk = b.blocks[r][c];
      if (blk.is_zero()) continue;
      PolyhomSymbol<C> v = log_bracket(blk) * from_rational<C>(logs[0].log_weight);
      v += compose(logs[r].rest, blk) - compose(blk, logs[c].rest);
      if (r != c) {
        for (std::size_t si = 0; si < 2; ++si) {
          const cplx delta = logs[r].constant[si] - logs[c].constant[si];
          if (delta == cplx(0.0)) continue;
          if constexpr (std::is_same_v<C, cplx>) {
            PolyhomSymbol<C> k(0, blk.depth());
            k.add_to(0, kSides[si], 0, delta);
            v += compose(k, blk);
          } else {
            throw SymbolError("graded cocycle: unequal ray constants need numeric symbols");
          }
        }
      }
      br.blocks[r][c] = std::move(v);
    }
  }
  return sres(compose(a, br)) * from_rational<C>(1 / q_plus.order());
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json coeff_json(const ComplexRational& c) {
  if (c.im == 0) return to_string(c.re);
  return {{"re", to_string(c.re)}, {"im", to_string(c.im)}};
}

nlohmann::json coeff_json(const cplx& c) {
  if (c.imag() == 0.0) return c.real();
  return {{"re", c.real()}, {"im", c.imag()}};
}

template <class C>
nlohmann::json symbol_json(const PolyhomSymbol<C>& s) {
  nlohmann::json comps = nlohmann::json::array();
  for (int j = 0; j <= s.depth(); ++j) {
    const auto& comp = s.component(j);
    if (comp.plus.empty() && comp.minus.empty()) continue;
    nlohmann::json e{{"j", j}};
    for (RaySide side : kSides) {
      nlohmann::json list = nlohmann::json::array();
      for (const auto& [mode, v] : comp.side(side)) list.push_back({{"mode", mode}, {"coeff", coeff_json(v)}});
      e[side == RaySide::plus ? "plus" : "minus"] = list;
    }
    comps.push_back(e);
  }
  return {{"order", to_string(s.order())}, {"depth", s.depth()}, {"components", comps}};
}

Rational rational_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw DomainError("symbol: exact coefficients must be integers or \"p/q\" strings");
}

ComplexRational coeff_from_json(const nlohmann::json& j) {
  if (j.is_object()) {
    for (const auto& [key, v] : j.items()) {
      if (key != "re" && key != "im") throw DomainError("symbol: unknown coefficient key '" + key + "'");
    }
    return {j.contains("re") ? rational_json(j.at("re")) : Rational(0),
            j.contains("im") ? rational_json(j.at("im")) : Rational(0)};
  }
  return rational_json(j);
}

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const char* what) {
  for (const auto& [key, v] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw DomainError(std::string(what) + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace

nlohmann::json to_json(const ExactSymbol& s) { return symbol_json(s); }
nlohmann::json to_json(const NumericSymbol& s) { return symbol_json(s); }

ExactSymbol symbol_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("symbol: expected an object");
  check_keys(j, {"order", "depth", "components", "terms"}, "symbol");
  if (!j.contains("order")) throw DomainError("symbol: missing 'order'");
  const int depth = j.value("depth", kDefaultSymbolDepth);
  ExactSymbol s(rational_json(j.at("order")), depth);
  if (j.contains("components")) {
    for (const auto& comp : j.at("components")) {
      check_keys(comp, {"j", "plus", "minus"}, "symbol component");
      const int idx = comp.value("j", 0);
      for (RaySide side : kSides) {
        const char* key = side == RaySide::plus ? "plus" : "minus";
        if (!comp.contains(key)) continue;
        for (const auto& e : comp.at(key)) {
          check_keys(e, {"mode", "coeff"}, "symbol coefficient");
          s.add_to(idx, side, e.value("mode", 0), coeff_from_json(e.at("coeff")));
        }
      }
    }
  }
  if (j.contains("terms")) {
    for (const auto& t : j.at("terms")) {
      check_keys(t, {"j", "mode", "plus", "minus"}, "symbol term");
      const int idx = t.value("j", 0);
      const int mode = t.value("mode", 0);
      if (t.contains("plus")) s.add_to(idx, RaySide::plus, mode, coeff_from_json(t.at("plus")));
      if (t.contains("minus")) s.add_to(idx, RaySide::minus, mode, coeff_from_json(t.at("minus")));
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Instantiations

#define SPECANOM_INSTANTIATE(C)                                                                                  \
  template class PolyhomSymbol<C>;                                                                               \
  template struct LogPolyhomSymbol<C>;                                                                           \
  template struct GradedSymbol<C>;                                                                               \
  template PolyhomSymbol<C> compose(const PolyhomSymbol<C>&, const PolyhomSymbol<C>&);                           \
  template PolyhomSymbol<C> commutator(const PolyhomSymbol<C>&, const PolyhomSymbol<C>&);                        \
  template C wres(const PolyhomSymbol<C>&);                                                                      \
  template PolyhomSymbol<C> log_bracket(const PolyhomSymbol<C>&);                                                \
  template LogPolyhomSymbol<C> log_symbol(const PolyhomSymbol<C>&, const SpectralCut&);                          \
  template NumericSymbol log_difference(const LogPolyhomSymbol<C>&, const LogPolyhomSymbol<C>&);                 \
  template PolyhomSymbol<C> bracket(const LogPolyhomSymbol<C>&, const PolyhomSymbol<C>&);                        \
  template C radul_cocycle(const PolyhomSymbol<C>&, const PolyhomSymbol<C>&, const PolyhomSymbol<C>&);           \
  template C dtr_conjugation(const PolyhomSymbol<C>&, const PolyhomSymbol<C>&, const PolyhomSymbol<C>&);         \
  template cplx weight_dependence(const PolyhomSymbol<C>&, const PolyhomSymbol<C>&, const PolyhomSymbol<C>&);    \
  template GradedSymbol<C> compose(const GradedSymbol<C>&, const GradedSymbol<C>&);                              \
  template C sres(const GradedSymbol<C>&);                                                                       \
  template C radul_cocycle_graded(const GradedSymbol<C>&, const GradedSymbol<C>&, const PolyhomSymbol<C>&,       \
                                  const PolyhomSymbol<C>&);

SPECANOM_INSTANTIATE(ComplexRational)
SPECANOM_INSTANTIATE(cplx)

#undef SPECANOM_INSTANTIATE

}  // namespace specanom
