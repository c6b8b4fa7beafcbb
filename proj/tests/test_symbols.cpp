#include <doctest.h>

#include "specanom/symbols.hpp"
#include "support.hpp"

using namespace specanom;
using specanom::test::Gen;
using S = ExactSymbol;
using CR = ComplexRational;

namespace {

S abs_xi(const Rational& order = 1) { return S::monomial(order, CR(1), CR(1)); }

CR random_coeff(Gen& g) {
  const auto [p, q] = g.rational(5, 4);
  const auto [pi, qi] = g.rational(3, 3);
  return CR(Rational(p, q), g.coin() ? Rational(pi, qi) : Rational(0));
}

// Sum of one to three monomials e^{imx}(c₊, c₋)|ξ|^order of a common order.
S random_symbol(Gen& g, int order) {
  S s(order);
  const int terms = g.integer(1, 3);
  for (int t = 0; t < terms; ++t) s += S::monomial(order, random_coeff(g), random_coeff(g), g.integer(-2, 2));
  return s;
}

// Positive asymmetric weight (p, m)|ξ|.
S random_weight(Gen& g) { return S::monomial(1, CR(g.integer(1, 4)), CR(g.integer(1, 4))); }

// Diagonal entry of Op(a)Op(b) on e_n for a = e^{i m_a x}c_a|ξ|^{o_a},
// b = e^{i m_b x}c_b|ξ|^{o_b} with m_a + m_b = 0, from Op(s)e_n = c^{sgn n}|n|^o e_{n+m}.
double mode_product_diagonal(int n, int ma, double oa, double ca_plus, double ca_minus, double ob, double cb_plus,
                             double cb_minus) {
  auto act = [](int k, double o, double cp, double cm) {
    if (k == 0) return 0.0;
    return (k > 0 ? cp : cm) * std::pow(std::abs(static_cast<double>(k)), o);
  };
  const int mid = n - ma;  // Op(b) sends e_n to e_{n+m_b} = e_{n−m_a}
  return act(n, ob, cb_plus, cb_minus) * act(mid, oa, ca_plus, ca_minus);
}

}  // namespace

TEST_CASE("composition examples") {
  CHECK(compose(abs_xi(), abs_xi(-1)) == S::identity());
  const S a = S::monomial(1, CR(1), CR(1), 1);
  CHECK(compose(a, S::identity()) == a);
  CHECK(compose(S::identity(), a) == a);
}

TEST_CASE("commutator symbol matches the Fourier-mode computation") {
  // A = e^{ix}|ξ|, B = e^{−ix}: [A, B]e_n = (|n − 1| − |n|)e_n.
  const S a = S::monomial(1, CR(1), CR(1), 1);
  const S b = S::monomial(0, CR(1), CR(1), -1);
  const S c = compose(a, b) - compose(b, a);
  const auto j = c.index_of_degree(0);
  REQUIRE(j.has_value());
  for (int n : {50, 500, -50, -500}) {
    const double oracle = mode_product_diagonal(n, 1, 1.0, 1, 1, 0.0, 1, 1) -
                          mode_product_diagonal(n, -1, 0.0, 1, 1, 1.0, 1, 1);
    const RaySide side = n > 0 ? RaySide::plus : RaySide::minus;
    CHECK(c.coefficient(*j, side, 0).to_cplx().real() == doctest::Approx(oracle));
  }
  CHECK(c.coefficient(0, RaySide::plus, 0).is_zero());
}

TEST_CASE("Wodzicki residue examples") {
  CHECK(wres(abs_xi(-1)) == CR(2));
  CHECK(wres(S::identity()) == CR(0));
  CHECK(wres(S::sign()) == CR(0));
  // Degree −1 lies below the truncation depth of an order-10 symbol.
  CHECK_THROWS_AS(wres(abs_xi(10)), SymbolError);
}

TEST_CASE("logarithms of weight symbols") {
  const auto l1 = log_symbol(abs_xi());
  CHECK(l1.log_weight == 1);
  CHECK(std::abs(l1.constant[0]) < 1e-15);
  CHECK(std::abs(l1.constant[1]) < 1e-15);
  CHECK(l1.rest.is_zero());

  const auto l2 = log_symbol(S::monomial(1, CR(2), CR(2)));
  CHECK(l2.log_weight == 1);
  CHECK(std::abs(l2.constant[0] - std::log(2.0)) < 1e-15);
  CHECK(std::abs(l2.constant[1] - std::log(2.0)) < 1e-15);

  const auto la = log_symbol(S::monomial(1, CR(1), CR(2)));
  CHECK(std::abs(la.constant[0]) < 1e-15);
  CHECK(std::abs(la.constant[1] - std::log(2.0)) < 1e-15);

  CHECK_THROWS(log_symbol(S::monomial(1, CR(1), CR(0))));
}

TEST_CASE("Radul cocycle examples") {
  const S asym = S::monomial(1, CR(1), CR(2));
  CHECK(radul_cocycle(abs_xi(-1), S::sign(), asym) == CR(0));

  const S a = S::monomial(1, CR(1), CR(1), 1);
  const S b = S::monomial(0, CR(1), CR(1), -1);
  // Mode sums: 1 − ζ(z) + 2^{−z}ζ(z) → 1 on the asymmetric weight; the symmetric weight also gives 1.
  CHECK(radul_cocycle(a, b, asym) == CR(1));
  CHECK(std::abs(radul_operator_side(a, b, asymmetric_modulus(1.0, 2.0)) - cplx(1.0)) < 1e-8);
  CHECK(radul_cocycle(a, b, abs_xi()) == CR(1));
  CHECK(std::abs(radul_operator_side(a, b, circle_modulus()) - cplx(1.0)) < 1e-8);
}

TEST_CASE("weight dependence examples") {
  const S inv = abs_xi(-1);
  const S q1 = abs_xi();
  const S q2 = S::monomial(1, CR(2), CR(2));
  CHECK(std::abs(weight_dependence(inv, q1, q2) - cplx(2.0 * std::log(2.0))) < 1e-14);
  CHECK(std::abs(weight_dependence(inv, q2, q2)) < 1e-15);
  CHECK(std::abs(weight_dependence(S::identity(), q1, q2)) < 1e-15);
  CHECK(std::abs(weight_dependence(S::identity(), q1, S::monomial(1, CR(1), CR(3)))) < 1e-15);
}

TEST_CASE("trace variation along weight families") {
  CHECK(dtr_family(abs_xi(-1), S::identity(), Rational(1)) == CR(-2));
  CHECK(dtr_family(S::identity(), S::identity(), Rational(1)) == CR(0));

  // tr^{Q_t}(A) = tr^Q(e^{tB}Ae^{−tB}), so the derivative is −tr^Q([A, B]).
  const S a = S::monomial(1, CR(1), CR(1), 1);
  const S b = S::monomial(0, CR(1), CR(1), -1);
  const S q = S::monomial(1, CR(1), CR(2));
  CHECK(dtr_conjugation(a, b, q) == -radul_cocycle(a, b, q));
}

TEST_CASE("multiplier symbols") {
  const Spectrum l = circle_modulus();
  const NumericSymbol s1 = multiplier_to_symbol(Multiplier::from_spectrum(l));
  CHECK(s1.order() == 1);
  CHECK(std::abs(s1.coefficient(0, RaySide::plus, 0) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(s1.coefficient(0, RaySide::minus, 0) - cplx(1.0)) < 1e-15);
  CHECK(s1.truncated(1) == to_numeric(abs_xi()).truncated(1));

  const NumericSymbol sa = multiplier_to_symbol(Multiplier::from_spectrum(asymmetric_modulus(1.0, 2.0)));
  CHECK(std::abs(sa.coefficient(0, RaySide::plus, 0) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(sa.coefficient(0, RaySide::minus, 0) - cplx(2.0)) < 1e-15);

  const NumericSymbol si = multiplier_to_symbol(Multiplier::power_of(l, -1.0));
  CHECK(si.order() == -1);
  CHECK(std::abs(wres(si) - cplx(2.0)) < 1e-15);
}

TEST_CASE("graded residues") {
  const auto even = GradedSymbol<CR>::even(abs_xi(-1), S(Rational(-1)));
  CHECK(sres(even) == CR(2));
  const auto odd = GradedSymbol<CR>::odd(abs_xi(-1), abs_xi(-1));
  CHECK(sres(odd) == CR(0));
  const auto ga = GradedSymbol<CR>::odd(S::monomial(1, CR(1), CR(1), 1), S::monomial(0, CR(1), CR(2), 0));
  const auto gb = GradedSymbol<CR>::even(S::monomial(0, CR(1), CR(1), -1), S::monomial(0, CR(1), CR(3), 1));
  CHECK(radul_cocycle_graded(ga, gb, abs_xi(), abs_xi()) == CR(0));
}

TEST_CASE("symbols round-trip through JSON") {
  Gen g(31);
  for (int trial = 0; trial < 10; ++trial) {
    const S s = random_symbol(g, g.integer(-2, 2));
    CHECK(symbol_from_json(to_json(s)) == s);
  }
  const S parsed = symbol_from_json(nlohmann::json::parse(
      R"({"order": "1", "terms": [{"mode": 1, "plus": "1", "minus": "1/2"}]})"));
  CHECK(parsed == S::monomial(1, CR(1), CR(Rational(1, 2)), 1));
}

TEST_CASE("property: composition is associative") {
  Gen g(32);
  for (int trial = 0; trial < 10; ++trial) {
    const S a = random_symbol(g, g.integer(-1, 2));
    const S b = random_symbol(g, g.integer(-1, 2));
    const S c = random_symbol(g, g.integer(-1, 2));
    CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
  }
}

TEST_CASE("property: the residue vanishes on commutators") {
  Gen g(33);
  for (int trial = 0; trial < 30; ++trial) {
    const S a = random_symbol(g, g.integer(-2, 2));
    const S b = random_symbol(g, g.integer(-2, 2));
    CHECK(wres(commutator(a, b)).is_zero());
  }
}

TEST_CASE("property: the cocycle is antisymmetric") {
  Gen g(34);
  for (int trial = 0; trial < 30; ++trial) {
    const S a = random_symbol(g, g.integer(-1, 2));
    const S b = random_symbol(g, g.integer(-1, 2));
    const S q = random_weight(g);
    CHECK(radul_cocycle(a, b, q) == -radul_cocycle(b, a, q));
  }
}

TEST_CASE("property: x-independent pairs have a vanishing cocycle") {
  Gen g(35);
  for (int trial = 0; trial < 20; ++trial) {
    const S a = S::monomial(g.integer(-1, 2), random_coeff(g), random_coeff(g));
    const S b = S::monomial(g.integer(-1, 2), random_coeff(g), random_coeff(g));
    CHECK(radul_cocycle(a, b, random_weight(g)).is_zero());
  }
}

TEST_CASE("property: symbol and mode-sum cocycles agree") {
  Gen g(36);
  for (int trial = 0; trial < 8; ++trial) {
    const int m = g.integer(1, 2) * (g.coin() ? 1 : -1);
    const S a = S::monomial(g.integer(0, 1), CR(g.integer(1, 3)), CR(g.integer(1, 3)), m);
    const S b = S::monomial(g.integer(0, 1), CR(g.integer(1, 3)), CR(g.integer(1, 3)), -m);
    const int p = g.integer(1, 3);
    const int q = g.integer(1, 3);
    const CR symbol_side = radul_cocycle(a, b, S::monomial(1, CR(p), CR(q)));
    const cplx operator_side = radul_operator_side(a, b, asymmetric_modulus(p, q));
    CHECK(std::abs(symbol_side.to_cplx() - operator_side) < 1e-8);
  }
}

TEST_CASE("property: weight dependence integrates the trace variation") {
  Gen g(37);
  for (int trial = 0; trial < 10; ++trial) {
    const NumericSymbol a = to_numeric(random_symbol(g, -1) + random_symbol(g, 0));
    const double c = g.uniform(0.3, 4.0);
    // Q_t = (1 + t(c − 1))|ξ| from |ξ| to c|ξ|; d log Q_t = (c − 1)/(1 + t(c − 1)).
    auto rate = [&](double t) {
      const cplx k = (c - 1.0) / (1.0 + t * (c - 1.0));
      return dtr_family(a, NumericSymbol::identity() * k, 1.0);
    };
    // Composite Simpson on [0, 1].
    const int n = 2000;
    cplx integral = rate(0.0) + rate(1.0);
    for (int i = 1; i < n; ++i) integral += (i % 2 == 1 ? 4.0 : 2.0) * rate(static_cast<double>(i) / n);
    integral /= 3.0 * n;
    const cplx wd = weight_dependence(a, to_numeric(abs_xi()), to_numeric(S::monomial(1, CR(1), CR(1))) * cplx(c));
    CHECK(std::abs(wd + integral) < 1e-9);
  }
}
