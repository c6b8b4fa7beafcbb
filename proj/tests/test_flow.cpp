#include <doctest.h>

#include "specanom/flow.hpp"
#include "specanom/invariants.hpp"
#include "support.hpp"

using namespace specanom;
using specanom::test::Gen;

namespace {

double frac(double x) { return x - std::floor(x); }

// Branches n + a cross zero once per integer −n strictly between the endpoint values of a.
int dirac_flow_oracle(double a0, double a1) {
  return static_cast<int>(std::floor(a1)) - static_cast<int>(std::floor(a0));
}

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

// Random non-integer endpoint.
double offset(Gen& g, double lo, double hi) {
  double a = g.uniform(lo, hi);
  while (frac(a) < 0.02 || frac(a) > 0.98) a = g.uniform(lo, hi);
  return a;
}

OperatorFamily random_finite(Gen& g, int& oracle) {
  std::vector<Branch> branches;
  oracle = 0;
  const int count = g.integer(1, 6);
  for (int i = 0; i < count; ++i) {
    double c0 = g.uniform(-2.0, 2.0);
    double c1 = g.uniform(-3.0, 3.0);
    while (std::abs(c0) < 0.05 || std::abs(c0 + c1) < 0.05) {
      c0 = g.uniform(-2.0, 2.0);
      c1 = g.uniform(-3.0, 3.0);
    }
    const int m = g.integer(1, 3);
    branches.push_back(linear_branch(i, c0, c1, m));
    oracle += m * (sgn(c0 + c1) - sgn(c0)) / 2;
  }
  return finite_family("random", std::move(branches));
}

}  // namespace

TEST_CASE("spectral flow of the circle Dirac family") {
  const FlowResult r = spectral_flow(dirac_family(0.25, 1.25));
  CHECK(r.sf == 1);
  REQUIRE(r.crossings.size() == 1);
  CHECK(r.crossings[0].t == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(r.crossings[0].branch == -1);
  CHECK(r.crossings[0].direction == 1);
  CHECK(r.partition_sf == r.sf);

  CHECK(spectral_flow(dirac_family(0.25, 0.5)).sf == 0);
  CHECK(spectral_flow(dirac_family(0.25, 1.25).reversed()).sf == -1);
  CHECK_THROWS_AS(spectral_flow(dirac_family(0.0, 1.0)), DomainError);
}

TEST_CASE("crossing direction convention") {
  const FlowResult r = spectral_flow(finite_family("rising", {linear_branch(0, -0.75, 1.0)}));
  CHECK(r.sf == 1);
  REQUIRE(r.crossings.size() == 1);
  CHECK(r.crossings[0].direction == 1);
  CHECK(r.crossings[0].t == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("tangential touches are errors") {
  Branch touch;
  touch.index = 0;
  touch.value = [](double t) { return (t - 0.5) * (t - 0.5); };
  touch.derivative = [](double t) { return 2.0 * (t - 0.5); };
  CHECK_THROWS_AS(spectral_flow(finite_family("touch", {touch})), ContinuationError);
}

TEST_CASE("shift rule") {
  const AnomalyReport half = shift_check(dirac_family(0.25, 1.25), 0.5);
  CHECK(half.pass);
  CHECK(half.lhs.real() == doctest::Approx(1.0));
  CHECK(shift_check(dirac_family(0.25, 1.25), 0.0).pass);
  const AnomalyReport small = shift_check(dirac_family(0.25, 1.25), -0.1);
  CHECK(small.pass);
  CHECK(small.lhs.real() == doctest::Approx(1.0));
  // α = 1/4 puts the endpoint eigenvalue 1/4 at zero.
  CHECK_THROWS(shift_check(dirac_family(0.25, 1.25), 0.25));
}

TEST_CASE("eta variation") {
  const AnomalyReport crossing = eta_variation_report(dirac_family(0.25, 1.25));
  CHECK(crossing.pass);
  CHECK(std::abs(crossing.lhs) < 1e-10);
  const AnomalyReport inv = eta_variation_report(dirac_family(0.25, 0.5));
  CHECK(inv.pass);
  CHECK(inv.lhs.real() == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(inv.rhs.real() == doctest::Approx(-0.5).epsilon(1e-8));
  const AnomalyReport constant = eta_variation_report(dirac_family(0.25, 0.25));
  CHECK(constant.pass);
  CHECK(std::abs(constant.lhs) < 1e-12);
}

TEST_CASE("phase difference") {
  const AnomalyReport r = phase_difference(dirac_family(0.25, 0.5));
  CHECK(r.pass);
  CHECK(r.lhs.real() == doctest::Approx(-kPi / 4.0).epsilon(1e-10));
  CHECK(r.rhs.real() == doctest::Approx(-kPi / 4.0).epsilon(1e-8));
  CHECK(std::abs(phase_difference(dirac_family(0.25, 0.25)).lhs) < 1e-12);
  CHECK_THROWS_AS(phase_difference(dirac_family(0.25, 1.25)), DomainError);
}

TEST_CASE("residue integrand: closed form and symbol path agree") {
  const OperatorFamily f = dirac_family(0.25, 1.25);
  for (double t : {0.1, 0.5, 0.9}) CHECK(f.residue_from_symbols(t) == doctest::Approx(f.residue(t)).epsilon(1e-12));
}

TEST_CASE("families from JSON") {
  const OperatorFamily f = family_from_json({{"kind", "dirac_family"}, {"a0", 0.25}, {"a1", 1.25}});
  CHECK(spectral_flow(f).sf == 1);
  const OperatorFamily g = family_from_json(
      {{"kind", "finite"}, {"branches", {{{"c0", -0.75}, {"c1", 1.0}, {"multiplicity", 2}}}}, {"restrict", {1.0, 0.0}}});
  CHECK(spectral_flow(g).sf == -2);
  CHECK_THROWS(family_from_json({{"kind", "nope"}}));
}

TEST_CASE("adaptive Simpson") {
  CHECK(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));
  CHECK(adaptive_simpson([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-10) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("property: Dirac family flow matches the integer count") {
  Gen g(51);
  for (int trial = 0; trial < 20; ++trial) {
    const double a0 = offset(g, -3.0, 3.0);
    const double a1 = offset(g, -3.0, 3.0);
    const FlowResult r = spectral_flow(dirac_family(a0, a1));
    CHECK(r.sf == dirac_flow_oracle(a0, a1));
    int total = 0;
    for (const auto& c : r.crossings) total += c.direction * c.multiplicity;
    CHECK(total == r.sf);
    CHECK(r.partition_sf == r.sf);
  }
}

TEST_CASE("property: finite families, grid doubling, reversal and additivity") {
  Gen g(52);
  for (int trial = 0; trial < 30; ++trial) {
    int oracle = 0;
    const OperatorFamily f = random_finite(g, oracle);
    const int sf = spectral_flow(f).sf;
    CHECK(sf == oracle);
    CHECK(spectral_flow(f, 2 * kFlowGridSamples).sf == sf);
    CHECK(spectral_flow(f.reversed()).sf == -sf);
    bool mid_invertible = true;
    for (const auto& b : f.window(1e9)) mid_invertible = mid_invertible && std::abs(b.value(0.5)) > 1e-3;
    if (mid_invertible) {
      CHECK(spectral_flow(f.restricted(0.0, 0.5)).sf + spectral_flow(f.restricted(0.5, 1.0)).sf == sf);
    }
  }
}

TEST_CASE("property: shifted Dirac flows") {
  Gen g(53);
  for (int trial = 0; trial < 15; ++trial) {
    const double a0 = offset(g, -2.0, 2.0);
    const double a1 = offset(g, -2.0, 2.0);
    double alpha = g.uniform(-1.5, 1.5);
    while (frac(a0 - alpha) < 0.02 || frac(a0 - alpha) > 0.98 || frac(a1 - alpha) < 0.02 || frac(a1 - alpha) > 0.98) {
      alpha = g.uniform(-1.5, 1.5);
    }
    const OperatorFamily f = dirac_family(a0, a1);
    CHECK(spectral_flow(f.shifted(alpha)).sf == dirac_flow_oracle(a0 - alpha, a1 - alpha));
    CHECK(shift_check(f, alpha).pass);
  }
}

TEST_CASE("property: eta variation holds along random Dirac families") {
  Gen g(54);
  for (int trial = 0; trial < 6; ++trial) {
    const double a0 = offset(g, -1.5, 1.5);
    const double a1 = offset(g, -1.5, 1.5);
    const AnomalyReport r = eta_variation_report(dirac_family(a0, a1));
    CHECK(r.pass);
    CHECK(r.lhs.real() == doctest::Approx((1.0 - 2.0 * frac(a1)) - (1.0 - 2.0 * frac(a0))).epsilon(1e-9));
  }
}
