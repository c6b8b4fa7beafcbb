#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "specanom/invariants.hpp"
#include "support.hpp"

using namespace specanom;
using specanom::test::Gen;

namespace {

const Spectrum& lambda() {
  static const Spectrum s = circle_modulus();
  return s;
}

Spectrum abs_dirac(double a) { return transform(circle_dirac(a), SpectrumOp::abs()); }
Spectrum lambda_power(double s) { return transform(lambda(), SpectrumOp::power(s)); }

// det_ζ|D_a| = exp(−ζ_H′(0, a) − ζ_H′(0, 1 − a)) = 2π/(Γ(a)Γ(1 − a)) by the Lerch formula.
double abs_dirac_det_oracle(double a) { return 2.0 * kPi / (std::tgamma(a) * std::tgamma(1.0 - a)); }

// {n + a : n ≥ 0} as a single ray.
Spectrum half_line(double offset) { return Spectrum::from_rays({Ray{1.0, offset, 1.0, 1, {}, RaySide::none, 0.0}}, {}, 1.0, true); }

}  // namespace

TEST_CASE("zeta determinants") {
  CHECK(det_zeta(lambda()).modulus() == doctest::Approx(2.0 * kPi).epsilon(1e-12));
  CHECK(det_zeta(lambda()).phase == 0.0);
  CHECK(det_zeta(transform(lambda(), SpectrumOp::square())).modulus() ==
        doctest::Approx(4.0 * kPi * kPi).epsilon(1e-12));
  CHECK(det_zeta(abs_dirac(0.25)).modulus() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("eta invariants") {
  CHECK(eta(circle_dirac(0.25)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(eta(circle_dirac(0.5))) < 1e-12);
  CHECK(eta(lambda()) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("phases of self-adjoint determinants") {
  const SelfAdjointDet quarter = phase_and_det_selfadjoint(circle_dirac(0.25));
  CHECK(quarter.det.modulus() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(quarter.det.phase == doctest::Approx(kPi / 4.0).epsilon(1e-12));
  CHECK(quarter.realized_sign == kRealizedPhaseSign);
  CHECK(quarter.direct.phase == doctest::Approx(kRealizedPhaseSign * kPi / 4.0).epsilon(1e-10));
  CHECK(quarter.log_trace_check.pass);

  const SelfAdjointDet three = phase_and_det_selfadjoint(circle_dirac(0.75));
  CHECK(three.det.phase == doctest::Approx(-kPi / 4.0).epsilon(1e-12));

  const SelfAdjointDet positive = phase_and_det_selfadjoint(lambda());
  CHECK(std::abs(positive.det.phase) < 1e-12);
}

TEST_CASE("Pfaffian anomaly") {
  const AnomalyReport q = pfaffian_anomaly(circle_dirac(0.25));
  CHECK(q.pass);
  CHECK(pfaffian_anomaly(lambda()).pass);
  CHECK(pfaffian_anomaly(circle_dirac(0.5)).pass);
}

TEST_CASE("multiplicative anomaly") {
  const AnomalyReport powers = mult_anomaly(lambda_power(0.5), lambda_power(1.5), 1e-9);
  CHECK(powers.pass);
  CHECK(std::abs(powers.lhs - cplx(1.0)) < 1e-9);
  const AnomalyReport dd = mult_anomaly(abs_dirac(0.25), abs_dirac(0.25), 1e-9);
  CHECK(dd.pass);
  CHECK(std::abs(dd.lhs - cplx(1.0)) < 1e-9);
  const AnomalyReport torus = mult_anomaly(torus_laplacian_shifted(4, 1.0), torus_laplacian_shifted(4, 2.0));
  CHECK(torus.pass);
  CHECK(torus.tolerance == kToleranceTorus);
  CHECK(std::abs(torus.lhs - cplx(1.0)) > 1e-3);
}

TEST_CASE("weight dependence of log traces") {
  const Spectrum two = circle_modulus(2.0);
  const AnomalyReport r1 = okikiolu_diff(lambda(), lambda(), two);
  CHECK(r1.pass);
  CHECK(std::abs(r1.lhs) < 1e-8);
  CHECK(okikiolu_diff(lambda(), lambda(), lambda()).pass);
  CHECK(std::abs(okikiolu_diff(lambda(), lambda(), lambda()).lhs) < 1e-12);
  CHECK(okikiolu_diff(asymmetric_modulus(1.0, 2.0), lambda(), two).pass);
}

TEST_CASE("weighted determinants") {
  const WeightedDet same = weighted_det(lambda(), lambda());
  CHECK(same.relation.pass);
  CHECK(same.weighted.modulus() == doctest::Approx(2.0 * kPi).epsilon(1e-10));

  const WeightedDet sq = weighted_det(transform(lambda(), SpectrumOp::square()), lambda());
  CHECK(sq.relation.pass);
  CHECK(sq.weighted.modulus() == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-10));

  CHECK(weighted_det(asymmetric_modulus(1.0, 2.0), lambda()).relation.pass);
}

TEST_CASE("log-determinant variation") {
  const AnomalyReport scaled = log_det_variation(PositiveFamily::scaled(lambda(), 1.0), 0.0);
  CHECK(scaled.pass);
  CHECK(std::abs(scaled.rhs - cplx(-1.0)) < 1e-9);
  const AnomalyReport constant = log_det_variation(PositiveFamily::constant(lambda()), 0.0);
  CHECK(constant.pass);
  CHECK(std::abs(constant.lhs) < 1e-9);
  const AnomalyReport power = log_det_variation(PositiveFamily::power(lambda(), 1.0), 0.0);
  CHECK(power.pass);
  CHECK(std::abs(power.rhs - cplx(std::log(2.0 * kPi))) < 1e-8);
}

TEST_CASE("Jacobian anomaly") {
  const AnomalyReport r = jacobian_anomaly(lambda(), lambda_power(0.5));
  CHECK(r.pass);
  // log det(Λ²) − log det(Λ) = log 2π.
  CHECK(std::abs(r.lhs - cplx(std::log(2.0 * kPi))) < 1e-9);
  CHECK_THROWS_AS(jacobian_anomaly(lambda(), Spectrum::finite({{1.0, 1}}, 0.0, true)), DomainError);
  const Spectrum c = transform(torus_laplacian_shifted(4, 2.0), SpectrumOp::power(0.5));
  CHECK(jacobian_anomaly(torus_laplacian_shifted(4, 1.0), c).pass);
}

TEST_CASE("weighted supertraces") {
  const Multiplier id = Multiplier::identity_on(lambda());
  const MeromorphicGerm same = weighted_supertrace(id, id, graded(lambda(), lambda()));
  CHECK(std::abs(same.finite_part) < 1e-14);
  CHECK(std::abs(same.residue) < 1e-14);

  // tr(Λ^{−1}Λ^{−z}) − tr((2Λ)^{−1}(2Λ)^{−z}) = 2ζ(1 + z) − 2^{−z}ζ(1 + z).
  const Spectrum two = circle_modulus(2.0);
  const MeromorphicGerm g = weighted_supertrace(Multiplier::power_of(lambda(), -1.0), Multiplier::power_of(two, -1.0),
                                                graded(lambda(), two));
  CHECK(std::abs(g.residue - cplx(1.0)) < 1e-9);
  CHECK(std::abs(g.finite_part - cplx(kEulerGamma + std::log(2.0))) < 1e-9);

  // The positive and negative halves of D_a recover η.
  for (double a : {0.1, 0.25, 0.4}) {
    const Spectrum plus = half_line(a);
    const Spectrum minus = half_line(1.0 - a);
    const MeromorphicGerm s = weighted_supertrace(Multiplier::identity_on(plus), Multiplier::identity_on(minus),
                                                  graded(plus, minus));
    CHECK(std::abs(s.finite_part - cplx(eta(circle_dirac(a)))) < 1e-10);
  }
}

TEST_CASE("property: eta of the circle Dirac operator is 1 − 2{a}") {
  Gen g(41);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = g.uniform(-2.0, 2.0);
    const double frac = a - std::floor(a);
    if (frac < 1e-3 || frac > 1.0 - 1e-3) continue;
    CHECK(eta(circle_dirac(a)) == doctest::Approx(1.0 - 2.0 * frac).epsilon(1e-10));
  }
}

TEST_CASE("property: determinants depend only on the eigenvalue multiset") {
  Gen g(42);
  for (int trial = 0; trial < 8; ++trial) {
    // Λ with its first k levels moved into a shuffled list of exceptional eigenvalues.
    const int k = g.integer(1, 5);
    std::vector<Eigenvalue> extras;
    for (int n = 1; n <= k; ++n) {
      extras.push_back({static_cast<double>(n), 1});
      extras.push_back({static_cast<double>(n), 1});
    }
    for (std::size_t i = extras.size(); i > 1; --i) std::swap(extras[i - 1], extras[g.integer(0, static_cast<int>(i) - 1)]);
    const double start = k + 1.0;
    const Ray plus{1.0, start, 1.0, 1, {}, RaySide::plus, 0.0};
    const Ray minus{1.0, start, 1.0, 1, {}, RaySide::minus, 0.0};
    const Spectrum moved = Spectrum::from_rays({plus, minus}, extras, 1.0, true);
    CHECK(det_zeta(moved).modulus() == doctest::Approx(2.0 * kPi).epsilon(1e-10));
  }
}

TEST_CASE("property: det(A²) = det(A)² and F(A, A) = 1 for positive spectra") {
  Gen g(43);
  for (int trial = 0; trial < 8; ++trial) {
    const Spectrum a = g.coin() ? abs_dirac(g.uniform(0.05, 0.95)) : circle_modulus(g.uniform(0.3, 3.0));
    const double ld = det_zeta(a).log_modulus;
    CHECK(det_zeta(transform(a, SpectrumOp::square())).log_modulus == doctest::Approx(2.0 * ld).epsilon(1e-9));
    const AnomalyReport r = mult_anomaly(a, a, 1e-9);
    CHECK(r.pass);
    CHECK(std::abs(r.lhs - cplx(1.0)) < 1e-9);
  }
}

TEST_CASE("property: |D_a| determinants follow the reflection formula") {
  Gen g(44);
  for (int trial = 0; trial < 15; ++trial) {
    const double a = g.uniform(0.02, 0.98);
    CHECK(det_zeta(abs_dirac(a)).modulus() == doctest::Approx(abs_dirac_det_oracle(a)).epsilon(1e-10));
  }
}

TEST_CASE("property: phase ingredients are real and the modulus is det|A|") {
  Gen g(45);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = g.uniform(0.05, 0.95);
    const cplx z0 = zeta(abs_dirac(a), 0.0);
    CHECK(std::abs(z0.imag()) < 1e-12);
    const SelfAdjointDet sa = phase_and_det_selfadjoint(circle_dirac(a));
    CHECK(sa.direct.modulus() == doctest::Approx(det_zeta(abs_dirac(a)).modulus()).epsilon(1e-10));
    CHECK(sa.det.phase == doctest::Approx(0.5 * kPi * (sa.eta - sa.zeta_abs_at_zero)).epsilon(1e-12));
  }
}

TEST_CASE("property: log traces on A and |A| agree for circle Dirac operators") {
  for (double a : {0.1, 0.25, 0.4}) {
    const SelfAdjointDet sa = phase_and_det_selfadjoint(circle_dirac(a));
    CHECK(sa.log_trace_check.discrepancy < 1e-8);
  }
}

TEST_CASE("property: powers of the circle modulus have no multiplicative anomaly") {
  Gen g(46);
  for (int trial = 0; trial < 8; ++trial) {
    // Symbol orders are rational.
    const double a = g.integer(1, 16) / 8.0;
    const double b = g.integer(1, 16) / 6.0;
    const AnomalyReport r = mult_anomaly(lambda_power(a), lambda_power(b), 1e-9);
    CHECK(r.pass);
    CHECK(std::abs(r.lhs - cplx(1.0)) < 1e-9);
  }
}
