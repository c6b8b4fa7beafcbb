#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "specanom/spectra.hpp"
#include "support.hpp"

using namespace specanom;
using specanom::test::Gen;

namespace {

// Brute-force multiplicities of |k|² + m2 over a cube, keyed by |k|².
std::map<long, long> brute_lattice(int d, long max_n) {
  std::map<long, long> counts;
  const long r = static_cast<long>(std::sqrt(static_cast<double>(max_n))) + 1;
  std::vector<long> k(static_cast<std::size_t>(d), -r);
  while (true) {
    long n = 0;
    for (long x : k) n += x * x;
    if (n <= max_n) ++counts[n];
    std::size_t i = 0;
    while (i < k.size() && ++k[i] > r) k[i++] = -r;
    if (i == k.size()) break;
  }
  return counts;
}

// Real eigenvalues rounded to 1e-9, so sets built by different routes compare equal.
long long key(double v) { return std::llround(v * 1e9); }

std::multiset<long long> real_values(const std::vector<Eigenvalue>& ev) {
  std::multiset<long long> out;
  for (const auto& e : ev) {
    for (int m = 0; m < e.multiplicity; ++m) out.insert(key(e.value.real()));
  }
  return out;
}

}  // namespace

TEST_CASE("circle Dirac spectra") {
  const Spectrum d0 = circle_dirac(0.0);
  CHECK(d0.kernel_dimension() == 1);
  CHECK_FALSE(d0.flags().invertible);
  CHECK(d0.flags().self_adjoint);

  const Spectrum d = circle_dirac(0.25);
  CHECK(d.flags().invertible);
  const auto first = d.prefix(1);
  REQUIRE(first.size() == 1);
  CHECK(first[0].value.real() == doctest::Approx(0.25));

  const auto a = real_values(circle_dirac(0.25).eigenvalues_up_to(20.0));
  const auto b = real_values(circle_dirac(1.25).eigenvalues_up_to(20.0));
  CHECK(a == b);
  CHECK(a.size() == 40);
}

TEST_CASE("shifted torus Laplacian multiplicities") {
  const auto ev = torus_laplacian_shifted(2, 1.0).eigenvalues_up_to(2.5);
  REQUIRE(ev.size() == 2);
  CHECK(ev[0].value.real() == doctest::Approx(1.0));
  CHECK(ev[0].multiplicity == 1);
  CHECK(ev[1].value.real() == doctest::Approx(2.0));
  CHECK(ev[1].multiplicity == 4);

  const auto ev4 = torus_laplacian_shifted(4, 1.0).eigenvalues_up_to(2.5);
  REQUIRE(ev4.size() == 2);
  CHECK(ev4[1].value.real() == doctest::Approx(2.0));
  CHECK(ev4[1].multiplicity == 8);

  CHECK(torus_laplacian_shifted(1, 0.0).kernel_dimension() == 1);
  CHECK_THROWS_AS(torus_laplacian_shifted(0, 1.0), DomainError);
  CHECK_THROWS_AS(torus_laplacian_shifted(5, 1.0), DomainError);
}

TEST_CASE("lattice counts agree with brute-force enumeration") {
  for (int d = 1; d <= 4; ++d) {
    const long max_n = 30;
    const auto brute = brute_lattice(d, max_n);
    const auto counts = lattice_counts(d, max_n);
    for (long n = 0; n <= max_n; ++n) {
      const long expected = brute.contains(n) ? brute.at(n) : 0;
      CHECK(counts[static_cast<std::size_t>(n)] == expected);
    }
  }
}

TEST_CASE("point transforms") {
  const Spectrum d = circle_dirac(0.25);
  const auto abs_vals = real_values(transform(d, SpectrumOp::abs()).eigenvalues_up_to(5.0));
  CHECK(std::all_of(abs_vals.begin(), abs_vals.end(), [](long long v) { return v > 0.0; }));
  CHECK(abs_vals.count(key(0.25)) == 1);
  CHECK(abs_vals.count(key(0.75)) == 1);

  const Spectrum sq = transform(d, SpectrumOp::square());
  CHECK(sq.order() == doctest::Approx(2.0));
  const auto sq_first = sq.prefix(1);
  CHECK(sq_first[0].value.real() == doctest::Approx(0.0625));

  // shift(α) subtracts α: n + 1/4 − 1/2 = n − 1/4.
  const auto shifted = real_values(transform(d, SpectrumOp::shift(0.5)).eigenvalues_up_to(10.0));
  for (int n = -9; n <= 9; ++n) CHECK(shifted.count(key(n - 0.25)) == 1);
  // As a set over ℤ the opposite shift lands on the same spectrum.
  const auto back = real_values(transform(d, SpectrumOp::shift(-0.5)).eigenvalues_up_to(10.0));
  for (int n = -9; n <= 9; ++n) CHECK(back.count(key(n - 0.25)) == 1);
}

TEST_CASE("skew double of a finite spectrum") {
  const Spectrum one = Spectrum::finite({{1.0, 1}}, 1.0, true);
  const Spectrum s = skew_double(one);
  CHECK_FALSE(s.is_real());
  const auto ev = s.eigenvalues_up_to(2.0);
  REQUIRE(ev.size() == 2);
  bool plus = false;
  bool minus = false;
  for (const auto& e : ev) {
    plus = plus || std::abs(e.value - cplx(0.0, 1.0)) < 1e-14;
    minus = minus || std::abs(e.value - cplx(0.0, -1.0)) < 1e-14;
  }
  CHECK(plus);
  CHECK(minus);
}

TEST_CASE("graded spectra need equal orders") {
  CHECK_NOTHROW(graded(circle_modulus(), empty_spectrum(1.0)));
  CHECK_THROWS_AS(graded(circle_modulus(), transform(circle_modulus(), SpectrumOp::square())), DomainError);
}

TEST_CASE("eigenvalue counting in windows") {
  const Spectrum d = circle_dirac(0.25);
  CHECK(eig_count_in(d, 0.0, 1.0) == 1);
  CHECK(eig_count_in(d, -1.0, 1.0) == 2);
  CHECK(eig_count_in(d, -0.5, 0.0) == 0);
  CHECK(eig_count_in(torus_laplacian_shifted(2, 1.0), 0.0, 2.0) == 5);
  CHECK_THROWS_AS(eig_count_in(d, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(eig_count_in(skew_double(circle_modulus()), 0.0, 1.0), DomainError);
}

TEST_CASE("JSON descriptors build the catalog spectra") {
  const Spectrum d = spectrum_from_json({{"kind", "circle_dirac"}, {"a", 0.25}});
  CHECK(real_values(d.eigenvalues_up_to(6.0)) == real_values(circle_dirac(0.25).eigenvalues_up_to(6.0)));
  const Spectrum sq = spectrum_from_json(
      {{"kind", "transform"}, {"base", {{"kind", "circle_modulus"}}}, {"op", "square"}});
  CHECK(sq.order() == doctest::Approx(2.0));
  CHECK_THROWS(spectrum_from_json({{"kind", "no_such_model"}}));
}

TEST_CASE("property: prefixes are deterministic and nested") {
  Gen g(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Spectrum s = g.coin() ? circle_dirac(g.uniform(-0.49, 0.49))
                                : torus_laplacian_shifted(g.integer(1, 4), g.uniform(0.1, 3.0));
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 30));
    const auto p1 = s.prefix(n);
    const auto p2 = s.prefix(n);
    const auto longer = s.prefix(n + 5);
    REQUIRE(p1.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(p1[i].value == p2[i].value);
      CHECK(p1[i].multiplicity == p2[i].multiplicity);
      CHECK(p1[i].value == longer[i].value);
    }
  }
}

TEST_CASE("property: abs is idempotent") {
  Gen g(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Spectrum s = circle_dirac(g.uniform(-2.0, 2.0));
    const Spectrum once = transform(s, SpectrumOp::abs());
    const Spectrum twice = transform(once, SpectrumOp::abs());
    CHECK(real_values(once.eigenvalues_up_to(15.0)) == real_values(twice.eigenvalues_up_to(15.0)));
  }
}

TEST_CASE("property: skew doubles are closed under negation and conjugation") {
  Gen g(13);
  for (int trial = 0; trial < 10; ++trial) {
    const Spectrum s = skew_double(circle_dirac(g.uniform(0.05, 0.95)));
    const auto ev = s.eigenvalues_up_to(12.0);
    auto has = [&](cplx z) {
      return std::any_of(ev.begin(), ev.end(), [&](const Eigenvalue& e) { return std::abs(e.value - z) < 1e-12; });
    };
    for (const auto& e : ev) {
      CHECK(std::abs(e.value.real()) < 1e-14);
      CHECK(has(-e.value));
      CHECK(has(std::conj(e.value)));
    }
  }
}

TEST_CASE("property: circle Dirac spectrum is periodic in a") {
  Gen g(14);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = g.uniform(-3.0, 3.0);
    const auto x = real_values(circle_dirac(a).eigenvalues_up_to(25.0));
    const auto y = real_values(circle_dirac(a + 1.0).eigenvalues_up_to(25.0));
    CHECK(x == y);
  }
}
