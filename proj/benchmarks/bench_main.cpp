#include <benchmark/benchmark.h>

#include "specanom/invariants.hpp"
#include "specanom/special.hpp"
#include "specanom/symbols.hpp"

using namespace specanom;

namespace {

void BM_HurwitzZeta(benchmark::State& state) {
  const cplx s(-0.5, 0.3);
  double a = 0.25;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hurwitz_zeta(s, a));
    a = a < 3.0 ? a + 0.01 : 0.25;
  }
}
BENCHMARK(BM_HurwitzZeta);

void BM_ZetaEulerMaclaurin(benchmark::State& state) {
  const Spectrum spec = generic_spectrum(1.0, 1.0, {0.5, -0.25});
  for (auto _ : state) benchmark::DoNotOptimize(zeta(spec, cplx(-0.5, 0.1)));
}
BENCHMARK(BM_ZetaEulerMaclaurin);

void BM_TorusDeterminant(benchmark::State& state) {
  const Spectrum torus = torus_laplacian_shifted(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(det_zeta(torus));
}
BENCHMARK(BM_TorusDeterminant)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SymbolComposition(benchmark::State& state) {
  using S = ExactSymbol;
  using CR = ComplexRational;
  S a = S::monomial(1, CR(1), CR(2), 1) + S::monomial(1, CR(Rational(1, 3)), CR(1), -2);
  S b = S::monomial(0, CR(1), CR(3), -1) + S::monomial(0, CR(2), CR(Rational(1, 2)), 2);
  a = a.truncated(static_cast<int>(state.range(0)));
  b = b.truncated(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compose(a, b));
}
BENCHMARK(BM_SymbolComposition)->Arg(2)->Arg(6);

void BM_RadulCocycle(benchmark::State& state) {
  using S = ExactSymbol;
  using CR = ComplexRational;
  const S a = S::monomial(1, CR(1), CR(1), 1);
  const S b = S::monomial(0, CR(1), CR(1), -1);
  const S q = S::monomial(1, CR(1), CR(2));
  for (auto _ : state) benchmark::DoNotOptimize(radul_cocycle(a, b, q));
}
BENCHMARK(BM_RadulCocycle);

}  // namespace
BENCHMARK_MAIN();
