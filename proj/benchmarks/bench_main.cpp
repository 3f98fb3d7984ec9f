#include <benchmark/benchmark.h>

#include "loewner/chains.hpp"
#include "loewner/coefficients.hpp"
#include "loewner/generators.hpp"
#include "loewner/polyspace.hpp"
#include "loewner/sampling.hpp"
#include "loewner/spirallike.hpp"
#include "loewner/transition.hpp"

using namespace loewner;

namespace {

OperatorA diag(std::initializer_list<cplx> d) {
  CMatrix A = CMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (cplx x : d) A(i, i) = x, ++i;
  return analyze(A);
}

void BM_BuildBk(benchmark::State& state) {
  Rng rng(1);
  const OperatorA A = random_operator(rng, static_cast<int>(state.range(0)), 0.5, 2.0, false);
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(build_Bk(A, k));
}
BENCHMARK(BM_BuildBk)->Args({2, 3})->Args({3, 3})->Args({4, 4});

void BM_DerivativeApply(benchmark::State& state) {
  Rng rng(2);
  const int n = static_cast<int>(state.range(0));
  HomPolyMap F(n, 3), H(n, 3);
  for (Eigen::Index i = 0; i < F.coeffs().size(); ++i) {
    F.coeffs()(i) = rng.complex_normal();
    H.coeffs()(i) = rng.complex_normal();
  }
  for (auto _ : state) benchmark::DoNotOptimize(derivative_apply(F, H));
}
BENCHMARK(BM_DerivativeApply)->Arg(2)->Arg(3)->Arg(4);

void BM_Integrate(benchmark::State& state) {
  const GeneratorSpec h = example_generator(2.5, TimeFunction::exp_decay(1.0));
  CVector z(2);
  z << cplx(0.3, 0.1), cplx(-0.2, 0.4);
  const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(integrate(h, z, 0.0, 10.0, tol, {{10.0}}));
}
BENCHMARK(BM_Integrate)->Arg(6)->Arg(9)->Arg(12);

void BM_SolveCoefficients(benchmark::State& state) {
  const GeneratorSpec h = example_generator(2.5, TimeFunction::exp_decay(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_coefficients(h));
  state.SetLabel("n0 = 2");
}
BENCHMARK(BM_SolveCoefficients)->Unit(benchmark::kMillisecond);

void BM_ChainLimit(benchmark::State& state) {
  const GeneratorSpec h = example_generator(2.5, TimeFunction::exp_decay(1.0));
  const auto set = solve_coefficients(h);
  CVector z(2);
  z << cplx(0.3, 0.1), cplx(-0.2, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(chain_limit(h, set, z, 0.0, 1e-8));
}
BENCHMARK(BM_ChainLimit)->Unit(benchmark::kMillisecond);

void BM_SolveSpirallike(benchmark::State& state) {
  Rng rng(3);
  const OperatorA A = diag({cplx(1.3, 0.2), cplx(1.0, -0.4)});
  RandomGeneratorOptions opt;
  opt.time_dependent = false;
  const GeneratorSpec h = random_generator(rng, A, opt);
  const int K = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_spirallike(h, K));
}
BENCHMARK(BM_SolveSpirallike)->Arg(4)->Arg(6);

void BM_TaylorExtract(benchmark::State& state) {
  const OneVarMap koebe = OneVarMap::koebe();
  auto f = [&](const CVector& z) { return roper_suffridge_map(koebe, 1.5, 0.5, z); };
  for (auto _ : state) benchmark::DoNotOptimize(taylor_extract(f, 2, 4));
}
BENCHMARK(BM_TaylorExtract)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
