#include <benchmark/benchmark.h>

#include <cmath>

#include "fracwdw/bessel.hpp"
#include "fracwdw/modal.hpp"
#include "fracwdw/solver.hpp"
#include "fracwdw/specfun.hpp"

using namespace fracwdw;

namespace {

RegionParams region1() { return {1.5, 1.8, 1.2, 0.0}; }

void BM_E2Series(benchmark::State& st) {
    BivMLSignature sig = region_signature(region1(), 2.8);
    double x = -static_cast<double>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(biml_e2(sig, x, -0.1).value);
}
BENCHMARK(BM_E2Series)->Arg(1)->Arg(10)->Arg(40);

void BM_E2Inversion(benchmark::State& st) {
    double x = -static_cast<double>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(e2_region_inversion(1.5, 1.8, 1.2, 2.8, x, -0.1).value);
}
BENCHMARK(BM_E2Inversion)->Arg(1)->Arg(40)->Arg(1000);

void BM_FourierBessel(benchmark::State& st) {
    RadialFunction f = RadialFunction::parse("catalog:poly_smooth(s=5)");
    EigenSpec e = eigen(static_cast<int>(st.range(0)), ZeroMode::ExactRoot);
    for (auto _ : st) benchmark::DoNotOptimize(fourier_bessel_coeff(f, e));
}
BENCHMARK(BM_FourierBessel)->Arg(1)->Arg(16)->Arg(64);

void BM_ModeForward(benchmark::State& st) {
    ProblemConfig c;
    EigenSpec e = eigen(static_cast<int>(st.range(0)), c.zeros);
    for (auto _ : st) {
        ModeKernel kern(c, e);
        benchmark::DoNotOptimize(forward_coefficients(c, kern, 0.5, 0.3).A5);
    }
}
BENCHMARK(BM_ModeForward)->Arg(1)->Arg(8);

void BM_ForwardSolve(benchmark::State& st) {
    ProblemConfig c;
    c.K = static_cast<int>(st.range(0));
    c.n_r = 32;
    c.n_t = 16;
    RadialFunction phi = RadialFunction::parse("catalog:one_minus_r2");
    RadialFunction f = RadialFunction::parse("catalog:poly_smooth(s=5)");
    for (auto _ : st) benchmark::DoNotOptimize(forward_solve(c, phi, f).K_effective);
}
BENCHMARK(BM_ForwardSolve)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
