#include <benchmark/benchmark.h>

#include <cmath>

#include "rw/evolution.hpp"
#include "rw/propagator.hpp"
#include "rw/spectral.hpp"
#include "rw/transforms.hpp"

using namespace rw;

static void BM_SineForward(benchmark::State& state) {
    GridSpec g{512.0, (int)state.range(0)};
    GridFunction f = make_grid_function(g);
    for (int n = 1; n <= g.N; ++n)
        f.v[n - 1] = std::exp(-(g.x(n) - 100) * (g.x(n) - 100) / 50.0);
    for (auto _ : state) {
        SpectrumFunction s = sine_forward(f);
        benchmark::DoNotOptimize(s.v.data());
    }
    state.SetItemsProcessed(state.iterations() * g.N);
}
BENCHMARK(BM_SineForward)->Arg(2047)->Arg(8191)->Arg(32767);

static void BM_PhaseShift(benchmark::State& state) {
    MomentCache m(PotentialSpec::shifted_inverse_power(0.6, 1.0), 1.0);
    m.moment(2, 1e6);  // warm the knot cache
    double k = 0.9, t = 1.0;
    for (auto _ : state) {
        t = t > 9e5 ? 1.0 : t * 1.01 + 0.1;
        benchmark::DoNotOptimize(phase_shift(Variant::Full, m, k, t));
    }
}
BENCHMARK(BM_PhaseShift);

static void BM_FdStep(benchmark::State& state) {
    GridSpec g{512.0, (int)state.range(0)};
    FieldState s{g, std::vector<double>(g.N, 0.0), std::vector<double>(g.N, 0.0), 0.0};
    for (int n = 1; n <= g.N; ++n)
        s.w[n - 1] = std::exp(-(g.x(n) - 100) * (g.x(n) - 100) / 50.0);
    FdEvolution ev(PotentialSpec::shifted_inverse_power(0.6, 1.0), s, 0.5);
    for (auto _ : state) ev.step();
    state.SetItemsProcessed(state.iterations() * g.N);
}
BENCHMARK(BM_FdStep)->Arg(8191)->Arg(65535);

static void BM_Wavefunction(benchmark::State& state) {
    PotentialSpec q = PotentialSpec::shifted_inverse_power(0.6, 1.0);
    std::vector<double> xs;
    for (double x = 1; x <= 400; x += 1) xs.push_back(x);
    for (auto _ : state) {
        WaveFunction wf = solve_wavefunction(q, 1.3, xs, 1e-10);
        benchmark::DoNotOptimize(wf.u.data());
    }
}
BENCHMARK(BM_Wavefunction);

static void BM_ModifiedPropagator(benchmark::State& state) {
    GridSpec g{256.0, 4095};
    MomentCache m(PotentialSpec::shifted_inverse_power(0.6, 1.0), 1.0);
    m.moment(2, 1e4);
    GridFunction v0 = make_grid_function(g), v1 = make_grid_function(g);
    for (int n = 1; n <= g.N; ++n)
        v0.v[n - 1] = std::exp(-(g.x(n) - 60) * (g.x(n) - 60) / 20.0) * std::cos(1.2 * g.x(n));
    for (auto _ : state) {
        auto [w0, w1] = U_vec(Variant::Full, m, 100.0, v0, v1);
        benchmark::DoNotOptimize(w0.v.data());
    }
}
BENCHMARK(BM_ModifiedPropagator);

BENCHMARK_MAIN();
