#include <benchmark/benchmark.h>

#include <vector>

#include "mixhypo/audit.hpp"
#include "mixhypo/estimation.hpp"
#include "mixhypo/family.hpp"
#include "mixhypo/quadrature.hpp"

using namespace mixhypo;

namespace {

// n-component MHW spec with well-separated scales.
FamilySpec spec_of(int n) {
    FamilySpec s{Family::MHW, 1.7, {}, 1e-6};
    double v = 0.8;
    for (int i = 0; i < n; ++i) {
        s.vector.push_back(v);
        v *= 1.6;
    }
    return s;
}

void bm_make_family(benchmark::State& state) {
    FamilySpec s = spec_of(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(make_family(s));
}
BENCHMARK(bm_make_family)->Arg(2)->Arg(4)->Arg(8);

void bm_mix_pdf(benchmark::State& state) {
    SignedMixture m = make_family(spec_of(static_cast<int>(state.range(0))));
    double t = 0.9;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mix_pdf(m, t));
        t = t < 4.0 ? t + 1e-3 : 0.9;  // walk the support, defeat caching
    }
}
BENCHMARK(bm_mix_pdf)->Arg(2)->Arg(4)->Arg(8);

void bm_mix_quantile(benchmark::State& state) {
    SignedMixture m = make_family(spec_of(4));
    double u = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mix_quantile(m, u));
        u = u < 0.99 ? u + 1e-3 : 0.01;
    }
}
BENCHMARK(bm_mix_quantile);

void bm_sample_family(benchmark::State& state) {
    FamilySpec s = spec_of(static_cast<int>(state.range(0)));
    RandomStream rng(42);
    for (auto _ : state) benchmark::DoNotOptimize(sample_family(s, 1000, rng));
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(bm_sample_family)->Arg(2)->Arg(8);

void bm_quadrature_cdf(benchmark::State& state) {
    SignedMixture m = make_family(spec_of(4));
    for (auto _ : state) {
        benchmark::DoNotOptimize(quad_integral([&](double x) { return mix_pdf(m, x); },
                                               0.0, 1.5, 1e-9, 1e-12));
    }
}
BENCHMARK(bm_quadrature_cdf);

void bm_ks_distance(benchmark::State& state) {
    FamilySpec s = spec_of(2);
    SignedMixture m = make_family(s);
    RandomStream rng(7);
    std::vector<double> xs = sample_family(s, 10000, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ks_distance(xs, [&](double t) { return mix_cdf(m, t); }));
    }
}
BENCHMARK(bm_ks_distance);

void bm_audit_family(benchmark::State& state) {
    FamilySpec s = default_audit_spec(Family::MHW);
    for (auto _ : state) benchmark::DoNotOptimize(audit_closed_forms(s, 11));
}
BENCHMARK(bm_audit_family);

void bm_log_likelihood(benchmark::State& state) {
    FamilySpec s = spec_of(2);
    RandomStream rng(11);
    std::vector<double> data = sample_family(s, 10000, rng);
    for (auto _ : state) benchmark::DoNotOptimize(log_likelihood(s, data));
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(bm_log_likelihood);

}  // namespace

BENCHMARK_MAIN();
