#include <benchmark/benchmark.h>

#include "cg/airy.hpp"
#include "cg/descent.hpp"
#include "cg/exactdist.hpp"
#include "cg/lpp.hpp"
#include "cg/model.hpp"
#include "cg/shape.hpp"

namespace {

cg::ModelSpec geometric() {
    cg::ModelSpec m;
    m.kind = cg::ModelKind::Geometric;
    m.alpha = cg::ParamLaw::uniform(0.2, 0.4);
    m.beta = cg::ParamLaw::point(0.3);
    m.seed = 7;
    m.validate();
    return m;
}

void BM_LppDp(benchmark::State& st) {
    auto n = static_cast<std::size_t>(st.range(0));
    auto W = cg::sample_weights(geometric(), n, n);
    for (auto _ : st) benchmark::DoNotOptimize(cg::lpp_dp(W));
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * n * n));
}
BENCHMARK(BM_LppDp)->Arg(256)->Arg(1024);

void BM_Airy(benchmark::State& st) {
    double s = -10;
    for (auto _ : st) {
        benchmark::DoNotOptimize(cg::airy(s));
        s = s > 10 ? -10 : s + 0.37;
    }
}
BENCHMARK(BM_Airy);

void BM_TwFredholm(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(cg::tw_gue_fredholm(-2.0));
}
BENCHMARK(BM_TwFredholm);

void BM_TwPainleveGrid(benchmark::State& st) {
    std::vector<double> s;
    for (double x = -8; x <= 4; x += 0.25) s.push_back(x);
    for (auto _ : st) benchmark::DoNotOptimize(cg::tw_gue_painleve(s));
}
BENCHMARK(BM_TwPainleveGrid);

void BM_ShapeEval(benchmark::State& st) {
    auto m = geometric();
    for (auto _ : st) benchmark::DoNotOptimize(cg::shape_eval(m.kind, m.alpha, m.beta, 1.0, 1.3));
}
BENCHMARK(BM_ShapeEval);

void BM_FredholmCdf(benchmark::State& st) {
    auto n = static_cast<std::size_t>(st.range(0));
    auto seq = cg::sample_sequences(geometric(), n, n);
    auto ctx = cg::make_kernel_context(seq.a, seq.b);
    auto k = static_cast<long long>(ctx.gamma * static_cast<double>(n));
    for (auto _ : st) benchmark::DoNotOptimize(cg::cdf_fredholm_range(ctx, k, k));
}
BENCHMARK(BM_FredholmCdf)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_TraceDescent(benchmark::State& st) {
    auto n = static_cast<std::size_t>(st.range(0));
    auto seq = cg::sample_sequences(geometric(), n, n);
    auto af = cg::make_action(seq.a, seq.b);
    for (auto _ : st) benchmark::DoNotOptimize(cg::trace_phi(af, cg::TraceDirection::Descent));
}
BENCHMARK(BM_TraceDescent)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
