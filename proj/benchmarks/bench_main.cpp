#include <benchmark/benchmark.h>

#include <random>

#include "certikraw/autodiff.hpp"
#include "certikraw/gluing_system.hpp"
#include "certikraw/interval_linalg.hpp"
#include "certikraw/krawczyk.hpp"
#include "certikraw/rigorous_arg.hpp"
#include "certikraw/verify.hpp"

using namespace certikraw;

namespace {

const std::filesystem::path kData = CERTIKRAW_BENCH_DATA_DIR;

std::vector<Interval> operands(std::size_t n) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> d(0.5, 2.0), w(0.0, 1e-6);
  std::vector<Interval> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = d(gen);
    out.emplace_back(lo, lo + w(gen));
  }
  return out;
}

template <class Op>
void interval_op(benchmark::State& state, Op op) {
  const auto xs = operands(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(op(xs[i & 1023], xs[(i + 1) & 1023]));
    ++i;
  }
}

void BM_IntervalAdd(benchmark::State& s) { interval_op(s, [](auto a, auto b) { return a + b; }); }
void BM_IntervalMul(benchmark::State& s) { interval_op(s, [](auto a, auto b) { return a * b; }); }
void BM_IntervalDiv(benchmark::State& s) { interval_op(s, [](auto a, auto b) { return a / b; }); }
BENCHMARK(BM_IntervalAdd);
BENCHMARK(BM_IntervalMul);
BENCHMARK(BM_IntervalDiv);

void BM_Atan2Interval(benchmark::State& state) {
  const auto xs = operands(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(atan2_interval(xs[i & 1023], -xs[(i + 1) & 1023]));
    ++i;
  }
}
BENCHMARK(BM_Atan2Interval);

// Product of dim variables with an AD tuple of dim + 1 slots.
void BM_AdProduct(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const AdContext ctx(dim);
  const auto xs = operands(dim);
  const auto seeds = ctx.seed(std::span<const Interval>(xs));
  for (auto _ : state) {
    AdTuple p = seeds[0];
    for (std::size_t i = 1; i < dim; ++i) p = p * seeds[i];
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_AdProduct)->Arg(4)->Arg(16)->Arg(64);

void BM_KrawczykFigureEightFilled(benchmark::State& state) {
  const GluingSystem sys = load_gluing(kData / "4_1_5_1.gluing.json");
  const ResidualSystem res(sys, select_rows(sys.lambda(), sys.mandatory_rows(), static_cast<std::size_t>(sys.n),
                                            kDefaultRankDelta, sys.candidate_rows()));
  const PointVector c = newton_refine(res, flatten(*sys.approx_solution)).x;
  for (auto _ : state) benchmark::DoNotOptimize(krawczyk_test(res, c));
}
BENCHMARK(BM_KrawczykFigureEightFilled);

void BM_VerifyFile(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(verify_file(kData / "m003_-3_1.gluing.json"));
}
BENCHMARK(BM_VerifyFile)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
