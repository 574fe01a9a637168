// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "bitoss/binomials.hpp"
#include "bitoss/em.hpp"

namespace {

using namespace bitoss;

Coin<double> float_coin() { return Coin<double>::two(0.375, 5.0 / 12.0, 1.0 / 12.0, 0.125); }

Coin<Rational> exact_coin() {
  return Coin<Rational>::two(make_rational(3, 8), make_rational(5, 12), make_rational(1, 12), make_rational(1, 8));
}

void BM_BivbinDirect_Float(benchmark::State& st) {
  const auto g = float_coin();
  for (auto _ : st) benchmark::DoNotOptimize(bivbin_direct(static_cast<unsigned>(st.range(0)), g));
}
BENCHMARK(BM_BivbinDirect_Float)->Arg(15)->Arg(40)->Arg(100);

void BM_MvbinFunctorial_Float(benchmark::State& st) {
  const auto g = float_coin();
  for (auto _ : st) benchmark::DoNotOptimize(mvbin_functorial(static_cast<unsigned>(st.range(0)), g));
}
BENCHMARK(BM_MvbinFunctorial_Float)->Arg(15)->Arg(40)->Arg(100);

void BM_BivbinDirect_Exact(benchmark::State& st) {
  const auto g = exact_coin();
  for (auto _ : st) benchmark::DoNotOptimize(bivbin_direct(static_cast<unsigned>(st.range(0)), g));
}
BENCHMARK(BM_BivbinDirect_Exact)->Arg(8)->Arg(20);

void BM_MvbinFunctorial_Exact(benchmark::State& st) {
  const auto g = exact_coin();
  for (auto _ : st) benchmark::DoNotOptimize(mvbin_functorial(static_cast<unsigned>(st.range(0)), g));
}
BENCHMARK(BM_MvbinFunctorial_Exact)->Arg(8)->Arg(20);

struct EmFixture {
  EMState state;
  PDist<double> data;

  explicit EmFixture(unsigned K) : state(em_init(2, K, 7)) {
    const auto truth = floored_prediction(K, float_coin());
    data = flrn<double>(sample(truth, 1000, 42));
  }
};

void BM_EmStep(benchmark::State& st) {
  const EmFixture f(static_cast<unsigned>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(em_step(f.state, f.data));
}
BENCHMARK(BM_EmStep)->Arg(15)->Arg(40);

void BM_EmStepReference(benchmark::State& st) {
  const EmFixture f(static_cast<unsigned>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(em_step_reference(f.state, f.data));
}
BENCHMARK(BM_EmStepReference)->Arg(15)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
