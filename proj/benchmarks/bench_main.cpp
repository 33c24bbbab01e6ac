#include <benchmark/benchmark.h>

#include <random>

#include "pulsesq/decomposition.hpp"
#include "pulsesq/field_grid.hpp"
#include "pulsesq/propagator.hpp"
#include "pulsesq/takagi.hpp"

using namespace pulsesq;
using cd = std::complex<double>;

namespace {

const DispersionModel& bbo() {
  static const DispersionModel m = DispersionModel::bbo();
  return m;
}

FrequencyGrid grid(int n) { return make_grid(n, bbo().omega_pump() / 2.0, n <= 128 ? 1.0 : 2.0); }

Eigen::VectorXcd random_vector(int n, unsigned seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(n);
  for (int j = 0; j < n; ++j) v(j) = cd(nd(eng), nd(eng));
  return v;
}

}  // namespace

// One input field through the crystal.
static void BM_PropagateField(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const FrequencyGrid g = grid(n);
  const PumpSpec p = default_pump(bbo(), 1.0);
  const Eigen::VectorXcd a = random_vector(n, 1);
  const Scheme s = st.range(1) == 0 ? Scheme::split_step : Scheme::rk4;
  for (auto _ : st) benchmark::DoNotOptimize(propagate_field(a, p, bbo(), g, s, 100));
  st.SetLabel(to_string(s) + ", 100 steps");
}
BENCHMARK(BM_PropagateField)->Args({64, 0})->Args({256, 0})->Args({512, 0})->Args({64, 1})->Args({256, 1})
    ->Unit(benchmark::kMillisecond);

static void BM_GreenPair(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const FrequencyGrid g = grid(n);
  const PumpSpec p = default_pump(bbo(), 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(compute_green(p, bbo(), g, Scheme::split_step, 100, false));
  st.SetLabel("100 steps");
}
BENCHMARK(BM_GreenPair)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_BlochMessiah(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const FrequencyGrid g = grid(n);
  const PumpSpec p = default_pump(bbo(), 1.0);
  const GreenPair gp = to_moving_frame(compute_green(p, bbo(), g, Scheme::split_step, default_steps(Scheme::split_step, p)));
  for (auto _ : st) benchmark::DoNotOptimize(bloch_messiah(gp));
}
BENCHMARK(BM_BlochMessiah)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Takagi(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  std::mt19937_64 eng(2);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = cd(nd(eng), nd(eng));
  const Eigen::MatrixXcd sym = 0.5 * (a + a.transpose());
  for (auto _ : st) benchmark::DoNotOptimize(takagi(sym));
}
BENCHMARK(BM_Takagi)->Arg(64)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_Transform(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const FrequencyGrid g = grid(n);
  const Eigen::VectorXcd v = random_vector(n, 3);
  for (auto _ : st) benchmark::DoNotOptimize(transform(v, Direction::to_time, g));
}
BENCHMARK(BM_Transform)->Arg(512)->Arg(4096);
BENCHMARK_MAIN();
