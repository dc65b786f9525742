#include <benchmark/benchmark.h>

#include "deming/inference.hpp"
#include "deming/simulation.hpp"

namespace {

deming::SimulationSpec bench_spec() {
  deming::SimulationSpec s;
  s.n = 200;
  s.beta0 = 0.5;
  s.beta1 = 1.7;
  s.x_law.a = 0.0;
  s.x_law.b = 4.0;
  s.var_x_law.a = 0.3;
  s.var_y_law.a = 0.2;
  s.seed = 11;
  return s;
}

deming::ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(0) == 0 ? deming::ExecPolicy::serial : deming::ExecPolicy::parallel;
}

void BM_Bootstrap(benchmark::State& state) {
  const auto data = deming::generate_dataset(bench_spec()).dataset;
  deming::BootstrapOptions opt;
  opt.replicates = 400;
  opt.policy = policy_of(state);
  for (auto _ : state) {
    auto res = deming::bootstrap_fit(data, {deming::Scenario::B, 1.0}, opt);
    benchmark::DoNotOptimize(res.cov_params.b11);
  }
}

void BM_Coverage(benchmark::State& state) {
  deming::CoverageConfig cfg;
  cfg.estimator = {deming::Scenario::B, 1.0};
  cfg.replicates = 50;
  cfg.bootstrap = 100;
  cfg.policy = policy_of(state);
  for (auto _ : state) {
    auto rep = deming::run_coverage_study(bench_spec(), cfg);
    benchmark::DoNotOptimize(rep.deming.coverage_beta1);
  }
}

}  // namespace

BENCHMARK(BM_Bootstrap)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Coverage)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
