#include <benchmark/benchmark.h>

#include "ptl/integrator.hpp"
#include "ptl/state_prep.hpp"

namespace {

ptl::Preparation row1(std::size_t sites) {
  ptl::PrepSpec s;
  s.sites = sites;
  s.ks = ptl::default_subsystem_site(sites);
  return ptl::prepare(s);
}

void BM_Rhs(benchmark::State& state) {
  const auto p = row1(static_cast<std::size_t>(state.range(0)));
  std::vector<ptl::Complex> out(p.state.size());
  for (auto _ : state) {
    ptl::rhs_into(p.state.amplitudes, p.params, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Rhs)->Arg(50)->Arg(200)->Arg(1000);

void BM_Step(benchmark::State& state) {
  const auto p = row1(static_cast<std::size_t>(state.range(0)));
  ptl::LatticeState s = p.state;
  for (auto _ : state) {
    s = ptl::step(s, p.params, 1e-3);
    benchmark::DoNotOptimize(s.amplitudes.data());
  }
}
BENCHMARK(BM_Step)->Arg(50)->Arg(200);

void BM_Evolve(benchmark::State& state) {
  const auto p = row1(50);
  ptl::IntegratorConfig cfg;
  cfg.t_final = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto tr = ptl::evolve(p.state, p.params, cfg);
    benchmark::DoNotOptimize(tr.states.data());
  }
}
BENCHMARK(BM_Evolve)->Arg(1)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
