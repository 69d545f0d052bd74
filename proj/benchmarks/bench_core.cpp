#include <benchmark/benchmark.h>

#include <random>

#include "r4bp/equilibria.hpp"
#include "r4bp/integrator.hpp"
#include "r4bp/linstab.hpp"
#include "r4bp/manifolds.hpp"
#include "r4bp/nf_algebra.hpp"
#include "r4bp/normal_form.hpp"

namespace {

using namespace r4bp;

void BM_VectorField(benchmark::State& st) {
  const SystemConfig cfg(0.019);
  State s{1.3, 0.2, -0.1, 0.4};
  for (auto _ : st) {
    benchmark::DoNotOptimize(s);
    benchmark::DoNotOptimize(vector_field(cfg, s));
  }
}
BENCHMARK(BM_VectorField);

void BM_Integrate50(benchmark::State& st) {
  const SystemConfig cfg(0.019);
  const State s0{1.6, 0, 0, -1.2};
  for (auto _ : st) benchmark::DoNotOptimize(integrate(cfg, s0, 50.0, {}).final_state());
}
BENCHMARK(BM_Integrate50)->Unit(benchmark::kMillisecond);

nf::LaurentFourierPoly dense_poly(std::mt19937_64& rng, int terms) {
  std::uniform_int_distribution<int> e(0, 3), m(0, 4), ph(0, 1);
  std::uniform_real_distribution<double> c(-1, 1);
  nf::LaurentFourierPoly p;
  for (int k = 0; k < terms; ++k) p.add_term({e(rng), e(rng), e(rng), m(rng), ph(rng) ? nf::Phase::Sin : nf::Phase::Cos}, c(rng));
  return p;
}

void BM_PolyMultiply(benchmark::State& st) {
  std::mt19937_64 rng(7);
  const auto f = dense_poly(rng, static_cast<int>(st.range(0))), g = dense_poly(rng, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(f * g);
}
BENCHMARK(BM_PolyMultiply)->Arg(8)->Arg(32)->Arg(128);

void BM_PoissonBracket(benchmark::State& st) {
  std::mt19937_64 rng(11);
  const auto f = dense_poly(rng, 32), g = dense_poly(rng, 32);
  for (auto _ : st) benchmark::DoNotOptimize(nf::poisson_bracket(f, g));
}
BENCHMARK(BM_PoissonBracket);

void BM_FindMuB(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(find_mu_b().mu_b);
}
BENCHMARK(BM_FindMuB)->Unit(benchmark::kMillisecond);

void BM_NormalFormPipeline(benchmark::State& st) {
  const double mu_b = find_mu_b().mu_b;
  for (auto _ : st) benchmark::DoNotOptimize(normal_form_report(mu_b));
}
BENCHMARK(BM_NormalFormPipeline)->Unit(benchmark::kMillisecond);

void BM_Globalize64(benchmark::State& st) {
  const SystemConfig cfg(0.019);
  const auto frame = eigen_frame(cfg, find_l2(cfg));
  ManifoldSettings set;
  set.threads = static_cast<unsigned>(st.range(0));
  const auto grid = uniform_theta_grid(64);
  for (auto _ : st) benchmark::DoNotOptimize(globalize(cfg, frame, grid, set));
}
BENCHMARK(BM_Globalize64)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
