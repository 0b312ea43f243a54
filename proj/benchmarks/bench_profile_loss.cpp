#include <benchmark/benchmark.h>

#include "spl/spl.hpp"

namespace {

spl::Image symmetric_noise(int side, std::uint64_t seed) {
  spl::Rng rng(seed);
  return spl::random_image({side, side, 3}, rng, -1.0, 1.0, spl::Range::Symmetric);
}

void BM_ProfileSimilarity(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const spl::Image a = symmetric_noise(side, 1);
  const spl::Image b = symmetric_noise(side, 2);
  for (auto _ : state) benchmark::DoNotOptimize(spl::profile_similarity(a, b, 1e-12));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.size()));
}
BENCHMARK(BM_ProfileSimilarity)->Arg(32)->Arg(128)->Arg(512);

void BM_ProfileSimilarityGrad(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const spl::Image a = symmetric_noise(side, 1);
  const spl::Image b = symmetric_noise(side, 2);
  for (auto _ : state) benchmark::DoNotOptimize(spl::profile_similarity_grad(a, b, 1e-12));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.size()));
}
BENCHMARK(BM_ProfileSimilarityGrad)->Arg(32)->Arg(128)->Arg(512);

void BM_SplObjective(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const spl::Image gen = symmetric_noise(side, 1);
  const spl::Image target = symmetric_noise(side, 2);
  const spl::LossConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(spl::spl_objective(gen, target, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(gen.size()));
}
BENCHMARK(BM_SplObjective)->Arg(32)->Arg(128)->Arg(512);

void BM_AdamStep(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  spl::Image img = symmetric_noise(side, 1);
  const spl::LossGradient grad{symmetric_noise(side, 2)};
  spl::OptimizerState opt = spl::OptimizerState::zeros(img.shape());
  const spl::AdamParams params;
  for (auto _ : state) spl::adam_step(img, grad, opt, params);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}
BENCHMARK(BM_AdamStep)->Arg(128)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
