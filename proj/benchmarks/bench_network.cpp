#include <benchmark/benchmark.h>

#include "oscseg/image_io.hpp"
#include "oscseg/network.hpp"
#include "oscseg/segmentation.hpp"

namespace {

using namespace oscseg;

ModelConfig model_for(int index) {
  switch (index) {
    case 0: return NeuralParams{};
    case 1: return BzParams{};
    default: return MemsParams{};
  }
}

CouplingSpec coupling(double c) {
  CouplingSpec spec;
  spec.coefficient = c;
  spec.boundary = Boundary::mirror;
  return spec;
}

// args: model index, image side
void BM_Rk4Step(benchmark::State& state) {
  const int side = static_cast<int>(state.range(1));
  const ModelConfig model = model_for(static_cast<int>(state.range(0)));
  const auto img = generate_quadrant_image(side, 64, 0).image;
  NetworkState net = make_network(img, model, default_sim_config(kind_of(model)));
  const CouplingSpec spec = coupling(0.05);
  for (auto _ : state) {
    net = rk4_step(net, 0.002, spec);
    benchmark::DoNotOptimize(net.first.data());
  }
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_Rk4Step)->ArgsProduct({{0, 1, 2}, {16, 64, 128}});

// args: model index, threads
void BM_Simulate16(benchmark::State& state) {
  const ModelConfig model = model_for(static_cast<int>(state.range(0)));
  const auto img = generate_quadrant_image(16, 64, 0).image;
  SimConfig cfg = default_sim_config(kind_of(model));
  cfg.total_time /= 4.0;
  cfg.window /= 4.0;
  cfg.threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto res = simulate(img, model, coupling(0.05), cfg);
    benchmark::DoNotOptimize(res.frequencies.freqs.data());
  }
}
BENCHMARK(BM_Simulate16)->ArgsProduct({{0, 1, 2}, {1, 4}})->Unit(benchmark::kMillisecond);

void BM_Otsu(benchmark::State& state) {
  const auto img = generate_quadrant_image(static_cast<int>(state.range(0)), 64, 0).image;
  for (auto _ : state) benchmark::DoNotOptimize(otsu_threshold(img.pixels()));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_Otsu)->Arg(64)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
