// SPDX-License-Identifier: Apache-2.0
//
// Microbenchmarks for the stages that dominate reconstruction time. Inputs
// come from the deterministic synthetic presets so runs are comparable.
#include <benchmark/benchmark.h>

#include <vector>

#include "splatfuse/cost_volume.hpp"
#include "splatfuse/features.hpp"
#include "splatfuse/fusion.hpp"
#include "splatfuse/gaussians.hpp"
#include "splatfuse/pipeline.hpp"
#include "splatfuse/rasterizer.hpp"
#include "splatfuse/synthetic.hpp"
#include "splatfuse/triplets.hpp"

namespace {

using namespace splatfuse;

struct BenchScene {
  SyntheticScene scene;
  std::vector<CameraView> views;
  std::vector<FeatureMap> features;

  BenchScene(ScenePreset preset, int count, int width, int height) {
    scene = make_preset_scene(preset, 7, count, width, height);
    for (int v = 0; v < count; ++v) {
      CameraView view;
      view.image = render_ground_truth(scene, v).color;
      view.intrinsics = scene.intrinsics;
      view.pose = scene.trajectory[v];
      view.index = v;
      views.push_back(std::move(view));
      features.push_back(compute_matching_features(views.back()));
    }
  }
};

const BenchScene& wall_pair() {
  static const BenchScene scene(ScenePreset::kPlaneWall, 2, 256, 192);
  return scene;
}

void BM_matching_features(benchmark::State& state) {
  const BenchScene& bench = wall_pair();
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_matching_features(bench.views[0]));
  }
}
BENCHMARK(BM_matching_features)->Unit(benchmark::kMillisecond);

void BM_cost_volume_sweep(benchmark::State& state) {
  const BenchScene& bench = wall_pair();
  const DepthPlaneSet planes = build_depth_planes(1.0, 4.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_cost_volume(bench.views[0], bench.features[0],
                                               {&bench.views[1]}, {&bench.features[1]},
                                               planes));
  }
}
BENCHMARK(BM_cost_volume_sweep)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_depth_estimate(benchmark::State& state) {
  const BenchScene& bench = wall_pair();
  EngineConfig cfg;
  cfg.k = 64;
  cfg.d_near = 1.0;
  cfg.d_far = 4.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_view_depth(bench.views[0], bench.features[0],
                                                 {&bench.views[1]}, {&bench.features[1]},
                                                 cfg));
  }
}
BENCHMARK(BM_depth_estimate)->Unit(benchmark::kMillisecond);

void BM_fuse_view(benchmark::State& state) {
  const BenchScene& bench = wall_pair();
  const CameraView& view = bench.views[0];
  const int w = view.intrinsics.width, h = view.intrinsics.height;
  const Image depth(w, h, 1, 2.0f);
  const Image confidence(w, h, 1, 0.5f);
  const Image latents = assemble_latents(view, depth, confidence, bench.features[0]);
  const TripletSet local = unproject_to_triplets(depth, latents, confidence, view);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fuse_view(local, local, view, 0.05));
  }
}
BENCHMARK(BM_fuse_view)->Unit(benchmark::kMillisecond);

void BM_render(benchmark::State& state) {
  const BenchScene& bench = wall_pair();
  const CameraView& view = bench.views[0];
  const int w = view.intrinsics.width, h = view.intrinsics.height;
  const Image depth(w, h, 1, 2.0f);
  const Image confidence(w, h, 1, 0.5f);
  const Image latents = assemble_latents(view, depth, confidence, bench.features[0]);
  const TripletSet local = unproject_to_triplets(depth, latents, confidence, view);
  const GaussianPrimitiveSet prims = decode_triplets(local, view.intrinsics);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        render(prims, view.pose, view.intrinsics, Eigen::Vector3d::Zero()));
  }
  state.counters["gaussians"] = static_cast<double>(prims.size());
}
BENCHMARK(BM_render)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
