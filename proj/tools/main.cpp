// SPDX-License-Identifier: Apache-2.0
//
// splatfuse — command-line front end.
//
//   synth        generate a procedural dataset with exact ground-truth depth
//   reconstruct  feed-forward reconstruction of a scene into a Gaussian PLY
//   render       rasterize a PLY from an arbitrary pose
//   evaluate     reconstruct, re-render views, and report image/depth metrics
//
// Flag precedence: explicit flags > --config file > built-in defaults. Every
// run writes a JSON manifest next to its primary output.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "splatfuse/io/config.hpp"
#include "splatfuse/io/dataset.hpp"
#include "splatfuse/io/ply_io.hpp"
#include "splatfuse/io/png_io.hpp"
#include "splatfuse/io/report.hpp"
#include "splatfuse/metrics.hpp"
#include "splatfuse/parallel.hpp"
#include "splatfuse/pipeline.hpp"
#include "splatfuse/rasterizer.hpp"
#include "splatfuse/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct SharedArgs {
  std::string config_path;
  int threads = 0;
  std::uint64_t seed = 0;
  bool verbose = false;
};

void add_shared_flags(CLI::App* cmd, SharedArgs& shared) {
  cmd->add_option("--config", shared.config_path, "Engine config file (key = value lines)");
  cmd->add_option("--threads", shared.threads, "Worker thread cap, 0 = hardware")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", shared.seed, "Random seed (synthetic textures only)");
  cmd->add_flag("--verbose", shared.verbose, "Print per-stage timings");
}

struct EngineFlags {
  int k = 0;
  double d_near = 0.0, d_far = 0.0, delta = 0.0, temperature = 0.0, kappa = 0.0;
  int nearby = 0, refine = 0;
  std::string fusion_mode, weights, background;
};

void add_engine_flags(CLI::App* cmd, EngineFlags& flags) {
  cmd->add_option("--k", flags.k, "Depth planes");
  cmd->add_option("--d-near", flags.d_near, "Near plane depth (m)");
  cmd->add_option("--d-far", flags.d_far, "Far plane depth (m)");
  cmd->add_option("--delta", flags.delta, "Fusion depth-ratio threshold");
  cmd->add_option("--nearby", flags.nearby, "Nearby views per cost volume");
  cmd->add_option("--temperature", flags.temperature, "Soft-argmax temperature");
  cmd->add_option("--kappa", flags.kappa, "Splat footprint multiplier");
  cmd->add_option("--refine-iterations", flags.refine, "Cost-volume refinement passes");
  cmd->add_option("--fusion-mode", flags.fusion_mode, "blend | gru");
  cmd->add_option("--weights", flags.weights, "SPLF weights container");
}

Eigen::Vector3d parse_rgb_arg(const std::string& text) {
  double r = 0.0, g = 0.0, b = 0.0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf ,%lf ,%lf %c", &r, &g, &b, &tail) != 3) {
    throw std::runtime_error("--background expects r,g,b");
  }
  return {r, g, b};
}

bool flag_given(const CLI::App* cmd, const std::string& name) {
  const CLI::Option* option = cmd->get_option_no_throw(name);
  return option != nullptr && option->count() > 0;
}

splatfuse::EngineConfig resolve_config(const CLI::App* cmd, const SharedArgs& shared,
                                       const EngineFlags& flags) {
  splatfuse::EngineConfig cfg;
  if (!shared.config_path.empty()) cfg = splatfuse::load_config(shared.config_path);
  if (flag_given(cmd, "--k")) cfg.k = flags.k;
  if (flag_given(cmd, "--d-near")) cfg.d_near = flags.d_near;
  if (flag_given(cmd, "--d-far")) cfg.d_far = flags.d_far;
  if (flag_given(cmd, "--delta")) cfg.delta = flags.delta;
  if (flag_given(cmd, "--nearby")) cfg.nearby_views = flags.nearby;
  if (flag_given(cmd, "--temperature")) cfg.temperature = flags.temperature;
  if (flag_given(cmd, "--kappa")) cfg.kappa = flags.kappa;
  if (flag_given(cmd, "--refine-iterations")) cfg.refine_iterations = flags.refine;
  if (flag_given(cmd, "--fusion-mode")) cfg.fusion_mode = flags.fusion_mode;
  if (flag_given(cmd, "--weights")) cfg.weights = flags.weights;
  if (flag_given(cmd, "--background")) cfg.background = parse_rgb_arg(flags.background);
  cfg.validate();
  return cfg;
}

ordered_json config_to_json(const splatfuse::EngineConfig& c) {
  ordered_json j;
  j["k"] = c.k;
  j["d_near"] = c.d_near;
  j["d_far"] = c.d_far;
  j["delta"] = c.delta;
  j["nearby_views"] = c.nearby_views;
  j["lambda"] = c.lambda;
  j["temperature"] = c.temperature;
  j["refine_iterations"] = c.refine_iterations;
  j["sigma_g"] = c.sigma_g;
  j["kappa"] = c.kappa;
  j["matching_dim"] = c.matching_dim;
  j["fusion_mode"] = c.fusion_mode;
  j["weights"] = c.weights;
  j["tile_size"] = c.tile_size;
  j["background"] = {c.background.x(), c.background.y(), c.background.z()};
  return j;
}

void write_manifest(const fs::path& file, const ordered_json& manifest) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error(file.string() + ": cannot open for writing");
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error(file.string() + ": write failed");
}

// Tags exceptions with the pipeline stage they escaped from.
template <typename F>
auto stage(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw std::runtime_error(name + ": " + e.what());
  }
}

class Timer {
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();

 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }
};

std::vector<int> all_view_indices(const splatfuse::SceneDataset& scene) {
  std::vector<int> views(scene.views.size());
  for (std::size_t i = 0; i < views.size(); ++i) views[i] = static_cast<int>(i);
  return views;
}

void print_timings(const std::vector<std::pair<std::string, double>>& timings) {
  for (const auto& [name, ms] : timings) {
    std::printf("  %-10s %9.1f ms\n", name.c_str(), ms);
  }
}

ordered_json timings_to_json(const std::vector<std::pair<std::string, double>>& timings) {
  ordered_json j;
  for (const auto& [name, ms] : timings) j[name] = ms;
  return j;
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
  std::string preset = "box-room";
  std::string out;
  int frames = 4;
  int width = 256;
  int height = 192;
};

int run_synth(const SharedArgs& shared, const SynthArgs& args) {
  const Timer timer;
  const splatfuse::ScenePreset preset = splatfuse::parse_preset(args.preset);
  stage("generate", [&] {
    splatfuse::generate_scene(preset, shared.seed, args.frames, args.width, args.height,
                              args.out);
    return 0;
  });

  ordered_json manifest;
  manifest["command"] = "synth";
  manifest["preset"] = args.preset;
  manifest["seed"] = shared.seed;
  manifest["frames"] = args.frames;
  manifest["width"] = args.width;
  manifest["height"] = args.height;
  manifest["outputs"] = {args.out};
  manifest["timings_ms"] = ordered_json{{"total", timer.ms()}};
  write_manifest(fs::path(args.out) / "manifest.json", manifest);

  std::printf("wrote %d views (%dx%d, %s) to %s\n", args.frames, args.width, args.height,
              args.preset.c_str(), args.out.c_str());
  return 0;
}

// ---- reconstruct ----------------------------------------------------------

struct ReconstructArgs {
  std::string scene;
  std::string out;
  std::vector<int> views;
};

void print_fusion_stats(const splatfuse::ReconstructionResult& result,
                        const std::vector<int>& views) {
  for (std::size_t i = 0; i < result.stats.per_view.size(); ++i) {
    const splatfuse::FusionStats& s = result.stats.per_view[i];
    std::printf("view %d: global %zu + local %zu, merged %zu -> %zu (reduction %.1f%%)\n",
                views[i], s.input_global, s.input_local, s.merged, s.output,
                100.0 * s.reduction_ratio);
  }
  std::printf("fused %zu local triplets into %zu primitives (reduction %.1f%%)\n",
              result.stats.total_local, result.stats.final_count,
              100.0 * result.stats.reduction_ratio);
}

int run_reconstruct(const CLI::App* cmd, const SharedArgs& shared, const EngineFlags& flags,
                    const ReconstructArgs& args) {
  const splatfuse::EngineConfig cfg = resolve_config(cmd, shared, flags);
  const splatfuse::SceneDataset scene =
      stage("load-scene", [&] { return splatfuse::load_scene(args.scene); });
  const std::vector<int> views = args.views.empty() ? all_view_indices(scene) : args.views;

  splatfuse::ReconstructionResult result =
      stage("reconstruct", [&] { return splatfuse::reconstruct_views(scene, views, cfg); });
  stage("export", [&] {
    splatfuse::export_ply(result.primitives, args.out);
    return 0;
  });

  print_fusion_stats(result, views);
  if (shared.verbose) print_timings(result.timings_ms);

  ordered_json manifest;
  manifest["command"] = "reconstruct";
  manifest["scene"] = args.scene;
  manifest["views"] = views;
  manifest["config"] = config_to_json(cfg);
  manifest["seed"] = shared.seed;
  manifest["outputs"] = {args.out};
  manifest["stats"] = {{"total_local", result.stats.total_local},
                       {"final_count", result.stats.final_count},
                       {"reduction_ratio", result.stats.reduction_ratio}};
  manifest["timings_ms"] = timings_to_json(result.timings_ms);
  write_manifest(args.out + ".manifest.json", manifest);
  return 0;
}

// ---- render ---------------------------------------------------------------

struct RenderArgs {
  std::string ply;
  std::string pose;
  std::string intrinsics;
  int width = 0;
  int height = 0;
  std::string out;
  std::string depth_out;
};

int run_render(const CLI::App* cmd, const SharedArgs& shared, const EngineFlags& flags,
               const RenderArgs& args) {
  const Timer timer;
  const splatfuse::EngineConfig cfg = resolve_config(cmd, shared, flags);
  const splatfuse::GaussianPrimitiveSet prims =
      stage("import", [&] { return splatfuse::import_ply(args.ply); });
  const splatfuse::Pose pose = stage("pose", [&] { return splatfuse::load_pose(args.pose); });
  const splatfuse::Intrinsics intr = stage("intrinsics", [&] {
    return splatfuse::load_intrinsics(args.intrinsics, args.width, args.height);
  });

  splatfuse::RasterizerOptions options;
  options.tile_size = cfg.tile_size;
  const splatfuse::RenderedFrame frame = stage(
      "render", [&] { return splatfuse::render(prims, pose, intr, cfg.background, options); });
  stage("write", [&] {
    splatfuse::write_png_color(args.out, frame.color);
    if (!args.depth_out.empty()) splatfuse::write_png_depth_mm(args.depth_out, frame.depth);
    return 0;
  });

  ordered_json manifest;
  manifest["command"] = "render";
  manifest["ply"] = args.ply;
  manifest["pose"] = args.pose;
  manifest["intrinsics"] = args.intrinsics;
  manifest["width"] = args.width;
  manifest["height"] = args.height;
  manifest["background"] = {cfg.background.x(), cfg.background.y(), cfg.background.z()};
  manifest["tile_size"] = cfg.tile_size;
  ordered_json outputs = {args.out};
  if (!args.depth_out.empty()) outputs.push_back(args.depth_out);
  manifest["outputs"] = outputs;
  manifest["timings_ms"] = ordered_json{{"total", timer.ms()}};
  write_manifest(args.out + ".manifest.json", manifest);

  if (shared.verbose) std::printf("rendered %zu primitives in %.1f ms\n", prims.size(), timer.ms());
  return 0;
}

// ---- evaluate -------------------------------------------------------------

struct EvaluateArgs {
  std::string scene;
  std::string out;
  std::vector<int> views;
  std::vector<int> targets;
};

int run_evaluate(const CLI::App* cmd, const SharedArgs& shared, const EngineFlags& flags,
                 const EvaluateArgs& args) {
  const Timer total_timer;
  const splatfuse::EngineConfig cfg = resolve_config(cmd, shared, flags);
  const splatfuse::SceneDataset scene =
      stage("load-scene", [&] { return splatfuse::load_scene(args.scene); });
  const std::vector<int> context = args.views.empty() ? all_view_indices(scene) : args.views;
  const std::vector<int> targets = args.targets.empty() ? context : args.targets;
  for (int t : targets) {
    if (t < 0 || t >= static_cast<int>(scene.views.size())) {
      throw std::runtime_error("target view " + std::to_string(t) + " outside dataset");
    }
  }

  splatfuse::ReconstructionResult result =
      stage("reconstruct", [&] { return splatfuse::reconstruct_views(scene, context, cfg); });

  splatfuse::RasterizerOptions options;
  options.tile_size = cfg.tile_size;
  const Timer render_timer;
  double psnr_sum = 0.0, ssim_sum = 0.0;
  double abs_diff_sum = 0.0, abs_rel_sum = 0.0, d125_sum = 0.0, d110_sum = 0.0;
  int depth_targets = 0;
  for (int t : targets) {
    const splatfuse::CameraView& view = scene.views[t];
    const splatfuse::RenderedFrame frame = stage("render", [&] {
      return splatfuse::render(result.primitives, view.pose, view.intrinsics, cfg.background,
                               options);
    });
    psnr_sum += splatfuse::psnr(frame.color, view.image);
    ssim_sum += splatfuse::ssim(frame.color, view.image);
    if (scene.has_depth()) {
      const splatfuse::Image& gt = scene.gt_depths[t];
      splatfuse::Image mask(gt.width, gt.height, 1);
      std::size_t valid = 0;
      for (std::size_t i = 0; i < mask.data.size(); ++i) {
        mask.data[i] = gt.data[i] > 0.0f ? 1.0f : 0.0f;
        valid += gt.data[i] > 0.0f;
      }
      if (valid > 0) {
        const splatfuse::DepthMetrics dm = splatfuse::depth_metrics(frame.depth, gt, mask);
        abs_diff_sum += dm.abs_diff;
        abs_rel_sum += dm.abs_rel;
        d125_sum += dm.delta_1_25;
        d110_sum += dm.delta_1_10;
        ++depth_targets;
      }
    }
  }
  const double render_ms = render_timer.ms();
  const double n = static_cast<double>(targets.size());

  splatfuse::MetricsReport report;
  report.psnr = psnr_sum / n;
  report.ssim = ssim_sum / n;
  report.has_depth = depth_targets > 0;
  if (report.has_depth) {
    report.abs_diff = abs_diff_sum / depth_targets;
    report.abs_rel = abs_rel_sum / depth_targets;
    report.delta_1_25 = d125_sum / depth_targets;
    report.delta_1_10 = d110_sum / depth_targets;
  }
  report.num_gaussians = result.primitives.size();
  report.reduction_ratio = result.stats.reduction_ratio;
  report.timings_ms = result.timings_ms;
  report.timings_ms.emplace_back("render", render_ms);
  report.timings_ms.emplace_back("evaluate_total", total_timer.ms());
  stage("report", [&] {
    splatfuse::write_report(report, args.out);
    return 0;
  });

  std::printf("psnr %.2f dB  ssim %.4f  gaussians %zu  reduction %.1f%%\n", report.psnr,
              report.ssim, report.num_gaussians, 100.0 * report.reduction_ratio);
  if (shared.verbose) print_timings(report.timings_ms);

  ordered_json manifest;
  manifest["command"] = "evaluate";
  manifest["scene"] = args.scene;
  manifest["views"] = context;
  manifest["targets"] = targets;
  manifest["config"] = config_to_json(cfg);
  manifest["seed"] = shared.seed;
  manifest["outputs"] = {args.out};
  manifest["timings_ms"] = timings_to_json(report.timings_ms);
  write_manifest(args.out + ".manifest.json", manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "splatfuse — feed-forward multi-view Gaussian reconstruction.\n"
      "Flag precedence: explicit flags > --config file > built-in defaults."};
  app.require_subcommand(1);

  SharedArgs shared;
  EngineFlags flags;

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  add_shared_flags(synth, shared);
  synth->add_option("--preset", synth_args.preset, "plane-wall | box-room | corridor")
      ->required();
  synth->add_option("--out", synth_args.out, "Output dataset directory")->required();
  synth->add_option("--frames", synth_args.frames, "Number of views");
  synth->add_option("--width", synth_args.width, "Image width");
  synth->add_option("--height", synth_args.height, "Image height");

  ReconstructArgs rec_args;
  CLI::App* rec = app.add_subcommand("reconstruct", "Reconstruct a scene into a Gaussian PLY");
  add_shared_flags(rec, shared);
  add_engine_flags(rec, flags);
  rec->add_option("--background", flags.background, "Background color r,g,b");
  rec->add_option("--scene", rec_args.scene, "Dataset directory")->required();
  rec->add_option("--out", rec_args.out, "Output PLY path")->required();
  rec->add_option("--views", rec_args.views, "Context view indices (default: all)")
      ->delimiter(',');

  RenderArgs render_args;
  CLI::App* render = app.add_subcommand("render", "Render a PLY from a pose");
  add_shared_flags(render, shared);
  render->add_option("--background", flags.background, "Background color r,g,b");
  render->add_option("--ply", render_args.ply, "Gaussian PLY")->required();
  render->add_option("--pose", render_args.pose, "4x4 camera-to-world pose file")->required();
  render->add_option("--intrinsics", render_args.intrinsics, "3x3 intrinsics file")->required();
  render->add_option("--width", render_args.width, "Image width")->required();
  render->add_option("--height", render_args.height, "Image height")->required();
  render->add_option("--out", render_args.out, "Output color PNG")->required();
  render->add_option("--depth-out", render_args.depth_out, "Optional 16-bit depth PNG (mm)");

  EvaluateArgs eval_args;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Reconstruct and report metrics");
  add_shared_flags(evaluate, shared);
  add_engine_flags(evaluate, flags);
  evaluate->add_option("--background", flags.background, "Background color r,g,b");
  evaluate->add_option("--scene", eval_args.scene, "Dataset directory")->required();
  evaluate->add_option("--out", eval_args.out, "Output JSON report")->required();
  evaluate->add_option("--views", eval_args.views, "Context view indices (default: all)")
      ->delimiter(',');
  evaluate->add_option("--targets", eval_args.targets, "Target view indices (default: context)")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  const CLI::App* active = app.get_subcommands().front();
  try {
    splatfuse::set_max_workers(shared.threads);
    if (synth->parsed()) return run_synth(shared, synth_args);
    if (rec->parsed()) return run_reconstruct(rec, shared, flags, rec_args);
    if (render->parsed()) return run_render(render, shared, flags, render_args);
    if (evaluate->parsed()) return run_evaluate(evaluate, shared, flags, eval_args);
  } catch (const std::exception& e) {
    std::cerr << "splatfuse " << active->get_name() << ": " << e.what() << '\n';
    return 1;
  }
  return 1;
}
