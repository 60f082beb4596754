#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <ostream>
#include <string>

#include "avs/error.hpp"
#include "avs/io.hpp"
#include "avs/parallel.hpp"
#include "avs/sampling.hpp"
#include "avs/schedule.hpp"
#include "avs/text.hpp"

namespace avs::cli {
namespace {

std::string frame_file_name(std::size_t frame, std::size_t layer) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "frame%05zu_layer%zu.xyz", frame, layer);
  return buf;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::IoError:
    case ErrorKind::ParseError:
    case ErrorKind::EmptyFile:
    case ErrorKind::UnsupportedFormat:
      return kIoError;
    default:
      return kUsage;
  }
}

}  // namespace

int cmd_calibrate(const CalibrateOptions& options, std::ostream& log) {
  if (options.ref_ratios.empty()) throw Error(ErrorKind::InvalidArgument, "at least one --ref-ratio is required");
  std::vector<VamConfig> configs;
  for (double ref : options.ref_ratios) {
    VamConfig c = options.base;
    c.ref_ratio = ref;
    c.validate();
    configs.push_back(c);
  }
  const ManifestFrames frames(load_manifest(options.manifest));
  CascadeCalibrationOptions cascade;
  cascade.warm_start = options.warm_start;
  const CalibrationResult result = calibrate_cascade(frames, configs, cascade);

  write_schedule(options.out, schedule_from(result));
  std::string trace = "layer,iteration,voxel_size,ratio,err\n";
  for (std::size_t l = 0; l < result.layers.size(); ++l) {
    const auto& history = result.layers[l].state.history;
    for (std::size_t i = 0; i < history.size(); ++i) {
      trace += std::to_string(l) + ',' + std::to_string(i) + ',' + text::format_double(history[i].voxel_size) + ',' +
               text::format_double(history[i].ratio) + ',' + text::format_double(history[i].err) + '\n';
    }
  }
  const auto trace_path = options.trace.value_or(std::filesystem::path(options.out.string() + ".trace.csv"));
  text::write_file(trace_path, trace);

  for (std::size_t l = 0; l < result.layers.size(); ++l) {
    const auto& layer = result.layers[l];
    log << "layer " << l << ": voxel_size " << text::format_double(layer.voxel_size, 6) << " ratio "
        << text::format_double(layer.achieved_ratio, 6) << " after " << layer.state.iteration << " iterations"
        << (layer.converged ? "" : " (not converged)") << '\n';
  }
  return result.converged() ? kOk : kNotConverged;
}

int cmd_sample(const SampleOptions& options, std::ostream& log) {
  const auto schedule = read_schedule(options.schedule);
  std::vector<double> sizes;
  for (const auto& e : schedule) sizes.push_back(e.voxel_size);
  const ManifestFrames frames(load_manifest(options.manifest));
  std::filesystem::create_directories(options.out_dir);

  std::string summary = "frame,layer,n_in,n_out,ratio\n";
  const FeatureTransform identity = identity_transform();
  for (std::size_t f = 0; f < frames.frame_count(); ++f) {
    const PointBatch batch = frames.frame(f);
    const auto layers = run_cascade(batch, sizes, options.nbr_size, identity);
    std::size_t n_in = batch.count();
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const std::size_t n_out = layers[l].points.count();
      write_xyz(options.out_dir / frame_file_name(f, l), layers[l].points);
      summary += std::to_string(f) + ',' + std::to_string(l) + ',' + std::to_string(n_in) + ',' +
                 std::to_string(n_out) + ',' + text::format_double(double(n_in) / double(n_out), 9) + '\n';
      n_in = n_out;
    }
  }
  text::write_file(options.out_dir / "summary.csv", summary);
  log << "sampled " << frames.frame_count() << " frames through " << sizes.size() << " layers\n";
  return kOk;
}

int cmd_bench(const BenchOptions& options, std::ostream& log) {
  const auto rows = run_benchmark(options.config);
  const std::string csv = format_bench_csv(rows);
  if (options.out.empty()) {
    log << csv;
  } else {
    text::write_file(options.out, csv);
    log << "wrote " << rows.size() << " rows to " << options.out.string() << '\n';
  }
  return kOk;
}

int cmd_synth(const SynthOptions& options, std::ostream& log) {
  DatasetManifest manifest = synth_dataset(parse_synth_kind(options.kind), options.frames, options.points, options.seed);
  if (options.write_xyz) {
    const auto dir = options.out.parent_path();
    DatasetManifest files;
    for (std::size_t f = 0; f < manifest.frame_count(); ++f) {
      const auto name = frame_file_name(f, 0);
      write_xyz(dir / name, generate_frame(std::get<GeneratorSpec>(manifest.sources[f])));
      files.sources.emplace_back(std::filesystem::path(name));
    }
    manifest = std::move(files);
  }
  write_manifest(options.out, manifest);
  log << "wrote manifest with " << manifest.frame_count() << " frames to " << options.out.string() << '\n';
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive voxel-size point cloud sampling and benchmarks"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (falls back to AVS_THREADS, then 1)");

  CalibrateOptions cal;
  auto* calibrate = app.add_subcommand("calibrate", "Calibrate per-layer voxel sizes against reference ratios");
  calibrate->add_option("--manifest", cal.manifest, "Dataset manifest")->required();
  calibrate->add_option("--ref-ratio", cal.ref_ratios, "Reference downsampling ratio (repeat once per layer)")
      ->required();
  calibrate->add_option("--v0", cal.base.v0, "Initial voxel size of the first layer")->capture_default_str();
  calibrate->add_option("--kp", cal.base.k_p, "Proportional gain")->capture_default_str();
  calibrate->add_option("--ki", cal.base.k_i, "Integral gain")->capture_default_str();
  calibrate->add_option("--ir", cal.base.i_r, "Scale step gain")->capture_default_str();
  calibrate->add_option("--epsilon", cal.base.epsilon, "Convergence threshold on |err|")->capture_default_str();
  calibrate->add_option("--max-iters", cal.base.max_iterations, "Iteration cap per layer")->capture_default_str();
  calibrate->add_flag("--relative-epsilon", cal.base.relative_epsilon, "Treat epsilon as a fraction of the ratio");
  bool cold = false;
  calibrate->add_flag("--no-warm-start", cold, "Start every layer from --v0");
  calibrate->add_option("--out", cal.out, "Schedule output path")->required();
  std::string trace;
  calibrate->add_option("--trace", trace, "Per-iteration CSV (default <out>.trace.csv)");

  SampleOptions smp;
  auto* sample = app.add_subcommand("sample", "Run the sampling cascade of a schedule over a dataset");
  sample->add_option("--manifest", smp.manifest, "Dataset manifest")->required();
  sample->add_option("--schedule", smp.schedule, "Schedule from `calibrate`")->required();
  sample->add_option("--nbr-size", smp.nbr_size, "Neighborhood edge length in voxels (odd)")->capture_default_str();
  sample->add_option("--out", smp.out_dir, "Output directory")->required();

  BenchOptions bo;
  std::vector<std::string> methods;
  auto* bench = app.add_subcommand("bench", "Latency of sampling and neighbor search methods");
  bench->add_option("--sizes", bo.config.sizes, "Point counts, ascending")->delimiter(',');
  bench->add_option("--methods", methods, "Subset of fps,knn,intra,inter")->delimiter(',');
  bench->add_option("--repeats", bo.config.timing.repeats, "Measured runs")->capture_default_str();
  bench->add_option("--warmup", bo.config.timing.warmup, "Discarded runs")->capture_default_str();
  bench->add_option("--budget", bo.config.timing.budget_seconds, "Seconds per (method, n) before stopping early");
  bench->add_option("--ratio", bo.config.downsample_ratio, "Downsampling ratio")->capture_default_str();
  bench->add_option("--nbr-size", bo.config.nbr_size, "Inter-voxel neighborhood size")->capture_default_str();
  bench->add_option("--knn-k", bo.config.knn_k, "Neighbors per KNN query")->capture_default_str();
  bench->add_option("--seed", bo.config.seed, "Point cloud seed")->capture_default_str();
  bench->add_option("--out", bo.out, "CSV output path (stdout when omitted)");

  SynthOptions syn;
  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset manifest");
  synth->add_option("--kind", syn.kind, "uniform_cube | gaussian_clusters | radial_lidar")->capture_default_str();
  synth->add_option("--frames", syn.frames, "Frame count")->capture_default_str();
  synth->add_option("--points", syn.points, "Points per frame")->capture_default_str();
  synth->add_option("--seed", syn.seed, "Generator seed")->capture_default_str();
  synth->add_flag("--xyz", syn.write_xyz, "Write frames as XYZ files next to the manifest");
  synth->add_option("--out", syn.out, "Manifest output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (threads == 0) threads = threads_from_env();
  set_default_threads(threads);
  bo.config.threads = default_threads();
  cal.warm_start = !cold;
  if (!trace.empty()) cal.trace = trace;

  try {
    if (*calibrate) return cmd_calibrate(cal, out);
    if (*sample) return cmd_sample(smp, out);
    if (*bench) {
      if (!methods.empty()) {
        bo.config.methods.clear();
        for (const auto& m : methods) bo.config.methods.push_back(parse_bench_method(m));
      }
      return cmd_bench(bo, out);
    }
    if (*synth) return cmd_synth(syn, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kUsage;
}

}  // namespace avs::cli
