#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "avs/bench.hpp"
#include "avs/vam.hpp"

namespace avs::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNotConverged = 2, kIoError = 3 };

struct CalibrateOptions {
  std::filesystem::path manifest;
  std::vector<double> ref_ratios;
  VamConfig base{};  ///< gains, epsilon, iteration cap, v0 of layer 0
  bool warm_start = true;
  std::filesystem::path out;
  std::optional<std::filesystem::path> trace;  ///< defaults to `<out>.trace.csv`
};

/// Writes the schedule and a `layer,iteration,voxel_size,ratio,err` trace.
/// Returns kNotConverged (schedule still written) if any layer failed to converge.
int cmd_calibrate(const CalibrateOptions& options, std::ostream& log);

struct SampleOptions {
  std::filesystem::path manifest;
  std::filesystem::path schedule;
  int nbr_size = 3;
  std::filesystem::path out_dir;
};

/// Per frame and layer writes `frame<i>_layer<k>.xyz` plus `summary.csv`
/// (`frame,layer,n_in,n_out,ratio`).
int cmd_sample(const SampleOptions& options, std::ostream& log);

struct BenchOptions {
  BenchConfig config{};
  std::filesystem::path out;
};

int cmd_bench(const BenchOptions& options, std::ostream& log);

struct SynthOptions {
  std::string kind = "uniform_cube";
  std::size_t frames = 1;
  std::size_t points = 20'000;
  std::uint64_t seed = 42;
  std::filesystem::path out;
  /// Also materialize each frame as an XYZ file next to the manifest.
  bool write_xyz = false;
};

int cmd_synth(const SynthOptions& options, std::ostream& log);

/// Full command-line entry point: parses argv, dispatches, maps errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace avs::cli
