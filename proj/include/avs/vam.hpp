#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "avs/frames.hpp"
#include "avs/parallel.hpp"

namespace avs {

/// Voxel adaptation settings for one layer. Gain defaults are tuned on
/// synthetic data; they are not published constants.
struct VamConfig {
  double ref_ratio = 2.0;
  double v0 = 0.05;
  double i_r = 0.25;
  double k_p = 0.5;
  double k_i = 0.05;
  double epsilon = 1e-3;
  int max_iterations = 500;
  /// Compare |err| against epsilon * ref_ratio instead of epsilon.
  bool relative_epsilon = false;
  /// Anti-windup clamp on the accumulated error.
  double integral_limit = 100.0;
  /// Measure only every `frame_stride`-th frame (1 = full pass per step).
  std::size_t frame_stride = 1;

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;
  double tolerance() const { return relative_epsilon ? epsilon * ref_ratio : epsilon; }
};

struct VamRecord {
  double voxel_size = 0.0;       ///< size that was measured
  double ratio = 0.0;            ///< achieved N_i / N_s at that size
  double err = 0.0;              ///< ref_ratio - ratio
  double next_voxel_size = 0.0;  ///< v0 * exp(scale) after the update
};

struct VamState {
  double scale = 0.0;
  double err_integral = 0.0;
  int iteration = 0;
  std::vector<VamRecord> history;

  double voxel_size(double v0) const;
};

struct RatioMeasurement {
  std::uint64_t n_input = 0;
  std::uint64_t n_sampled = 0;
  double ratio = 0.0;
};

/// Total input points over total non-empty voxels across the dataset. Frames
/// are voxelized independently (own extrema unless the source pins bounds).
RatioMeasurement measure_ratio(const FrameSource& frames, double voxel_size, Parallelism par = {},
                               std::size_t frame_stride = 1);

/// One PI update:
///   err = ref - achieved;  sum += err (clamped);  diff = k_p*err + k_i*sum;
///   scale += i_r * (sigmoid(diff) - 0.5).
VamState vam_step(VamState state, const VamConfig& config, double achieved_ratio);

struct LayerCalibration {
  double voxel_size = 0.0;  ///< last measured size (the one achieving `achieved_ratio`)
  double achieved_ratio = 0.0;
  bool converged = false;
  VamState state;
};

/// Repeats measure + step until |err| < tolerance or max_iterations.
LayerCalibration calibrate_layer(const FrameSource& frames, const VamConfig& config, Parallelism par = {});

struct CalibrationResult {
  std::vector<LayerCalibration> layers;

  bool converged() const;
  std::vector<double> voxel_sizes() const;
};

struct CascadeCalibrationOptions {
  /// Start layer k > 0 from layer k-1's calibrated size instead of its own v0.
  bool warm_start = false;
  Parallelism par{};
};

/// Calibrates layer 0 on the raw frames, replaces each frame by its centroids
/// at the calibrated size, then calibrates the next layer on those, and so on.
/// Later layers keep each frame's layer-0 bounds.
CalibrationResult calibrate_cascade(const FrameSource& frames, std::span<const VamConfig> configs,
                                    const CascadeCalibrationOptions& options = {});

}  // namespace avs
