#include "avs/vam.hpp"

#include <algorithm>
#include <cmath>

#include "avs/error.hpp"
#include "avs/sampling.hpp"
#include "avs/voxel_query.hpp"

namespace avs {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

VoxelGridSpec frame_grid(const FrameSource& frames, std::size_t index, const PointBatch& batch, double voxel_size) {
  if (auto pinned = frames.pinned_bounds(index)) {
    return VoxelGridSpec(voxel_size, pinned->min, pinned->max, batch.batch_count());
  }
  return grid_from_batch(batch, voxel_size);
}

}  // namespace

void VamConfig::validate() const {
  if (!(ref_ratio > 1.0)) throw Error(ErrorKind::InvalidArgument, "ref_ratio must exceed 1");
  if (!(v0 > 0.0) || !std::isfinite(v0)) throw Error(ErrorKind::InvalidArgument, "v0 must be positive");
  if (!(i_r > 0.0)) throw Error(ErrorKind::InvalidArgument, "i_r must be positive");
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  if (max_iterations < 1) throw Error(ErrorKind::InvalidArgument, "max_iterations must be >= 1");
  if (!(integral_limit > 0.0)) throw Error(ErrorKind::InvalidArgument, "integral_limit must be positive");
  if (frame_stride < 1) throw Error(ErrorKind::InvalidArgument, "frame_stride must be >= 1");
  if (!std::isfinite(k_p) || !std::isfinite(k_i)) throw Error(ErrorKind::InvalidArgument, "gains must be finite");
}

double VamState::voxel_size(double v0) const { return v0 * std::exp(scale); }

RatioMeasurement measure_ratio(const FrameSource& frames, double voxel_size, Parallelism par,
                               std::size_t frame_stride) {
  if (frames.frame_count() == 0) throw Error(ErrorKind::EmptyDataset, "dataset has no frames");
  if (frame_stride == 0) throw Error(ErrorKind::InvalidArgument, "frame_stride must be >= 1");
  const std::size_t used = (frames.frame_count() + frame_stride - 1) / frame_stride;
  std::vector<std::uint64_t> inputs(used), sampled(used);
  parallel_chunks(used, par, 1, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t index = k * frame_stride;
      const PointBatch batch = frames.frame(index);
      const VoxelGridSpec grid = frame_grid(frames, index, batch, voxel_size);
      inputs[k] = batch.count();
      sampled[k] = intra_voxel_query(batch, grid).group_count;
    }
  });
  RatioMeasurement m;
  for (std::size_t k = 0; k < used; ++k) {
    m.n_input += inputs[k];
    m.n_sampled += sampled[k];
  }
  m.ratio = static_cast<double>(m.n_input) / static_cast<double>(m.n_sampled);
  return m;
}

VamState vam_step(VamState state, const VamConfig& config, double achieved_ratio) {
  if (!(achieved_ratio > 0.0)) throw Error(ErrorKind::InvalidArgument, "achieved ratio must be positive");
  VamRecord record;
  record.voxel_size = state.voxel_size(config.v0);
  record.ratio = achieved_ratio;
  record.err = config.ref_ratio - achieved_ratio;

  state.err_integral = std::clamp(state.err_integral + record.err, -config.integral_limit, config.integral_limit);
  const double diff = config.k_p * record.err + config.k_i * state.err_integral;
  state.scale += config.i_r * (sigmoid(diff) - 0.5);

  record.next_voxel_size = state.voxel_size(config.v0);
  state.history.push_back(record);
  ++state.iteration;
  return state;
}

LayerCalibration calibrate_layer(const FrameSource& frames, const VamConfig& config, Parallelism par) {
  config.validate();
  LayerCalibration out;
  for (int it = 0; it < config.max_iterations; ++it) {
    const double size = out.state.voxel_size(config.v0);
    const RatioMeasurement m = measure_ratio(frames, size, par, config.frame_stride);
    out.state = vam_step(std::move(out.state), config, m.ratio);
    out.voxel_size = size;
    out.achieved_ratio = m.ratio;
    if (std::abs(out.state.history.back().err) < config.tolerance()) {
      out.converged = true;
      break;
    }
  }
  return out;
}

bool CalibrationResult::converged() const {
  return std::all_of(layers.begin(), layers.end(), [](const LayerCalibration& l) { return l.converged; });
}

std::vector<double> CalibrationResult::voxel_sizes() const {
  std::vector<double> sizes;
  for (const auto& l : layers) sizes.push_back(l.voxel_size);
  return sizes;
}

CalibrationResult calibrate_cascade(const FrameSource& frames, std::span<const VamConfig> configs,
                                    const CascadeCalibrationOptions& options) {
  if (configs.empty()) throw Error(ErrorKind::InvalidArgument, "at least one layer config is required");
  if (frames.frame_count() == 0) throw Error(ErrorKind::EmptyDataset, "dataset has no frames");
  CalibrationResult result;

  InMemoryFrames current;
  const FrameSource* source = &frames;
  for (std::size_t layer = 0; layer < configs.size(); ++layer) {
    VamConfig config = configs[layer];
    if (options.warm_start && layer > 0) config.v0 = result.layers.back().voxel_size;
    result.layers.push_back(calibrate_layer(*source, config, options.par));
    if (layer + 1 == configs.size()) break;

    const double size = result.layers.back().voxel_size;
    std::vector<PointBatch> next(source->frame_count(), PointBatch::single_frame(Matrix::Zero(1, 3)));
    std::vector<Bounds> bounds(source->frame_count());
    parallel_chunks(source->frame_count(), options.par, 1, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const PointBatch batch = source->frame(i);
        const VoxelGridSpec grid = frame_grid(*source, i, batch, size);
        next[i] = centroid_sample(batch, intra_voxel_query(batch, grid));
        bounds[i] = grid.bounds();
      }
    });
    current = InMemoryFrames(std::move(next), std::move(bounds));
    source = &current;
  }
  return result;
}

}  // namespace avs
