#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace avs {

/// Row-major dense matrix used for coordinates, features and reductions.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Flattened voxel coordinate (`vc_1d`). Always fits in the signed 64-bit range.
using VoxelKey = std::int64_t;

/// One input row before validation: frame label, position, optional feature row.
struct RawPoint {
  std::int64_t frame = 0;
  Eigen::Vector3d xyz = Eigen::Vector3d::Zero();
  std::vector<double> features;
};

/// Batched point clouds in the `[b, x, y, z]` layout. Frames are told apart by
/// `batch_id`, which is dense in 0..B-1. Immutable once constructed.
class PointBatch {
 public:
  /// Throws EmptyInput, NonFiniteCoordinate, or InvalidArgument (shape mismatch,
  /// negative or non-contiguous batch ids).
  PointBatch(std::vector<std::int64_t> batch_id, Matrix coords,
             std::optional<Matrix> features = std::nullopt);

  /// Single-frame convenience constructor.
  static PointBatch single_frame(Matrix coords, std::optional<Matrix> features = std::nullopt);

  std::size_t count() const { return batch_id_.size(); }
  std::size_t batch_count() const { return batch_count_; }
  std::span<const std::int64_t> batch_id() const { return batch_id_; }
  const Matrix& coords() const { return coords_; }
  Eigen::Vector3d point(std::size_t i) const { return coords_.row(static_cast<Eigen::Index>(i)).transpose(); }
  bool has_features() const { return features_.has_value(); }
  const std::optional<Matrix>& features() const { return features_; }
  std::size_t feature_width() const { return features_ ? static_cast<std::size_t>(features_->cols()) : 0; }

  friend bool operator==(const PointBatch& a, const PointBatch& b);

 private:
  std::vector<std::int64_t> batch_id_;
  Matrix coords_;
  std::optional<Matrix> features_;
  std::size_t batch_count_ = 0;
};

/// Remaps frame labels to dense ids in first-occurrence order, rejects
/// non-finite coordinates and ragged feature rows.
PointBatch validate_batch(std::span<const RawPoint> raw_points);

/// Inverse of validate_batch for round-tripping.
std::vector<RawPoint> to_raw(const PointBatch& batch);

struct Bounds {
  Eigen::Vector3d min = Eigen::Vector3d::Zero();
  Eigen::Vector3d max = Eigen::Vector3d::Zero();
};

/// Componentwise extrema of the batch coordinates.
Bounds compute_bounds(const PointBatch& batch);

/// Regular voxel grid over an axis-aligned box, shared by every frame of a batch.
/// `axis_counts[i] = max(1, ceil((max_r[i] - min_r[i]) / voxel_size))`.
class VoxelGridSpec {
 public:
  /// Throws InvalidArgument for a non-positive size or inverted bounds and
  /// KeySpaceOverflow when batch_count * Nx * Ny * Nz does not fit in int64.
  VoxelGridSpec(double voxel_size, const Eigen::Vector3d& min_r, const Eigen::Vector3d& max_r,
                std::size_t batch_count);

  double voxel_size() const { return voxel_size_; }
  const Eigen::Vector3d& min_r() const { return min_r_; }
  const Eigen::Vector3d& max_r() const { return max_r_; }
  const std::array<std::int64_t, 3>& axis_counts() const { return axis_counts_; }
  std::size_t batch_count() const { return batch_count_; }
  Bounds bounds() const { return {min_r_, max_r_}; }

  /// Voxels per frame, Nx * Ny * Nz.
  std::int64_t voxels_per_frame() const { return axis_counts_[0] * axis_counts_[1] * axis_counts_[2]; }

 private:
  double voxel_size_;
  Eigen::Vector3d min_r_;
  Eigen::Vector3d max_r_;
  std::array<std::int64_t, 3> axis_counts_{};
  std::size_t batch_count_;
};

/// Grid whose bounds are the batch extrema expanded by `padding` on every side.
VoxelGridSpec grid_from_batch(const PointBatch& batch, double voxel_size, double padding = 0.0);

/// Per-point dense voxel group ids. Ids are ranks of the flattened keys, so
/// two points share an id iff they share a key, and ids are monotone in key.
struct GroupAssignment {
  std::vector<std::int64_t> group_id;
  std::size_t group_count = 0;
  std::vector<VoxelKey> key;
};

/// Flat (center, neighbor) pairs produced by the inter-voxel query.
struct NeighborTable {
  std::vector<std::int64_t> nbr_indices;
  std::vector<std::int64_t> inter_gid;

  std::size_t entry_count() const { return nbr_indices.size(); }
};

}  // namespace avs
