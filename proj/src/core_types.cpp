#include "avs/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "avs/error.hpp"

namespace avs {

PointBatch::PointBatch(std::vector<std::int64_t> batch_id, Matrix coords, std::optional<Matrix> features)
    : batch_id_(std::move(batch_id)), coords_(std::move(coords)), features_(std::move(features)) {
  if (batch_id_.empty()) throw Error(ErrorKind::EmptyInput, "point batch has no points");
  if (coords_.cols() != 3 || static_cast<std::size_t>(coords_.rows()) != batch_id_.size()) {
    throw Error(ErrorKind::InvalidArgument, "coords must be N x 3 with N == batch_id size");
  }
  if (features_ && static_cast<std::size_t>(features_->rows()) != batch_id_.size()) {
    throw Error(ErrorKind::InvalidArgument, "feature row count differs from point count");
  }
  for (Eigen::Index r = 0; r < coords_.rows(); ++r) {
    if (!coords_.row(r).allFinite()) {
      throw Error(ErrorKind::NonFiniteCoordinate, "row " + std::to_string(r), static_cast<std::size_t>(r));
    }
  }
  std::int64_t max_id = -1;
  for (std::size_t i = 0; i < batch_id_.size(); ++i) {
    if (batch_id_[i] < 0) {
      throw Error(ErrorKind::InvalidArgument, "negative batch id at row " + std::to_string(i), i);
    }
    max_id = std::max(max_id, batch_id_[i]);
  }
  if (static_cast<std::size_t>(max_id) >= batch_id_.size()) {
    throw Error(ErrorKind::InvalidArgument, "batch ids are not contiguous");
  }
  std::vector<char> seen(static_cast<std::size_t>(max_id) + 1, 0);
  for (auto id : batch_id_) seen[static_cast<std::size_t>(id)] = 1;
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw Error(ErrorKind::InvalidArgument, "batch ids are not contiguous");
  }
  batch_count_ = seen.size();
}

PointBatch PointBatch::single_frame(Matrix coords, std::optional<Matrix> features) {
  std::vector<std::int64_t> ids(static_cast<std::size_t>(coords.rows()), 0);
  return PointBatch(std::move(ids), std::move(coords), std::move(features));
}

bool operator==(const PointBatch& a, const PointBatch& b) {
  if (a.batch_id_ != b.batch_id_ || a.coords_ != b.coords_) return false;
  if (a.features_.has_value() != b.features_.has_value()) return false;
  if (a.features_ && (a.features_->cols() != b.features_->cols() || *a.features_ != *b.features_)) return false;
  return true;
}

PointBatch validate_batch(std::span<const RawPoint> raw_points) {
  if (raw_points.empty()) throw Error(ErrorKind::EmptyInput, "no points");
  const std::size_t n = raw_points.size();
  const std::size_t width = raw_points.front().features.size();

  std::unordered_map<std::int64_t, std::int64_t> dense;
  std::vector<std::int64_t> ids(n);
  Matrix coords(static_cast<Eigen::Index>(n), 3);
  Matrix features(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < n; ++i) {
    const RawPoint& p = raw_points[i];
    if (!p.xyz.allFinite()) {
      throw Error(ErrorKind::NonFiniteCoordinate, "row " + std::to_string(i), i);
    }
    if (p.features.size() != width) {
      throw Error(ErrorKind::RaggedFeatures,
                  "row " + std::to_string(i) + " has " + std::to_string(p.features.size()) +
                      " features, expected " + std::to_string(width),
                  i);
    }
    auto [it, inserted] = dense.try_emplace(p.frame, static_cast<std::int64_t>(dense.size()));
    ids[i] = it->second;
    coords.row(static_cast<Eigen::Index>(i)) = p.xyz.transpose();
    for (std::size_t c = 0; c < width; ++c) {
      features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = p.features[c];
    }
  }
  std::optional<Matrix> feats;
  if (width > 0) feats = std::move(features);
  return PointBatch(std::move(ids), std::move(coords), std::move(feats));
}

std::vector<RawPoint> to_raw(const PointBatch& batch) {
  std::vector<RawPoint> out(batch.count());
  for (std::size_t i = 0; i < batch.count(); ++i) {
    out[i].frame = batch.batch_id()[i];
    out[i].xyz = batch.point(i);
    if (batch.has_features()) {
      const auto row = batch.features()->row(static_cast<Eigen::Index>(i));
      out[i].features.assign(row.data(), row.data() + row.size());
    }
  }
  return out;
}

Bounds compute_bounds(const PointBatch& batch) {
  const Matrix& c = batch.coords();
  return {c.colwise().minCoeff().transpose(), c.colwise().maxCoeff().transpose()};
}

VoxelGridSpec::VoxelGridSpec(double voxel_size, const Eigen::Vector3d& min_r, const Eigen::Vector3d& max_r,
                             std::size_t batch_count)
    : voxel_size_(voxel_size), min_r_(min_r), max_r_(max_r), batch_count_(batch_count) {
  if (!(voxel_size > 0.0) || !std::isfinite(voxel_size)) {
    throw Error(ErrorKind::InvalidArgument, "voxel_size must be positive and finite");
  }
  if (!min_r.allFinite() || !max_r.allFinite()) throw Error(ErrorKind::InvalidArgument, "bounds must be finite");
  if (batch_count == 0) throw Error(ErrorKind::InvalidArgument, "batch_count must be >= 1");

  constexpr auto kLimit = static_cast<__int128>(std::numeric_limits<std::int64_t>::max());
  __int128 total = static_cast<__int128>(batch_count);
  for (int i = 0; i < 3; ++i) {
    const double extent = max_r[i] - min_r[i];
    if (extent < 0.0) throw Error(ErrorKind::InvalidArgument, "max_r must not be below min_r");
    const double cells = std::ceil(extent / voxel_size);
    if (!(cells < 9.0e18)) throw Error(ErrorKind::KeySpaceOverflow, "axis voxel count exceeds 64-bit range");
    axis_counts_[i] = std::max<std::int64_t>(1, static_cast<std::int64_t>(cells));
    total *= axis_counts_[i];
    if (total > kLimit) {
      throw Error(ErrorKind::KeySpaceOverflow, "batch_count * Nx * Ny * Nz exceeds the 64-bit key space");
    }
  }
}

VoxelGridSpec grid_from_batch(const PointBatch& batch, double voxel_size, double padding) {
  if (!(padding >= 0.0)) throw Error(ErrorKind::InvalidArgument, "padding must be >= 0");
  const Bounds b = compute_bounds(batch);
  const Eigen::Vector3d pad = Eigen::Vector3d::Constant(padding);
  return VoxelGridSpec(voxel_size, b.min - pad, b.max + pad, batch.batch_count());
}

}  // namespace avs
