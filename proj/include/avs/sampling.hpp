#pragma once

#include <functional>
#include <span>
#include <vector>

#include "avs/parallel.hpp"
#include "avs/types.hpp"
#include "avs/voxel_query.hpp"

namespace avs {

/// Row-wise feature map (R x D -> R x D'). Must preserve the row count and be
/// deterministic; the aggregation routines check the row count.
using FeatureTransform = std::function<Matrix(const Matrix&)>;

FeatureTransform identity_transform();
/// out = in * weights + bias (bias broadcast per row; empty bias means zero).
FeatureTransform linear_transform(Matrix weights, Eigen::RowVectorXd bias = {});

/// Stand-in features for batches that carry none.
enum class FeatureFallback { Coordinates, ConstantOne };

/// Input features of a batch, or the fallback when it has none.
Matrix initial_features(const PointBatch& batch, FeatureFallback fallback = FeatureFallback::Coordinates);

struct SampledLayer {
  PointBatch points;                ///< one centroid per non-empty voxel, ordered by group id
  Matrix features;                  ///< intra-voxel aggregated features (M x D')
  Matrix inter_features;            ///< neighborhood aggregated features (M x D'')
  GroupAssignment assignment;       ///< parent points -> this layer
  VoxelGridSpec grid;
  NeighborTable neighbors;
};

/// Voxel centroid sampling: per-group coordinate mean. Row g is group g; its
/// batch id is the (shared) batch id of the group's members.
PointBatch centroid_sample(const PointBatch& batch, const GroupAssignment& assignment, Parallelism par = {});

/// Intra-voxel aggregation: offsets to the voxel centroid are appended to the
/// point features (features first, then dx dy dz), transformed, then max-pooled
/// per group.
Matrix intra_aggregate(const PointBatch& batch, const GroupAssignment& assignment, const PointBatch& centroids,
                       const FeatureTransform& transform, FeatureFallback fallback = FeatureFallback::Coordinates,
                       Parallelism par = {});

/// Same as above with explicit input features (N x F).
Matrix intra_aggregate(const Matrix& features, const PointBatch& batch, const GroupAssignment& assignment,
                       const PointBatch& centroids, const FeatureTransform& transform, Parallelism par = {});

/// Inter-voxel aggregation over `layer.points` / `layer.features`:
/// sum over neighbors of transform(F_nbr ++ (P_nbr - P_center)), per center.
Matrix inter_aggregate(const SampledLayer& layer, const NeighborTable& table, const FeatureTransform& transform,
                       Parallelism par = {});

struct CascadeOptions {
  FeatureFallback fallback = FeatureFallback::Coordinates;
  double padding = 0.0;
  Parallelism par{};
};

/// Multi-layer downsampling. Layer k voxelizes layer k-1's centroids at
/// layer_sizes[k]; every layer uses the bounds of layer 0's grid. Layer k's
/// input features are layer k-1's inter_features.
std::vector<SampledLayer> run_cascade(const PointBatch& batch, std::span<const double> layer_sizes, int nbr_size,
                                      const FeatureTransform& transform, const CascadeOptions& options = {});

}  // namespace avs
