#include "avs/sampling.hpp"

#include <algorithm>
#include <string>

#include "avs/error.hpp"
#include "avs/segment_reduce.hpp"

namespace avs {
namespace {

Matrix concat_columns(const Matrix& left, const Matrix& right) {
  Matrix out(left.rows(), left.cols() + right.cols());
  out << left, right;
  return out;
}

Matrix apply_checked(const FeatureTransform& transform, const Matrix& input) {
  Matrix out = transform(input);
  if (out.rows() != input.rows()) {
    throw Error(ErrorKind::TransformRowCountMismatch,
                "transform returned " + std::to_string(out.rows()) + " rows for " + std::to_string(input.rows()));
  }
  return out;
}

}  // namespace

FeatureTransform identity_transform() {
  return [](const Matrix& in) { return in; };
}

FeatureTransform linear_transform(Matrix weights, Eigen::RowVectorXd bias) {
  if (bias.size() != 0 && bias.size() != weights.cols()) {
    throw Error(ErrorKind::InvalidArgument, "bias width must match the weight columns");
  }
  return [weights = std::move(weights), bias = std::move(bias)](const Matrix& in) -> Matrix {
    if (in.cols() != weights.rows()) {
      throw Error(ErrorKind::InvalidArgument, "linear transform expects " + std::to_string(weights.rows()) +
                                                  " input columns, got " + std::to_string(in.cols()));
    }
    Matrix out = in * weights;
    if (bias.size() != 0) out.rowwise() += bias;
    return out;
  };
}

Matrix initial_features(const PointBatch& batch, FeatureFallback fallback) {
  if (batch.has_features()) return *batch.features();
  if (fallback == FeatureFallback::Coordinates) return batch.coords();
  return Matrix::Ones(static_cast<Eigen::Index>(batch.count()), 1);
}

PointBatch centroid_sample(const PointBatch& batch, const GroupAssignment& assignment, Parallelism par) {
  if (assignment.group_id.size() != batch.count()) {
    throw Error(ErrorKind::InvalidArgument, "assignment does not match the batch");
  }
  ScatterResult mean = scatter_reduce(batch.coords(), assignment.group_id, assignment.group_count, ReduceMode::Mean, par);
  std::vector<std::int64_t> ids(assignment.group_count);
  for (std::size_t i = 0; i < batch.count(); ++i) {
    ids[static_cast<std::size_t>(assignment.group_id[i])] = batch.batch_id()[i];
  }
  // A mean can round a few ulps past the extreme member; keep centroids inside
  // the input extrema so any grid that held the input also holds them.
  const Bounds b = compute_bounds(batch);
  for (Eigen::Index g = 0; g < mean.values.rows(); ++g) {
    for (int a = 0; a < 3; ++a) mean.values(g, a) = std::clamp(mean.values(g, a), b.min[a], b.max[a]);
  }
  return PointBatch(std::move(ids), std::move(mean.values));
}

Matrix intra_aggregate(const Matrix& features, const PointBatch& batch, const GroupAssignment& assignment,
                       const PointBatch& centroids, const FeatureTransform& transform, Parallelism par) {
  if (static_cast<std::size_t>(features.rows()) != batch.count()) {
    throw Error(ErrorKind::InvalidArgument, "feature rows must match the batch");
  }
  if (centroids.count() != assignment.group_count) {
    throw Error(ErrorKind::InvalidArgument, "centroid count must equal the group count");
  }
  const Matrix offsets = batch.coords() - gather(centroids.coords(), assignment.group_id, par);
  const Matrix pooled_input = apply_checked(transform, concat_columns(features, offsets));
  return scatter_reduce(pooled_input, assignment.group_id, assignment.group_count, ReduceMode::Max, par).values;
}

Matrix intra_aggregate(const PointBatch& batch, const GroupAssignment& assignment, const PointBatch& centroids,
                       const FeatureTransform& transform, FeatureFallback fallback, Parallelism par) {
  return intra_aggregate(initial_features(batch, fallback), batch, assignment, centroids, transform, par);
}

Matrix inter_aggregate(const SampledLayer& layer, const NeighborTable& table, const FeatureTransform& transform,
                       Parallelism par) {
  if (static_cast<std::size_t>(layer.features.rows()) != layer.points.count()) {
    throw Error(ErrorKind::InvalidArgument, "layer features must have one row per sampled point");
  }
  if (table.inter_gid.size() != table.nbr_indices.size()) {
    throw Error(ErrorKind::InvalidArgument, "neighbor table columns differ in length");
  }
  const Matrix nbr_features = gather(layer.features, table.nbr_indices, par);
  const Matrix nbr_points = gather(layer.points.coords(), table.nbr_indices, par);
  const Matrix center_points = gather(layer.points.coords(), table.inter_gid, par);
  const Matrix relative = nbr_points - center_points;
  const Matrix encoded = apply_checked(transform, concat_columns(nbr_features, relative));
  return scatter_reduce(encoded, table.inter_gid, layer.points.count(), ReduceMode::Sum, par).values;
}

std::vector<SampledLayer> run_cascade(const PointBatch& batch, std::span<const double> layer_sizes, int nbr_size,
                                      const FeatureTransform& transform, const CascadeOptions& options) {
  if (layer_sizes.empty()) throw Error(ErrorKind::InvalidArgument, "at least one layer size is required");
  for (double s : layer_sizes) {
    if (!(s > 0.0)) throw Error(ErrorKind::InvalidArgument, "layer sizes must be positive");
  }
  generate_local_offsets(nbr_size);  // validates nbr_size up front

  const VoxelGridSpec first = grid_from_batch(batch, layer_sizes.front(), options.padding);
  std::vector<SampledLayer> layers;
  layers.reserve(layer_sizes.size());

  const PointBatch* parent = &batch;
  Matrix parent_features = initial_features(batch, options.fallback);
  for (double size : layer_sizes) {
    VoxelGridSpec grid(size, first.min_r(), first.max_r(), first.batch_count());
    GroupAssignment assignment = intra_voxel_query(*parent, grid);
    if (assignment.group_count == 0) throw Error(ErrorKind::EmptyLayer, "layer produced no points");
    PointBatch centroids = centroid_sample(*parent, assignment, options.par);
    Matrix features = intra_aggregate(parent_features, *parent, assignment, centroids, transform, options.par);
    NeighborTable neighbors = inter_voxel_query(assignment, grid, nbr_size, options.par);
    SampledLayer layer{std::move(centroids), std::move(features), Matrix{}, std::move(assignment), grid,
                       std::move(neighbors)};
    layer.inter_features = inter_aggregate(layer, layer.neighbors, transform, options.par);
    layers.push_back(std::move(layer));
    parent = &layers.back().points;
    parent_features = layers.back().inter_features;
  }
  return layers;
}

}  // namespace avs
