#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "avs/parallel.hpp"
#include "avs/types.hpp"

namespace avs {

struct FpsResult {
  std::vector<std::int64_t> selected_indices;
  /// Distance from each point to its nearest selected point.
  std::vector<double> min_dists;
  /// Min-distance of each selected point at the moment it was picked
  /// (+inf for the seed). Non-increasing.
  std::vector<double> selection_dists;
};

/// Greedy farthest point sampling on a single frame; ties go to the smallest
/// index. Throws MOutOfRange unless 1 <= m <= N.
FpsResult farthest_point_sample(const PointBatch& batch, std::size_t m, std::size_t seed_index = 0);

struct KnnResult {
  std::size_t k = 0;
  /// Row-major queries x k.
  std::vector<std::int64_t> indices;
  std::vector<double> distances;
};

/// Exact brute-force k nearest neighbors (Euclidean, ascending, index
/// tie-break). Throws KOutOfRange unless 1 <= k <= reference count.
KnnResult knn_search(const PointBatch& queries, const PointBatch& references, std::size_t k, Parallelism par = {});

/// m distinct indices drawn uniformly without replacement, sorted ascending.
std::vector<std::int64_t> uniform_subsample(std::size_t n, std::size_t m, std::uint64_t seed);

}  // namespace avs
