#pragma once

// Brute-force reference implementations. These deliberately avoid the library's
// key flattening, hashing and segment machinery so they can check it.

#include <array>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "avs/baselines.hpp"
#include "avs/types.hpp"

namespace avs::testing {

/// Voxel coordinates by direct floor + clamp, one point at a time.
std::array<std::int64_t, 4> direct_voxel(const PointBatch& batch, std::size_t i, const VoxelGridSpec& grid);

/// Canonical class label per point: the smallest index sharing its voxel. O(N^2).
std::vector<std::size_t> brute_voxel_classes(const PointBatch& batch, const VoxelGridSpec& grid);

/// Canonical labels of an arbitrary grouping (smallest index with the same id).
std::vector<std::size_t> canonical_labels(const std::vector<std::int64_t>& ids);

/// All (center, neighbor) row pairs with Chebyshev voxel distance <= nbr_size/2
/// in the same frame. O(M^2). Sorted.
std::vector<std::pair<std::int64_t, std::int64_t>> brute_neighbor_pairs(const PointBatch& sampled,
                                                                        const VoxelGridSpec& grid, int nbr_size);

/// FPS by re-scanning every selected point for every candidate at each step.
std::vector<std::int64_t> naive_fps(const PointBatch& batch, std::size_t m, std::size_t seed_index);

/// KNN by fully sorting (distance, index) for each query.
KnnResult full_sort_knn(const PointBatch& queries, const PointBatch& references, std::size_t k);

/// The first member of each group, as row g for group g.
PointBatch first_members(const PointBatch& batch, const GroupAssignment& a);

/// Count of distinct voxels per batch by set insertion of direct voxel coords.
std::size_t brute_voxel_count(const PointBatch& batch, const VoxelGridSpec& grid);

/// logistic(x) - 0.5 via tanh, independent of the exp-based form.
double logistic_minus_half(double x);

// ---- Random inputs ----------------------------------------------------------------

using Rng = std::mt19937_64;

/// n points uniform in [lo, hi]^3 over `frames` frames (every frame non-empty when n >= frames).
PointBatch random_batch(Rng& rng, std::size_t n, std::size_t frames = 1, double lo = 0.0, double hi = 1.0,
                        std::size_t feature_width = 0);

/// Points on a lattice-snapped grid so many share voxels (and some lie on boundaries).
PointBatch random_clustered_batch(Rng& rng, std::size_t n, std::size_t frames, double voxel_size);

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols);

/// Segment ids covering [0, m) (each id used at least once), shuffled.
std::vector<std::int64_t> random_segments(Rng& rng, std::size_t rows, std::size_t m);

}  // namespace avs::testing
