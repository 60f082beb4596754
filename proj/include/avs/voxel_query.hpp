#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "avs/hash_table.hpp"
#include "avs/parallel.hpp"
#include "avs/types.hpp"

namespace avs {

/// Integer voxel coordinate of a point, tagged with its frame.
struct VoxelCoord {
  std::int64_t b = 0;
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t z = 0;

  friend auto operator<=>(const VoxelCoord&, const VoxelCoord&) = default;
};

using Offset3 = std::array<int, 3>;

inline constexpr int kDefaultNeighborSize = 3;

/// floor((p - min_r) / voxel_size) per axis, clamped to [0, N_i - 1] so points
/// on max_r land in the last voxel. Throws PointOutOfBounds(row) for points
/// outside [min_r, max_r].
std::vector<VoxelCoord> voxel_coords_3d(const PointBatch& batch, const VoxelGridSpec& grid);

/// key = b*Nx*Ny*Nz + x*Ny*Nz + y*Nz + z. Throws InvalidArgument outside the grid.
VoxelKey flatten_3d_to_1d(const VoxelCoord& coord, const VoxelGridSpec& grid);
std::vector<VoxelKey> flatten_3d_to_1d(std::span<const VoxelCoord> coords, const VoxelGridSpec& grid);
VoxelCoord unflatten_1d_to_3d(VoxelKey key, const VoxelGridSpec& grid);

/// Dense rank of each key among the sorted unique keys.
GroupAssignment rank_keys(std::vector<VoxelKey> keys);

/// Intra-voxel query: voxel coordinates, flattened keys, then key ranking.
GroupAssignment intra_voxel_query(const PointBatch& batch, const VoxelGridSpec& grid);

/// key -> group id, one entry per non-empty voxel.
VoxelHashTable build_hash_table(const GroupAssignment& assignment);

/// All offsets in [-c, c]^3, c = nbr_size / 2, x-major then y then z.
/// Throws EvenNeighborSize for even or non-positive sizes.
std::vector<Offset3> generate_local_offsets(int nbr_size);

/// Inter-voxel query over voxel-unique sampled points. For each center row g
/// (in row order) and each local offset (in offset order), emits (neighbor row, g)
/// when the neighbor voxel lies inside the grid and holds a sampled point.
/// Offsets never touch the frame component, so neighbors never cross frames.
/// Throws NonUniqueSampledVoxel if two sampled points share a voxel.
NeighborTable inter_voxel_query(const PointBatch& sampled, const VoxelGridSpec& grid,
                                int nbr_size = kDefaultNeighborSize, Parallelism par = {});

/// The same query over the voxels of an intra-voxel assignment: sampled row g
/// is group g. Used for centroids, whose rounded coordinates may sit a hair
/// outside their own voxel and must not be re-floored.
NeighborTable inter_voxel_query(const GroupAssignment& layer, const VoxelGridSpec& grid,
                                int nbr_size = kDefaultNeighborSize, Parallelism par = {});

}  // namespace avs
