#include "avs/voxel_query.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "avs/error.hpp"

namespace avs {

std::vector<VoxelCoord> voxel_coords_3d(const PointBatch& batch, const VoxelGridSpec& grid) {
  if (batch.batch_count() > grid.batch_count()) {
    throw Error(ErrorKind::InvalidArgument, "batch has more frames than the grid");
  }
  const Matrix& c = batch.coords();
  const auto& counts = grid.axis_counts();
  const Eigen::Vector3d lo = grid.min_r();
  const Eigen::Vector3d hi = grid.max_r();

  std::vector<VoxelCoord> out(batch.count());
  for (std::size_t i = 0; i < batch.count(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    std::int64_t v[3];
    for (int a = 0; a < 3; ++a) {
      const double p = c(r, a);
      if (p < lo[a] || p > hi[a]) {
        throw Error(ErrorKind::PointOutOfBounds, "row " + std::to_string(i) + " lies outside the grid", i);
      }
      // Division (not multiplication by inv) keeps power-of-two size ratios nested exactly.
      const auto cell = static_cast<std::int64_t>(std::floor((p - lo[a]) / grid.voxel_size()));
      v[a] = std::clamp<std::int64_t>(cell, 0, counts[static_cast<std::size_t>(a)] - 1);
    }
    out[i] = VoxelCoord{batch.batch_id()[i], v[0], v[1], v[2]};
  }
  return out;
}

VoxelKey flatten_3d_to_1d(const VoxelCoord& coord, const VoxelGridSpec& grid) {
  const auto& n = grid.axis_counts();
  if (coord.b < 0 || static_cast<std::size_t>(coord.b) >= grid.batch_count() || coord.x < 0 || coord.x >= n[0] ||
      coord.y < 0 || coord.y >= n[1] || coord.z < 0 || coord.z >= n[2]) {
    throw Error(ErrorKind::InvalidArgument, "voxel coordinate outside the grid");
  }
  return coord.b * n[0] * n[1] * n[2] + coord.x * n[1] * n[2] + coord.y * n[2] + coord.z;
}

std::vector<VoxelKey> flatten_3d_to_1d(std::span<const VoxelCoord> coords, const VoxelGridSpec& grid) {
  std::vector<VoxelKey> keys(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) keys[i] = flatten_3d_to_1d(coords[i], grid);
  return keys;
}

VoxelCoord unflatten_1d_to_3d(VoxelKey key, const VoxelGridSpec& grid) {
  const auto& n = grid.axis_counts();
  const std::int64_t per_frame = grid.voxels_per_frame();
  if (key < 0 || key / per_frame >= static_cast<std::int64_t>(grid.batch_count())) {
    throw Error(ErrorKind::InvalidArgument, "key outside the grid key space");
  }
  VoxelCoord c;
  c.b = key / per_frame;
  std::int64_t rest = key % per_frame;
  c.x = rest / (n[1] * n[2]);
  rest %= n[1] * n[2];
  c.y = rest / n[2];
  c.z = rest % n[2];
  return c;
}

GroupAssignment rank_keys(std::vector<VoxelKey> keys) {
  // Stable LSD radix sort of (key, row) on the key offset from its minimum,
  // then one pass assigning ranks. Every pass streams, so the cost stays linear
  // as the input outgrows the caches.
  const std::size_t n = keys.size();
  if (n > std::numeric_limits<std::uint32_t>::max()) throw Error(ErrorKind::InvalidArgument, "too many points to rank");
  GroupAssignment out;
  out.group_id.resize(n);
  if (n == 0) {
    out.key = std::move(keys);
    return out;
  }
  const auto [lo_it, hi_it] = std::minmax_element(keys.begin(), keys.end());
  const VoxelKey lo = *lo_it;
  const auto span = static_cast<std::uint64_t>(*hi_it) - static_cast<std::uint64_t>(lo);

  constexpr int kDigitBits = 11;
  constexpr std::size_t kBuckets = std::size_t{1} << kDigitBits;
  std::vector<std::uint64_t> k(n), k_tmp(n);
  std::vector<std::uint32_t> row(n), row_tmp(n);
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = static_cast<std::uint64_t>(keys[i]) - static_cast<std::uint64_t>(lo);
    row[i] = static_cast<std::uint32_t>(i);
  }
  std::vector<std::size_t> count(kBuckets);
  for (int shift = 0; shift < 64 && (span >> shift) != 0; shift += kDigitBits) {
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t i = 0; i < n; ++i) ++count[(k[i] >> shift) & (kBuckets - 1)];
    std::size_t sum = 0;
    for (auto& c : count) sum += std::exchange(c, sum);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t dst = count[(k[i] >> shift) & (kBuckets - 1)]++;
      k_tmp[dst] = k[i];
      row_tmp[dst] = row[i];
    }
    k.swap(k_tmp);
    row.swap(row_tmp);
  }

  std::int64_t rank = -1;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || k[i] != k[i - 1]) ++rank;
    out.group_id[row[i]] = rank;
  }
  out.group_count = static_cast<std::size_t>(rank + 1);
  out.key = std::move(keys);
  return out;
}

GroupAssignment intra_voxel_query(const PointBatch& batch, const VoxelGridSpec& grid) {
  return rank_keys(flatten_3d_to_1d(voxel_coords_3d(batch, grid), grid));
}

VoxelHashTable build_hash_table(const GroupAssignment& assignment) {
  VoxelHashTable table(assignment.group_count);
  for (std::size_t i = 0; i < assignment.key.size(); ++i) table.insert(assignment.key[i], assignment.group_id[i]);
  return table;
}

std::vector<Offset3> generate_local_offsets(int nbr_size) {
  if (nbr_size < 1 || nbr_size % 2 == 0) {
    throw Error(ErrorKind::EvenNeighborSize, "nbr_size must be odd and positive, got " + std::to_string(nbr_size));
  }
  const int c = nbr_size / 2;
  std::vector<Offset3> offsets;
  offsets.reserve(static_cast<std::size_t>(nbr_size) * nbr_size * nbr_size);
  for (int x = 0; x < nbr_size; ++x)
    for (int y = 0; y < nbr_size; ++y)
      for (int z = 0; z < nbr_size; ++z) offsets.push_back({x - c, y - c, z - c});
  return offsets;
}

namespace {

/// Emits (neighbor row, center row) for every center in `vc` (row order) and
/// offset (offset order) whose voxel is in the grid and listed in `table`.
NeighborTable query_neighbors(const std::vector<VoxelCoord>& vc, const VoxelHashTable& table,
                              const std::vector<std::int64_t>& row_of_rank, const VoxelGridSpec& grid,
                              const std::vector<Offset3>& offsets, Parallelism par) {
  const std::size_t m = vc.size();
  const auto& n = grid.axis_counts();
  const std::size_t chunks = chunk_count(m, par, 2048);
  std::vector<NeighborTable> parts(chunks);
  parallel_chunks(m, par, 2048, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    NeighborTable& part = parts[chunk];
    part.nbr_indices.reserve((end - begin) * 8);
    part.inter_gid.reserve((end - begin) * 8);
    for (std::size_t g = begin; g < end; ++g) {
      const VoxelCoord& center = vc[g];
      for (const Offset3& o : offsets) {
        const std::int64_t x = center.x + o[0];
        const std::int64_t y = center.y + o[1];
        const std::int64_t z = center.z + o[2];
        if (x < 0 || x >= n[0] || y < 0 || y >= n[1] || z < 0 || z >= n[2]) continue;
        const VoxelKey key = center.b * n[0] * n[1] * n[2] + x * n[1] * n[2] + y * n[2] + z;
        if (auto rank = table.find(key)) {
          part.nbr_indices.push_back(row_of_rank[static_cast<std::size_t>(*rank)]);
          part.inter_gid.push_back(static_cast<std::int64_t>(g));
        }
      }
    }
  });

  NeighborTable out;
  std::size_t total = 0;
  for (const auto& p : parts) total += p.entry_count();
  out.nbr_indices.reserve(total);
  out.inter_gid.reserve(total);
  for (const auto& p : parts) {
    out.nbr_indices.insert(out.nbr_indices.end(), p.nbr_indices.begin(), p.nbr_indices.end());
    out.inter_gid.insert(out.inter_gid.end(), p.inter_gid.begin(), p.inter_gid.end());
  }
  return out;
}

}  // namespace

NeighborTable inter_voxel_query(const PointBatch& sampled, const VoxelGridSpec& grid, int nbr_size,
                                Parallelism par) {
  const std::vector<Offset3> offsets = generate_local_offsets(nbr_size);
  const std::vector<VoxelCoord> vc = voxel_coords_3d(sampled, grid);
  GroupAssignment assignment = rank_keys(flatten_3d_to_1d(vc, grid));
  const std::size_t m = sampled.count();
  if (assignment.group_count != m) {
    std::vector<char> taken(assignment.group_count, 0);
    for (std::size_t r = 0; r < m; ++r) {
      auto& t = taken[static_cast<std::size_t>(assignment.group_id[r])];
      if (t) throw Error(ErrorKind::NonUniqueSampledVoxel, "row " + std::to_string(r) + " shares a voxel", r);
      t = 1;
    }
  }
  const VoxelHashTable table = build_hash_table(assignment);
  // Table values are key ranks; emitted indices refer to rows of `sampled`.
  std::vector<std::int64_t> row_of_rank(m);
  for (std::size_t r = 0; r < m; ++r) row_of_rank[static_cast<std::size_t>(assignment.group_id[r])] = std::int64_t(r);
  return query_neighbors(vc, table, row_of_rank, grid, offsets, par);
}

NeighborTable inter_voxel_query(const GroupAssignment& layer, const VoxelGridSpec& grid, int nbr_size,
                                Parallelism par) {
  const std::vector<Offset3> offsets = generate_local_offsets(nbr_size);
  std::vector<VoxelKey> keys(layer.group_count);
  for (std::size_t i = 0; i < layer.key.size(); ++i) keys[static_cast<std::size_t>(layer.group_id[i])] = layer.key[i];
  std::vector<VoxelCoord> vc(layer.group_count);
  std::vector<std::int64_t> rows(layer.group_count);
  VoxelHashTable table(layer.group_count);
  for (std::size_t g = 0; g < layer.group_count; ++g) {
    vc[g] = unflatten_1d_to_3d(keys[g], grid);
    rows[g] = static_cast<std::int64_t>(g);
    table.insert(keys[g], rows[g]);
  }
  return query_neighbors(vc, table, rows, grid, offsets, par);
}

}  // namespace avs
