#include <doctest.h>

#include <algorithm>

#include "avs/voxel_query.hpp"
#include "oracles.hpp"
#include "suite_check.hpp"

using namespace avs;
using namespace avs::testing;

namespace {

VoxelGridSpec unit_grid(double nx, double ny, double nz, std::size_t frames = 1) {
  return VoxelGridSpec(1.0, Eigen::Vector3d::Zero(), Eigen::Vector3d(nx, ny, nz), frames);
}

PointBatch points(std::initializer_list<std::array<double, 3>> rows) {
  Matrix m(Eigen::Index(rows.size()), 3);
  Eigen::Index i = 0;
  for (const auto& r : rows) m.row(i++) << r[0], r[1], r[2];
  return PointBatch::single_frame(m);
}

std::vector<std::pair<std::int64_t, std::int64_t>> sorted_pairs(const NeighborTable& t) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::size_t e = 0; e < t.entry_count(); ++e) out.emplace_back(t.inter_gid[e], t.nbr_indices[e]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("voxel coordinates by floor") {
  const auto g = unit_grid(3, 3, 3);
  const auto c = voxel_coords_3d(points({{0.5, 0.5, 0.5}, {2.3, 0.1, 1.9}}), g);
  CHECK(c[0] == VoxelCoord{0, 0, 0, 0});
  CHECK(c[1] == VoxelCoord{0, 2, 0, 1});
}

TEST_CASE("points on max_r clamp into the last voxel") {
  const auto g = unit_grid(2, 2, 2);
  CHECK(voxel_coords_3d(points({{2, 2, 2}}), g)[0] == VoxelCoord{0, 1, 1, 1});
}

TEST_CASE("points outside the bounds are rejected") {
  const auto g = unit_grid(2, 2, 2);
  const auto batch = points({{1, 1, 1}, {1, -0.1, 1}});
  CHECK(kind_thrown([&] { voxel_coords_3d(batch, g); }) == ErrorKind::PointOutOfBounds);
  CHECK(row_thrown([&] { voxel_coords_3d(batch, g); }) == 1u);
  CHECK(kind_thrown([&] { voxel_coords_3d(points({{2.5, 0, 0}}), g); }) == ErrorKind::PointOutOfBounds);
}

TEST_CASE("flattening a 3x3x1 grid numbers voxels 0 to 8") {
  const auto g = unit_grid(3, 3, 1);
  std::vector<VoxelKey> keys;
  for (std::int64_t x = 0; x < 3; ++x)
    for (std::int64_t y = 0; y < 3; ++y) keys.push_back(flatten_3d_to_1d(VoxelCoord{0, x, y, 0}, g));
  CHECK(keys == std::vector<VoxelKey>{0, 1, 2, 3, 4, 5, 6, 7, 8});
}

TEST_CASE("flattening with a frame component") {
  const auto g = unit_grid(2, 2, 2, 2);
  CHECK(flatten_3d_to_1d(VoxelCoord{0, 1, 1, 1}, g) == 7);
  CHECK(flatten_3d_to_1d(VoxelCoord{1, 0, 0, 0}, g) == 8);
  CHECK(unflatten_1d_to_3d(8, g) == VoxelCoord{1, 0, 0, 0});
  CHECK(kind_thrown([&] { flatten_3d_to_1d(VoxelCoord{2, 0, 0, 0}, g); }) == ErrorKind::InvalidArgument);
  CHECK(kind_thrown([&] { flatten_3d_to_1d(VoxelCoord{0, 0, 2, 0}, g); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("key ranking") {
  const auto a = rank_keys({423, 568, 657, 713, 829});
  CHECK(a.group_id == std::vector<std::int64_t>{0, 1, 2, 3, 4});
  CHECK(a.group_count == 5);

  const auto dup = rank_keys({5, 5, 3});
  CHECK(dup.group_id == std::vector<std::int64_t>{1, 1, 0});
  CHECK(dup.group_count == 2);

  const auto shuffled = rank_keys({829, 423, 713, 568, 657, 423});
  CHECK(shuffled.group_id == std::vector<std::int64_t>{4, 0, 3, 1, 2, 0});
}

TEST_CASE("intra-voxel query on 2k points matches the pairwise oracle") {
  Rng rng(29);
  const PointBatch cloud = random_batch(rng, 2000);
  const auto grid = grid_from_batch(cloud, 0.1);
  const auto a = intra_voxel_query(cloud, grid);
  CHECK(canonical_labels(a.group_id) == brute_voxel_classes(cloud, grid));
  CHECK(a.group_count == brute_voxel_count(cloud, grid));
}

TEST_CASE("hash table") {
  const auto t = build_hash_table(rank_keys({3, 5, 5}));
  CHECK(t.size() == 2);
  CHECK(t.find(3) == 0);
  CHECK(t.find(5) == 1);
  CHECK_FALSE(t.find(4).has_value());

  const auto fig = build_hash_table(rank_keys({1, 3, 4, 5, 6, 8}));
  CHECK(fig.size() == 6);
  for (std::int64_t i = 0; const VoxelKey k : {1, 3, 4, 5, 6, 8}) CHECK(fig.find(k) == i++);

  VoxelHashTable grow(1);
  for (VoxelKey k = 0; k < 10'000; ++k) CHECK(grow.insert(k * 7919, k) == k);
  CHECK(grow.size() == 10'000);
  CHECK(grow.insert(7919, 42) == 1);
  CHECK(grow.assign(7919, 42));
  CHECK(grow.find(7919) == 42);
  CHECK_FALSE(grow.assign(1, 0));
}

TEST_CASE("local offsets") {
  CHECK(generate_local_offsets(1) == std::vector<Offset3>{{0, 0, 0}});
  const auto three = generate_local_offsets(3);
  REQUIRE(three.size() == 27);
  CHECK(three.front() == Offset3{-1, -1, -1});
  CHECK(three[1] == Offset3{-1, -1, 0});
  CHECK(three[13] == Offset3{0, 0, 0});
  CHECK(three.back() == Offset3{1, 1, 1});
  const auto five = generate_local_offsets(5);
  CHECK(five.size() == 125);
  for (const auto& o : five)
    for (int v : o) CHECK((v >= -2 && v <= 2));
  for (int bad : {0, 2, 4, -1}) CHECK(kind_thrown([&] { generate_local_offsets(bad); }) == ErrorKind::EvenNeighborSize);
}

TEST_CASE("single voxel is its own only neighbor") {
  const auto t = inter_voxel_query(points({{0.5, 0.5, 0.5}}), unit_grid(1, 1, 1));
  CHECK(t.entry_count() == 1);
  CHECK(t.nbr_indices == std::vector<std::int64_t>{0});
  CHECK(t.inter_gid == std::vector<std::int64_t>{0});
}

TEST_CASE("3x3 layout with empty voxels 0, 2 and 7") {
  // One sampled point per occupied voxel of a 3x3x1 grid; key = 3x + y.
  const auto g = unit_grid(3, 3, 1);
  std::vector<std::array<double, 3>> rows;
  for (int key : {1, 3, 4, 5, 6, 8}) rows.push_back({key / 3 + 0.5, key % 3 + 0.5, 0.5});
  Matrix m(6, 3);
  for (Eigen::Index i = 0; i < 6; ++i) m.row(i) << rows[std::size_t(i)][0], rows[std::size_t(i)][1], rows[std::size_t(i)][2];
  const PointBatch sampled = PointBatch::single_frame(m);
  const auto a = intra_voxel_query(sampled, g);
  CHECK(a.key == std::vector<VoxelKey>{1, 3, 4, 5, 6, 8});

  const auto t = inter_voxel_query(sampled, g, 3);
  std::vector<VoxelKey> around_center;
  for (std::size_t e = 0; e < t.entry_count(); ++e) {
    if (t.inter_gid[e] == 2) around_center.push_back(a.key[std::size_t(t.nbr_indices[e])]);
  }
  // Offset order is x-major, so the keys come out ascending.
  CHECK(around_center == std::vector<VoxelKey>{1, 3, 4, 5, 6, 8});
  // Corner voxel 8 = (2,2): neighbors 4, 5 and itself; 7 is empty.
  std::vector<VoxelKey> around_corner;
  for (std::size_t e = 0; e < t.entry_count(); ++e) {
    if (t.inter_gid[e] == 5) around_corner.push_back(a.key[std::size_t(t.nbr_indices[e])]);
  }
  CHECK(around_corner == std::vector<VoxelKey>{4, 5, 8});
}

TEST_CASE("neighbors never cross frames") {
  Matrix m(2, 3);
  m << 0.5, 0.5, 0.5, 0.5, 0.5, 0.5;
  const PointBatch two({0, 1}, m);
  const auto g = VoxelGridSpec(1.0, Eigen::Vector3d::Zero(), Eigen::Vector3d::Constant(3), 2);
  const auto t = inter_voxel_query(two, g, 5);
  CHECK(sorted_pairs(t) == std::vector<std::pair<std::int64_t, std::int64_t>>{{0, 0}, {1, 1}});
}

TEST_CASE("duplicate sampled voxels are rejected") {
  const auto g = unit_grid(2, 2, 2);
  const auto batch = points({{0.1, 0.1, 0.1}, {1.5, 0.5, 0.5}, {0.9, 0.9, 0.9}});
  CHECK(kind_thrown([&] { inter_voxel_query(batch, g); }) == ErrorKind::NonUniqueSampledVoxel);
  CHECK(row_thrown([&] { inter_voxel_query(batch, g); }) == 2u);
}

TEST_CASE("2k sampled points match the Chebyshev-ball oracle at any thread count") {
  Rng rng(31);
  const PointBatch cloud = random_batch(rng, 6000, 2);
  const auto grid = grid_from_batch(cloud, 0.08);
  const auto a = intra_voxel_query(cloud, grid);
  // One representative per voxel.
  std::vector<std::int64_t> first(a.group_count, -1), ids;
  for (std::size_t i = 0; i < cloud.count(); ++i)
    if (first[std::size_t(a.group_id[i])] < 0) first[std::size_t(a.group_id[i])] = std::int64_t(i);
  Matrix m(Eigen::Index(a.group_count), 3);
  for (std::size_t g = 0; g < a.group_count; ++g) {
    m.row(Eigen::Index(g)) = cloud.coords().row(first[g]);
    ids.push_back(cloud.batch_id()[std::size_t(first[g])]);
  }
  const PointBatch sampled(ids, m);
  REQUIRE(sampled.count() >= 2000);
  const auto expected = brute_neighbor_pairs(sampled, grid, 3);
  const auto t1 = inter_voxel_query(sampled, grid, 3, Parallelism{1});
  CHECK(sorted_pairs(t1) == expected);
  for (unsigned threads : {2u, 8u}) {
    const auto tn = inter_voxel_query(sampled, grid, 3, Parallelism{threads});
    CHECK(tn.nbr_indices == t1.nbr_indices);
    CHECK(tn.inter_gid == t1.inter_gid);
  }
}

TEST_CASE("voxel query properties") { require_suite(voxel_query_properties(3003)); }
