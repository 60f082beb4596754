#include <doctest.h>

#include "avs/segment_reduce.hpp"
#include "oracles.hpp"
#include "suite_check.hpp"

using namespace avs;
using namespace avs::testing;

namespace {

Matrix column(std::initializer_list<double> v) {
  Matrix m(Eigen::Index(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

}  // namespace

TEST_CASE("mean of one segment") {
  const std::vector<std::int64_t> ids{0, 0};
  const auto r = scatter_reduce(column({1, 3}), ids, 1, ReduceMode::Mean);
  CHECK(r.values == column({2}));
  CHECK(r.counts == std::vector<std::int64_t>{2});
}

TEST_CASE("max with argmax rows") {
  const std::vector<std::int64_t> ids{0, 1, 0};
  const auto r = scatter_reduce(column({1, 5, 2}), ids, 2, ReduceMode::Max);
  CHECK(r.values == column({2, 5}));
  CHECK(r.argmax == std::vector<std::int64_t>{2, 1});
}

TEST_CASE("max ties go to the smallest row") {
  const std::vector<std::int64_t> ids{1, 0, 1, 0};
  const auto r = scatter_reduce(column({4, 7, 4, 7}), ids, 2, ReduceMode::Max);
  CHECK(r.argmax == std::vector<std::int64_t>{1, 0});
}

TEST_CASE("singleton segments are the identity in every mode but count") {
  Rng rng(5);
  const Matrix x = random_matrix(rng, 5, 3);
  const std::vector<std::int64_t> ids{0, 1, 2, 3, 4};
  for (auto mode : {ReduceMode::Sum, ReduceMode::Max, ReduceMode::Mean}) {
    CHECK(scatter_reduce(x, ids, 5, mode).values == x);
  }
  const auto counts = scatter_reduce(x, ids, 5, ReduceMode::Count);
  CHECK(counts.values == Matrix::Ones(5, 1));
}

TEST_CASE("count mode returns M x 1 counts") {
  const std::vector<std::int64_t> ids{2, 0, 2, 2, 1};
  const auto r = scatter_reduce(Matrix::Zero(5, 4), ids, 3, ReduceMode::Count);
  CHECK(r.values == column({1, 1, 3}));
  CHECK(r.counts == std::vector<std::int64_t>{1, 1, 3});
}

TEST_CASE("sum and mean against a per-group loop") {
  Rng rng(17);
  const Matrix x = random_matrix(rng, 1000, 4);
  const auto ids = random_segments(rng, 1000, 100);
  const auto sum = scatter_reduce(x, ids, 100, ReduceMode::Sum).values;
  const auto mean = scatter_reduce(x, ids, 100, ReduceMode::Mean).values;
  Matrix expected = Matrix::Zero(100, 4);
  std::vector<double> n(100, 0.0);
  for (std::size_t r = 0; r < ids.size(); ++r) {
    expected.row(ids[r]) += x.row(Eigen::Index(r));
    n[std::size_t(ids[r])] += 1;
  }
  // Ascending row order is also this loop's order, so the sums agree exactly.
  CHECK(sum == expected);
  for (Eigen::Index g = 0; g < 100; ++g) CHECK(mean.row(g) == expected.row(g) / n[std::size_t(g)]);
}

TEST_CASE("gather") {
  const std::vector<std::int64_t> ids{0, 0};
  CHECK(gather(column({2}), ids) == column({2, 2}));

  Rng rng(23);
  const Matrix reduced = random_matrix(rng, 100, 4);
  const auto many = random_segments(rng, 1000, 100);
  const Matrix out = gather(reduced, many);
  for (std::size_t r = 0; r < many.size(); ++r) CHECK(out.row(Eigen::Index(r)) == reduced.row(many[r]));
}

TEST_CASE("gather of a mean scatter fixes per-group constants") {
  const std::vector<std::int64_t> ids{0, 1, 0, 2, 1, 1};
  Matrix x(6, 2);
  x << 0.5, 7, 1.25, -1, 0.5, 7, 1e9, 2, 1.25, -1, 1.25, -1;
  CHECK(gather(scatter_reduce(x, ids, 3, ReduceMode::Mean).values, ids) == x);
}

TEST_CASE("errors") {
  const std::vector<std::int64_t> out_of_range{0, 3, 1};
  CHECK(kind_thrown([&] { scatter_reduce(Matrix::Zero(3, 1), out_of_range, 2, ReduceMode::Sum); }) ==
        ErrorKind::SegmentIdOutOfRange);
  CHECK(row_thrown([&] { scatter_reduce(Matrix::Zero(3, 1), out_of_range, 2, ReduceMode::Sum); }) == 1u);
  const std::vector<std::int64_t> negative{0, -1};
  CHECK(kind_thrown([&] { scatter_reduce(Matrix::Zero(2, 1), negative, 1, ReduceMode::Max); }) ==
        ErrorKind::SegmentIdOutOfRange);
  const std::vector<std::int64_t> gap{0, 2};
  CHECK(kind_thrown([&] { scatter_reduce(Matrix::Zero(2, 1), gap, 3, ReduceMode::Mean); }) == ErrorKind::EmptySegment);
  CHECK(kind_thrown([&] { gather(Matrix::Zero(2, 1), out_of_range); }) == ErrorKind::SegmentIdOutOfRange);
}

TEST_CASE("segment reduce properties") { require_suite(segment_reduce_properties(2002)); }
