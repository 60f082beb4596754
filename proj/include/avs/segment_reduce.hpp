#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "avs/parallel.hpp"
#include "avs/types.hpp"

namespace avs {

enum class ReduceMode { Sum, Max, Mean, Count };

/// R x C values tagged with a segment id per row; every id in [0, segment_count)
/// must occur at least once.
struct SegmentedMatrix {
  Matrix values;
  std::vector<std::int64_t> segment_id;
  std::size_t segment_count = 0;
};

struct ScatterResult {
  /// M x C (M x 1 holding the counts for ReduceMode::Count).
  Matrix values;
  /// M x C argmax input rows, filled only for ReduceMode::Max.
  std::vector<std::int64_t> argmax;
  /// Rows per segment, always filled.
  std::vector<std::int64_t> counts;
};

/// Group-indexed reduction. Each segment accumulates its rows in ascending row
/// order, so the result is bit-identical for any thread count. Max ties go to
/// the smallest row; mean is the sum divided by the count.
ScatterResult scatter_reduce(const Matrix& values, std::span<const std::int64_t> segment_id,
                             std::size_t segment_count, ReduceMode mode, Parallelism par = {});

inline ScatterResult scatter_reduce(const SegmentedMatrix& input, ReduceMode mode, Parallelism par = {}) {
  return scatter_reduce(input.values, input.segment_id, input.segment_count, mode, par);
}

/// out.row(r) = reduced.row(segment_id[r]).
Matrix gather(const Matrix& reduced, std::span<const std::int64_t> segment_id, Parallelism par = {});

}  // namespace avs
