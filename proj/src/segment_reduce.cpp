#include "avs/segment_reduce.hpp"

#include <string>

#include "avs/error.hpp"

namespace avs {
namespace {

constexpr std::size_t kMinChunk = 4096;

// Counting sort of rows by segment: rows of segment g are order[offset[g] .. offset[g+1]),
// ascending within each segment.
struct SegmentIndex {
  std::vector<std::int64_t> offset;
  std::vector<std::int64_t> order;
};

SegmentIndex index_segments(std::span<const std::int64_t> segment_id, std::size_t segment_count) {
  SegmentIndex idx;
  idx.offset.assign(segment_count + 1, 0);
  for (std::size_t r = 0; r < segment_id.size(); ++r) {
    const std::int64_t g = segment_id[r];
    if (g < 0 || static_cast<std::size_t>(g) >= segment_count) {
      throw Error(ErrorKind::SegmentIdOutOfRange,
                  "row " + std::to_string(r) + " has segment id " + std::to_string(g), r);
    }
    ++idx.offset[static_cast<std::size_t>(g) + 1];
  }
  for (std::size_t g = 0; g < segment_count; ++g) {
    if (idx.offset[g + 1] == 0) throw Error(ErrorKind::EmptySegment, "segment " + std::to_string(g) + " is empty");
    idx.offset[g + 1] += idx.offset[g];
  }
  idx.order.resize(segment_id.size());
  std::vector<std::int64_t> cursor(idx.offset.begin(), idx.offset.end() - 1);
  for (std::size_t r = 0; r < segment_id.size(); ++r) {
    idx.order[static_cast<std::size_t>(cursor[static_cast<std::size_t>(segment_id[r])]++)] =
        static_cast<std::int64_t>(r);
  }
  return idx;
}

}  // namespace

ScatterResult scatter_reduce(const Matrix& values, std::span<const std::int64_t> segment_id,
                             std::size_t segment_count, ReduceMode mode, Parallelism par) {
  if (static_cast<std::size_t>(values.rows()) != segment_id.size()) {
    throw Error(ErrorKind::InvalidArgument, "values rows differ from segment_id length");
  }
  const SegmentIndex idx = index_segments(segment_id, segment_count);
  const Eigen::Index cols = values.cols();
  const auto m = static_cast<Eigen::Index>(segment_count);

  ScatterResult out;
  out.counts.resize(segment_count);
  for (std::size_t g = 0; g < segment_count; ++g) out.counts[g] = idx.offset[g + 1] - idx.offset[g];

  if (mode == ReduceMode::Count) {
    out.values.resize(m, 1);
    for (std::size_t g = 0; g < segment_count; ++g) out.values(static_cast<Eigen::Index>(g), 0) = double(out.counts[g]);
    return out;
  }

  out.values.resize(m, cols);
  if (mode == ReduceMode::Max) out.argmax.resize(segment_count * static_cast<std::size_t>(cols));

  parallel_chunks(segment_count, par, kMinChunk / 4, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t g = begin; g < end; ++g) {
      const auto first = idx.offset[g];
      const auto last = idx.offset[g + 1];
      auto dst = out.values.row(static_cast<Eigen::Index>(g));
      dst = values.row(idx.order[static_cast<std::size_t>(first)]);
      if (mode == ReduceMode::Max) {
        std::int64_t* arg = out.argmax.data() + g * static_cast<std::size_t>(cols);
        std::fill(arg, arg + cols, idx.order[static_cast<std::size_t>(first)]);
        for (auto k = first + 1; k < last; ++k) {
          const std::int64_t r = idx.order[static_cast<std::size_t>(k)];
          for (Eigen::Index c = 0; c < cols; ++c) {
            if (values(r, c) > dst(c)) {
              dst(c) = values(r, c);
              arg[c] = r;
            }
          }
        }
      } else {
        for (auto k = first + 1; k < last; ++k) dst += values.row(idx.order[static_cast<std::size_t>(k)]);
        if (mode == ReduceMode::Mean) dst /= static_cast<double>(last - first);
      }
    }
  });
  return out;
}

Matrix gather(const Matrix& reduced, std::span<const std::int64_t> segment_id, Parallelism par) {
  const auto m = reduced.rows();
  for (std::size_t r = 0; r < segment_id.size(); ++r) {
    if (segment_id[r] < 0 || segment_id[r] >= m) {
      throw Error(ErrorKind::SegmentIdOutOfRange,
                  "row " + std::to_string(r) + " has segment id " + std::to_string(segment_id[r]), r);
    }
  }
  Matrix out(static_cast<Eigen::Index>(segment_id.size()), reduced.cols());
  parallel_chunks(segment_id.size(), par, kMinChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) out.row(static_cast<Eigen::Index>(r)) = reduced.row(segment_id[r]);
  });
  return out;
}

}  // namespace avs
