#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace avs {

enum class ErrorKind {
  EmptyInput,
  NonFiniteCoordinate,
  RaggedFeatures,
  InvalidArgument,
  KeySpaceOverflow,
  SegmentIdOutOfRange,
  EmptySegment,
  PointOutOfBounds,
  EvenNeighborSize,
  NonUniqueSampledVoxel,
  TransformRowCountMismatch,
  EmptyLayer,
  EmptyDataset,
  MOutOfRange,
  KOutOfRange,
  ParseError,
  EmptyFile,
  UnsupportedFormat,
  InvalidSpec,
  IoError,
  ScheduleMismatch,
};

std::string_view to_string(ErrorKind kind);

/// Library-wide exception. `row()` carries the offending row or line when the
/// error is attributable to one (rows are 0-based, file lines 1-based).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> row = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> row() const noexcept { return row_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> row_;
};

}  // namespace avs
