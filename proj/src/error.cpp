#include "avs/error.hpp"

namespace avs {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NonFiniteCoordinate: return "NonFiniteCoordinate";
    case ErrorKind::RaggedFeatures: return "RaggedFeatures";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::KeySpaceOverflow: return "KeySpaceOverflow";
    case ErrorKind::SegmentIdOutOfRange: return "SegmentIdOutOfRange";
    case ErrorKind::EmptySegment: return "EmptySegment";
    case ErrorKind::PointOutOfBounds: return "PointOutOfBounds";
    case ErrorKind::EvenNeighborSize: return "EvenNeighborSize";
    case ErrorKind::NonUniqueSampledVoxel: return "NonUniqueSampledVoxel";
    case ErrorKind::TransformRowCountMismatch: return "TransformRowCountMismatch";
    case ErrorKind::EmptyLayer: return "EmptyLayer";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::MOutOfRange: return "MOutOfRange";
    case ErrorKind::KOutOfRange: return "KOutOfRange";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::EmptyFile: return "EmptyFile";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ScheduleMismatch: return "ScheduleMismatch";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> row)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), row_(row) {}

}  // namespace avs
