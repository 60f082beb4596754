#include "avs/frames.hpp"

#include "avs/error.hpp"

namespace avs {

InMemoryFrames::InMemoryFrames(std::vector<PointBatch> frames, std::vector<Bounds> bounds)
    : frames_(std::move(frames)), bounds_(std::move(bounds)) {
  if (!bounds_.empty() && bounds_.size() != frames_.size()) {
    throw Error(ErrorKind::InvalidArgument, "pinned bounds must be given for every frame or none");
  }
}

std::optional<Bounds> InMemoryFrames::pinned_bounds(std::size_t index) const {
  if (bounds_.empty()) return std::nullopt;
  return bounds_.at(index);
}

}  // namespace avs
