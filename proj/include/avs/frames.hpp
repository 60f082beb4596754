#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "avs/types.hpp"

namespace avs {

/// Ordered, re-readable sequence of frames. Implementations must be safe to
/// call `frame()` concurrently and return identical data on every call.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::size_t frame_count() const = 0;
  virtual PointBatch frame(std::size_t index) const = 0;
  /// Grid bounds to use for this frame; nullopt means the frame's own extrema.
  virtual std::optional<Bounds> pinned_bounds(std::size_t /*index*/) const { return std::nullopt; }
};

class InMemoryFrames final : public FrameSource {
 public:
  InMemoryFrames() = default;
  explicit InMemoryFrames(std::vector<PointBatch> frames, std::vector<Bounds> bounds = {});

  std::size_t frame_count() const override { return frames_.size(); }
  PointBatch frame(std::size_t index) const override { return frames_.at(index); }
  const PointBatch& at(std::size_t index) const { return frames_.at(index); }
  std::optional<Bounds> pinned_bounds(std::size_t index) const override;

 private:
  std::vector<PointBatch> frames_;
  std::vector<Bounds> bounds_;
};

}  // namespace avs
