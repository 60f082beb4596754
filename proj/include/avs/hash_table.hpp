#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "avs/types.hpp"

namespace avs {

/// Open-addressing map from voxel key to voxel index (linear probing,
/// power-of-two capacity, load factor <= 1/2). Immutable after build, so
/// concurrent lookups are safe.
class VoxelHashTable {
 public:
  VoxelHashTable() = default;
  explicit VoxelHashTable(std::size_t expected_size);

  /// Inserts key -> index if absent. Returns the stored index.
  std::int64_t insert(VoxelKey key, std::int64_t index);
  /// Overwrites the value of an existing key; returns false if absent.
  bool assign(VoxelKey key, std::int64_t index);
  std::optional<std::int64_t> find(VoxelKey key) const;
  /// Number of entries (M).
  std::size_t size() const { return size_; }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const Slot& s : slots_) {
      if (s.key != kEmpty) fn(s.key, s.value);
    }
  }

 private:
  static constexpr VoxelKey kEmpty = -1;
  struct Slot {
    VoxelKey key = kEmpty;
    std::int64_t value = 0;
  };

  std::size_t probe_start(VoxelKey key) const;
  void grow();

  std::vector<Slot> slots_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

}  // namespace avs
