#include "avs/hash_table.hpp"

#include <bit>

#include "avs/error.hpp"

namespace avs {
namespace {

std::uint64_t mix(std::uint64_t x) {
  // splitmix64 finalizer
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace

VoxelHashTable::VoxelHashTable(std::size_t expected_size) {
  const std::size_t capacity = std::bit_ceil(std::max<std::size_t>(16, expected_size * 2));
  slots_.assign(capacity, Slot{});
  mask_ = capacity - 1;
}

std::size_t VoxelHashTable::probe_start(VoxelKey key) const {
  return static_cast<std::size_t>(mix(static_cast<std::uint64_t>(key))) & mask_;
}

void VoxelHashTable::grow() {
  std::vector<Slot> old = std::move(slots_);
  const std::size_t capacity = std::max<std::size_t>(16, old.size() * 2);
  slots_.assign(capacity, Slot{});
  mask_ = capacity - 1;
  size_ = 0;
  for (const Slot& s : old) {
    if (s.key != kEmpty) insert(s.key, s.value);
  }
}

std::int64_t VoxelHashTable::insert(VoxelKey key, std::int64_t index) {
  if (key < 0) throw Error(ErrorKind::InvalidArgument, "voxel keys are non-negative");
  if (slots_.empty() || (size_ + 1) * 2 > slots_.size()) grow();
  for (std::size_t i = probe_start(key);; i = (i + 1) & mask_) {
    Slot& s = slots_[i];
    if (s.key == key) return s.value;
    if (s.key == kEmpty) {
      s.key = key;
      s.value = index;
      ++size_;
      return index;
    }
  }
}

bool VoxelHashTable::assign(VoxelKey key, std::int64_t index) {
  if (slots_.empty() || key < 0) return false;
  for (std::size_t i = probe_start(key);; i = (i + 1) & mask_) {
    Slot& s = slots_[i];
    if (s.key == key) {
      s.value = index;
      return true;
    }
    if (s.key == kEmpty) return false;
  }
}

std::optional<std::int64_t> VoxelHashTable::find(VoxelKey key) const {
  if (slots_.empty() || key < 0) return std::nullopt;
  for (std::size_t i = probe_start(key);; i = (i + 1) & mask_) {
    const Slot& s = slots_[i];
    if (s.key == key) return s.value;
    if (s.key == kEmpty) return std::nullopt;
  }
}

}  // namespace avs
