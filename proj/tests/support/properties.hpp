#pragma once

// Randomized property suites, one function per module. Each property runs at
// least `cases` random instances and records how many failed. Unit tests assert
// on the reports; the acceptance binary aggregates them.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace avs::testing {

struct PropertyReport {
  explicit PropertyReport(std::string n) : name(std::move(n)) {}

  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  void check(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ == 0) first_failure = what;
  }
  bool passed(std::size_t min_cases) const { return failures == 0 && cases >= min_cases; }
};

using Suite = std::vector<PropertyReport>;

inline constexpr std::size_t kDefaultCases = 100;

Suite core_type_properties(std::uint64_t seed, std::size_t cases = kDefaultCases);
Suite segment_reduce_properties(std::uint64_t seed, std::size_t cases = kDefaultCases);
Suite voxel_query_properties(std::uint64_t seed, std::size_t cases = kDefaultCases);
Suite sampling_properties(std::uint64_t seed, std::size_t cases = kDefaultCases);
Suite vam_properties(std::uint64_t seed, std::size_t cases = kDefaultCases);
Suite baseline_properties(std::uint64_t seed, std::size_t cases = kDefaultCases);
Suite io_properties(std::uint64_t seed, std::size_t cases = kDefaultCases);

/// Every suite above, concatenated.
Suite all_properties(std::uint64_t seed, std::size_t cases = kDefaultCases);

/// scatter_reduce in every mode at 1, 2 and 8 threads, compared bit for bit.
PropertyReport segment_reduce_thread_equality(std::uint64_t seed, std::size_t cases = kDefaultCases);

}  // namespace avs::testing
