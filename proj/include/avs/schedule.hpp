#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "avs/vam.hpp"

namespace avs {

/// One line of a voxel-size schedule: `layer_index voxel_size achieved_ratio converged`.
struct ScheduleEntry {
  std::size_t layer_index = 0;
  double voxel_size = 0.0;
  double achieved_ratio = 0.0;
  bool converged = false;

  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

std::vector<ScheduleEntry> schedule_from(const CalibrationResult& result);

/// Whitespace separated, one layer per line, `#` comments; sizes and ratios
/// are written with 17 significant digits so they read back exactly.
std::string format_schedule(const std::vector<ScheduleEntry>& entries);
/// Throws ParseError(line) on malformed lines and ScheduleMismatch when layer
/// indices are not 0..L-1 in order or the schedule is empty.
std::vector<ScheduleEntry> parse_schedule(std::string_view text);

void write_schedule(const std::filesystem::path& path, const std::vector<ScheduleEntry>& entries);
std::vector<ScheduleEntry> read_schedule(const std::filesystem::path& path);

}  // namespace avs
