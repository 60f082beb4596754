#include "avs/schedule.hpp"

#include <string>

#include "avs/error.hpp"
#include "avs/text.hpp"

namespace avs {

std::vector<ScheduleEntry> schedule_from(const CalibrationResult& result) {
  std::vector<ScheduleEntry> out;
  for (std::size_t i = 0; i < result.layers.size(); ++i) {
    const auto& l = result.layers[i];
    out.push_back({i, l.voxel_size, l.achieved_ratio, l.converged});
  }
  return out;
}

std::string format_schedule(const std::vector<ScheduleEntry>& entries) {
  std::string out = "# layer_index voxel_size achieved_ratio converged\n";
  for (const auto& e : entries) {
    out += std::to_string(e.layer_index) + ' ' + text::format_double(e.voxel_size) + ' ' +
           text::format_double(e.achieved_ratio) + ' ' + (e.converged ? "1" : "0") + '\n';
  }
  return out;
}

std::vector<ScheduleEntry> parse_schedule(std::string_view content) {
  std::vector<ScheduleEntry> out;
  std::size_t line_no = 0;
  while (!content.empty()) {
    const auto nl = content.find('\n');
    std::string_view line = content.substr(0, nl);
    content = nl == std::string_view::npos ? std::string_view{} : content.substr(nl + 1);
    ++line_no;
    line = text::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto tok = text::split_ws(line);
    ScheduleEntry e;
    double index = 0.0;
    if (tok.size() != 4 || !text::parse_double(tok[0], index) || !text::parse_double(tok[1], e.voxel_size) ||
        !text::parse_double(tok[2], e.achieved_ratio) || (tok[3] != "0" && tok[3] != "1") || !(e.voxel_size > 0.0)) {
      throw Error(ErrorKind::ParseError, "schedule line " + std::to_string(line_no), line_no);
    }
    e.layer_index = static_cast<std::size_t>(index);
    e.converged = tok[3] == "1";
    if (e.layer_index != out.size() || index != static_cast<double>(e.layer_index)) {
      throw Error(ErrorKind::ScheduleMismatch, "layer indices must run 0..L-1 in order", line_no);
    }
    out.push_back(e);
  }
  if (out.empty()) throw Error(ErrorKind::ScheduleMismatch, "schedule has no layers");
  return out;
}

void write_schedule(const std::filesystem::path& path, const std::vector<ScheduleEntry>& entries) {
  text::write_file(path, format_schedule(entries));
}

std::vector<ScheduleEntry> read_schedule(const std::filesystem::path& path) {
  return parse_schedule(text::read_file(path));
}

}  // namespace avs
