#include <string>

#include "avs/error.hpp"
#include "avs/io.hpp"
#include "avs/text.hpp"

namespace avs {
namespace {

constexpr std::string_view kSynthPrefix = "synth:";
constexpr std::string_view kFeaturesPrefix = "features:";

bool parse_count(std::string_view token, std::uint64_t& out) {
  if (token.empty()) return false;
  out = 0;
  for (char c : token) {
    if (c < '0' || c > '9') return false;
    out = out * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return true;
}

GeneratorSpec parse_generator(std::string_view body, std::size_t line_no) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto colon = body.find(':');
    parts.push_back(body.substr(0, colon));
    if (colon == std::string_view::npos) break;
    body.remove_prefix(colon + 1);
  }
  std::uint64_t points = 0, seed = 0, frame = 0;
  if (parts.size() != 4 || !parse_count(parts[1], points) || !parse_count(parts[2], seed) ||
      !parse_count(parts[3], frame)) {
    throw Error(ErrorKind::ParseError, "manifest line " + std::to_string(line_no) +
                                           ": expected synth:<kind>:<points>:<seed>:<frame>", line_no);
  }
  GeneratorSpec spec{parse_synth_kind(parts[0]), points, seed, frame};
  if (spec.points == 0) throw Error(ErrorKind::InvalidSpec, "generator with zero points", line_no);
  return spec;
}

}  // namespace

DatasetManifest parse_manifest(std::string_view content, const std::filesystem::path& base_dir) {
  DatasetManifest m;
  std::size_t line_no = 0;
  while (!content.empty()) {
    const auto nl = content.find('\n');
    std::string_view line = content.substr(0, nl);
    content = nl == std::string_view::npos ? std::string_view{} : content.substr(nl + 1);
    ++line_no;
    line = text::trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (line.starts_with(kSynthPrefix)) {
      m.sources.emplace_back(parse_generator(line.substr(kSynthPrefix.size()), line_no));
    } else if (line.starts_with(kFeaturesPrefix)) {
      for (auto name : text::split_ws(line.substr(kFeaturesPrefix.size()))) m.feature_names.emplace_back(name);
    } else {
      std::filesystem::path path{std::string(line)};
      if (path.is_relative()) path = base_dir / path;
      if (!std::filesystem::exists(path)) {
        throw Error(ErrorKind::IoError, "manifest line " + std::to_string(line_no) + ": missing " + path.string(),
                    line_no);
      }
      m.sources.emplace_back(std::move(path));
    }
  }
  if (m.sources.empty()) throw Error(ErrorKind::InvalidSpec, "manifest lists no frames");
  return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(text::read_file(path), path.parent_path());
}

std::string format_manifest(const DatasetManifest& manifest) {
  std::string out;
  if (!manifest.feature_names.empty()) {
    out += "features:";
    for (const auto& n : manifest.feature_names) out += " " + n;
    out += '\n';
  }
  for (const auto& source : manifest.sources) {
    if (const auto* g = std::get_if<GeneratorSpec>(&source)) {
      out += std::string(kSynthPrefix) + std::string(to_string(g->kind)) + ':' + std::to_string(g->points) + ':' +
             std::to_string(g->seed) + ':' + std::to_string(g->frame) + '\n';
    } else {
      out += std::get<std::filesystem::path>(source).string() + '\n';
    }
  }
  return out;
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  text::write_file(path, format_manifest(manifest));
}

ManifestFrames::ManifestFrames(DatasetManifest manifest) : manifest_(std::move(manifest)) {
  if (manifest_.sources.empty()) throw Error(ErrorKind::InvalidSpec, "manifest lists no frames");
}

PointBatch ManifestFrames::frame(std::size_t index) const {
  const FrameSourceSpec& source = manifest_.sources.at(index);
  if (const auto* g = std::get_if<GeneratorSpec>(&source)) return generate_frame(*g);
  return load_point_file(std::get<std::filesystem::path>(source));
}

InMemoryFrames materialize(const FrameSource& source) {
  std::vector<PointBatch> frames;
  frames.reserve(source.frame_count());
  for (std::size_t i = 0; i < source.frame_count(); ++i) frames.push_back(source.frame(i));
  return InMemoryFrames(std::move(frames));
}

}  // namespace avs
