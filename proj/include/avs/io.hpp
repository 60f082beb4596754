#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "avs/frames.hpp"
#include "avs/types.hpp"

namespace avs {

// ---- ASCII XYZ ---------------------------------------------------------------
// One point per line: `x y z [f0 f1 ...]`, whitespace (or comma) separated.
// Blank lines and lines starting with '#' are ignored.

/// Throws ParseError(line) and EmptyFile; ragged feature counts surface as RaggedFeatures.
PointBatch parse_xyz(std::string_view content);
PointBatch load_xyz(const std::filesystem::path& path);

/// Values are written with 9 significant digits; any value that already has at
/// most 9 significant decimal digits reads back bit-exactly.
std::string format_xyz(const PointBatch& batch);
void write_xyz(const std::filesystem::path& path, const PointBatch& batch);

// ---- PLY (binary_little_endian 1.0, vertex subset) ---------------------------

/// Vertex element with scalar x, y, z; every other scalar vertex property
/// becomes a feature column. Other elements are skipped with a warning on
/// stderr. Throws UnsupportedFormat for ascii/big-endian files or list
/// properties on the vertex element, ParseError for malformed headers.
PointBatch parse_ply(std::string_view bytes);
PointBatch load_ply(const std::filesystem::path& path);

/// Writes x, y, z as float32 plus one float32 property per feature column.
std::string format_ply(const PointBatch& batch, const std::vector<std::string>& feature_names = {});
void write_ply(const std::filesystem::path& path, const PointBatch& batch,
               const std::vector<std::string>& feature_names = {});

/// Dispatches on extension (.ply, otherwise XYZ).
PointBatch load_point_file(const std::filesystem::path& path);

// ---- Synthetic data -------------------------------------------------------------

enum class SynthKind { UniformCube, GaussianClusters, RadialLidar };

std::string_view to_string(SynthKind kind);
/// Throws InvalidSpec for unknown names.
SynthKind parse_synth_kind(std::string_view name);

/// One generated frame; a pure function of its fields.
struct GeneratorSpec {
  SynthKind kind = SynthKind::UniformCube;
  std::size_t points = 0;
  std::uint64_t seed = 0;
  std::size_t frame = 0;

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

inline constexpr std::size_t kClusterCount = 8;
inline constexpr double kClusterSigma = 0.05;
inline constexpr double kLidarMinRange = 1.0;
inline constexpr double kLidarMaxRange = 50.0;
inline constexpr double kLidarMaxElevation = 0.26;  // radians

/// uniform_cube fills [0,1]^3; gaussian_clusters draws kClusterCount blobs with
/// centers in [0,1]^3; radial_lidar draws ranges uniformly in
/// [kLidarMinRange, kLidarMaxRange] (point density falls off as 1/r^2) over a
/// full azimuth sweep and a narrow elevation band. Throws InvalidSpec for zero points.
PointBatch generate_frame(const GeneratorSpec& spec);

// ---- Manifests -------------------------------------------------------------------
// Line-oriented text, one source per line, '#' comments:
//   path/to/frame.xyz           (relative paths resolve against the manifest directory)
//   path/to/frame.ply
//   synth:<kind>:<points>:<seed>:<frame>
//   features: name0 name1 ...   (optional feature column names)

using FrameSourceSpec = std::variant<std::filesystem::path, GeneratorSpec>;

struct DatasetManifest {
  std::vector<FrameSourceSpec> sources;
  std::vector<std::string> feature_names;

  std::size_t frame_count() const { return sources.size(); }
};

/// Manifest of `frames` generator sources; frame i uses (kind, points, seed, i).
/// Throws InvalidSpec when frames or points_per_frame is zero.
DatasetManifest synth_dataset(SynthKind kind, std::size_t frames, std::size_t points_per_frame, std::uint64_t seed);

/// `base_dir` anchors relative paths. Throws ParseError(line), InvalidSpec, and
/// IoError when a file source does not exist.
DatasetManifest parse_manifest(std::string_view content, const std::filesystem::path& base_dir);
DatasetManifest load_manifest(const std::filesystem::path& path);
std::string format_manifest(const DatasetManifest& manifest);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

/// Streams frames from a manifest, loading or generating one frame per call.
class ManifestFrames final : public FrameSource {
 public:
  /// Throws InvalidSpec for an empty manifest.
  explicit ManifestFrames(DatasetManifest manifest);

  std::size_t frame_count() const override { return manifest_.frame_count(); }
  PointBatch frame(std::size_t index) const override;
  const DatasetManifest& manifest() const { return manifest_; }

 private:
  DatasetManifest manifest_;
};

/// Loads every frame into memory.
InMemoryFrames materialize(const FrameSource& source);

}  // namespace avs
