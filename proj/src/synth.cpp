#include "avs/io.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "avs/error.hpp"

namespace avs {

std::string_view to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::UniformCube: return "uniform_cube";
    case SynthKind::GaussianClusters: return "gaussian_clusters";
    case SynthKind::RadialLidar: return "radial_lidar";
  }
  return "unknown";
}

SynthKind parse_synth_kind(std::string_view name) {
  if (name == "uniform_cube") return SynthKind::UniformCube;
  if (name == "gaussian_clusters") return SynthKind::GaussianClusters;
  if (name == "radial_lidar") return SynthKind::RadialLidar;
  throw Error(ErrorKind::InvalidSpec, "unknown generator '" + std::string(name) + "'");
}

PointBatch generate_frame(const GeneratorSpec& spec) {
  if (spec.points == 0) throw Error(ErrorKind::InvalidSpec, "generator needs at least one point");
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(spec.frame), static_cast<std::uint32_t>(spec.frame >> 32),
                    static_cast<std::uint32_t>(spec.kind)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Matrix coords(static_cast<Eigen::Index>(spec.points), 3);
  switch (spec.kind) {
    case SynthKind::UniformCube:
      for (Eigen::Index i = 0; i < coords.rows(); ++i) {
        for (int a = 0; a < 3; ++a) coords(i, a) = unit(rng);
      }
      break;
    case SynthKind::GaussianClusters: {
      Matrix centers(static_cast<Eigen::Index>(kClusterCount), 3);
      for (Eigen::Index c = 0; c < centers.rows(); ++c) {
        for (int a = 0; a < 3; ++a) centers(c, a) = unit(rng);
      }
      std::uniform_int_distribution<Eigen::Index> pick(0, centers.rows() - 1);
      std::normal_distribution<double> noise(0.0, kClusterSigma);
      for (Eigen::Index i = 0; i < coords.rows(); ++i) {
        const Eigen::Index c = pick(rng);
        for (int a = 0; a < 3; ++a) coords(i, a) = centers(c, a) + noise(rng);
      }
      break;
    }
    case SynthKind::RadialLidar: {
      std::uniform_real_distribution<double> range(kLidarMinRange, kLidarMaxRange);
      std::uniform_real_distribution<double> azimuth(0.0, 2.0 * std::numbers::pi);
      std::uniform_real_distribution<double> elevation(-kLidarMaxElevation, kLidarMaxElevation);
      for (Eigen::Index i = 0; i < coords.rows(); ++i) {
        const double r = range(rng);
        const double az = azimuth(rng);
        const double el = elevation(rng);
        coords(i, 0) = r * std::cos(el) * std::cos(az);
        coords(i, 1) = r * std::cos(el) * std::sin(az);
        coords(i, 2) = r * std::sin(el);
      }
      break;
    }
  }
  return PointBatch::single_frame(std::move(coords));
}

DatasetManifest synth_dataset(SynthKind kind, std::size_t frames, std::size_t points_per_frame, std::uint64_t seed) {
  if (frames == 0 || points_per_frame == 0) throw Error(ErrorKind::InvalidSpec, "frames and points must be >= 1");
  DatasetManifest m;
  for (std::size_t f = 0; f < frames; ++f) m.sources.emplace_back(GeneratorSpec{kind, points_per_frame, seed, f});
  return m;
}

}  // namespace avs
