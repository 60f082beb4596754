#include <doctest.h>

#include <cmath>

#include "avs/io.hpp"
#include "avs/schedule.hpp"
#include "avs/vam.hpp"
#include "avs/voxel_query.hpp"
#include "oracles.hpp"
#include "suite_check.hpp"

using namespace avs;
using namespace avs::testing;

namespace {

InMemoryFrames uniform_frames(std::size_t frames, std::size_t points, std::uint64_t seed) {
  return materialize(ManifestFrames(synth_dataset(SynthKind::UniformCube, frames, points, seed)));
}

}  // namespace

TEST_CASE("zero error is a fixed point of the update") {
  VamConfig cfg;
  VamState s;
  s.scale = 0.7;
  const VamState next = vam_step(s, cfg, cfg.ref_ratio);
  CHECK(next.scale == 0.7);
  CHECK(next.err_integral == 0.0);
  CHECK(next.iteration == 1);
  REQUIRE(next.history.size() == 1);
  CHECK(next.history[0].err == 0.0);
  CHECK(next.history[0].voxel_size == doctest::Approx(cfg.v0 * std::exp(0.7)));
}

TEST_CASE("one proportional step from scale 0") {
  VamConfig cfg;
  cfg.k_p = 1.0;
  cfg.k_i = 0.0;
  cfg.i_r = 1.0;
  cfg.ref_ratio = 2.0;
  const VamState next = vam_step(VamState{}, cfg, 1.0);
  CHECK(next.history[0].err == 1.0);
  CHECK(next.scale == doctest::Approx(logistic_minus_half(1.0)).epsilon(1e-15));
  CHECK(next.scale == doctest::Approx(0.2310585786300049).epsilon(1e-15));
  CHECK(next.history[0].next_voxel_size == doctest::Approx(cfg.v0 * std::exp(0.2310585786300049)));
}

TEST_CASE("integral term is clamped") {
  VamConfig cfg;
  cfg.integral_limit = 5.0;
  VamState s;
  for (int i = 0; i < 10; ++i) s = vam_step(s, cfg, 1.0 + cfg.ref_ratio);
  CHECK(s.err_integral == -5.0);
  CHECK(s.history.size() == 10);
}

TEST_CASE("config validation") {
  auto rejects = [](auto mutate) {
    VamConfig c;
    mutate(c);
    return kind_thrown([&] { c.validate(); }) == ErrorKind::InvalidArgument;
  };
  CHECK_NOTHROW(VamConfig{}.validate());
  CHECK(rejects([](VamConfig& c) { c.ref_ratio = 1.0; }));
  CHECK(rejects([](VamConfig& c) { c.v0 = 0.0; }));
  CHECK(rejects([](VamConfig& c) { c.i_r = -1.0; }));
  CHECK(rejects([](VamConfig& c) { c.epsilon = 0.0; }));
  CHECK(rejects([](VamConfig& c) { c.max_iterations = 0; }));
  CHECK(rejects([](VamConfig& c) { c.frame_stride = 0; }));
  VamConfig rel;
  rel.ref_ratio = 4.0;
  rel.relative_epsilon = true;
  CHECK(rel.tolerance() == doctest::Approx(4e-3));
}

TEST_CASE("ratio of singleton and all-in-one voxels") {
  Matrix spread(4, 3);
  spread << 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1, 1;
  const InMemoryFrames one({PointBatch::single_frame(spread)});
  CHECK(measure_ratio(one, 0.5).ratio == 1.0);
  const auto all = measure_ratio(one, 5.0);
  CHECK(all.ratio == 4.0);
  CHECK(all.n_input == 4);
  CHECK(all.n_sampled == 1);
  CHECK(kind_thrown([] { measure_ratio(InMemoryFrames{}, 1.0); }) == ErrorKind::EmptyDataset);
}

TEST_CASE("ratio sums per-frame voxel counts") {
  const InMemoryFrames frames = uniform_frames(50, 4000, 5);
  const auto m = measure_ratio(frames, 0.1);
  std::uint64_t n = 0, voxels = 0;
  for (std::size_t f = 0; f < frames.frame_count(); ++f) {
    const PointBatch& b = frames.at(f);
    n += b.count();
    voxels += brute_voxel_count(b, grid_from_batch(b, 0.1));
  }
  CHECK(m.n_input == n);
  CHECK(m.n_sampled == voxels);
  CHECK(m.ratio == double(n) / double(voxels));
  CHECK(measure_ratio(frames, 0.1, Parallelism{8}).ratio == m.ratio);

  const auto strided = measure_ratio(frames, 0.1, {}, 10);
  CHECK(strided.n_input == 5 * 4000);
}

TEST_CASE("pinned bounds replace the frame extrema") {
  const PointBatch b = PointBatch::single_frame(Matrix::Constant(1, 3, 0.75));
  Bounds wide{Eigen::Vector3d::Zero(), Eigen::Vector3d::Constant(2.0)};
  const InMemoryFrames pinned({b}, {wide});
  CHECK(pinned.pinned_bounds(0).has_value());
  CHECK(measure_ratio(pinned, 0.5).ratio == 1.0);
}

TEST_CASE("calibration stops at once when v0 already hits the reference") {
  // Two voxels of two points each at size 1.
  Matrix m(4, 3);
  m << 0.1, 0.1, 0.1, 0.2, 0.2, 0.2, 1.9, 1.9, 1.9, 1.8, 1.8, 1.8;
  const InMemoryFrames frames({PointBatch::single_frame(m)});
  VamConfig cfg;
  cfg.v0 = 1.0;
  cfg.ref_ratio = 2.0;
  const auto r = calibrate_layer(frames, cfg);
  CHECK(r.converged);
  CHECK(r.state.iteration == 1);
  CHECK(r.state.scale == 0.0);
  CHECK(r.voxel_size == 1.0);
  CHECK(r.achieved_ratio == 2.0);
}

TEST_CASE("calibration hits the reference on uniform frames") {
  const InMemoryFrames frames = uniform_frames(5, 20'000, 9);
  VamConfig cfg;
  cfg.ref_ratio = 2.0;
  const auto r = calibrate_layer(frames, cfg);
  INFO("iterations " << r.state.iteration << ", ratio " << r.achieved_ratio);
  CHECK(r.converged);
  CHECK(r.state.iteration <= 200);
  CHECK(std::abs(r.achieved_ratio - 2.0) < cfg.epsilon);
  CHECK(measure_ratio(frames, r.voxel_size).ratio == r.achieved_ratio);
  CHECK(r.state.history.size() == std::size_t(r.state.iteration));
  CHECK(r.state.history.back().voxel_size == r.voxel_size);
}

TEST_CASE("hitting the iteration cap reports non-convergence") {
  const InMemoryFrames frames = uniform_frames(1, 2000, 3);
  VamConfig cfg;
  cfg.ref_ratio = 3.0;
  cfg.max_iterations = 3;
  const auto r = calibrate_layer(frames, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.state.iteration == 3);
}

TEST_CASE("cascade calibration") {
  const InMemoryFrames frames = uniform_frames(5, 20'000, 13);
  VamConfig cfg;
  cfg.ref_ratio = 2.0;

  const std::vector<VamConfig> single{cfg};
  const auto one = calibrate_cascade(frames, single);
  const auto direct = calibrate_layer(frames, cfg);
  REQUIRE(one.layers.size() == 1);
  CHECK(one.layers[0].voxel_size == direct.voxel_size);
  CHECK(one.layers[0].state.iteration == direct.state.iteration);

  const std::vector<VamConfig> four(4, cfg);
  CascadeCalibrationOptions options;
  options.warm_start = true;
  const auto result = calibrate_cascade(frames, four, options);
  REQUIRE(result.layers.size() == 4);
  CHECK(result.converged());
  const auto sizes = result.voxel_sizes();
  for (std::size_t l = 0; l < 4; ++l) {
    INFO("layer " << l);
    CHECK(std::abs(result.layers[l].achieved_ratio - 2.0) < cfg.epsilon);
    if (l > 0) CHECK(sizes[l] > sizes[l - 1]);
  }
}

TEST_CASE("schedule text round trip") {
  const std::vector<ScheduleEntry> entries{{0, 0.050712345678901234, 1.9999, true}, {1, 0.0754, 2.0004, false}};
  const std::string text = format_schedule(entries);
  CHECK(text.rfind("# layer_index voxel_size achieved_ratio converged\n", 0) == 0);
  CHECK(parse_schedule(text) == entries);

  CHECK(kind_thrown([] { parse_schedule("0 0.1 2.0\n"); }) == ErrorKind::ParseError);
  CHECK(row_thrown([] { parse_schedule("# c\n0 0.1 2.0 1\n1 x 2.0 1\n"); }) == 3u);
  CHECK(kind_thrown([] { parse_schedule("1 0.1 2.0 1\n"); }) == ErrorKind::ScheduleMismatch);
  CHECK(kind_thrown([] { parse_schedule("# nothing\n"); }) == ErrorKind::ScheduleMismatch);
}

TEST_CASE("voxel adaptation properties") { require_suite(vam_properties(5005)); }
