#include "avs/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "avs/baselines.hpp"
#include "avs/error.hpp"
#include "avs/io.hpp"
#include "avs/sampling.hpp"
#include "avs/text.hpp"
#include "avs/vam.hpp"
#include "avs/voxel_query.hpp"

namespace avs {

double quantile(std::vector<double> samples, double q) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  const double pos = q * static_cast<double>(samples.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(samples.size() - 1, lo + 1);
  return samples[lo] + (pos - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
}

LatencyStats time_callable(const std::function<void()>& fn, const TimingPlan& plan) {
  using clock = std::chrono::steady_clock;
  for (std::size_t i = 0; i < plan.warmup; ++i) fn();
  std::vector<double> ms;
  ms.reserve(plan.repeats);
  double spent = 0.0;
  for (std::size_t i = 0; i < plan.repeats; ++i) {
    const auto start = clock::now();
    fn();
    const double elapsed = std::chrono::duration<double, std::milli>(clock::now() - start).count();
    ms.push_back(elapsed);
    spent += elapsed / 1000.0;
    if (plan.budget_seconds > 0.0 && spent >= plan.budget_seconds && ms.size() >= plan.min_repeats) break;
  }
  return {quantile(ms, 0.5), quantile(ms, 0.1), quantile(ms, 0.9), ms.size()};
}

std::string_view to_string(BenchMethod method) {
  switch (method) {
    case BenchMethod::Fps: return "fps";
    case BenchMethod::Knn: return "knn";
    case BenchMethod::Intra: return "intra";
    case BenchMethod::Inter: return "inter";
  }
  return "unknown";
}

BenchMethod parse_bench_method(std::string_view name) {
  for (auto m : {BenchMethod::Fps, BenchMethod::Knn, BenchMethod::Intra, BenchMethod::Inter}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown bench method '" + std::string(name) + "'");
}

std::vector<BenchRow> run_benchmark(const BenchConfig& config) {
  if (!std::is_sorted(config.sizes.begin(), config.sizes.end())) {
    throw Error(ErrorKind::InvalidArgument, "benchmark sizes must be ascending");
  }
  const Parallelism par{config.threads};
  std::vector<BenchRow> rows;
  for (std::size_t n : config.sizes) {
    const PointBatch cloud = generate_frame({SynthKind::UniformCube, n, config.seed, 0});

    // Voxel size for the target ratio; the initial guess assumes uniform occupancy.
    VamConfig vam;
    vam.ref_ratio = config.downsample_ratio;
    vam.v0 = std::cbrt(config.downsample_ratio / static_cast<double>(n));
    vam.relative_epsilon = true;
    vam.epsilon = 0.01;
    const InMemoryFrames frames({cloud});
    const double size = calibrate_layer(frames, vam, par).voxel_size;

    const VoxelGridSpec grid = grid_from_batch(cloud, size);
    const PointBatch sampled = centroid_sample(cloud, intra_voxel_query(cloud, grid));
    const std::size_t m = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(double(n) / config.downsample_ratio)));

    for (BenchMethod method : config.methods) {
      const TimingPlan plan = config.timing_for ? config.timing_for(method, n) : config.timing;
      std::function<void()> fn;
      switch (method) {
        case BenchMethod::Intra:
          fn = [&] { (void)intra_voxel_query(cloud, grid); };
          break;
        case BenchMethod::Fps:
          fn = [&] { (void)farthest_point_sample(cloud, m); };
          break;
        case BenchMethod::Knn:
          fn = [&] { (void)knn_search(sampled, sampled, std::min(config.knn_k, sampled.count()), par); };
          break;
        case BenchMethod::Inter:
          fn = [&] { (void)inter_voxel_query(sampled, grid, config.nbr_size, par); };
          break;
      }
      rows.push_back({method, n, time_callable(fn, plan)});
    }
  }
  return rows;
}

std::string format_bench_csv(std::span<const BenchRow> rows) {
  std::string out = "method,n,median_ms,p10_ms,p90_ms\n";
  for (const auto& r : rows) {
    out += std::string(to_string(r.method)) + ',' + std::to_string(r.n) + ',' +
           text::format_double(r.stats.median_ms, 6) + ',' + text::format_double(r.stats.p10_ms, 6) + ',' +
           text::format_double(r.stats.p90_ms, 6) + '\n';
  }
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::InvalidArgument, "need >= 2 paired samples");
  double mx = 0, my = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace avs
