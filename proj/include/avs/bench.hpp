#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace avs {

struct LatencyStats {
  double median_ms = 0.0;
  double p10_ms = 0.0;
  double p90_ms = 0.0;
  std::size_t runs = 0;
};

struct TimingPlan {
  std::size_t warmup = 10;
  std::size_t repeats = 100;
  /// Stop measuring once this much time has been spent (0 = no cap). At
  /// least `min_repeats` runs are always taken.
  double budget_seconds = 0.0;
  std::size_t min_repeats = 3;
};

/// Times `fn` on a monotonic clock; warmup runs are discarded.
LatencyStats time_callable(const std::function<void()>& fn, const TimingPlan& plan);

/// Linear-interpolated quantile of unsorted samples, q in [0, 1].
double quantile(std::vector<double> samples, double q);

enum class BenchMethod { Fps, Knn, Intra, Inter };

std::string_view to_string(BenchMethod method);
/// Throws InvalidArgument for unknown names.
BenchMethod parse_bench_method(std::string_view name);

struct BenchConfig {
  std::vector<std::size_t> sizes{10'000, 20'000, 40'000, 80'000, 160'000, 320'000};
  std::vector<BenchMethod> methods{BenchMethod::Fps, BenchMethod::Knn, BenchMethod::Intra, BenchMethod::Inter};
  TimingPlan timing{};
  /// Optional per-method override of `timing` (quadratic baselines at large N).
  std::function<TimingPlan(BenchMethod, std::size_t)> timing_for{};
  double downsample_ratio = 4.0;
  int nbr_size = 3;
  std::size_t knn_k = 27;  ///< matches nbr_size^3 of the voxel neighborhood
  std::uint64_t seed = 7;
  unsigned threads = 1;
};

struct BenchRow {
  BenchMethod method = BenchMethod::Intra;
  std::size_t n = 0;
  LatencyStats stats;
};

/// For each size: a uniform-cube cloud of n points; a voxel size giving the
/// configured downsampling ratio (found with the voxel adaptation loop, not
/// timed). intra = intra-voxel query on the cloud, fps = farthest point
/// sampling of n / ratio points, knn / inter = neighbor search on the
/// downsampled cloud. Throws InvalidArgument unless sizes are ascending.
std::vector<BenchRow> run_benchmark(const BenchConfig& config);

/// `method,n,median_ms,p10_ms,p90_ms`
std::string format_bench_csv(std::span<const BenchRow> rows);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace avs
