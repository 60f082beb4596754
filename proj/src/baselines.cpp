#include "avs/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "avs/error.hpp"

namespace avs {
namespace {

void require_single_frame(const PointBatch& batch, const char* what) {
  if (batch.batch_count() != 1) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " runs on a single frame");
  }
}

}  // namespace

FpsResult farthest_point_sample(const PointBatch& batch, std::size_t m, std::size_t seed_index) {
  require_single_frame(batch, "farthest point sampling");
  const std::size_t n = batch.count();
  if (m < 1 || m > n) throw Error(ErrorKind::MOutOfRange, "m=" + std::to_string(m) + " with N=" + std::to_string(n));
  if (seed_index >= n) throw Error(ErrorKind::InvalidArgument, "seed index out of range");

  // Structure-of-arrays copy so the inner update vectorizes.
  const Matrix& c = batch.coords();
  std::vector<double> xs(n), ys(n), zs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = c(static_cast<Eigen::Index>(i), 0);
    ys[i] = c(static_cast<Eigen::Index>(i), 1);
    zs[i] = c(static_cast<Eigen::Index>(i), 2);
  }
  std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
  std::vector<char> taken(n, 0);

  FpsResult out;
  out.selected_indices.reserve(m);
  out.selection_dists.reserve(m);
  std::size_t current = seed_index;
  double current_dist2 = std::numeric_limits<double>::infinity();
  for (std::size_t step = 0; step < m; ++step) {
    out.selected_indices.push_back(static_cast<std::int64_t>(current));
    out.selection_dists.push_back(std::sqrt(current_dist2));
    taken[current] = 1;
    const double px = xs[current], py = ys[current], pz = zs[current];
    double best = -1.0;
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = xs[i] - px, dy = ys[i] - py, dz = zs[i] - pz;
      const double d = std::min(dist2[i], dx * dx + dy * dy + dz * dz);
      dist2[i] = d;
      if (d > best) {
        best = d;
        best_index = i;
      }
    }
    if (best <= 0.0) {
      // Only duplicates of selected points remain: take the first unselected one.
      best_index = static_cast<std::size_t>(std::find(taken.begin(), taken.end(), 0) - taken.begin());
      best = 0.0;
    }
    current = best_index;
    current_dist2 = best;
  }
  out.min_dists.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.min_dists[i] = std::sqrt(dist2[i]);
  return out;
}

KnnResult knn_search(const PointBatch& queries, const PointBatch& references, std::size_t k, Parallelism par) {
  require_single_frame(queries, "knn");
  require_single_frame(references, "knn");
  const std::size_t nq = queries.count();
  const std::size_t nr = references.count();
  if (k < 1 || k > nr) throw Error(ErrorKind::KOutOfRange, "k=" + std::to_string(k) + " with " + std::to_string(nr) + " references");

  const Matrix& r = references.coords();
  std::vector<double> xs(nr), ys(nr), zs(nr);
  for (std::size_t i = 0; i < nr; ++i) {
    xs[i] = r(static_cast<Eigen::Index>(i), 0);
    ys[i] = r(static_cast<Eigen::Index>(i), 1);
    zs[i] = r(static_cast<Eigen::Index>(i), 2);
  }

  KnnResult out;
  out.k = k;
  out.indices.resize(nq * k);
  out.distances.resize(nq * k);
  parallel_chunks(nq, par, 64, [&](std::size_t, std::size_t begin, std::size_t end) {
    // Sorted insertion buffer of the best k (dist2, index) pairs so far.
    std::vector<std::pair<double, std::int64_t>> best(k);
    std::vector<double> d2(nr);
    for (std::size_t q = begin; q < end; ++q) {
      const Eigen::Vector3d p = queries.point(q);
      for (std::size_t i = 0; i < nr; ++i) {
        const double dx = xs[i] - p.x(), dy = ys[i] - p.y(), dz = zs[i] - p.z();
        d2[i] = dx * dx + dy * dy + dz * dz;
      }
      std::size_t filled = 0;
      for (std::size_t i = 0; i < nr; ++i) {
        const double d = d2[i];
        if (filled == k && !(d < best[k - 1].first)) continue;  // equal distance keeps the earlier index
        std::size_t pos = filled < k ? filled++ : k - 1;
        while (pos > 0 && best[pos - 1].first > d) {
          best[pos] = best[pos - 1];
          --pos;
        }
        best[pos] = {d, static_cast<std::int64_t>(i)};
      }
      for (std::size_t j = 0; j < k; ++j) {
        out.indices[q * k + j] = best[j].second;
        out.distances[q * k + j] = std::sqrt(best[j].first);
      }
    }
  });
  return out;
}

std::vector<std::int64_t> uniform_subsample(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m > n) throw Error(ErrorKind::MOutOfRange, "cannot draw more indices than points");
  std::vector<std::int64_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> picked;
  picked.reserve(m);
  std::sample(all.begin(), all.end(), std::back_inserter(picked), static_cast<std::ptrdiff_t>(m), rng);
  return picked;
}

}  // namespace avs
