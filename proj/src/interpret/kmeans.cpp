#include "ardt/interpret/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

namespace ardt::interpret {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

std::size_t count_distinct_rows(const Matrix& points) {
  std::vector<std::vector<double>> rows;
  rows.reserve(points.rows());
  for (std::size_t r = 0; r < points.rows(); ++r) {
    auto row = points.row(r);
    rows.emplace_back(row.begin(), row.end());
  }
  std::sort(rows.begin(), rows.end());
  return static_cast<std::size_t>(std::unique(rows.begin(), rows.end()) - rows.begin());
}

KMeansResult kmeans(const Matrix& points, const KMeansParams& params) {
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  const std::size_t k = params.k;
  if (k == 0) throw InvalidArgument("k must be positive");
  const std::size_t distinct = count_distinct_rows(points);
  if (k > distinct) {
    throw InvalidArgument("k = " + std::to_string(k) + " exceeds the " + std::to_string(distinct) +
                          " distinct points");
  }

  std::mt19937_64 rng(params.seed);
  KMeansResult result{Matrix(k, d), std::vector<std::size_t>(n, 0), {}};
  Matrix& centers = result.centers;

  // k-means++ seeding.
  std::vector<double> closest(n, std::numeric_limits<double>::infinity());
  std::size_t pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  for (std::size_t c = 0; c < k; ++c) {
    if (c > 0) {
      std::discrete_distribution<std::size_t> by_distance(closest.begin(), closest.end());
      pick = by_distance(rng);
    }
    std::copy_n(points.row(pick).begin(), d, centers.row(c).begin());
    for (std::size_t i = 0; i < n; ++i) {
      closest[i] = std::min(closest[i], squared_distance(points.row(i), centers.row(c)));
    }
  }

  std::vector<std::size_t>& labels = result.labels;
  for (std::size_t iter = 0; iter < std::max<std::size_t>(params.iterations, 1); ++iter) {
    bool changed = iter == 0;
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double dist = squared_distance(points.row(i), centers.row(c));
        if (dist < best_d) {
          best_d = dist;
          best = c;
        }
      }
      if (labels[i] != best) changed = true;
      labels[i] = best;
      inertia += best_d;
    }
    result.inertia.push_back(inertia);
    if (!changed) break;

    Matrix sums(k, d);
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++sizes[labels[i]];
      auto s = sums.row(labels[i]);
      auto p = points.row(i);
      for (std::size_t j = 0; j < d; ++j) s[j] += p[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) centers(c, j) = sums(c, j) / static_cast<double>(sizes[c]);
    }
  }
  return result;
}

}  // namespace ardt::interpret
