#pragma once

#include <cstdint>
#include <vector>

#include "ardt/core/matrix.hpp"

namespace ardt::interpret {

struct KMeansParams {
  std::size_t k = 20;
  std::size_t iterations = 100;
  std::uint64_t seed = 20240521;
};

struct KMeansResult {
  Matrix centers;                  // k x d
  std::vector<std::size_t> labels;  // cluster of each point
  // Inertia of each assignment step, in order; non-increasing.
  std::vector<double> inertia;
};

// Lloyd iterations from a k-means++ start, stopping early once assignments
// stop changing. A cluster that loses all its points keeps its old center.
// Throws InvalidArgument when there are fewer than k distinct points.
KMeansResult kmeans(const Matrix& points, const KMeansParams& params);

std::size_t count_distinct_rows(const Matrix& points);

}  // namespace ardt::interpret
