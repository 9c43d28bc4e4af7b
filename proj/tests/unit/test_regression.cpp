#include <cmath>
#include <random>
#include <vector>

#include "ardt/core/model_io.hpp"
#include "ardt/core/regression.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ardt;

namespace {

struct Problem {
  Matrix x;
  Matrix y;
};

Problem random_problem(std::uint64_t seed, std::size_t rows, std::size_t features,
                       std::size_t outputs, bool discrete = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> small(0, 3);
  Problem p{Matrix(rows, features), Matrix(rows, outputs)};
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t f = 0; f < features; ++f) p.x(r, f) = discrete ? small(rng) : u(rng);
    for (std::size_t o = 0; o < outputs; ++o) {
      p.y(r, o) = std::sin(3 * p.x(r, 0) + o) + 0.5 * p.x(r, features - 1) + 0.1 * u(rng);
    }
  }
  return p;
}

double tree_mse(const RegressionTree& tree, const Matrix& x, const Matrix& y) {
  double total = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto pred = tree.predict(x.row(r));
    for (std::size_t c = 0; c < y.cols(); ++c) total += (pred[c] - y(r, c)) * (pred[c] - y(r, c));
  }
  return total / static_cast<double>(x.rows() * y.cols());
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

}  // namespace

TEST_CASE("a stump finds the exhaustive best split") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Problem p = random_problem(seed, 32, 4, 2, seed % 2 == 0);
    RegressionTree tree = fit_regression_tree(p.x, p.y, TreeParams{1, 1});
    auto split = oracle::best_split(p.x, p.y, all_rows(32), 1);
    REQUIRE(split.has_value());
    const auto& root = tree.nodes()[0];
    REQUIRE_FALSE(root.is_leaf());
    CHECK(root.feature == split->feature);
    CHECK(root.threshold > split->low);
    CHECK(root.threshold <= split->high);
    CHECK(tree_mse(tree, p.x, p.y) == doctest::Approx(split->sse / 64.0).epsilon(1e-12));
    CHECK(root.gain == doctest::Approx(oracle::sse(p.y, all_rows(32)) - split->sse).epsilon(1e-9));
    CHECK(root.samples == 32);
  }
}

TEST_CASE("deeper trees match the greedy oracle") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    for (int depth : {2, 4}) {
      for (std::size_t min_leaf : {1, 3}) {
        Problem p = random_problem(seed, 32, 3, 1, seed % 3 == 0);
        RegressionTree tree = fit_regression_tree(p.x, p.y, TreeParams{depth, min_leaf});
        const double expected = oracle::greedy_tree_sse(p.x, p.y, all_rows(32), depth, min_leaf) / 32;
        CHECK(std::abs(tree_mse(tree, p.x, p.y) - expected) <= 1e-9);
        CHECK(tree.depth() <= static_cast<std::size_t>(depth));
      }
    }
  }
}

TEST_CASE("ties prefer the lowest feature and then the lowest threshold") {
  // Features 0 and 1 are identical; the target steps at both 1|2 and 3|4 with
  // the same gain.
  Matrix x(4, 2);
  Matrix y(4, 1);
  const double xs[] = {1, 2, 3, 4};
  const double ys[] = {0, 1, 1, 0};
  for (int i = 0; i < 4; ++i) {
    x(i, 0) = x(i, 1) = xs[i];
    y(i, 0) = ys[i];
  }
  RegressionTree tree = fit_regression_tree(x, y, TreeParams{1, 1});
  CHECK(tree.nodes()[0].feature == 0);
  CHECK(tree.nodes()[0].threshold == doctest::Approx(1.5));
}

TEST_CASE("constant targets and identical features give a single leaf") {
  Matrix x(5, 2, 1.0);
  Matrix y(5, 1);
  for (int i = 0; i < 5; ++i) y(i, 0) = i;
  CHECK(fit_regression_tree(x, y, TreeParams{}).size() == 1);
  Problem p = random_problem(5, 10, 2, 1);
  Matrix flat(10, 1, 2.5);
  RegressionTree t = fit_regression_tree(p.x, flat, TreeParams{});
  CHECK(t.size() == 1);
  CHECK(t.predict(p.x.row(0))[0] == 2.5);
}

TEST_CASE("min_samples_leaf is honoured") {
  Problem p = random_problem(9, 40, 3, 1);
  RegressionTree tree = fit_regression_tree(p.x, p.y, TreeParams{8, 5});
  for (const auto& node : tree.nodes()) {
    if (node.is_leaf()) CHECK(node.samples >= 5);
  }
}

TEST_CASE("fit rejects mismatched shapes") {
  CHECK_THROWS_AS(fit_regression_tree(Matrix(3, 2), Matrix(4, 1), TreeParams{}), DimensionError);
  CHECK_THROWS(fit_regression_tree(Matrix(0, 2), Matrix(0, 1), TreeParams{}));
}

TEST_CASE("boosting never increases the training error") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Problem p = random_problem(seed, 80, 5, 3);
    BoostingParams params;
    params.rounds = 25;
    params.learning_rate = 0.1 + 0.08 * static_cast<double>(seed);
    params.tree.max_depth = 1 + static_cast<int>(seed % 4);
    params.feature_fraction = seed % 2 ? 0.6 : 1.0;
    params.seed = seed;
    std::vector<double> history;
    RegressionEnsemble model = fit_ensemble(p.x, p.y, params, &history);
    REQUIRE(history.size() == 26);
    for (std::size_t i = 1; i < history.size(); ++i) CHECK(history[i] <= history[i - 1]);
    CHECK(mean_squared_error(model, p.x, p.y) == doctest::Approx(history.back()));
    CHECK(history.back() < history.front());
  }
}

TEST_CASE("boosting is deterministic under a seed") {
  Problem p = random_problem(3, 50, 6, 2);
  BoostingParams params;
  params.rounds = 10;
  params.feature_fraction = 0.5;
  RegressionEnsemble a = fit_ensemble(p.x, p.y, params);
  RegressionEnsemble b = fit_ensemble(p.x, p.y, params);
  CHECK(to_json(a) == to_json(b));
  params.rounds = 0;
  CHECK_THROWS_AS(fit_ensemble(p.x, p.y, params), InvalidArgument);
}

TEST_CASE("base prediction is the target mean") {
  Problem p = random_problem(4, 20, 2, 2);
  BoostingParams params;
  params.rounds = 1;
  RegressionEnsemble model = fit_ensemble(p.x, p.y, params);
  for (std::size_t c = 0; c < 2; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < 20; ++r) mean += p.y(r, c);
    CHECK(model.base()[c] == doctest::Approx(mean / 20));
  }
}
