#include <cmath>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ardt/core/regression.hpp"
#include "ardt/interpret/basis.hpp"
#include "ardt/interpret/inspect.hpp"
#include "ardt/interpret/kmeans.hpp"
#include "ardt/theory/automaton.hpp"
#include "ardt/theory/parity.hpp"
#include "doctest.h"
#include "text_oracles.hpp"

using namespace ardt;
using namespace ardt::interpret;

namespace {

Matrix gaussian(std::uint64_t seed, std::size_t rows, std::size_t cols, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, scale);
  Matrix m(rows, cols);
  for (auto& v : m.flat()) v = n(rng);
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("k-means separates well spaced blobs") {
  const std::vector<std::vector<double>> means{{0, 0, 0}, {10, 0, 0}, {0, 10, 0}, {0, 0, 10}};
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 0.5);
  Matrix pts(0, 3);
  std::vector<std::size_t> truth;
  for (std::size_t i = 0; i < 200; ++i) {
    const auto& m = means[i % 4];
    std::vector<double> p{m[0] + n(rng), m[1] + n(rng), m[2] + n(rng)};
    pts.append_row(p);
    truth.push_back(i % 4);
  }
  const auto r = kmeans(pts, KMeansParams{4, 100, 9});
  REQUIRE(r.labels.size() == 200);
  std::map<std::size_t, std::size_t> mapping;
  for (std::size_t i = 0; i < 200; ++i) {
    auto [it, fresh] = mapping.emplace(truth[i], r.labels[i]);
    CHECK(it->second == r.labels[i]);
  }
  std::set<std::size_t> used;
  for (auto [_, c] : mapping) used.insert(c);
  CHECK(used.size() == 4);
  for (std::size_t i = 1; i < r.inertia.size(); ++i) CHECK(r.inertia[i] <= r.inertia[i - 1] + 1e-9);
}

TEST_CASE("k-means inertia never increases and labels are nearest centers") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix pts = gaussian(seed, 150, 5);
    const auto r = kmeans(pts, KMeansParams{7, 50, seed});
    for (std::size_t i = 1; i < r.inertia.size(); ++i) CHECK(r.inertia[i] <= r.inertia[i - 1] + 1e-9);
    // After the final step every label points to one of the nearest centers.
    for (std::size_t i = 0; i < pts.rows(); ++i) {
      double best = 1e300;
      for (std::size_t c = 0; c < 7; ++c) {
        double d = 0;
        for (std::size_t j = 0; j < 5; ++j) d += std::pow(pts(i, j) - r.centers(c, j), 2);
        best = std::min(best, d);
      }
      double mine = 0;
      for (std::size_t j = 0; j < 5; ++j) mine += std::pow(pts(i, j) - r.centers(r.labels[i], j), 2);
      CHECK(mine <= best + 1e-9);
    }
  }
}

TEST_CASE("k-means rejects too few distinct points") {
  Matrix pts(6, 2, 1.0);
  pts(0, 0) = 2.0;
  CHECK(count_distinct_rows(pts) == 2);
  CHECK_THROWS_AS(kmeans(pts, KMeansParams{3, 10, 1}), InvalidArgument);
}

TEST_CASE("orthogonalize yields orthonormal rows with the same span") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t k = 1 + seed % 8, d = k + seed % 5;
    const Matrix c = gaussian(seed, k, d);
    const Matrix q = orthogonalize(c);
    REQUIRE(q.rows() == k);
    REQUIRE(q.cols() == d);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        CHECK(std::abs(dot(q.row(i), q.row(j)) - (i == j ? 1.0 : 0.0)) < 1e-10);
      }
    }
    // Each row of c lies in the span of q.
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<double> resid(c.row(i).begin(), c.row(i).end());
      for (std::size_t j = 0; j < k; ++j) {
        const double a = dot(c.row(i), q.row(j));
        for (std::size_t t = 0; t < d; ++t) resid[t] -= a * q(j, t);
      }
      CHECK(std::sqrt(dot(resid, resid)) < 1e-9);
    }
  }
}

TEST_CASE("rank deficient bases are rejected") {
  Matrix c = gaussian(3, 3, 5);
  for (std::size_t t = 0; t < 5; ++t) c(2, t) = c(0, t) - 2 * c(1, t);
  CHECK_THROWS_AS(orthogonalize(c), RankError);
  CHECK_THROWS_AS(Projection{c}, RankError);
  try {
    orthogonalize(c);
  } catch (const RankError& e) {
    CHECK(e.rank() == 2);
  }
  CHECK_THROWS_AS(orthogonalize(gaussian(1, 6, 4)), DimensionError);
}

TEST_CASE("projection maps basis words to unit vectors and is linear") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t k = 3 + seed % 5, d = k + 4;
    const Matrix b = gaussian(seed, k, d);
    const Projection phi(b);
    for (std::size_t i = 0; i < k; ++i) {
      const auto z = phi(b.row(i));
      for (std::size_t j = 0; j < k; ++j) CHECK(std::abs(z[j] - (i == j ? 1.0 : 0.0)) < 1e-9);
    }
    const Matrix v = gaussian(seed + 100, 2, d);
    const double a = 1.7, c = -0.4;
    std::vector<double> mix(d);
    for (std::size_t t = 0; t < d; ++t) mix[t] = a * v(0, t) + c * v(1, t);
    const auto z0 = phi(v.row(0)), z1 = phi(v.row(1)), zm = phi(mix);
    for (std::size_t j = 0; j < k; ++j) CHECK(std::abs(zm[j] - (a * z0[j] + c * z1[j])) < 1e-9);

    // Residual of the least-squares fit is orthogonal to every basis word.
    std::vector<double> resid(v.row(0).begin(), v.row(0).end());
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t t = 0; t < d; ++t) resid[t] -= z0[j] * b(j, t);
    }
    for (std::size_t j = 0; j < k; ++j) CHECK(std::abs(dot(resid, b.row(j))) < 1e-9);

    const Matrix all = phi.apply(v);
    for (std::size_t j = 0; j < k; ++j) CHECK(all(1, j) == doctest::Approx(z1[j]));
  }
}

TEST_CASE("cluster basis picks distinct non-reserved words") {
  const Matrix m = gaussian(8, 60, 10);
  const TokenEmbedding psi(m);
  const auto basis = build_cluster_basis(psi, KMeansParams{10, 50, 2}, 2);
  REQUIRE(basis.words.size() == 10);
  std::set<TokenId> seen(basis.words.begin(), basis.words.end());
  CHECK(seen.size() == 10);
  for (auto w : basis.words) CHECK(w >= 2);
  const auto proj = project_embeddings(psi, basis.words);
  CHECK(proj.dim() == 10);
  CHECK(proj.size() == psi.size());
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = 0; j < 10; ++j) {
      CHECK(std::abs(proj[basis.words[i]][j] - (i == j ? 1.0 : 0.0)) < 1e-6);
    }
  }
  const auto report = cluster_report(psi, basis, 3, 2);
  CHECK(report.size() == 10);
  for (const auto& s : report) CHECK(s.neighbours.size() == 3);
}

TEST_CASE("split gains add up to the tree's total error reduction") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Matrix x = gaussian(seed, 80, 4);
    Matrix y(80, 2);
    for (std::size_t r = 0; r < 80; ++r) {
      y(r, 0) = x(r, 0) > 0 ? 1.0 : -1.0;
      y(r, 1) = x(r, 2) * x(r, 3);
    }
    const auto tree = fit_regression_tree(x, y, TreeParams{4, 2});
    const auto imp = feature_importance(tree);
    double gain = 0;
    std::size_t splits = 0;
    for (std::size_t f = 0; f < 4; ++f) {
      gain += imp.total_gain[f];
      splits += imp.splits[f];
      if (imp.splits[f]) CHECK(imp.average_gain[f] == doctest::Approx(imp.total_gain[f] / imp.splits[f]));
    }
    CHECK(splits + 1 == tree.size());

    // Independent: SSE about the global mean minus SSE about leaf means.
    auto sse_about_means = [&](auto group_of) {
      std::map<int, std::vector<double>> sum;
      std::map<int, std::size_t> count;
      for (std::size_t r = 0; r < 80; ++r) {
        auto& s = sum[group_of(r)];
        s.resize(2);
        for (std::size_t c = 0; c < 2; ++c) s[c] += y(r, c);
        ++count[group_of(r)];
      }
      double total = 0;
      for (std::size_t r = 0; r < 80; ++r) {
        const int g = group_of(r);
        for (std::size_t c = 0; c < 2; ++c) total += std::pow(y(r, c) - sum[g][c] / count[g], 2);
      }
      return total;
    };
    const double root = sse_about_means([](std::size_t) { return 0; });
    const double leaves = sse_about_means([&](std::size_t r) { return tree.route(x.row(r)); });
    CHECK(gain == doctest::Approx(root - leaves).epsilon(1e-9));
  }
}

TEST_CASE("ensemble importance sums the per-tree importances") {
  const Matrix x = gaussian(5, 100, 3);
  Matrix y(100, 1);
  for (std::size_t r = 0; r < 100; ++r) y(r, 0) = std::sin(2 * x(r, 1));
  const auto model = fit_ensemble(x, y, BoostingParams{8, 0.3, {3, 1}, 1.0, 1});
  const auto imp = feature_importance(model);
  for (std::size_t f = 0; f < 3; ++f) {
    double g = 0;
    std::size_t s = 0;
    for (const auto& t : model.trees()) {
      const auto one = feature_importance(t);
      g += one.total_gain[f];
      s += one.splits[f];
    }
    CHECK(imp.total_gain[f] == doctest::Approx(g));
    CHECK(imp.splits[f] == s);
  }
  CHECK(imp.average_gain[1] > imp.average_gain[0]);
}

TEST_CASE("DOT export parses back into the same tree") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix x = gaussian(seed, 60, 3);
    Matrix y(60, 1);
    for (std::size_t r = 0; r < 60; ++r) y(r, 0) = x(r, 0) + x(r, 1) * x(r, 2);
    const auto tree = fit_regression_tree(x, y, TreeParams{3, 1});
    std::vector<std::string> leaves;
    for (std::size_t i = 0; i < tree.size(); ++i) leaves.push_back("w\"" + std::to_string(i));
    const std::string text = export_dot(tree, {"alpha", "beta", "gamma"}, leaves);
    auto p = oracle::parse_dot(text);
    CHECK(oracle::is_binary_tree(p));
    const auto& nodes = tree.nodes();
    REQUIRE(p.labels.size() == nodes.size());
    CHECK(p.edges.size() == 2 * (nodes.size() - tree.size()));
    std::map<int, int> parents;
    for (const auto& [from, to, kind] : p.edges) {
      ++parents[to];
      CHECK(to == (kind == "yes" ? nodes[from].right : nodes[from].left));
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      CHECK(parents[static_cast<int>(i)] == (i == 0 ? 0 : 1));
      if (nodes[i].is_leaf()) {
        CHECK(p.leaves.count(static_cast<int>(i)) == 1);
        CHECK(p.labels[static_cast<int>(i)] == "w\\\"" + std::to_string(nodes[i].leaf));
      } else {
        const std::vector<std::string> names{"alpha", "beta", "gamma"};
        CHECK(p.labels[static_cast<int>(i)].rfind(names[nodes[i].feature] + " ≥ ", 0) == 0);
      }
    }
  }
  CHECK_THROWS_AS(export_dot(fit_regression_tree(gaussian(1, 10, 2), gaussian(2, 10, 1), TreeParams{2, 1}),
                             {"only one"}, {}),
                  DimensionError);
}

TEST_CASE("DOT export of a token tree names every leaf") {
  const auto tree = theory::direct_parity_tree(3);
  const auto text = export_dot(tree, {"0", "1", "even", "odd"});
  auto p = oracle::parse_dot(text);
  CHECK(oracle::is_binary_tree(p));
  CHECK(p.leaves.size() == 8);
  for (int leaf : p.leaves) CHECK((p.labels[leaf] == "even" || p.labels[leaf] == "odd"));
}

TEST_CASE("k-means small cases") {
  const Matrix pts = gaussian(12, 5, 3);
  const auto r = kmeans(pts, KMeansParams{5, 20, 1});
  CHECK(r.inertia.back() == doctest::Approx(0.0));
  std::set<std::size_t> labels(r.labels.begin(), r.labels.end());
  CHECK(labels.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(r.centers(r.labels[i], j) == doctest::Approx(pts(i, j)));
  }

  Matrix blobs(0, 2);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 40; ++i) blobs.append_row(std::vector<double>{(i % 2 ? 20.0 : 0.0) + u(rng), u(rng)});
  const auto two = kmeans(blobs, KMeansParams{2, 50, 3});
  for (std::size_t c = 0; c < 2; ++c) {
    const double x = two.centers(c, 0);
    CHECK(((x > -1 && x < 1) || (x > 19 && x < 21)));
  }
  CHECK(std::min(two.centers(0, 0), two.centers(1, 0)) < 1.0);
  CHECK(std::max(two.centers(0, 0), two.centers(1, 0)) > 19.0);
}

TEST_CASE("orthogonalize edge cases") {
  Matrix eye(3, 5);
  for (std::size_t i = 0; i < 3; ++i) eye(i, i) = 1.0;
  const Matrix q = orthogonalize(eye);
  // Projector onto the span is unchanged: Q^T Q == I_3 block.
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t b = 0; b < 5; ++b) {
      double p = 0;
      for (std::size_t i = 0; i < 3; ++i) p += q(i, a) * q(i, b);
      CHECK(std::abs(p - (a == b && a < 3 ? 1.0 : 0.0)) < 1e-9);
    }
  }
  Matrix dup = gaussian(6, 4, 6);
  for (std::size_t t = 0; t < 6; ++t) dup(3, t) = dup(1, t);
  CHECK_THROWS_AS(orthogonalize(dup), RankError);

  // A target orthogonal to every basis word projects to zero.
  const Projection phi(eye);
  const auto z = phi(std::vector<double>{0, 0, 0, 2.5, -1});
  for (double v : z) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("importance edge cases") {
  Matrix x = gaussian(3, 50, 5);
  Matrix y(50, 1);
  for (std::size_t r = 0; r < 50; ++r) y(r, 0) = x(r, 3) > 0.2 ? 1.0 : 0.0;
  const auto stump = fit_regression_tree(x, y, TreeParams{1, 1});
  const auto imp = feature_importance(stump);
  for (std::size_t f = 0; f < 5; ++f) {
    CHECK(imp.average_gain[f] >= 0.0);
    if (f != 3) CHECK(imp.total_gain[f] == 0.0);
  }
  CHECK(imp.total_gain[3] > 0.0);

  const RegressionEnsemble empty({0.0}, 0.1, {}, 5);
  const auto none = feature_importance(empty);
  for (std::size_t f = 0; f < 5; ++f) CHECK(none.average_gain[f] == 0.0);
}

TEST_CASE("DOT export of tiny trees") {
  Matrix x(4, 1), y(4, 1, 1.0);
  x(1, 0) = 1;
  const auto leaf = fit_regression_tree(x, y, TreeParams{3, 1});
  auto one = oracle::parse_dot(export_dot(leaf, {"a"}, {"only"}));
  CHECK(one.labels.size() == 1);
  CHECK(one.edges.empty());
  y(1, 0) = 5;
  const auto stump = fit_regression_tree(x, y, TreeParams{1, 1});
  auto three = oracle::parse_dot(export_dot(stump, {"a"}, {"lo", "hi"}));
  CHECK(three.labels.size() == 3);
  CHECK(three.edges.size() == 2);
  CHECK(oracle::is_binary_tree(three));
}
