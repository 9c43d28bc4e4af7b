#include "ardt/core/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace ardt {

RegressionTree::RegressionTree(std::size_t input_dim, std::vector<RegressionNode> nodes,
                               Matrix leaf_values)
    : input_dim_(input_dim), nodes_(std::move(nodes)), leaf_values_(std::move(leaf_values)) {
  if (nodes_.empty()) throw InvalidArgument("regression tree has no nodes");
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
  std::size_t leaves = 0;
  while (!stack.empty()) {
    auto [index, level] = stack.back();
    stack.pop_back();
    if (index < 0 || static_cast<std::size_t>(index) >= nodes_.size() || seen[index]) {
      throw InvalidArgument("malformed regression tree at node " + std::to_string(index));
    }
    seen[index] = 1;
    const RegressionNode& node = nodes_[index];
    if (node.is_leaf()) {
      if (node.leaf < 0 || static_cast<std::size_t>(node.leaf) >= leaf_values_.rows()) {
        throw InvalidArgument("leaf refers to missing value row " + std::to_string(node.leaf));
      }
      ++leaves;
      depth_ = std::max(depth_, level);
      continue;
    }
    if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= input_dim_) {
      throw DimensionError("split feature " + std::to_string(node.feature) + " outside input of " +
                           std::to_string(input_dim_));
    }
    stack.emplace_back(node.right, level + 1);
    stack.emplace_back(node.left, level + 1);
  }
  if (leaves != leaf_values_.rows() || std::count(seen.begin(), seen.end(), 0) != 0) {
    throw InvalidArgument("regression tree leaves and value rows disagree");
  }
}

int RegressionTree::route(std::span<const double> x) const {
  if (x.size() != input_dim_) {
    throw DimensionError("input has " + std::to_string(x.size()) + " features, tree expects " +
                         std::to_string(input_dim_));
  }
  int index = 0;
  while (!nodes_[index].is_leaf()) {
    const RegressionNode& node = nodes_[index];
    index = x[node.feature] >= node.threshold ? node.right : node.left;
  }
  return index;
}

std::span<const double> RegressionTree::predict(std::span<const double> x) const {
  return leaf_values_.row(static_cast<std::size_t>(nodes_[route(x)].leaf));
}

namespace {

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

double midpoint(double a, double b) {
  double mid = a + (b - a) * 0.5;
  if (!(mid > a) || mid > b) mid = b;
  return mid;
}

// Presorted-column CART grower. For every offered feature, `sorted_[f]` holds
// row ids; a node owns the same contiguous range in each of them, sorted by
// that feature's value.
class Grower {
 public:
  Grower(const Matrix& x, const Matrix& y, const TreeParams& params, std::span<const int> features)
      : x_(x), y_(y), params_(params), features_(features.begin(), features.end()) {
    const std::size_t n = x_.rows();
    sorted_.resize(features_.size());
    for (std::size_t k = 0; k < features_.size(); ++k) {
      const int f = features_[k];
      auto& order = sorted_[k];
      order.resize(n);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return x_(a, f) < x_(b, f); });
    }
    if (features_.empty()) {
      all_rows_.resize(n);
      std::iota(all_rows_.begin(), all_rows_.end(), 0);
    }
    goes_right_.assign(n, 0);
    buffer_.resize(n);
    sum_.resize(y_.cols());
    left_sum_.resize(y_.cols());
  }

  RegressionTree grow() {
    build(0, x_.rows(), 0);
    Matrix leaves(leaf_rows_.size() / std::max<std::size_t>(1, y_.cols()), y_.cols());
    std::copy(leaf_rows_.begin(), leaf_rows_.end(), leaves.flat().begin());
    return RegressionTree(x_.cols(), std::move(nodes_), std::move(leaves));
  }

 private:
  std::span<const int> rows(std::size_t begin, std::size_t end) const {
    const auto& base = sorted_.empty() ? all_rows_ : sorted_[0];
    return {base.data() + begin, end - begin};
  }

  int build(std::size_t begin, std::size_t end, int depth) {
    const std::size_t n = end - begin;
    const std::size_t dout = y_.cols();
    std::fill(sum_.begin(), sum_.end(), 0.0);
    double energy = 0.0;
    for (int r : rows(begin, end)) {
      const double* yr = y_.row(r).data();
      for (std::size_t c = 0; c < dout; ++c) {
        sum_[c] += yr[c];
        energy += yr[c] * yr[c];
      }
    }
    const int slot = static_cast<int>(nodes_.size());
    nodes_.push_back(RegressionNode{.samples = n});

    SplitChoice best;
    if (depth < params_.max_depth && n >= 2 * std::max<std::size_t>(1, params_.min_samples_leaf)) {
      best = find_split(begin, end, energy);
    }
    if (best.feature < 0) {
      nodes_[slot].leaf = static_cast<int>(leaf_rows_.size() / std::max<std::size_t>(1, dout));
      for (std::size_t c = 0; c < dout; ++c) leaf_rows_.push_back(sum_[c] / static_cast<double>(n));
      return slot;
    }

    const std::size_t left_count = partition(begin, end, best);
    nodes_[slot].feature = best.feature;
    nodes_[slot].threshold = best.threshold;
    nodes_[slot].gain = best.gain;
    const int left = build(begin, begin + left_count, depth + 1);
    const int right = build(begin + left_count, end, depth + 1);
    nodes_[slot].left = left;
    nodes_[slot].right = right;
    return slot;
  }

  SplitChoice find_split(std::size_t begin, std::size_t end, double energy) {
    const std::size_t n = end - begin;
    const std::size_t dout = y_.cols();
    const std::size_t min_leaf = std::max<std::size_t>(1, params_.min_samples_leaf);
    double parent_score = 0.0;
    for (std::size_t c = 0; c < dout; ++c) parent_score += sum_[c] * sum_[c];
    parent_score /= static_cast<double>(n);

    SplitChoice best;
    best.gain = kRelativeSplitTolerance * energy;
    for (std::size_t k = 0; k < features_.size(); ++k) {
      const int f = features_[k];
      const int* order = sorted_[k].data() + begin;
      std::fill(left_sum_.begin(), left_sum_.end(), 0.0);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const double* yr = y_.row(order[i]).data();
        for (std::size_t c = 0; c < dout; ++c) left_sum_[c] += yr[c];
        const std::size_t nl = i + 1;
        if (nl < min_leaf) continue;
        if (n - nl < min_leaf) break;
        const double a = x_(order[i], f);
        const double b = x_(order[i + 1], f);
        if (!(b > a)) continue;
        double left_sq = 0.0;
        double right_sq = 0.0;
        for (std::size_t c = 0; c < dout; ++c) {
          const double l = left_sum_[c];
          const double r = sum_[c] - l;
          left_sq += l * l;
          right_sq += r * r;
        }
        const double gain = left_sq / static_cast<double>(nl) +
                            right_sq / static_cast<double>(n - nl) - parent_score;
        if (gain > best.gain) {
          best.feature = f;
          best.threshold = midpoint(a, b);
          best.gain = gain;
        }
      }
    }
    return best;
  }

  std::size_t partition(std::size_t begin, std::size_t end, const SplitChoice& split) {
    std::size_t left_count = 0;
    for (int r : rows(begin, end)) {
      goes_right_[r] = x_(r, split.feature) >= split.threshold ? 1 : 0;
      if (!goes_right_[r]) ++left_count;
    }
    for (auto& order : sorted_) {
      auto first = order.begin() + static_cast<std::ptrdiff_t>(begin);
      auto last = order.begin() + static_cast<std::ptrdiff_t>(end);
      auto out_left = first;
      auto out_right = buffer_.begin();
      for (auto it = first; it != last; ++it) {
        if (goes_right_[*it]) {
          *out_right++ = *it;
        } else {
          *out_left++ = *it;
        }
      }
      std::copy(buffer_.begin(), out_right, out_left);
    }
    return left_count;
  }

  const Matrix& x_;
  const Matrix& y_;
  TreeParams params_;
  std::vector<int> features_;
  std::vector<std::vector<int>> sorted_;
  std::vector<int> all_rows_;
  std::vector<char> goes_right_;
  std::vector<int> buffer_;
  std::vector<double> sum_;
  std::vector<double> left_sum_;
  std::vector<RegressionNode> nodes_;
  std::vector<double> leaf_rows_;
};

void check_training_shapes(const Matrix& x, const Matrix& y) {
  if (x.rows() == 0) throw InvalidArgument("cannot fit a tree on empty data");
  if (x.rows() != y.rows()) {
    throw DimensionError(std::to_string(x.rows()) + " inputs but " + std::to_string(y.rows()) +
                         " targets");
  }
  if (x.cols() == 0 || y.cols() == 0) throw DimensionError("zero-width inputs or targets");
}

}  // namespace

RegressionTree fit_regression_tree(const Matrix& x, const Matrix& y, const TreeParams& params,
                                   std::span<const int> features) {
  check_training_shapes(x, y);
  if (params.max_depth < 0) throw InvalidArgument("max_depth must be >= 0");
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i] < 0 || static_cast<std::size_t>(features[i]) >= x.cols() ||
        (i > 0 && features[i] <= features[i - 1])) {
      throw InvalidArgument("feature subset must be sorted, unique and in range");
    }
  }
  return Grower(x, y, params, features).grow();
}

RegressionTree fit_regression_tree(const Matrix& x, const Matrix& y, const TreeParams& params) {
  std::vector<int> all(x.cols());
  std::iota(all.begin(), all.end(), 0);
  return fit_regression_tree(x, y, params, all);
}

RegressionEnsemble::RegressionEnsemble(std::vector<double> base, double learning_rate,
                                       std::vector<RegressionTree> trees, std::size_t input_dim)
    : base_(std::move(base)),
      learning_rate_(learning_rate),
      trees_(std::move(trees)),
      input_dim_(input_dim) {
  if (base_.empty()) throw DimensionError("ensemble base prediction is empty");
  if (!(learning_rate_ > 0.0 && learning_rate_ <= 1.0)) {
    throw InvalidArgument("learning rate must lie in (0, 1]");
  }
  for (const auto& tree : trees_) {
    if (tree.output_dim() != base_.size() || tree.input_dim() != input_dim_) {
      throw DimensionError("tree shape does not match ensemble");
    }
  }
}

std::size_t RegressionEnsemble::node_count() const noexcept {
  std::size_t total = 0;
  for (const auto& tree : trees_) total += tree.node_count();
  return total;
}

void RegressionEnsemble::predict(std::span<const double> x, std::span<double> out) const {
  if (out.size() != base_.size()) throw DimensionError("prediction buffer has wrong size");
  if (x.size() != input_dim_) {
    throw DimensionError("input has " + std::to_string(x.size()) + " features, model expects " +
                         std::to_string(input_dim_));
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& tree : trees_) {
    const auto leaf = tree.predict(x);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += leaf[c];
  }
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = base_[c] + learning_rate_ * out[c];
}

std::vector<double> RegressionEnsemble::predict(std::span<const double> x) const {
  std::vector<double> out(base_.size());
  predict(x, out);
  return out;
}

namespace {

double residual_mse(const Matrix& residual) {
  double total = 0.0;
  for (double r : residual.flat()) total += r * r;
  return total / static_cast<double>(residual.flat().size());
}

}  // namespace

RegressionEnsemble fit_ensemble(const Matrix& x, const Matrix& y, const BoostingParams& params,
                                std::vector<double>* mse_history) {
  check_training_shapes(x, y);
  if (params.rounds < 1) throw InvalidArgument("boosting needs at least one round");
  if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0)) {
    throw InvalidArgument("learning rate must lie in (0, 1]");
  }
  if (!(params.feature_fraction > 0.0 && params.feature_fraction <= 1.0)) {
    throw InvalidArgument("feature fraction must lie in (0, 1]");
  }
  const std::size_t n = x.rows();
  const std::size_t dout = y.cols();

  std::vector<double> base(dout, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < dout; ++c) base[c] += y(r, c);
  }
  for (double& b : base) b /= static_cast<double>(n);

  Matrix residual = y;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < dout; ++c) residual(r, c) -= base[c];
  }
  if (mse_history) {
    mse_history->clear();
    mse_history->push_back(residual_mse(residual));
  }

  std::mt19937_64 rng(params.seed);
  std::vector<int> all(x.cols());
  std::iota(all.begin(), all.end(), 0);
  const auto offered = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(params.feature_fraction * x.cols())));

  std::vector<RegressionTree> trees;
  trees.reserve(params.rounds);
  for (int round = 0; round < params.rounds; ++round) {
    std::vector<int> features = all;
    if (offered < features.size()) {
      std::shuffle(features.begin(), features.end(), rng);
      features.resize(offered);
      std::sort(features.begin(), features.end());
    }
    RegressionTree tree = fit_regression_tree(x, residual, params.tree, features);
    for (std::size_t r = 0; r < n; ++r) {
      const auto leaf = tree.predict(x.row(r));
      auto res = residual.row(r);
      for (std::size_t c = 0; c < dout; ++c) res[c] -= params.learning_rate * leaf[c];
    }
    if (mse_history) mse_history->push_back(residual_mse(residual));
    trees.push_back(std::move(tree));
  }
  return RegressionEnsemble(std::move(base), params.learning_rate, std::move(trees), x.cols());
}

double mean_squared_error(const RegressionEnsemble& model, const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || y.cols() != model.output_dim()) {
    throw DimensionError("evaluation data does not match the model");
  }
  if (x.rows() == 0) throw InvalidArgument("cannot evaluate on empty data");
  std::vector<double> out(model.output_dim());
  double total = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    model.predict(x.row(r), out);
    for (std::size_t c = 0; c < out.size(); ++c) {
      const double e = out[c] - y(r, c);
      total += e * e;
    }
  }
  return total / static_cast<double>(x.rows() * y.cols());
}

}  // namespace ardt
