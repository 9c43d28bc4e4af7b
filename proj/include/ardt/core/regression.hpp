#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ardt/core/matrix.hpp"

namespace ardt {

// Internal nodes send x to the right child iff x[feature] >= threshold, the
// same convention as DecisionTree. `gain` is the reduction in summed squared
// error (over all outputs) achieved by the split on the training rows that
// reached the node; `samples` is that row count.
struct RegressionNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int leaf = -1;  // row of the leaf-value matrix
  double gain = 0.0;
  std::size_t samples = 0;

  bool is_leaf() const noexcept { return left < 0; }
};

class RegressionTree {
 public:
  RegressionTree(std::size_t input_dim, std::vector<RegressionNode> nodes, Matrix leaf_values);

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t output_dim() const noexcept { return leaf_values_.cols(); }
  const std::vector<RegressionNode>& nodes() const noexcept { return nodes_; }
  const Matrix& leaf_values() const noexcept { return leaf_values_; }

  std::size_t size() const noexcept { return leaf_values_.rows(); }
  std::size_t depth() const noexcept { return depth_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  int route(std::span<const double> x) const;
  std::span<const double> predict(std::span<const double> x) const;

 private:
  std::size_t input_dim_;
  std::vector<RegressionNode> nodes_;
  Matrix leaf_values_;
  std::size_t depth_ = 0;
};

struct TreeParams {
  int max_depth = 6;
  std::size_t min_samples_leaf = 1;
};

// Greedy CART with vector-valued leaves. Each split maximises the decrease in
// squared error summed over all output coordinates; candidate thresholds are
// midpoints between consecutive distinct feature values; ties go to the lowest
// feature index, then the lowest threshold. Leaves hold the target mean.
RegressionTree fit_regression_tree(const Matrix& x, const Matrix& y, const TreeParams& params);

// Same, restricted to the listed feature columns (sorted ascending).
RegressionTree fit_regression_tree(const Matrix& x, const Matrix& y, const TreeParams& params,
                                   std::span<const int> features);

// Minimum gain a split must exceed relative to the node's total squared target
// energy. Gains below it are rounding noise.
inline constexpr double kRelativeSplitTolerance = 1e-12;

struct BoostingParams {
  int rounds = 50;
  double learning_rate = 0.3;
  TreeParams tree;
  // Fraction of input features offered to each tree, drawn with `seed`.
  double feature_fraction = 1.0;
  std::uint64_t seed = 20240521;
};

// prediction(x) = base + learning_rate * sum_t tree_t(x)
class RegressionEnsemble {
 public:
  RegressionEnsemble(std::vector<double> base, double learning_rate,
                     std::vector<RegressionTree> trees, std::size_t input_dim);

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t output_dim() const noexcept { return base_.size(); }
  const std::vector<double>& base() const noexcept { return base_; }
  double learning_rate() const noexcept { return learning_rate_; }
  const std::vector<RegressionTree>& trees() const noexcept { return trees_; }

  // Total tree nodes across the ensemble; reported as the parameter count.
  std::size_t node_count() const noexcept;

  std::vector<double> predict(std::span<const double> x) const;
  void predict(std::span<const double> x, std::span<double> out) const;

 private:
  std::vector<double> base_;
  double learning_rate_;
  std::vector<RegressionTree> trees_;
  std::size_t input_dim_;
};

// Squared-loss gradient boosting. When `mse_history` is given it receives the
// training MSE after the base prediction and after every round.
RegressionEnsemble fit_ensemble(const Matrix& x, const Matrix& y, const BoostingParams& params,
                                std::vector<double>* mse_history = nullptr);

// Mean over rows and output coordinates of the squared residual.
double mean_squared_error(const RegressionEnsemble& model, const Matrix& x, const Matrix& y);

}  // namespace ardt
