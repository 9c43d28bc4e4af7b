#pragma once

#include <string>
#include <vector>

#include "ardt/core/decision_tree.hpp"
#include "ardt/core/regression.hpp"

namespace ardt::interpret {

struct FeatureImportance {
  std::vector<double> average_gain;  // total_gain / splits, 0 for unused features
  std::vector<double> total_gain;
  std::vector<std::size_t> splits;
};

FeatureImportance feature_importance(const RegressionEnsemble& model);
FeatureImportance feature_importance(const RegressionTree& tree);

// Graphviz digraph. Internal nodes read "<feature label> ≥ <threshold>" with
// "yes" edges to the right child and "no" edges to the left; leaf i is
// labelled leaf_labels[i] (its row in the leaf-value matrix).
std::string export_dot(const RegressionTree& tree, const std::vector<std::string>& feature_labels,
                       const std::vector<std::string>& leaf_labels);

// Same for a token tree; features are "position:coord", leaves token names.
std::string export_dot(const DecisionTree& tree, const std::vector<std::string>& token_names);

}  // namespace ardt::interpret
