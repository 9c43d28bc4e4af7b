#include "ardt/interpret/inspect.hpp"

#include <sstream>

namespace ardt::interpret {

namespace {

void add_tree(FeatureImportance& out, const RegressionTree& tree) {
  for (const auto& node : tree.nodes()) {
    if (node.is_leaf()) continue;
    out.total_gain[node.feature] += node.gain;
    ++out.splits[node.feature];
  }
}

void finish(FeatureImportance& out) {
  for (std::size_t f = 0; f < out.splits.size(); ++f) {
    out.average_gain[f] = out.splits[f] ? out.total_gain[f] / static_cast<double>(out.splits[f]) : 0.0;
  }
}

FeatureImportance empty(std::size_t features) {
  return FeatureImportance{std::vector<double>(features, 0.0), std::vector<double>(features, 0.0),
                           std::vector<std::size_t>(features, 0)};
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out + "\"";
}

std::string number(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

template <typename Tree, typename SplitLabel, typename LeafLabel>
std::string dot(const Tree& tree, SplitLabel split_label, LeafLabel leaf_label) {
  std::ostringstream out;
  out << "digraph tree {\n  node [shape=box];\n";
  const auto& nodes = tree.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.is_leaf()) {
      out << "  n" << i << " [label=" << quote(leaf_label(n)) << ", shape=ellipse];\n";
    } else {
      out << "  n" << i << " [label=" << quote(split_label(n)) << "];\n";
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.is_leaf()) continue;
    out << "  n" << i << " -> n" << n.right << " [label=\"yes\"];\n";
    out << "  n" << i << " -> n" << n.left << " [label=\"no\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace

FeatureImportance feature_importance(const RegressionEnsemble& model) {
  FeatureImportance out = empty(model.input_dim());
  for (const auto& tree : model.trees()) add_tree(out, tree);
  finish(out);
  return out;
}

FeatureImportance feature_importance(const RegressionTree& tree) {
  FeatureImportance out = empty(tree.input_dim());
  add_tree(out, tree);
  finish(out);
  return out;
}

std::string export_dot(const RegressionTree& tree, const std::vector<std::string>& feature_labels,
                       const std::vector<std::string>& leaf_labels) {
  if (feature_labels.size() != tree.input_dim()) {
    throw DimensionError("need one label per input feature");
  }
  if (leaf_labels.size() != tree.size()) throw DimensionError("need one label per leaf");
  return dot(
      tree,
      [&](const RegressionNode& n) { return feature_labels[n.feature] + " ≥ " + number(n.threshold); },
      [&](const RegressionNode& n) { return leaf_labels[n.leaf]; });
}

std::string export_dot(const DecisionTree& tree, const std::vector<std::string>& token_names) {
  return dot(
      tree,
      [](const TreeNode& n) {
        return "x[" + std::to_string(n.position) + "][" + std::to_string(n.coord) + "] ≥ " +
               number(n.threshold);
      },
      [&](const TreeNode& n) {
        return n.token >= 0 && static_cast<std::size_t>(n.token) < token_names.size()
                   ? token_names[n.token]
                   : std::to_string(n.token);
      });
}

}  // namespace ardt::interpret
