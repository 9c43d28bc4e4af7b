#include "ardt/core/decision_tree.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace ardt {

namespace {

struct Shape {
  std::size_t leaves = 0;
  std::size_t depth = 0;
};

// Iterative walk from the root. Every node must be visited exactly once for
// the node list to describe a tree.
Shape check_structure(const std::vector<TreeNode>& nodes, std::size_t window_length,
                      std::size_t dim) {
  if (nodes.empty()) throw InvalidArgument("decision tree has no nodes");
  std::vector<char> seen(nodes.size(), 0);
  std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
  Shape shape;
  while (!stack.empty()) {
    auto [index, level] = stack.back();
    stack.pop_back();
    if (index < 0 || static_cast<std::size_t>(index) >= nodes.size()) {
      throw InvalidArgument("child index " + std::to_string(index) + " out of range");
    }
    if (seen[index]) throw InvalidArgument("node " + std::to_string(index) + " has two parents");
    seen[index] = 1;
    const TreeNode& node = nodes[index];
    if (node.is_leaf()) {
      if (node.right >= 0) throw InvalidArgument("leaf with a right child");
      if (node.token < 0) throw InvalidArgument("leaf without a valid token");
      ++shape.leaves;
      shape.depth = std::max(shape.depth, level);
      continue;
    }
    if (node.right < 0) throw InvalidArgument("internal node with one child");
    if (node.position < 0 || static_cast<std::size_t>(node.position) >= window_length ||
        node.coord < 0 || static_cast<std::size_t>(node.coord) >= dim) {
      throw DimensionError("split feature (" + std::to_string(node.position) + "," +
                           std::to_string(node.coord) + ") outside " +
                           std::to_string(window_length) + "x" + std::to_string(dim) + " window");
    }
    stack.emplace_back(node.right, level + 1);
    stack.emplace_back(node.left, level + 1);
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw InvalidArgument("decision tree has unreachable nodes");
  }
  return shape;
}

}  // namespace

DecisionTree::DecisionTree(std::size_t window_length, std::size_t dim,
                           std::vector<TreeNode> nodes)
    : window_length_(window_length), dim_(dim), nodes_(std::move(nodes)) {
  if (window_length_ == 0 || dim_ == 0) {
    throw InvalidArgument("window length and embedding dimension must be positive");
  }
  const Shape shape = check_structure(nodes_, window_length_, dim_);
  leaves_ = shape.leaves;
  depth_ = shape.depth;
}

DecisionTree DecisionTree::constant(std::size_t window_length, std::size_t dim, TokenId token) {
  return DecisionTree(window_length, dim, {TreeNode::leaf(token)});
}

int DecisionTree::route(std::span<const double> window) const {
  if (window.size() != window_length_ * dim_) {
    throw DimensionError("window has " + std::to_string(window.size()) + " values, tree expects " +
                         std::to_string(window_length_) + "x" + std::to_string(dim_));
  }
  int index = 0;
  while (!nodes_[index].is_leaf()) {
    const TreeNode& node = nodes_[index];
    const double value = window[static_cast<std::size_t>(node.position) * dim_ + node.coord];
    index = value >= node.threshold ? node.right : node.left;
  }
  return index;
}

TokenId DecisionTree::evaluate(std::span<const double> window) const {
  return nodes_[route(window)].token;
}

TokenId DecisionTree::evaluate(const Matrix& window) const {
  if (window.rows() != window_length_ || window.cols() != dim_) {
    throw DimensionError("window is " + std::to_string(window.rows()) + "x" +
                         std::to_string(window.cols()) + ", tree expects " +
                         std::to_string(window_length_) + "x" + std::to_string(dim_));
  }
  return evaluate(window.flat());
}

DecisionTree DecisionTree::with_leaf(int node, TokenId token) const {
  if (node < 0 || static_cast<std::size_t>(node) >= nodes_.size()) {
    throw InvalidArgument("node " + std::to_string(node) + " out of range");
  }
  // Rebuild in preorder, skipping the collapsed subtree.
  std::vector<TreeNode> out;
  out.reserve(nodes_.size());
  auto copy = [&](auto&& self, int index) -> int {
    const int slot = static_cast<int>(out.size());
    if (index == node) {
      out.push_back(TreeNode::leaf(token));
      return slot;
    }
    out.push_back(nodes_[index]);
    if (!nodes_[index].is_leaf()) {
      const int left = self(self, nodes_[index].left);
      const int right = self(self, nodes_[index].right);
      out[slot].left = left;
      out[slot].right = right;
    }
    return slot;
  };
  copy(copy, 0);
  return DecisionTree(window_length_, dim_, std::move(out));
}

bool DecisionTree::operator==(const DecisionTree& other) const {
  if (window_length_ != other.window_length_ || dim_ != other.dim_ ||
      nodes_.size() != other.nodes_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& a = nodes_[i];
    const TreeNode& b = other.nodes_[i];
    if (a.position != b.position || a.coord != b.coord || a.threshold != b.threshold ||
        a.left != b.left || a.right != b.right || a.token != b.token) {
      return false;
    }
  }
  return true;
}

std::vector<double> SlidingWindowTree::window(std::span<const TokenId> sequence,
                                              const TokenEmbedding& embedding) const {
  const std::size_t length = tree.window_length();
  const std::size_t dim = tree.dim();
  if (embedding.dim() != dim) {
    throw DimensionError("embedding dimension " + std::to_string(embedding.dim()) +
                         " does not match tree dimension " + std::to_string(dim));
  }
  std::vector<double> out(length * dim);
  const std::size_t used = std::min(length, sequence.size());
  const std::size_t padding = length - used;
  const auto tail = sequence.subspan(sequence.size() - used);
  const auto pad_row = embedding[pad];
  for (std::size_t i = 0; i < length; ++i) {
    const auto row = i < padding ? pad_row : embedding[tail[i - padding]];
    std::copy(row.begin(), row.end(), out.begin() + static_cast<std::ptrdiff_t>(i * dim));
  }
  return out;
}

TokenId SlidingWindowTree::next(std::span<const TokenId> sequence,
                                const TokenEmbedding& embedding) const {
  return tree.evaluate(window(sequence, embedding));
}

std::vector<TokenId> run_ardt(const SlidingWindowTree& ardt, const TokenEmbedding& embedding,
                              std::span<const TokenId> prompt, std::size_t steps) {
  if (steps == 0) throw InvalidArgument("run_ardt needs at least one step");
  for (TokenId t : prompt) {
    if (!embedding.contains(t)) {
      throw InvalidArgument("prompt token " + std::to_string(t) + " not in vocabulary");
    }
  }
  std::vector<TokenId> sequence(prompt.begin(), prompt.end());
  sequence.reserve(prompt.size() + steps);
  for (std::size_t i = 0; i < steps; ++i) {
    sequence.push_back(ardt.next(sequence, embedding));
  }
  return {sequence.end() - static_cast<std::ptrdiff_t>(steps), sequence.end()};
}

}  // namespace ardt
