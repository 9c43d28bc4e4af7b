#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ardt/core/matrix.hpp"
#include "ardt/core/token_embedding.hpp"

namespace ardt {

// A node of a token-output tree. Internal nodes test window[position][coord]
// against `threshold` and go right iff the value is >= threshold.
struct TreeNode {
  int position = -1;
  int coord = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  TokenId token = -1;

  bool is_leaf() const noexcept { return left < 0; }
  static TreeNode leaf(TokenId t) { return TreeNode{.token = t}; }
  static TreeNode split(int position, int coord, double threshold) {
    return TreeNode{.position = position, .coord = coord, .threshold = threshold};
  }
};

// Binary decision tree over an L x d window of embedded tokens that outputs a
// token. The root is node 0. Immutable after construction.
class DecisionTree {
 public:
  DecisionTree(std::size_t window_length, std::size_t dim, std::vector<TreeNode> nodes);

  static DecisionTree constant(std::size_t window_length, std::size_t dim, TokenId token);

  std::size_t window_length() const noexcept { return window_length_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }

  // Number of leaves.
  std::size_t size() const noexcept { return leaves_; }
  // Longest root-to-leaf path, counted in edges.
  std::size_t depth() const noexcept { return depth_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  // `window` is L x d, row-major when passed flat.
  TokenId evaluate(const Matrix& window) const;
  TokenId evaluate(std::span<const double> window) const;
  // Index of the leaf reached.
  int route(std::span<const double> window) const;

  // Copy of this tree with the subtree rooted at `node` replaced by a leaf.
  DecisionTree with_leaf(int node, TokenId token) const;

  bool operator==(const DecisionTree&) const;

 private:
  std::size_t window_length_;
  std::size_t dim_;
  std::vector<TreeNode> nodes_;
  std::size_t leaves_ = 0;
  std::size_t depth_ = 0;
};

// A fixed-window tree extended to sequences of any length: shorter sequences
// are left-padded with `pad`, longer ones are cut to their last L tokens.
struct SlidingWindowTree {
  DecisionTree tree;
  TokenId pad;

  // Embedded L x d window for `sequence`, flattened row-major.
  std::vector<double> window(std::span<const TokenId> sequence,
                             const TokenEmbedding& embedding) const;
  TokenId next(std::span<const TokenId> sequence, const TokenEmbedding& embedding) const;
};

// Autoregressive run: appends each predicted token to the input and returns
// the `steps` generated tokens. Element T-1 is the output at iteration T.
std::vector<TokenId> run_ardt(const SlidingWindowTree& ardt, const TokenEmbedding& embedding,
                              std::span<const TokenId> prompt, std::size_t steps);

}  // namespace ardt
