#include "ardt/theory/compiled.hpp"

#include <bit>
#include <string>

namespace ardt::theory {

std::size_t boolean_dim(std::size_t token_count) {
  if (token_count == 0) throw InvalidArgument("token dictionary is empty");
  return static_cast<std::size_t>(std::bit_width(token_count - 1)) + 1;
}

TokenEmbedding boolean_embedding(std::size_t token_count) {
  const std::size_t d = boolean_dim(token_count);
  Matrix table(token_count, d);
  for (std::size_t t = 0; t < token_count; ++t) {
    table(t, 0) = 1.0;
    for (std::size_t l = 1; l < d; ++l) {
      table(t, l) = static_cast<double>((t >> (d - 1 - l)) & 1u);
    }
  }
  return TokenEmbedding(std::move(table));
}

namespace {

constexpr std::size_t kMaxJuntaDepth = 26;

// code -> token, -1 where no token has that code.
std::vector<TokenId> decode_table(const TokenEmbedding& embedding) {
  const std::size_t d = embedding.dim();
  if (d > 24) throw InvalidArgument("Boolean embedding too wide for junta compilation");
  std::vector<TokenId> table(std::size_t{1} << d, -1);
  for (std::size_t t = 0; t < embedding.size(); ++t) {
    std::size_t code = 0;
    for (double v : embedding[static_cast<TokenId>(t)]) {
      if (v != 0.0 && v != 1.0) throw InvalidArgument("embedding is not 0/1 valued");
      code = code * 2 + (v == 1.0 ? 1 : 0);
    }
    if (table[code] != -1) {
      throw InvalidArgument("embedding is not one-to-one: tokens " + std::to_string(table[code]) +
                            " and " + std::to_string(t) + " collide");
    }
    table[code] = static_cast<TokenId>(t);
  }
  return table;
}

}  // namespace

DecisionTree junta_to_tree(const JuntaFunction& f, std::span<const int> positions,
                           const TokenEmbedding& embedding, std::size_t window_length,
                           TokenId unreachable) {
  const std::size_t k = positions.size();
  const std::size_t d = embedding.dim();
  for (std::size_t j = 0; j < k; ++j) {
    if (positions[j] < 0 || static_cast<std::size_t>(positions[j]) >= window_length) {
      throw InvalidArgument("junta position " + std::to_string(positions[j]) +
                            " outside window of length " + std::to_string(window_length));
    }
    for (std::size_t i = 0; i < j; ++i) {
      if (positions[i] == positions[j]) throw InvalidArgument("junta positions must be distinct");
    }
  }
  const std::size_t depth = k * d;
  if (depth > kMaxJuntaDepth) {
    throw InvalidArgument("junta tree of depth " + std::to_string(depth) + " is too large");
  }
  const std::vector<TokenId> decode = decode_table(embedding);

  std::vector<TreeNode> nodes;
  nodes.reserve((std::size_t{2} << depth) - 1);
  std::vector<std::size_t> codes(k, 0);
  std::vector<TokenId> args(k);

  auto build = [&](auto&& self, std::size_t level) -> int {
    const int slot = static_cast<int>(nodes.size());
    if (level == depth) {
      TokenId out = unreachable;
      bool valid = true;
      for (std::size_t j = 0; j < k && valid; ++j) {
        args[j] = decode[codes[j]];
        valid = args[j] >= 0;
      }
      if (valid) out = f(args);
      nodes.push_back(TreeNode::leaf(out));
      return slot;
    }
    const std::size_t j = level / d;
    const std::size_t l = level % d;
    nodes.push_back(TreeNode::split(positions[j], static_cast<int>(l), 1.0));
    codes[j] <<= 1;
    const int left = self(self, level + 1);
    codes[j] |= 1u;
    const int right = self(self, level + 1);
    codes[j] >>= 1;
    nodes[slot].left = left;
    nodes[slot].right = right;
    return slot;
  };
  build(build, 0);
  return DecisionTree(window_length, d, std::move(nodes));
}

int append_subtree(std::vector<TreeNode>& nodes, const DecisionTree& subtree) {
  const int offset = static_cast<int>(nodes.size());
  for (TreeNode node : subtree.nodes()) {
    if (!node.is_leaf()) {
      node.left += offset;
      node.right += offset;
    }
    nodes.push_back(node);
  }
  return offset;
}

}  // namespace ardt::theory
