#include "ardt/theory/parity.hpp"

#include <random>

#include "ardt/theory/compiled.hpp"

namespace ardt::theory {

int parity(std::span<const int> bits) {
  int p = 0;
  for (int b : bits) p ^= (b & 1);
  return p;
}

DecisionTree direct_parity_tree(std::size_t n) {
  if (n == 0) throw InvalidArgument("parity needs at least one bit");
  Matrix raw(2, 1);
  raw(kBitOne, 0) = 1.0;
  std::vector<int> positions(n);
  for (std::size_t i = 0; i < n; ++i) positions[i] = static_cast<int>(i);
  auto f = [](std::span<const TokenId> bits) {
    int p = 0;
    for (TokenId b : bits) p ^= (b == kBitOne);
    return p ? kOdd : kEven;
  };
  return junta_to_tree(f, positions, TokenEmbedding(std::move(raw)), n, kEven);
}

std::vector<double> bit_window(std::span<const int> bits) {
  return std::vector<double>(bits.begin(), bits.end());
}

std::optional<BitPair> parity_counterexample(const DecisionTree& tree, std::size_t n) {
  if (tree.window_length() != n || tree.dim() != 1) {
    throw DimensionError("parity adversary needs a tree over " + std::to_string(n) +
                         " raw bits (window " + std::to_string(n) + "x1)");
  }
  const auto& nodes = tree.nodes();
  std::vector<int> fixed(n, -1);

  auto search = [&](auto&& self, int index) -> std::optional<BitPair> {
    const TreeNode& node = nodes[index];
    if (node.is_leaf()) {
      for (std::size_t j = 0; j < n; ++j) {
        if (fixed[j] != -1) continue;
        std::vector<int> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = fixed[i] == 1 ? 1 : 0;
        std::vector<int> flipped = x;
        flipped[j] ^= 1;
        return BitPair{std::move(x), std::move(flipped)};
      }
      return std::nullopt;
    }
    const auto bit = static_cast<std::size_t>(node.position);
    const bool zero_right = 0.0 >= node.threshold;
    const bool one_right = 1.0 >= node.threshold;
    if (fixed[bit] != -1) {
      const bool right = fixed[bit] == 1 ? one_right : zero_right;
      return self(self, right ? node.right : node.left);
    }
    if (zero_right == one_right) {
      // The test cannot tell 0 from 1, so it does not constrain the bit.
      return self(self, zero_right ? node.right : node.left);
    }
    for (int value : {0, 1}) {
      fixed[bit] = value;
      const bool right = value == 1 ? one_right : zero_right;
      auto found = self(self, right ? node.right : node.left);
      fixed[bit] = -1;
      if (found) return found;
    }
    return std::nullopt;
  };
  return search(search, 0);
}

DecisionTree collapse_random_subtree(const DecisionTree& tree, std::uint64_t seed) {
  std::vector<int> internal;
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    if (!tree.nodes()[i].is_leaf()) internal.push_back(static_cast<int>(i));
  }
  if (internal.empty()) return tree;
  std::mt19937_64 rng(seed);
  const int node = internal[std::uniform_int_distribution<std::size_t>(0, internal.size() - 1)(rng)];
  const TokenId token = std::bernoulli_distribution(0.5)(rng) ? kOdd : kEven;
  return tree.with_leaf(node, token);
}

}  // namespace ardt::theory
