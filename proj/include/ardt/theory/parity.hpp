#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ardt/core/decision_tree.hpp"

namespace ardt::theory {

// Direct (non-autoregressive) parity trees read n raw bits: window length n,
// one coordinate per position holding 0 or 1.
inline constexpr TokenId kBitZero = 0;
inline constexpr TokenId kBitOne = 1;
inline constexpr TokenId kEven = 2;
inline constexpr TokenId kOdd = 3;

int parity(std::span<const int> bits);

// Perfect depth-n tree over the raw bits; exactly 2^n leaves.
DecisionTree direct_parity_tree(std::size_t n);

std::vector<double> bit_window(std::span<const int> bits);

using BitPair = std::pair<std::vector<int>, std::vector<int>>;

// Searches for a reachable leaf whose path leaves some bit unconstrained and
// returns an input pair differing only in that bit; both reach the same leaf
// while their parities differ. Empty only when every reachable leaf fixes all
// n bits.
std::optional<BitPair> parity_counterexample(const DecisionTree& tree, std::size_t n);

// Replaces a uniformly chosen internal node's subtree with a leaf.
DecisionTree collapse_random_subtree(const DecisionTree& tree, std::uint64_t seed);

}  // namespace ardt::theory
