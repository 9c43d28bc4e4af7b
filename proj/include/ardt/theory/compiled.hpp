#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ardt/core/decision_tree.hpp"
#include "ardt/core/token_embedding.hpp"

namespace ardt::theory {

// d = ceil(log2 |D|) + 1 coordinates: coordinate 0 is 1 for every token and
// the remaining d-1 hold the token id in binary, most significant bit first.
// The zero vector is therefore never a token.
std::size_t boolean_dim(std::size_t token_count);
TokenEmbedding boolean_embedding(std::size_t token_count);

using JuntaFunction = std::function<TokenId(std::span<const TokenId>)>;

// Perfect binary tree of depth k*d over a 0/1-valued embedding. Level
// (j, l) tests "coordinate l of window position positions[j] >= 1" on every
// node of the level, so each leaf pins down the codes of the k positions.
// Leaves whose codes decode to tokens output f(tokens); leaves whose codes
// are not in the embedding output `unreachable`.
DecisionTree junta_to_tree(const JuntaFunction& f, std::span<const int> positions,
                           const TokenEmbedding& embedding, std::size_t window_length,
                           TokenId unreachable);

// Copies `subtree` into `nodes` and returns the index of its root there.
int append_subtree(std::vector<TreeNode>& nodes, const DecisionTree& subtree);

// A token dictionary, its Boolean embedding and the sliding-window tree built
// over it.
struct CompiledArdt {
  std::vector<std::string> token_names;
  TokenEmbedding embedding;
  SlidingWindowTree ardt;

  std::vector<TokenId> run(std::span<const TokenId> prompt, std::size_t steps) const {
    return run_ardt(ardt, embedding, prompt, steps);
  }
  const std::string& name(TokenId token) const { return token_names.at(token); }
};

}  // namespace ardt::theory
