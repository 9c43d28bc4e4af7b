#pragma once

#include <span>
#include <vector>

#include "ardt/core/token_embedding.hpp"

namespace ardt::lm {

// Two readings of the decayed context average. kClosedForm weights token i of
// n by alpha^(n-i+1); kIncremental weights it by alpha^(n-i), which is what
// repeated update() calls from the zero vector produce. They differ by one
// factor of alpha. Dataset construction and generation use kIncremental.
enum class DecayConvention { kClosedForm, kIncremental };

// Throws InvalidArgument unless 0 < alpha < 1.
void check_alpha(double alpha);

// Decayed sum of the context's embeddings; the zero vector for an empty
// context.
std::vector<double> aggregate(std::span<const TokenId> context, const TokenEmbedding& psi,
                              double alpha, DecayConvention convention = DecayConvention::kClosedForm);

// v <- alpha * v + psi(token)
void update(std::span<double> v, TokenId token, const TokenEmbedding& psi, double alpha);

}  // namespace ardt::lm
