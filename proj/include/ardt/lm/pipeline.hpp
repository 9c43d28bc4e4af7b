#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ardt/core/matrix.hpp"
#include "ardt/core/regression.hpp"
#include "ardt/core/token_embedding.hpp"

namespace ardt::lm {

struct DatasetParams {
  std::size_t min_context = 1;
  std::size_t max_context = 32;
  std::size_t stride = 1;
  // Uniform subsample of this many rows when non-zero.
  std::size_t max_samples = 0;
  std::uint64_t seed = 20240521;
};

struct Dataset {
  Matrix x;                      // aggregated contexts (incremental decay)
  Matrix y;                      // embedding of the next token
  std::vector<TokenId> targets;  // the next token itself
};

// For every document and every position p = min_context, min_context+stride,
// ..., n-1, the context is the l tokens before p with l drawn uniformly from
// [min_context, min(max_context, p)], and the target is token p. Documents are
// processed in order.
Dataset build_dataset(std::span<const std::vector<TokenId>> documents, const TokenEmbedding& psi,
                      double alpha, const DatasetParams& params);

// Id of the embedding row closest to `u` in Euclidean distance, scanning ids
// from `first` upwards; the lowest id wins ties.
TokenId nearest_token(const TokenEmbedding& psi, std::span<const double> u, TokenId first = 0);

// Generation decodes over ordinary words only, skipping PAD and UNK.
inline constexpr TokenId kFirstDecodable = 2;

// Emits exactly `steps` tokens after `prompt`, one nearest-neighbour decode of
// the ensemble's prediction per step.
std::vector<TokenId> generate(const RegressionEnsemble& model, const TokenEmbedding& psi,
                              std::span<const TokenId> prompt, std::size_t steps, double alpha);

struct LmMetrics {
  double accuracy = 0.0;  // top-1 nearest-neighbour accuracy
  double mse = 0.0;       // mean squared embedding error per coordinate
  std::size_t samples = 0;
};

LmMetrics evaluate_lm(const RegressionEnsemble& model, const TokenEmbedding& psi,
                      const Dataset& held_out);

// Accuracy of always predicting `token`.
double constant_baseline_accuracy(const Dataset& held_out, TokenId token);

}  // namespace ardt::lm
