#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ardt/core/token_embedding.hpp"
#include "ardt/lm/vocabulary.hpp"

namespace ardt::lm {

// Vocabulary plus one vector per id. PAD embeds as the zero vector.
struct EmbeddingTable {
  Vocabulary vocabulary;
  TokenEmbedding vectors;

  std::size_t dim() const noexcept { return vectors.dim(); }
  // Finite entries, one row per word, non-zero rows except PAD.
  void validate() const;
};

// Text format: one "word v1 ... vd" line per entry, no header. Values are
// written with enough digits to read back bit-identically.
void save_embeddings(const std::filesystem::path& path, const EmbeddingTable& table);

// Reads the text format. Words not yet present are appended after PAD and
// UNK; lines for <pad> / <unk> fill the reserved rows. Without a <unk> line,
// UNK gets the mean of the loaded vectors. Counts are left at zero.
EmbeddingTable load_embeddings(const std::filesystem::path& path);

struct Word2VecParams {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  std::size_t min_count = 1;
  std::uint64_t seed = 20240521;
};

// Vocabularies smaller than this many ordinary words are rejected.
inline constexpr std::size_t kMinTrainableWords = 2;

struct Word2VecResult {
  EmbeddingTable table;
  // Mean negative-sampling loss per positive pair, one entry per epoch.
  std::vector<double> epoch_loss;
};

// Skip-gram with negative sampling on tokenized documents. Negatives are drawn
// from the unigram distribution raised to 0.75; the learning rate decays
// linearly to 1e-4 of its start. Single-threaded and deterministic for a seed.
Word2VecResult train_embeddings(std::span<const std::vector<std::string>> documents,
                                const Word2VecParams& params);

// Cosine similarity of two rows.
double cosine(const TokenEmbedding& e, TokenId a, TokenId b);

}  // namespace ardt::lm
