#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ardt/core/regression.hpp"
#include "ardt/lm/embeddings.hpp"
#include "ardt/lm/pipeline.hpp"

namespace ardt::lm {

struct LmConfig {
  double alpha = 0.9;
  Word2VecParams embedding;
  DatasetParams dataset;
  BoostingParams boosting;
  // Share of documents held out for evaluation.
  double holdout_fraction = 0.1;
  // Train and decode in the k-dimensional cluster-basis coordinates.
  bool interpretable = false;
  std::size_t clusters = 20;
  std::vector<TokenId> basis_words;  // filled in by interpretable training

  void validate() const;
};

nlohmann::json to_json(const LmConfig& config);
// Fields missing from `doc` keep their values from `base`.
LmConfig lm_config_from_json(const nlohmann::json& doc, const LmConfig& base = {});

// A trained model: `embeddings` is the table the ensemble reads and writes
// (the cluster-basis projection when config.interpretable is set).
struct LmBundle {
  EmbeddingTable embeddings;
  RegressionEnsemble model;
  LmConfig config;

  std::vector<TokenId> encode(const std::string& text) const;
  std::vector<TokenId> generate(const std::string& prompt, std::size_t steps) const;
  std::string continue_text(const std::string& prompt, std::size_t steps) const;
};

// Directory holding vocab.txt, embeddings.txt, ensemble.json and config.json.
void save_bundle(const std::filesystem::path& dir, const LmBundle& bundle);
LmBundle load_bundle(const std::filesystem::path& dir);

struct LmReport {
  LmMetrics train;
  LmMetrics held_out;
  double baseline_accuracy = 0.0;  // most frequent training token on the held-out set
  std::vector<double> embedding_loss;
  std::vector<double> mse_history;
  std::size_t train_documents = 0;
  std::size_t held_out_documents = 0;
};

// Deterministic document split: every document whose index falls in the last
// holdout_fraction of a seeded shuffle is held out.
void split_documents(std::size_t count, double holdout_fraction, std::uint64_t seed,
                     std::vector<std::size_t>& train, std::vector<std::size_t>& held_out);

// Trains embeddings on the training documents unless `embeddings` is given,
// then the ensemble; evaluates on the held-out documents.
LmBundle train_lm(const std::vector<std::string>& documents, const LmConfig& config,
                  LmReport* report = nullptr,
                  const std::optional<EmbeddingTable>& embeddings = std::nullopt);

LmMetrics evaluate_bundle(const LmBundle& bundle, const std::vector<std::string>& documents);

}  // namespace ardt::lm
