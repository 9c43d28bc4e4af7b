#include "ardt/lm/model.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "ardt/core/model_io.hpp"
#include "ardt/interpret/basis.hpp"
#include "ardt/lm/context.hpp"
#include "ardt/lm/tokenizer.hpp"

namespace ardt::lm {

using nlohmann::json;

void LmConfig::validate() const {
  check_alpha(alpha);
  if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0)) {
    throw InvalidArgument("holdout_fraction must lie in [0, 1)");
  }
  if (boosting.rounds < 1) throw InvalidArgument("boosting needs at least one round");
  if (!(boosting.learning_rate > 0.0)) throw InvalidArgument("learning rate must be positive");
  if (boosting.tree.max_depth < 0) throw InvalidArgument("max_depth must be non-negative");
  if (boosting.tree.min_samples_leaf < 1) throw InvalidArgument("min_samples_leaf must be at least 1");
  if (!(boosting.feature_fraction > 0.0 && boosting.feature_fraction <= 1.0)) {
    throw InvalidArgument("feature_fraction must lie in (0, 1]");
  }
  if (embedding.dim == 0 || embedding.epochs == 0) {
    throw InvalidArgument("embedding dimension and epochs must be positive");
  }
  if (interpretable && clusters == 0) throw InvalidArgument("clusters must be positive");
}

json to_json(const LmConfig& c) {
  return json{
      {"alpha", c.alpha},
      {"d_emb", c.embedding.dim},
      {"word2vec",
       {{"window", c.embedding.window},
        {"negatives", c.embedding.negatives},
        {"epochs", c.embedding.epochs},
        {"learning_rate", c.embedding.learning_rate},
        {"min_count", c.embedding.min_count},
        {"seed", c.embedding.seed}}},
      {"dataset",
       {{"min_context", c.dataset.min_context},
        {"max_context", c.dataset.max_context},
        {"stride", c.dataset.stride},
        {"max_samples", c.dataset.max_samples},
        {"seed", c.dataset.seed}}},
      {"ensemble",
       {{"rounds", c.boosting.rounds},
        {"learning_rate", c.boosting.learning_rate},
        {"max_depth", c.boosting.tree.max_depth},
        {"min_samples_leaf", c.boosting.tree.min_samples_leaf},
        {"feature_fraction", c.boosting.feature_fraction},
        {"seed", c.boosting.seed}}},
      {"holdout_fraction", c.holdout_fraction},
      {"interpretable", c.interpretable},
      {"clusters", c.clusters},
      {"basis_words", c.basis_words},
  };
}

namespace {

template <typename T>
void read(const json& doc, const char* key, T& target) {
  if (!doc.contains(key)) return;
  try {
    target = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("config field '") + key + "': " + e.what());
  }
}

const json& section(const json& doc, const char* key) {
  static const json empty = json::object();
  if (!doc.contains(key)) return empty;
  if (!doc.at(key).is_object()) throw ParseError(std::string("config section '") + key + "' must be an object");
  return doc.at(key);
}

}  // namespace

LmConfig lm_config_from_json(const json& doc, const LmConfig& base) {
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  LmConfig c = base;
  read(doc, "alpha", c.alpha);
  read(doc, "d_emb", c.embedding.dim);
  const json& w = section(doc, "word2vec");
  read(w, "window", c.embedding.window);
  read(w, "negatives", c.embedding.negatives);
  read(w, "epochs", c.embedding.epochs);
  read(w, "learning_rate", c.embedding.learning_rate);
  read(w, "min_count", c.embedding.min_count);
  read(w, "seed", c.embedding.seed);
  const json& d = section(doc, "dataset");
  read(d, "min_context", c.dataset.min_context);
  read(d, "max_context", c.dataset.max_context);
  read(d, "stride", c.dataset.stride);
  read(d, "max_samples", c.dataset.max_samples);
  read(d, "seed", c.dataset.seed);
  const json& e = section(doc, "ensemble");
  read(e, "rounds", c.boosting.rounds);
  read(e, "learning_rate", c.boosting.learning_rate);
  read(e, "max_depth", c.boosting.tree.max_depth);
  read(e, "min_samples_leaf", c.boosting.tree.min_samples_leaf);
  read(e, "feature_fraction", c.boosting.feature_fraction);
  read(e, "seed", c.boosting.seed);
  read(doc, "holdout_fraction", c.holdout_fraction);
  read(doc, "interpretable", c.interpretable);
  read(doc, "clusters", c.clusters);
  read(doc, "basis_words", c.basis_words);
  c.validate();
  return c;
}

std::vector<TokenId> LmBundle::encode(const std::string& text) const {
  const auto words = tokenize(text);
  return embeddings.vocabulary.encode(words);
}

std::vector<TokenId> LmBundle::generate(const std::string& prompt, std::size_t steps) const {
  const auto ids = encode(prompt);
  return lm::generate(model, embeddings.vectors, ids, steps, config.alpha);
}

std::string LmBundle::continue_text(const std::string& prompt, std::size_t steps) const {
  const auto ids = generate(prompt, steps);
  const auto words = embeddings.vocabulary.decode(ids);
  return detokenize(words);
}

void save_bundle(const std::filesystem::path& dir, const LmBundle& bundle) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  bundle.embeddings.vocabulary.save(dir / "vocab.txt");
  save_embeddings(dir / "embeddings.txt", bundle.embeddings);
  save_json(dir / "ensemble.json", to_json(bundle.model));
  save_json(dir / "config.json", to_json(bundle.config));
}

LmBundle load_bundle(const std::filesystem::path& dir) {
  Vocabulary vocab = Vocabulary::load(dir / "vocab.txt");
  EmbeddingTable table = load_embeddings(dir / "embeddings.txt");
  if (table.vocabulary.size() != vocab.size()) {
    throw ParseError("vocab.txt and embeddings.txt list different numbers of words");
  }
  for (std::size_t t = 0; t < vocab.size(); ++t) {
    if (table.vocabulary.word(static_cast<TokenId>(t)) != vocab.word(static_cast<TokenId>(t))) {
      throw ParseError("vocab.txt and embeddings.txt disagree at id " + std::to_string(t));
    }
  }
  table.vocabulary = std::move(vocab);
  RegressionEnsemble model = ensemble_from_json(load_json(dir / "ensemble.json"));
  LmConfig config = lm_config_from_json(load_json(dir / "config.json"));
  if (model.input_dim() != table.dim() || model.output_dim() != table.dim()) {
    throw ParseError("ensemble dimensions do not match the embedding table");
  }
  return LmBundle{std::move(table), std::move(model), std::move(config)};
}

void split_documents(std::size_t count, double holdout_fraction, std::uint64_t seed,
                     std::vector<std::size_t>& train, std::vector<std::size_t>& held_out) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto hold = static_cast<std::size_t>(holdout_fraction * static_cast<double>(count));
  held_out.assign(order.end() - static_cast<std::ptrdiff_t>(hold), order.end());
  train.assign(order.begin(), order.end() - static_cast<std::ptrdiff_t>(hold));
  std::sort(train.begin(), train.end());
  std::sort(held_out.begin(), held_out.end());
}

namespace {

std::vector<std::vector<TokenId>> encode_all(const Vocabulary& vocab,
                                             const std::vector<std::vector<std::string>>& docs,
                                             const std::vector<std::size_t>& pick) {
  std::vector<std::vector<TokenId>> out;
  out.reserve(pick.size());
  for (std::size_t i : pick) out.push_back(vocab.encode(docs[i]));
  return out;
}

}  // namespace

LmBundle train_lm(const std::vector<std::string>& documents, const LmConfig& config_in,
                  LmReport* report, const std::optional<EmbeddingTable>& embeddings) {
  LmConfig config = config_in;
  config.validate();
  const auto tokenized = tokenize_documents(documents);
  std::vector<std::size_t> train_idx, held_idx;
  split_documents(tokenized.size(), config.holdout_fraction, config.dataset.seed, train_idx, held_idx);
  if (train_idx.empty()) throw InvalidArgument("no training documents");

  LmReport local;
  LmReport& rep = report ? *report : local;
  rep.train_documents = train_idx.size();
  rep.held_out_documents = held_idx.size();

  EmbeddingTable table;
  if (embeddings) {
    table = *embeddings;
    table.validate();
  } else {
    std::vector<std::vector<std::string>> train_docs;
    for (std::size_t i : train_idx) train_docs.push_back(tokenized[i]);
    auto trained = train_embeddings(train_docs, config.embedding);
    table = std::move(trained.table);
    rep.embedding_loss = std::move(trained.epoch_loss);
  }
  config.embedding.dim = table.dim();

  const auto train_docs = encode_all(table.vocabulary, tokenized, train_idx);
  const auto held_docs = encode_all(table.vocabulary, tokenized, held_idx);
  // Most frequent ordinary token of the training split, for the baseline.
  std::vector<std::size_t> counts(table.vocabulary.size(), 0);
  for (const auto& doc : train_docs) {
    for (TokenId t : doc) ++counts[t];
  }
  const auto top = std::max_element(counts.begin() + Vocabulary::kReserved, counts.end());
  if (top == counts.end()) throw InvalidArgument("vocabulary has no ordinary words");
  const auto baseline_token = static_cast<TokenId>(top - counts.begin());

  if (config.interpretable) {
    interpret::KMeansParams km;
    km.k = config.clusters;
    km.seed = config.boosting.seed;
    auto basis = interpret::build_cluster_basis(table.vectors, km, Vocabulary::kReserved);
    config.basis_words = basis.words;
    table.vectors = interpret::project_embeddings(table.vectors, basis.words);
  }

  Dataset train = build_dataset(train_docs, table.vectors, config.alpha, config.dataset);
  if (train.targets.empty()) throw InvalidArgument("training documents yield no samples");
  RegressionEnsemble model = fit_ensemble(train.x, train.y, config.boosting, &rep.mse_history);

  rep.train = evaluate_lm(model, table.vectors, train);
  DatasetParams held_params = config.dataset;
  held_params.max_samples = 0;
  Dataset held = build_dataset(held_docs, table.vectors, config.alpha, held_params);
  rep.held_out = evaluate_lm(model, table.vectors, held);
  rep.baseline_accuracy = constant_baseline_accuracy(held, baseline_token);

  return LmBundle{std::move(table), std::move(model), std::move(config)};
}

LmMetrics evaluate_bundle(const LmBundle& bundle, const std::vector<std::string>& documents) {
  std::vector<std::vector<TokenId>> docs;
  for (const auto& d : documents) docs.push_back(bundle.encode(d));
  DatasetParams params = bundle.config.dataset;
  params.max_samples = 0;
  Dataset data = build_dataset(docs, bundle.embeddings.vectors, bundle.config.alpha, params);
  return evaluate_lm(bundle.model, bundle.embeddings.vectors, data);
}

}  // namespace ardt::lm
