#include "ardt/tasks/classifier.hpp"

#include "ardt/core/model_io.hpp"
#include "ardt/lm/context.hpp"
#include "ardt/lm/tokenizer.hpp"

namespace ardt::tasks {

using nlohmann::json;

json to_json(const ClassifierParams& p) {
  return json{{"alpha", p.alpha},
              {"d_emb", p.embedding.dim},
              {"word2vec",
               {{"window", p.embedding.window},
                {"negatives", p.embedding.negatives},
                {"epochs", p.embedding.epochs},
                {"learning_rate", p.embedding.learning_rate},
                {"seed", p.embedding.seed}}},
              {"ensemble",
               {{"rounds", p.boosting.rounds},
                {"learning_rate", p.boosting.learning_rate},
                {"max_depth", p.boosting.tree.max_depth},
                {"min_samples_leaf", p.boosting.tree.min_samples_leaf},
                {"feature_fraction", p.boosting.feature_fraction},
                {"seed", p.boosting.seed}}}};
}

namespace {

template <typename T>
void read(const json& doc, const char* key, T& target) {
  if (!doc.is_object() || !doc.contains(key)) return;
  try {
    target = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("classifier field '") + key + "': " + e.what());
  }
}

}  // namespace

ClassifierParams classifier_params_from_json(const json& doc, const ClassifierParams& base) {
  ClassifierParams p = base;
  read(doc, "alpha", p.alpha);
  read(doc, "d_emb", p.embedding.dim);
  if (doc.contains("word2vec")) {
    const json& w = doc.at("word2vec");
    read(w, "window", p.embedding.window);
    read(w, "negatives", p.embedding.negatives);
    read(w, "epochs", p.embedding.epochs);
    read(w, "learning_rate", p.embedding.learning_rate);
    read(w, "seed", p.embedding.seed);
  }
  if (doc.contains("ensemble")) {
    const json& e = doc.at("ensemble");
    read(e, "rounds", p.boosting.rounds);
    read(e, "learning_rate", p.boosting.learning_rate);
    read(e, "max_depth", p.boosting.tree.max_depth);
    read(e, "min_samples_leaf", p.boosting.tree.min_samples_leaf);
    read(e, "feature_fraction", p.boosting.feature_fraction);
    read(e, "seed", p.boosting.seed);
  }
  lm::check_alpha(p.alpha);
  return p;
}

namespace {

std::string answer_word(const std::string& label) { return lm::tokenize(label).at(0); }

}  // namespace

std::vector<double> TaskClassifier::features(const std::string& prompt) const {
  const auto words = lm::tokenize(prompt);
  const auto ids = embeddings.vocabulary.encode(words);
  return lm::aggregate(ids, embeddings.vectors, params.alpha, lm::DecayConvention::kIncremental);
}

std::string TaskClassifier::predict(const std::string& prompt) const {
  const auto u = model.predict(features(prompt));
  const auto [yes, no] = answers(task);
  auto distance = [&](const std::string& label) {
    const auto e = embeddings.vectors[embeddings.vocabulary.id(answer_word(label))];
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += (u[i] - e[i]) * (u[i] - e[i]);
    return s;
  };
  // The lower id wins ties, matching nearest-token decoding.
  const double dy = distance(yes);
  const double dn = distance(no);
  const TokenId iy = embeddings.vocabulary.id(answer_word(yes));
  const TokenId in = embeddings.vocabulary.id(answer_word(no));
  if (dy < dn || (dy == dn && iy < in)) return yes;
  return no;
}

TaskClassifier train_task_classifier(Task task, const std::vector<TaskExample>& train,
                                     const ClassifierParams& params) {
  lm::check_alpha(params.alpha);
  if (train.empty()) throw InvalidArgument("no training examples");
  const auto [yes, no] = answers(task);
  std::vector<std::vector<std::string>> texts;
  for (const auto& e : train) {
    if (e.label != yes && e.label != no) {
      throw InvalidArgument("label '" + e.label + "' is not an answer of task " + task_name(task));
    }
    auto words = lm::tokenize(e.prompt);
    words.push_back(answer_word(e.label));
    texts.push_back(std::move(words));
  }
  // Both answers must be embedded even if one never occurs.
  texts.push_back({answer_word(yes), answer_word(no)});
  auto trained = lm::train_embeddings(texts, params.embedding);

  TaskClassifier c{task, std::move(trained.table), RegressionEnsemble({0.0}, 1.0, {}, 1), params};
  Matrix x(0, c.embeddings.dim());
  Matrix y(0, c.embeddings.dim());
  for (const auto& e : train) {
    x.append_row(c.features(e.prompt));
    y.append_row(c.embeddings.vectors[c.embeddings.vocabulary.id(answer_word(e.label))]);
  }
  c.model = fit_ensemble(x, y, params.boosting);
  return c;
}

double eval_task(const TaskClassifier& classifier, const std::vector<TaskExample>& test) {
  if (test.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& e : test) hits += classifier.predict(e.prompt) == e.label;
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

void save_classifier(const std::filesystem::path& dir, const TaskClassifier& c) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  c.embeddings.vocabulary.save(dir / "vocab.txt");
  lm::save_embeddings(dir / "embeddings.txt", c.embeddings);
  save_json(dir / "ensemble.json", to_json(c.model));
  json meta = to_json(c.params);
  meta["task"] = task_name(c.task);
  save_json(dir / "classifier.json", meta);
}

TaskClassifier load_classifier(const std::filesystem::path& dir) {
  const json meta = load_json(dir / "classifier.json");
  if (!meta.contains("task") || !meta["task"].is_string()) throw ParseError("classifier.json lacks 'task'");
  lm::EmbeddingTable table = lm::load_embeddings(dir / "embeddings.txt");
  table.vocabulary = lm::Vocabulary::load(dir / "vocab.txt");
  if (table.vocabulary.size() != table.vectors.size()) {
    throw ParseError("vocab.txt and embeddings.txt list different numbers of words");
  }
  RegressionEnsemble model = ensemble_from_json(load_json(dir / "ensemble.json"));
  return TaskClassifier{parse_task(meta["task"].get<std::string>()), std::move(table), std::move(model),
                        classifier_params_from_json(meta)};
}

}  // namespace ardt::tasks
