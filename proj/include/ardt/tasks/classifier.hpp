#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ardt/core/regression.hpp"
#include "ardt/lm/embeddings.hpp"
#include "ardt/tasks/tasks.hpp"

namespace ardt::tasks {

struct ClassifierParams {
  // Close to 1 so the context vector is nearly an order-free word count.
  double alpha = 0.99;
  lm::Word2VecParams embedding{.dim = 32, .window = 4, .negatives = 5, .epochs = 30,
                               .learning_rate = 0.025, .min_count = 1, .seed = 20240521};
  BoostingParams boosting{.rounds = 60,
                          .learning_rate = 0.1,
                          .tree = {.max_depth = 3, .min_samples_leaf = 2},
                          .feature_fraction = 1.0,
                          .seed = 20240521};
};

nlohmann::json to_json(const ClassifierParams& params);
ClassifierParams classifier_params_from_json(const nlohmann::json& doc, const ClassifierParams& base = {});

// Embedding + ensemble classifier: the prompt's decayed context vector is
// regressed onto the embedding of its answer word and decoded to the nearer
// of the two answer embeddings.
struct TaskClassifier {
  Task task;
  lm::EmbeddingTable embeddings;
  RegressionEnsemble model;
  ClassifierParams params;

  std::vector<double> features(const std::string& prompt) const;
  std::string predict(const std::string& prompt) const;
};

// Embeddings are trained on the training texts with their answers appended.
TaskClassifier train_task_classifier(Task task, const std::vector<TaskExample>& train,
                                     const ClassifierParams& params);

double eval_task(const TaskClassifier& classifier, const std::vector<TaskExample>& test);

// vocab.txt, embeddings.txt, ensemble.json, classifier.json.
void save_classifier(const std::filesystem::path& dir, const TaskClassifier& classifier);
TaskClassifier load_classifier(const std::filesystem::path& dir);

}  // namespace ardt::tasks
