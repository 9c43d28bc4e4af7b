#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "ardt/core/decision_tree.hpp"
#include "ardt/core/regression.hpp"

namespace ardt {

// Structured-text model files. Every document carries
//   {"format": "ardt-model", "format_version": N, "kind": ...}
// followed by kind-specific fields; node records are listed in preorder
// (node, left subtree, right subtree) so no child indices are stored.
// docs/model_format.md fixes the field names.
inline constexpr const char* kModelFormatName = "ardt-model";
inline constexpr int kModelFormatVersion = 1;

nlohmann::json to_json(const DecisionTree& tree);
nlohmann::json to_json(const RegressionTree& tree);
nlohmann::json to_json(const RegressionEnsemble& ensemble);

DecisionTree decision_tree_from_json(const nlohmann::json& doc);
RegressionTree regression_tree_from_json(const nlohmann::json& doc, std::size_t input_dim,
                                         std::size_t output_dim);
RegressionEnsemble ensemble_from_json(const nlohmann::json& doc);

void save_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json load_json(const std::filesystem::path& path);

}  // namespace ardt
