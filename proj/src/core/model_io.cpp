#include "ardt/core/model_io.hpp"

#include <fstream>
#include <functional>

namespace ardt {

using nlohmann::json;

namespace {

json header(const char* kind) {
  return json{{"format", kModelFormatName}, {"format_version", kModelFormatVersion}, {"kind", kind}};
}

void check_header(const json& doc, const std::string& kind) {
  if (!doc.is_object() || doc.value("format", "") != kModelFormatName) {
    throw ParseError("not an ardt-model document");
  }
  const int version = doc.value("format_version", -1);
  if (version != kModelFormatVersion) {
    throw ParseError("unsupported model format_version " + std::to_string(version));
  }
  if (doc.value("kind", "") != kind) {
    throw ParseError("expected model kind '" + kind + "', found '" + doc.value("kind", "") + "'");
  }
}

template <typename T>
T field(const json& record, const char* name) {
  if (!record.contains(name)) throw ParseError(std::string("node record lacks '") + name + "'");
  try {
    return record.at(name).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad '") + name + "' field: " + e.what());
  }
}

json regression_nodes(const RegressionTree& tree) {
  json out = json::array();
  const auto& nodes = tree.nodes();
  std::function<void(int)> visit = [&](int index) {
    const RegressionNode& node = nodes[index];
    if (node.is_leaf()) {
      const auto value = tree.leaf_values().row(static_cast<std::size_t>(node.leaf));
      out.push_back({{"type", "leaf"},
                     {"samples", node.samples},
                     {"value", std::vector<double>(value.begin(), value.end())}});
      return;
    }
    out.push_back({{"type", "split"},
                   {"feature", node.feature},
                   {"threshold", node.threshold},
                   {"gain", node.gain},
                   {"samples", node.samples}});
    visit(node.left);
    visit(node.right);
  };
  visit(0);
  return out;
}

}  // namespace

json to_json(const DecisionTree& tree) {
  json doc = header("decision_tree");
  doc["window_length"] = tree.window_length();
  doc["embedding_dim"] = tree.dim();
  json nodes = json::array();
  const auto& all = tree.nodes();
  std::function<void(int)> visit = [&](int index) {
    const TreeNode& node = all[index];
    if (node.is_leaf()) {
      nodes.push_back({{"type", "leaf"}, {"token", node.token}});
      return;
    }
    nodes.push_back({{"type", "split"},
                     {"position", node.position},
                     {"coord", node.coord},
                     {"threshold", node.threshold}});
    visit(node.left);
    visit(node.right);
  };
  visit(0);
  doc["nodes"] = std::move(nodes);
  return doc;
}

DecisionTree decision_tree_from_json(const json& doc) {
  check_header(doc, "decision_tree");
  const auto length = field<std::size_t>(doc, "window_length");
  const auto dim = field<std::size_t>(doc, "embedding_dim");
  const json& records = doc.at("nodes");
  if (!records.is_array() || records.empty()) throw ParseError("'nodes' must be a non-empty array");
  std::vector<TreeNode> nodes;
  std::size_t cursor = 0;
  std::function<int()> read = [&]() -> int {
    if (cursor >= records.size()) throw ParseError("node list ends inside a subtree");
    const json& record = records[cursor++];
    const int slot = static_cast<int>(nodes.size());
    const auto type = field<std::string>(record, "type");
    if (type == "leaf") {
      nodes.push_back(TreeNode::leaf(field<TokenId>(record, "token")));
      return slot;
    }
    if (type != "split") throw ParseError("unknown node type '" + type + "'");
    nodes.push_back(TreeNode::split(field<int>(record, "position"), field<int>(record, "coord"),
                                    field<double>(record, "threshold")));
    const int left = read();
    const int right = read();
    nodes[slot].left = left;
    nodes[slot].right = right;
    return slot;
  };
  read();
  if (cursor != records.size()) throw ParseError("trailing node records after the tree");
  return DecisionTree(length, dim, std::move(nodes));
}

json to_json(const RegressionTree& tree) {
  json doc = header("regression_tree");
  doc["input_dim"] = tree.input_dim();
  doc["output_dim"] = tree.output_dim();
  doc["nodes"] = regression_nodes(tree);
  return doc;
}

RegressionTree regression_tree_from_json(const json& doc, std::size_t input_dim,
                                         std::size_t output_dim) {
  const json& records = doc.at("nodes");
  if (!records.is_array() || records.empty()) throw ParseError("'nodes' must be a non-empty array");
  std::vector<RegressionNode> nodes;
  std::vector<double> leaf_rows;
  std::size_t cursor = 0;
  std::function<int()> read = [&]() -> int {
    if (cursor >= records.size()) throw ParseError("node list ends inside a subtree");
    const json& record = records[cursor++];
    const int slot = static_cast<int>(nodes.size());
    const auto type = field<std::string>(record, "type");
    RegressionNode node;
    node.samples = record.value("samples", std::size_t{0});
    if (type == "leaf") {
      const auto value = field<std::vector<double>>(record, "value");
      if (value.size() != output_dim) {
        throw ParseError("leaf value has " + std::to_string(value.size()) + " entries, expected " +
                         std::to_string(output_dim));
      }
      node.leaf = static_cast<int>(leaf_rows.size() / output_dim);
      leaf_rows.insert(leaf_rows.end(), value.begin(), value.end());
      nodes.push_back(node);
      return slot;
    }
    if (type != "split") throw ParseError("unknown node type '" + type + "'");
    node.feature = field<int>(record, "feature");
    node.threshold = field<double>(record, "threshold");
    node.gain = record.value("gain", 0.0);
    nodes.push_back(node);
    const int left = read();
    const int right = read();
    nodes[slot].left = left;
    nodes[slot].right = right;
    return slot;
  };
  read();
  if (cursor != records.size()) throw ParseError("trailing node records after the tree");
  Matrix leaves(leaf_rows.size() / output_dim, output_dim);
  std::copy(leaf_rows.begin(), leaf_rows.end(), leaves.flat().begin());
  return RegressionTree(input_dim, std::move(nodes), std::move(leaves));
}

json to_json(const RegressionEnsemble& ensemble) {
  json doc = header("regression_ensemble");
  doc["input_dim"] = ensemble.input_dim();
  doc["output_dim"] = ensemble.output_dim();
  doc["learning_rate"] = ensemble.learning_rate();
  doc["base"] = ensemble.base();
  json trees = json::array();
  for (const auto& tree : ensemble.trees()) trees.push_back({{"nodes", regression_nodes(tree)}});
  doc["trees"] = std::move(trees);
  return doc;
}

RegressionEnsemble ensemble_from_json(const json& doc) {
  check_header(doc, "regression_ensemble");
  const auto input_dim = field<std::size_t>(doc, "input_dim");
  const auto output_dim = field<std::size_t>(doc, "output_dim");
  auto base = field<std::vector<double>>(doc, "base");
  if (base.size() != output_dim) throw ParseError("'base' length differs from output_dim");
  std::vector<RegressionTree> trees;
  for (const json& tree : doc.at("trees")) {
    trees.push_back(regression_tree_from_json(tree, input_dim, output_dim));
  }
  return RegressionEnsemble(std::move(base), field<double>(doc, "learning_rate"), std::move(trees),
                            input_dim);
}

void save_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(1) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace ardt
