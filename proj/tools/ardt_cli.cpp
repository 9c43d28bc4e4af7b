// ardt: command line front end for the library.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "ardt/core/model_io.hpp"
#include "ardt/interpret/basis.hpp"
#include "ardt/interpret/inspect.hpp"
#include "ardt/lm/model.hpp"
#include "ardt/lm/tokenizer.hpp"
#include "ardt/tasks/classifier.hpp"
#include "ardt/theory/automaton.hpp"
#include "ardt/theory/machine_io.hpp"
#include "ardt/theory/parity.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240521;

struct Global {
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false;
  bool as_json = false;
  std::string config_path;
  json config = json::object();
};

// Prints either the human-readable text or the structured result.
struct Output {
  explicit Output(const Global& global) : g(global) {}

  const Global& g;
  json result = json::object();
  std::ostringstream text;

  void flush() {
    if (g.as_json) {
      std::cout << result.dump(2) << '\n';
    } else {
      std::cout << text.str();
    }
  }
};

json config_section(const Global& g, const char* name) {
  if (g.config.contains(name)) return g.config.at(name);
  return json::object();
}

std::string join(const std::vector<std::string>& words, const char* sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) out += (i ? sep : "") + words[i];
  return out;
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(precision);
  s << v;
  return s.str();
}

// ---- LM ------------------------------------------------------------------

struct LmOptions {
  std::optional<double> alpha;
  std::optional<std::size_t> d_emb, epochs, window, negatives, min_count;
  std::optional<int> rounds, depth;
  std::optional<double> learning_rate, feature_fraction;
  std::optional<std::size_t> min_leaf, max_samples, min_context, max_context, stride;
};

void add_lm_options(CLI::App* cmd, LmOptions& o) {
  cmd->add_option("--alpha", o.alpha, "context decay in (0, 1)");
  cmd->add_option("--d-emb", o.d_emb, "embedding dimension");
  cmd->add_option("--epochs", o.epochs, "word2vec epochs");
  cmd->add_option("--window", o.window, "word2vec context window");
  cmd->add_option("--negatives", o.negatives, "negative samples per pair");
  cmd->add_option("--min-count", o.min_count, "minimum word frequency");
  cmd->add_option("--rounds", o.rounds, "boosting rounds");
  cmd->add_option("--depth", o.depth, "maximum tree depth");
  cmd->add_option("--lr", o.learning_rate, "boosting learning rate");
  cmd->add_option("--min-leaf", o.min_leaf, "minimum samples per leaf");
  cmd->add_option("--feature-fraction", o.feature_fraction, "features offered to each tree");
  cmd->add_option("--max-samples", o.max_samples, "cap on training contexts (0 = all)");
  cmd->add_option("--min-context", o.min_context, "shortest context");
  cmd->add_option("--max-context", o.max_context, "longest context");
  cmd->add_option("--stride", o.stride, "step between target positions");
}

ardt::lm::LmConfig lm_config(const Global& g, const LmOptions& o) {
  ardt::lm::LmConfig c = ardt::lm::lm_config_from_json(config_section(g, "lm"));
  if (g.seed_given || !g.config.contains("lm")) {
    c.embedding.seed = c.dataset.seed = c.boosting.seed = g.seed;
  }
  if (o.alpha) c.alpha = *o.alpha;
  if (o.d_emb) c.embedding.dim = *o.d_emb;
  if (o.epochs) c.embedding.epochs = *o.epochs;
  if (o.window) c.embedding.window = *o.window;
  if (o.negatives) c.embedding.negatives = *o.negatives;
  if (o.min_count) c.embedding.min_count = *o.min_count;
  if (o.rounds) c.boosting.rounds = *o.rounds;
  if (o.depth) c.boosting.tree.max_depth = *o.depth;
  if (o.learning_rate) c.boosting.learning_rate = *o.learning_rate;
  if (o.min_leaf) c.boosting.tree.min_samples_leaf = *o.min_leaf;
  if (o.feature_fraction) c.boosting.feature_fraction = *o.feature_fraction;
  if (o.max_samples) c.dataset.max_samples = *o.max_samples;
  if (o.min_context) c.dataset.min_context = *o.min_context;
  if (o.max_context) c.dataset.max_context = *o.max_context;
  if (o.stride) c.dataset.stride = *o.stride;
  c.validate();
  return c;
}

json metrics_json(const ardt::lm::LmMetrics& m) {
  return json{{"accuracy", m.accuracy}, {"mse", m.mse}, {"samples", m.samples}};
}

// ---- commands ------------------------------------------------------------

void cmd_embed_train(const Global& g, const std::string& corpus, const std::string& out_path,
                     const LmOptions& o) {
  const auto config = lm_config(g, o);
  const auto docs = ardt::lm::tokenize_documents(ardt::lm::read_corpus(corpus));
  auto trained = ardt::lm::train_embeddings(docs, config.embedding);
  ardt::lm::save_embeddings(out_path, trained.table);
  Output out{g};
  out.result = {{"words", trained.table.vocabulary.size()},
                {"dim", trained.table.dim()},
                {"epoch_loss", trained.epoch_loss},
                {"path", out_path}};
  out.text << "words: " << trained.table.vocabulary.size() << "\ndim: " << trained.table.dim()
           << "\nepoch loss:";
  for (double l : trained.epoch_loss) out.text << ' ' << fmt(l);
  out.text << "\nwrote " << out_path << '\n';
  out.flush();
}

void cmd_embed_load_check(const Global& g, const std::string& path) {
  auto table = ardt::lm::load_embeddings(path);
  table.validate();
  Output out{g};
  out.result = {{"words", table.vocabulary.size()}, {"dim", table.dim()}, {"ok", true}};
  out.text << "ok: " << table.vocabulary.size() << " words, dimension " << table.dim() << '\n';
  out.flush();
}

void cmd_lm_train(const Global& g, const std::string& corpus, const std::string& out_dir,
                  const std::string& embeddings, bool interpretable, std::size_t clusters,
                  const LmOptions& o) {
  auto config = lm_config(g, o);
  config.interpretable = config.interpretable || interpretable;
  if (clusters) config.clusters = clusters;
  std::optional<ardt::lm::EmbeddingTable> table;
  if (!embeddings.empty()) table = ardt::lm::load_embeddings(embeddings);
  ardt::lm::LmReport report;
  const auto bundle = ardt::lm::train_lm(ardt::lm::read_corpus(corpus), config, &report, table);
  ardt::lm::save_bundle(out_dir, bundle);

  Output out{g};
  out.result = {{"train", metrics_json(report.train)},
                {"held_out", metrics_json(report.held_out)},
                {"baseline_accuracy", report.baseline_accuracy},
                {"train_documents", report.train_documents},
                {"held_out_documents", report.held_out_documents},
                {"tree_nodes", bundle.model.node_count()},
                {"mse_history", report.mse_history},
                {"embedding_loss", report.embedding_loss},
                {"model", out_dir}};
  out.text << "documents: " << report.train_documents << " train, " << report.held_out_documents
           << " held out\n"
           << "train accuracy: " << fmt(report.train.accuracy) << " (mse " << fmt(report.train.mse, 6)
           << ")\n"
           << "held-out accuracy: " << fmt(report.held_out.accuracy) << " (mse "
           << fmt(report.held_out.mse, 6) << ", " << report.held_out.samples << " contexts)\n"
           << "unigram baseline: " << fmt(report.baseline_accuracy) << '\n'
           << "tree nodes: " << bundle.model.node_count() << '\n'
           << "wrote " << out_dir << '\n';
  out.flush();
}

void cmd_lm_generate(const Global& g, const std::string& model_dir, std::vector<std::string> prompts,
                     const std::string& prompts_file, std::size_t steps) {
  const auto bundle = ardt::lm::load_bundle(model_dir);
  if (!prompts_file.empty()) {
    std::ifstream in(prompts_file);
    if (!in) throw ardt::IoError("cannot read " + prompts_file);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) prompts.push_back(line);
    }
  }
  if (prompts.empty()) throw ardt::InvalidArgument("give --prompt or --prompts");
  Output out{g};
  out.result = json::array();
  for (const auto& p : prompts) {
    const auto ids = bundle.encode(p);
    std::size_t unknown = 0;
    for (auto id : ids) unknown += id == ardt::lm::Vocabulary::kUnk;
    if (unknown && !g.as_json) std::cerr << "note: " << unknown << " prompt word(s) mapped to <unk>\n";
    const std::string text = bundle.continue_text(p, steps);
    out.result.push_back({{"prompt", p}, {"continuation", text}, {"unknown_words", unknown}});
    out.text << p << " ... " << text << '\n';
  }
  out.flush();
}

void cmd_lm_eval(const Global& g, const std::string& model_dir, const std::string& corpus) {
  const auto bundle = ardt::lm::load_bundle(model_dir);
  const auto m = ardt::lm::evaluate_bundle(bundle, ardt::lm::read_corpus(corpus));
  Output out{g};
  out.result = metrics_json(m);
  out.text << "accuracy: " << fmt(m.accuracy) << "\nmse: " << fmt(m.mse, 6) << "\ncontexts: " << m.samples
           << '\n';
  out.flush();
}

int cmd_sim_automaton(const Global& g, const std::string& spec, const std::string& input) {
  using namespace ardt::theory;
  const Automaton a = load_automaton(spec);
  const auto word = parse_word(a.alphabet, input);
  if (word.empty()) throw ardt::InvalidArgument("input must have at least one symbol");
  const auto compiled = compile_automaton(a, word.size());
  const auto states = simulate_compiled_automaton(compiled, a, word);
  const int expected = run_automaton(a, word);
  std::vector<std::string> names;
  for (int q : states) names.push_back(a.states[q]);
  const bool agree = states.back() == expected;
  Output out{g};
  out.result = {{"trace", names},
                {"output", a.states[states.back()]},
                {"oracle", a.states[expected]},
                {"agree", agree},
                {"tree_leaves", compiled.ardt.tree.size()},
                {"tree_depth", compiled.ardt.tree.depth()},
                {"context_length", compiled.ardt.tree.window_length()}};
  out.text << "trace: " << join(names) << "\noutput: " << a.states[states.back()]
           << "\noracle: " << a.states[expected] << (agree ? " (agree)" : " (MISMATCH)") << "\ntree: "
           << compiled.ardt.tree.size() << " leaves, depth " << compiled.ardt.tree.depth()
           << ", context length " << compiled.ardt.tree.window_length() << '\n';
  out.flush();
  return agree ? 0 : 1;
}

int cmd_sim_tm(const Global& g, const std::string& spec, const std::string& input) {
  using namespace ardt::theory;
  const TuringMachine m = load_turing(spec);
  const auto word = parse_word(m.alphabet, input);
  const TuringRun run = run_turing(m, word);
  const auto compiled = compile_turing(m);
  const auto emitted = compiled.run(turing_prompt(m, word), turing_length_complexity(m));
  const std::size_t chunk = m.memory + 2;
  std::vector<std::string> lines;
  bool agree = true;
  for (std::size_t i = 0; i < m.runtime; ++i) {
    std::vector<std::string> names;
    std::vector<ardt::TokenId> expected{TuringTokens::of(m).sep()};
    expected.insert(expected.end(), run.encodings[i].begin(), run.encodings[i].end());
    for (std::size_t j = 0; j < chunk; ++j) {
      names.push_back(compiled.name(emitted[i * chunk + j]));
      agree = agree && emitted[i * chunk + j] == expected[j];
    }
    lines.push_back(join(names));
  }
  const ardt::TokenId last = emitted.back();
  const std::string output = compiled.name(last);
  Output out{g};
  out.result = {{"chunks", lines},
                {"output", output},
                {"oracle", m.alphabet[run.output]},
                {"agree", agree && output == m.alphabet[run.output]},
                {"length_complexity", turing_length_complexity(m)},
                {"tree_leaves", compiled.ardt.tree.size()}};
  for (std::size_t i = 0; i < lines.size(); ++i) out.text << "s" << i + 1 << ": " << lines[i] << '\n';
  out.text << "output: " << output << "\noracle: " << m.alphabet[run.output]
           << (agree ? " (agree)" : " (MISMATCH)") << "\nlength complexity: "
           << turing_length_complexity(m) << "\ntree: " << compiled.ardt.tree.size() << " leaves\n";
  out.flush();
  return agree ? 0 : 1;
}

int cmd_sim_circuit(const Global& g, const std::string& spec, const std::string& input) {
  using namespace ardt::theory;
  const Circuit c = load_circuit(spec);
  const auto word = parse_word(c.alphabet, input);
  const auto values = eval_circuit_nodes(c, word);
  const auto compiled = compile_circuit(c);
  const auto emitted = compiled.run(word, circuit_length_complexity(c));
  std::vector<std::string> names;
  bool agree = true;
  for (std::size_t i = 0; i < emitted.size(); ++i) {
    names.push_back(compiled.name(emitted[i]));
    agree = agree && emitted[i] == values[c.num_inputs + i];
  }
  Output out{g};
  out.result = {{"gates", names},
                {"output", names.back()},
                {"oracle", c.alphabet[values.back()]},
                {"agree", agree},
                {"length_complexity", circuit_length_complexity(c)},
                {"tree_leaves", compiled.ardt.tree.size()}};
  out.text << "gate values: " << join(names) << "\noutput: " << names.back()
           << "\noracle: " << c.alphabet[values.back()] << (agree ? " (agree)" : " (MISMATCH)")
           << "\nlength complexity: " << circuit_length_complexity(c) << "\ntree: "
           << compiled.ardt.tree.size() << " leaves\n";
  out.flush();
  return agree ? 0 : 1;
}

int cmd_parity_demo(const Global& g, std::size_t n) {
  using namespace ardt::theory;
  if (n < 1 || n > 20) throw ardt::InvalidArgument("n must lie in [1, 20]");
  const auto direct = direct_parity_tree(n);
  const Automaton a = parity_automaton();
  const auto compiled = compile_automaton(a, n);
  bool agree = true;
  std::vector<int> bits(n, 0);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    for (std::size_t i = 0; i < n; ++i) bits[i] = static_cast<int>((x >> (n - 1 - i)) & 1u);
    const int p = parity(bits);
    agree = agree && direct.evaluate(bit_window(bits)) == (p ? kOdd : kEven);
    agree = agree && simulate_compiled_automaton(compiled, a, bits).back() == p;
  }
  const auto collapsed = collapse_random_subtree(direct, g.seed);
  const auto pair = parity_counterexample(collapsed, n);
  Output out{g};
  out.result = {{"n", n},
                {"direct_tree_leaves", direct.size()},
                {"ardt_tree_leaves", compiled.ardt.tree.size()},
                {"exhaustive_agreement", agree},
                {"collapsed_tree_leaves", collapsed.size()}};
  out.text << "direct tree leaves: " << direct.size() << "\nARDT tree leaves: " << compiled.ardt.tree.size()
           << " (independent of n)\nexhaustive agreement on " << (std::uint64_t{1} << n)
           << " inputs: " << (agree ? "PASS" : "FAIL") << '\n';
  if (pair) {
    auto show = [](const std::vector<int>& v) {
      std::string s;
      for (int b : v) s += static_cast<char>('0' + b);
      return s;
    };
    out.result["counterexample"] = {show(pair->first), show(pair->second)};
    out.text << "collapsed tree (" << collapsed.size() << " leaves) confuses " << show(pair->first)
             << " and " << show(pair->second) << '\n';
  }
  out.flush();
  return agree ? 0 : 1;
}

// ---- interpret -------------------------------------------------------------

ardt::interpret::KMeansParams kmeans_params(const Global& g, std::size_t k, std::size_t iterations) {
  ardt::interpret::KMeansParams p;
  p.k = k;
  p.iterations = iterations;
  p.seed = g.seed;
  return p;
}

void cmd_cluster(const Global& g, const std::string& embeddings, std::size_t k, std::size_t iterations) {
  const auto table = ardt::lm::load_embeddings(embeddings);
  const auto basis = ardt::interpret::build_cluster_basis(table.vectors, kmeans_params(g, k, iterations),
                                                          ardt::lm::Vocabulary::kReserved);
  const auto report = ardt::interpret::cluster_report(table.vectors, basis);
  Output out{g};
  out.result = json::array();
  for (const auto& c : report) {
    const auto near = table.vocabulary.decode(c.neighbours);
    out.result.push_back({{"cluster", c.cluster},
                          {"representative", table.vocabulary.word(c.representative)},
                          {"nearest", near}});
    out.text << c.cluster << '\t' << table.vocabulary.word(c.representative) << '\t' << join(near, ", ")
             << '\n';
  }
  out.flush();
}

void cmd_project(const Global& g, const std::string& embeddings, std::size_t k, std::size_t iterations,
                 const std::vector<std::string>& words) {
  const auto table = ardt::lm::load_embeddings(embeddings);
  const auto basis = ardt::interpret::build_cluster_basis(table.vectors, kmeans_params(g, k, iterations),
                                                          ardt::lm::Vocabulary::kReserved);
  ardt::interpret::Projection phi(basis.word_vectors(table.vectors));
  const auto labels = table.vocabulary.decode(basis.words);
  Output out{g};
  out.result = {{"basis", labels}, {"projections", json::object()}};
  out.text << "basis: " << join(labels) << '\n';
  for (const auto& w : words) {
    const auto id = table.vocabulary.find(w);
    if (!id) throw ardt::InvalidArgument("'" + w + "' is not in the embedding table");
    const auto z = phi(table.vectors[*id]);
    out.result["projections"][w] = z;
    out.text << w << ':';
    for (double v : z) out.text << ' ' << fmt(v, 3);
    out.text << '\n';
  }
  out.flush();
}

std::vector<std::string> feature_labels(const ardt::lm::LmBundle& bundle) {
  std::vector<std::string> labels;
  if (bundle.config.interpretable && bundle.config.basis_words.size() == bundle.embeddings.dim()) {
    return bundle.embeddings.vocabulary.decode(bundle.config.basis_words);
  }
  for (std::size_t i = 0; i < bundle.embeddings.dim(); ++i) labels.push_back("e" + std::to_string(i));
  return labels;
}

void cmd_export_dot(const Global& g, const std::string& model_dir, std::size_t tree_index,
                    const std::string& out_path) {
  const auto bundle = ardt::lm::load_bundle(model_dir);
  const auto& trees = bundle.model.trees();
  if (tree_index >= trees.size()) {
    throw ardt::InvalidArgument("model has " + std::to_string(trees.size()) + " trees");
  }
  const auto& tree = trees[tree_index];
  // Leaf i is labelled with the token nearest base + learning_rate * leaf_i.
  std::vector<std::string> leaves;
  std::vector<double> u(bundle.model.output_dim());
  for (std::size_t i = 0; i < tree.size(); ++i) {
    auto v = tree.leaf_values().row(i);
    for (std::size_t c = 0; c < u.size(); ++c) u[c] = bundle.model.base()[c] + bundle.model.learning_rate() * v[c];
    leaves.push_back(bundle.embeddings.vocabulary.word(
        ardt::lm::nearest_token(bundle.embeddings.vectors, u, ardt::lm::kFirstDecodable)));
  }
  const std::string dot = ardt::interpret::export_dot(tree, feature_labels(bundle), leaves);
  if (out_path.empty()) {
    std::cout << dot;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ardt::IoError("cannot write " + out_path);
  out << dot;
  Output o{g};
  o.result = {{"path", out_path}, {"nodes", tree.node_count()}};
  o.text << "wrote " << out_path << " (" << tree.node_count() << " nodes)\n";
  o.flush();
}

void cmd_importance(const Global& g, const std::string& model_dir, std::size_t top) {
  const auto bundle = ardt::lm::load_bundle(model_dir);
  const auto imp = ardt::interpret::feature_importance(bundle.model);
  const auto labels = feature_labels(bundle);
  std::vector<std::size_t> order(labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return imp.average_gain[a] > imp.average_gain[b]; });
  Output out{g};
  out.result = json::array();
  for (std::size_t r = 0; r < order.size() && r < top; ++r) {
    const auto f = order[r];
    out.result.push_back({{"feature", labels[f]},
                          {"average_gain", imp.average_gain[f]},
                          {"splits", imp.splits[f]}});
    out.text << labels[f] << '\t' << fmt(imp.average_gain[f], 6) << '\t' << imp.splits[f] << '\n';
  }
  out.flush();
}

// ---- tasks -----------------------------------------------------------------

ardt::tasks::ClassifierParams classifier_params(const Global& g) {
  ardt::tasks::ClassifierParams p = ardt::tasks::classifier_params_from_json(config_section(g, "tasks"));
  if (g.seed_given || !g.config.contains("tasks")) p.embedding.seed = p.boosting.seed = g.seed;
  return p;
}

void cmd_task_gen(const Global& g, const std::string& task_name, const std::string& out_dir,
                  std::size_t train, std::size_t test) {
  using namespace ardt::tasks;
  Manifest m{parse_task(task_name), g.seed, train, test, kGeneratorVersion};
  const Split split = make_split(m.task, g.seed, train, test);
  write_split(out_dir, m, split);
  Output out{g};
  out.result = to_json(m);
  out.text << "wrote " << split.train.size() << " train and " << split.test.size() << " test examples to "
           << out_dir << '\n';
  out.flush();
}

ardt::tasks::Manifest read_manifest(const std::string& dir) {
  return ardt::tasks::manifest_from_json(ardt::load_json(fs::path(dir) / "manifest.json"));
}

void cmd_task_train(const Global& g, const std::string& data_dir, const std::string& model_dir) {
  using namespace ardt::tasks;
  const Manifest m = read_manifest(data_dir);
  const auto train = load_examples(fs::path(data_dir) / "train.tsv");
  const auto classifier = train_task_classifier(m.task, train, classifier_params(g));
  save_classifier(model_dir, classifier);
  const double acc = eval_task(classifier, train);
  Output out{g};
  out.result = {{"task", task_name(m.task)}, {"train_accuracy", acc}, {"model", model_dir}};
  out.text << "task: " << task_name(m.task) << "\ntrain accuracy: " << fmt(acc) << "\nwrote " << model_dir
           << '\n';
  out.flush();
}

void cmd_task_eval(const Global& g, const std::string& model_dir, const std::string& data_dir) {
  using namespace ardt::tasks;
  const auto classifier = load_classifier(model_dir);
  const auto test = load_examples(fs::path(data_dir) / "test.tsv");
  const double acc = eval_task(classifier, test);
  Output out{g};
  out.result = {{"task", task_name(classifier.task)}, {"accuracy", acc}, {"examples", test.size()}};
  out.text << "task: " << task_name(classifier.task) << "\naccuracy: " << fmt(acc) << " on " << test.size()
           << " examples\n";
  out.flush();
}

void print_version(bool as_json) {
  const json v = {{"ardt", ARDT_VERSION},
                  {"model_format", {{"name", ardt::kModelFormatName}, {"version", ardt::kModelFormatVersion}}},
                  {"embedding_format", "word-per-line text, no header"},
                  {"task_generator_version", ardt::tasks::kGeneratorVersion}};
  if (as_json) {
    std::cout << v.dump(2) << '\n';
  } else {
    std::cout << "ardt " << ARDT_VERSION << "\nmodel files: " << ardt::kModelFormatName << " v"
              << ardt::kModelFormatVersion << "\nembedding files: word-per-line text\ntask generator: v"
              << ardt::tasks::kGeneratorVersion << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Autoregressive decision trees: constructions, language model pipeline, tools"};
  app.require_subcommand(0, 1);
  Global g;
  bool version = false;
  app.add_option("--seed", g.seed, "seed for every random choice")->default_val(kDefaultSeed);
  app.add_flag("--json", g.as_json, "print structured JSON results");
  app.add_option("--config", g.config_path, "JSON config file with \"lm\" and \"tasks\" sections");
  app.add_flag("--version", version, "print version and file format versions");

  int status = 0;
  std::function<void()> action;

  LmOptions lm_opts;
  std::string corpus, out_path, embeddings, model_dir, spec, input, prompts_file, data_dir, task;
  std::vector<std::string> prompts, words;
  std::size_t steps = 20, n = 6, k = 20, iterations = 100, tree_index = 0, top = 20, clusters = 0;
  std::size_t n_train = 200, n_test = 50;
  bool interpretable = false;

  auto* embed_train = app.add_subcommand("embed-train", "train skip-gram embeddings on a corpus");
  embed_train->add_option("--corpus", corpus, "UTF-8 text, blank-line separated documents")->required();
  embed_train->add_option("--out", out_path, "embedding text file to write")->required();
  add_lm_options(embed_train, lm_opts);
  embed_train->callback([&] { action = [&] { cmd_embed_train(g, corpus, out_path, lm_opts); }; });

  auto* embed_check = app.add_subcommand("embed-load-check", "load and validate an embedding file");
  embed_check->add_option("--embeddings", embeddings, "embedding text file")->required();
  embed_check->callback([&] { action = [&] { cmd_embed_load_check(g, embeddings); }; });

  auto* lm_train = app.add_subcommand("lm-train", "train an embedding + boosted-tree language model");
  lm_train->add_option("--corpus", corpus, "training corpus")->required();
  lm_train->add_option("--out", model_dir, "bundle directory to write")->required();
  lm_train->add_option("--embeddings", embeddings, "use this embedding file instead of training one");
  lm_train->add_flag("--interpretable", interpretable, "train in cluster-basis coordinates");
  lm_train->add_option("--clusters", clusters, "basis size for --interpretable");
  add_lm_options(lm_train, lm_opts);
  lm_train->callback([&] {
    action = [&] { cmd_lm_train(g, corpus, model_dir, embeddings, interpretable, clusters, lm_opts); };
  });

  auto* lm_generate = app.add_subcommand("lm-generate", "continue prompts with a trained model");
  lm_generate->add_option("--model", model_dir, "bundle directory")->required();
  lm_generate->add_option("--prompt", prompts, "prompt text (repeatable)");
  lm_generate->add_option("--prompts", prompts_file, "file with one prompt per line");
  lm_generate->add_option("--steps", steps, "tokens to generate")->default_val(20);
  lm_generate->callback([&] { action = [&] { cmd_lm_generate(g, model_dir, prompts, prompts_file, steps); }; });

  auto* lm_eval = app.add_subcommand("lm-eval", "next-token accuracy on a corpus");
  lm_eval->add_option("--model", model_dir, "bundle directory")->required();
  lm_eval->add_option("--corpus", corpus, "evaluation corpus")->required();
  lm_eval->callback([&] { action = [&] { cmd_lm_eval(g, model_dir, corpus); }; });

  auto* sim_automaton = app.add_subcommand("sim-automaton", "run an automaton as a compiled ARDT");
  sim_automaton->add_option("--spec", spec, "automaton JSON")->required();
  sim_automaton->add_option("--input", input, "input word")->required();
  sim_automaton->callback([&] { action = [&] { status = cmd_sim_automaton(g, spec, input); }; });

  auto* sim_tm = app.add_subcommand("sim-tm", "run a Turing machine as a compiled ARDT");
  sim_tm->add_option("--spec", spec, "Turing machine JSON")->required();
  sim_tm->add_option("--input", input, "input word")->required();
  sim_tm->callback([&] { action = [&] { status = cmd_sim_tm(g, spec, input); }; });

  auto* sim_circuit = app.add_subcommand("sim-circuit", "run a sparse circuit as a compiled ARDT");
  sim_circuit->add_option("--spec", spec, "circuit JSON")->required();
  sim_circuit->add_option("--input", input, "input word")->required();
  sim_circuit->callback([&] { action = [&] { status = cmd_sim_circuit(g, spec, input); }; });

  auto* parity_demo = app.add_subcommand("parity-demo", "direct versus autoregressive parity trees");
  parity_demo->add_option("--n", n, "input length")->default_val(6);
  parity_demo->callback([&] { action = [&] { status = cmd_parity_demo(g, n); }; });

  auto* interp = app.add_subcommand("interpret", "cluster basis, projection and tree inspection");
  interp->require_subcommand(1);
  auto* cluster = interp->add_subcommand("cluster", "k-means cluster report");
  cluster->add_option("--embeddings", embeddings, "embedding text file")->required();
  cluster->add_option("--k", k, "clusters")->default_val(20);
  cluster->add_option("--iterations", iterations, "Lloyd iterations")->default_val(100);
  cluster->callback([&] { action = [&] { cmd_cluster(g, embeddings, k, iterations); }; });
  auto* project = interp->add_subcommand("project", "coordinates of words in the cluster basis");
  project->add_option("--embeddings", embeddings, "embedding text file")->required();
  project->add_option("--k", k, "clusters")->default_val(20);
  project->add_option("--iterations", iterations, "Lloyd iterations")->default_val(100);
  project->add_option("--word", words, "word to project (repeatable)")->required();
  project->callback([&] { action = [&] { cmd_project(g, embeddings, k, iterations, words); }; });
  auto* export_dot = interp->add_subcommand("export-dot", "Graphviz export of one ensemble tree");
  export_dot->add_option("--model", model_dir, "bundle directory")->required();
  export_dot->add_option("--tree", tree_index, "tree index")->default_val(0);
  export_dot->add_option("--out", out_path, "output file (default stdout)");
  export_dot->callback([&] { action = [&] { cmd_export_dot(g, model_dir, tree_index, out_path); }; });
  auto* importance = interp->add_subcommand("importance", "average split gain per feature");
  importance->add_option("--model", model_dir, "bundle directory")->required();
  importance->add_option("--top", top, "rows to print")->default_val(20);
  importance->callback([&] { action = [&] { cmd_importance(g, model_dir, top); }; });

  auto* task_cmd = app.add_subcommand("task", "reasoning task datasets and classifiers");
  task_cmd->require_subcommand(1);
  auto* task_gen = task_cmd->add_subcommand("gen", "generate a train/test split");
  task_gen->add_option("--task", task, "bool, navigate or weboflies")
      ->required()
      ->check(CLI::IsMember({"bool", "navigate", "weboflies"}));
  task_gen->add_option("--out", data_dir, "output directory")->required();
  task_gen->add_option("--train", n_train, "training examples")->default_val(200);
  task_gen->add_option("--test", n_test, "test examples")->default_val(50);
  task_gen->callback([&] { action = [&] { cmd_task_gen(g, task, data_dir, n_train, n_test); }; });
  auto* task_train = task_cmd->add_subcommand("train", "train a classifier on a generated split");
  task_train->add_option("--data", data_dir, "directory written by task gen")->required();
  task_train->add_option("--out", model_dir, "classifier directory to write")->required();
  task_train->callback([&] { action = [&] { cmd_task_train(g, data_dir, model_dir); }; });
  auto* task_eval = task_cmd->add_subcommand("eval", "accuracy of a classifier on a split's test set");
  task_eval->add_option("--model", model_dir, "classifier directory")->required();
  task_eval->add_option("--data", data_dir, "directory written by task gen")->required();
  task_eval->callback([&] { action = [&] { cmd_task_eval(g, model_dir, data_dir); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  g.seed_given = app.get_option("--seed")->count() > 0;

  try {
    if (version) {
      print_version(g.as_json);
      return 0;
    }
    if (!action) {
      std::cerr << app.help();
      return 2;
    }
    if (!g.config_path.empty()) g.config = ardt::load_json(g.config_path);
    action();
    return status;
  } catch (const ardt::Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
  }
  return 1;
}
