// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
//   ardt_acceptance [--only N]...

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "ardt/core/model_io.hpp"
#include "ardt/core/regression.hpp"
#include "ardt/interpret/basis.hpp"
#include "ardt/interpret/inspect.hpp"
#include "ardt/lm/model.hpp"
#include "ardt/lm/tokenizer.hpp"
#include "ardt/tasks/classifier.hpp"
#include "ardt/theory/automaton.hpp"
#include "ardt/theory/circuit.hpp"
#include "ardt/theory/parity.hpp"
#include "ardt/theory/turing.hpp"
#include "oracles.hpp"
#include "text_oracles.hpp"

using namespace ardt;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;  // 0 = none
  std::function<Outcome()> run;
};

std::string pct(std::size_t hit, std::size_t total) {
  std::ostringstream s;
  s.precision(4);
  s << (total ? 100.0 * static_cast<double>(hit) / static_cast<double>(total) : 0.0) << "%";
  return s.str();
}

std::string num(double v, int precision = 3) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

// ---- 1 ---------------------------------------------------------------------

Outcome automata() {
  std::size_t checked = 0, agree = 0, shape_violations = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto a = theory::random_automaton(seed, 3, 4);
    if (a.alphabet.size() > 3 || a.states.size() > 4) return {false, "generator exceeded |Σ| ≤ 3, |Q| ≤ 4"};
    for (std::size_t n = 1; n <= 8; ++n) {
      const auto compiled = theory::compile_automaton(a, n);
      const std::size_t d = compiled.embedding.dim();
      const auto& tree = compiled.ardt.tree;
      if (tree.depth() > 2 * d || tree.size() > (std::size_t{1} << (2 * d))) ++shape_violations;
      for (const auto& w : oracle::all_words(static_cast<int>(a.alphabet.size()), n)) {
        const auto states = theory::simulate_compiled_automaton(compiled, a, w);
        ++checked;
        agree += states.size() == n + 1 && states.back() == oracle::automaton_state(a, w, n);
      }
    }
  }
  return {agree == checked && shape_violations == 0,
          "100 automata, " + std::to_string(checked) + " inputs, agreement " + pct(agree, checked) +
              ", tree shape violations " + std::to_string(shape_violations)};
}

// ---- 2 ---------------------------------------------------------------------

int tree_parity_output(const DecisionTree& tree, const std::vector<int>& bits) {
  return tree.evaluate(theory::bit_window(bits)) == theory::kOdd ? 1 : 0;
}

Outcome parity_separation() {
  bool ok = true;
  std::set<std::size_t> ardt_leaves;
  std::string sizes;
  for (std::size_t n = 4; n <= 12; ++n) {
    const auto direct = theory::direct_parity_tree(n);
    ok = ok && direct.size() == (std::size_t{1} << n);
    for (const auto& w : oracle::all_words(2, n)) {
      int p = 0;
      for (int b : w) p ^= b;
      ok = ok && tree_parity_output(direct, w) == p;
    }
    ardt_leaves.insert(theory::compile_automaton(theory::parity_automaton(), n).ardt.tree.size());
  }
  ok = ok && ardt_leaves.size() == 1;
  std::size_t found = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const std::size_t n = 4 + seed % 9;
    const auto collapsed = theory::collapse_random_subtree(theory::direct_parity_tree(n), seed);
    const auto pair = theory::parity_counterexample(collapsed, n);
    if (!pair) continue;
    const auto& [a, b] = *pair;
    int pa = 0, pb = 0;
    for (int x : a) pa ^= x;
    for (int x : b) pb ^= x;
    found += a.size() == n && b.size() == n && pa != pb &&
             collapsed.evaluate(theory::bit_window(a)) == collapsed.evaluate(theory::bit_window(b));
  }
  return {ok && found == 100,
          "direct trees exact for n=4..12, ARDT leaves constant at " +
              (ardt_leaves.size() == 1 ? std::to_string(*ardt_leaves.begin()) : std::string("(varies)")) +
              ", counterexamples " + std::to_string(found) + "/100"};
}

// ---- 3 ---------------------------------------------------------------------

Outcome turing() {
  std::size_t runs = 0, agree = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto tc = theory::random_turing_case(seed);
    const auto& m = tc.machine;
    if (m.states.size() > 3 || m.alphabet.size() > 3 || m.memory > 6 || m.runtime > 10 ||
        tc.inputs.size() != 10) {
      return {false, "generator exceeded limits"};
    }
    const auto compiled = theory::compile_turing(m);
    const auto tokens = theory::TuringTokens::of(m);
    const std::size_t chunk = m.memory + 2;
    for (const auto& input : tc.inputs) {
      ++runs;
      const auto trace = oracle::turing_trace(m, input);
      if (trace.fell_off) continue;
      const auto out = compiled.run(theory::turing_prompt(m, input), theory::turing_length_complexity(m));
      bool same = out.size() == m.runtime * chunk;
      for (std::size_t i = 0; same && i < m.runtime; ++i) {
        same = compiled.name(out[i * chunk]) == compiled.name(tokens.sep());
        for (std::size_t j = 0; same && j + 1 < chunk; ++j) {
          same = compiled.name(out[i * chunk + 1 + j]) == trace.configurations[i][j];
        }
      }
      agree += same;
    }
  }
  return {agree == runs && runs == 200, "20 machines x 10 inputs, agreement " + pct(agree, runs)};
}

// ---- 4 ---------------------------------------------------------------------

Outcome circuits() {
  std::size_t checked = 0, agree = 0;
  bool shape = true;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto c = theory::random_circuit(seed);
    shape = shape && c.size() <= 12 && c.num_inputs <= 6 && c.alphabet.size() == 2;
    for (const auto& g : c.gates) shape = shape && g.inputs.size() <= 2;
    const std::size_t steps = theory::circuit_length_complexity(c);
    shape = shape && steps == c.size() - static_cast<std::size_t>(c.num_inputs);
    const auto compiled = theory::compile_circuit(c);
    for (const auto& w : oracle::all_words(2, static_cast<std::size_t>(c.num_inputs))) {
      const auto out = compiled.run(w, steps);
      ++checked;
      agree += out.size() == steps && out.back() == oracle::circuit_output(c, w);
    }
  }
  return {shape && agree == checked,
          "30 circuits, " + std::to_string(checked) + " inputs, agreement " + pct(agree, checked) +
              (shape ? "" : ", shape limits violated")};
}

// ---- 5 ---------------------------------------------------------------------

const fs::path kCorpus = fs::path(ARDT_DATA_DIR) / "toy_stories.txt";
const fs::path kPrompts = fs::path(ARDT_DATA_DIR) / "prompts.txt";

lm::LmConfig acceptance_lm_config() {
  lm::LmConfig c;
  c.embedding.dim = 64;
  c.embedding.epochs = 3;
  c.dataset.max_samples = 20000;
  c.boosting.rounds = 30;
  c.boosting.tree.max_depth = 6;
  return c;
}

struct TrainedLm {
  lm::LmBundle bundle;
  lm::LmReport report;
};

const TrainedLm& trained_lm() {
  static const TrainedLm cached = [] {
    lm::LmReport report;
    auto bundle = lm::train_lm(lm::read_corpus(kCorpus), acceptance_lm_config(), &report);
    return TrainedLm{std::move(bundle), std::move(report)};
  }();
  return cached;
}

std::vector<std::string> read_prompts() {
  std::ifstream in(kPrompts);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

Outcome language_model() {
  const auto bytes = fs::file_size(kCorpus);
  if (bytes > 2'000'000) return {false, "corpus larger than 2 MB"};
  const auto& first = trained_lm();
  const auto second = lm::train_lm(lm::read_corpus(kCorpus), acceptance_lm_config());
  const auto dir = fs::temp_directory_path() / "ardt_acceptance_lm";
  lm::save_bundle(dir, first.bundle);
  const auto reloaded = lm::load_bundle(dir);

  const auto prompts = read_prompts();
  std::size_t identical = 0;
  for (const auto& p : prompts) {
    const auto a = first.bundle.generate(p, 20);
    identical += a.size() == 20 && a == second.generate(p, 20) && a == reloaded.generate(p, 20);
  }
  const bool same_model = to_json(first.bundle.model) == to_json(second.model);
  const double margin = first.report.held_out.accuracy - first.report.baseline_accuracy;
  return {margin >= 0.05 && prompts.size() == 10 && identical == 10 && same_model,
          "held-out accuracy " + num(first.report.held_out.accuracy) + " vs unigram baseline " +
              num(first.report.baseline_accuracy) + " over " + std::to_string(first.report.held_out.samples) +
              " contexts; " + std::to_string(identical) + "/" + std::to_string(prompts.size()) +
              " generations identical across runs"};
}

// ---- 6 ---------------------------------------------------------------------

Outcome reasoning_tasks() {
  using tasks::Task;
  struct Row {
    Task task;
    double threshold;
    double mean = 0;
  };
  std::vector<Row> rows{{Task::kBoolean, 0.60}, {Task::kNavigate, 0.55}, {Task::kWebOfLies, 0.55}};
  std::size_t labelled = 0, consistent = 0;
  for (auto& row : rows) {
    const auto [yes, no] = tasks::answers(row.task);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto split = tasks::make_split(row.task, seed, 200, 50);
      for (const auto* set : {&split.train, &split.test}) {
        for (const auto& e : *set) {
          bool truth = false;
          switch (row.task) {
            case Task::kBoolean: truth = oracle::boolean_expression(e.prompt); break;
            case Task::kNavigate: truth = oracle::walk_returns(e.prompt); break;
            case Task::kWebOfLies: truth = oracle::liar_chain(e.prompt); break;
          }
          ++labelled;
          consistent += e.label == (truth ? yes : no) && tasks::label_of(row.task, e.prompt) == e.label;
        }
      }
      tasks::ClassifierParams p;
      p.embedding.seed = p.boosting.seed = seed;
      const auto model = tasks::train_task_classifier(row.task, split.train, p);
      row.mean += tasks::eval_task(model, split.test) / 5.0;
    }
  }
  bool ok = consistent == labelled;
  std::string detail;
  for (const auto& r : rows) {
    ok = ok && r.mean > r.threshold;
    detail += tasks::task_name(r.task) + " " + num(r.mean) + " (> " + num(r.threshold) + "), ";
  }
  return {ok, detail + "generator self-consistency " + pct(consistent, labelled)};
}

// ---- 7 ---------------------------------------------------------------------

Outcome interpretability() {
  const auto& psi = trained_lm().bundle.embeddings.vectors;
  const auto basis = interpret::build_cluster_basis(psi, interpret::KMeansParams{20, 100, 7},
                                                    lm::Vocabulary::kReserved);
  const interpret::Projection phi(basis.word_vectors(psi));
  double unit_err = 0;
  for (std::size_t i = 0; i < basis.words.size(); ++i) {
    const auto z = phi(psi[basis.words[i]]);
    for (std::size_t j = 0; j < z.size(); ++j) unit_err = std::max(unit_err, std::abs(z[j] - (i == j ? 1.0 : 0.0)));
  }
  const auto& b = basis.orthonormal;
  double ortho_err = 0;
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      double s = 0;
      for (std::size_t t = 0; t < b.cols(); ++t) s += b(i, t) * b(j, t);
      ortho_err = std::max(ortho_err, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  }

  std::size_t valid = 0;
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rows = 20 + rng() % 200, features = 1 + rng() % 6;
    Matrix x(rows, features), y(rows, 1);
    for (auto& v : x.flat()) v = gauss(rng);
    for (std::size_t r = 0; r < rows; ++r) y(r, 0) = std::sin(x(r, 0)) + 0.3 * gauss(rng);
    const auto tree = fit_regression_tree(x, y, TreeParams{1 + trial % 7, 1});
    std::vector<std::string> features_names, leaves;
    for (std::size_t f = 0; f < features; ++f) features_names.push_back("f" + std::to_string(f));
    for (std::size_t l = 0; l < tree.size(); ++l) leaves.push_back("leaf " + std::to_string(l));
    try {
      const auto dot = oracle::parse_dot(interpret::export_dot(tree, features_names, leaves));
      valid += oracle::is_binary_tree(dot) && dot.labels.size() == 2 * tree.size() - 1 &&
               dot.leaves.size() == tree.size();
    } catch (const std::runtime_error&) {
    }
  }
  return {basis.words.size() == 20 && unit_err <= 1e-6 && ortho_err <= 1e-8 && valid == 50,
          "20 basis words, max |phi(x_i) - e_i| " + num(unit_err, 2) + ", max |BB^T - I| " + num(ortho_err, 2) +
              ", DOT exports valid " + std::to_string(valid) + "/50"};
}

// ---- 8 ---------------------------------------------------------------------

Outcome core_numerics() {
  std::size_t matched = 0, monotone = 0, round_trips = 0;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> small(0, 4);
    const std::size_t features = 1 + seed % 5, outputs = 1 + seed % 3;
    Matrix x(32, features), y(32, outputs);
    for (std::size_t r = 0; r < 32; ++r) {
      for (std::size_t f = 0; f < features; ++f) x(r, f) = seed % 3 == 0 ? small(rng) : u(rng);
      for (std::size_t o = 0; o < outputs; ++o) y(r, o) = std::cos(2 * x(r, 0) + o) + 0.2 * u(rng);
    }
    const TreeParams tp{static_cast<int>(1 + seed % 4), 1 + seed % 3};
    const auto tree = fit_regression_tree(x, y, tp);
    double sq = 0;
    for (std::size_t r = 0; r < 32; ++r) {
      const auto p = tree.predict(x.row(r));
      for (std::size_t o = 0; o < outputs; ++o) sq += (p[o] - y(r, o)) * (p[o] - y(r, o));
    }
    std::vector<std::size_t> all(32);
    for (std::size_t i = 0; i < 32; ++i) all[i] = i;
    const double denom = 32.0 * static_cast<double>(outputs);
    const double gap = std::abs(sq - oracle::greedy_tree_sse(x, y, all, tp.max_depth, tp.min_samples_leaf)) / denom;
    worst = std::max(worst, gap);
    matched += gap <= 1e-9;

    std::vector<double> history;
    const auto model = fit_ensemble(x, y, BoostingParams{20, 0.3, tp, 1.0, seed}, &history);
    bool mono = history.size() == 21;
    for (std::size_t i = 1; mono && i < history.size(); ++i) mono = history[i] <= history[i - 1] + 1e-12;
    monotone += mono;

    const auto back = ensemble_from_json(nlohmann::json::parse(to_json(model).dump()));
    bool same = true;
    std::vector<double> probe(features);
    for (int i = 0; i < 10 && same; ++i) {
      for (auto& v : probe) v = 3 * u(rng);
      same = model.predict(probe) == back.predict(probe);
    }
    round_trips += same;
  }
  return {matched == 100 && monotone == 100 && round_trips == 100,
          "best-split oracle matched " + std::to_string(matched) + "/100 (worst MSE gap " + num(worst, 2) +
              "), boosting monotone " + std::to_string(monotone) + "/100, serialization identical on " +
              std::to_string(round_trips * 10) + "/1000 inputs"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> only;
  app.add_option("--only", only, "run just these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "automata simulation", 120, automata},
      {2, "parity separation", 60, parity_separation},
      {3, "Turing machine simulation", 120, turing},
      {4, "circuit simulation", 60, circuits},
      {5, "language model pipeline", 600, language_model},
      {6, "reasoning tasks", 300, reasoning_tasks},
      {7, "interpretability", 0, interpretability},
      {8, "core numerics", 0, core_numerics},
  };
  bool all = true;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = num(secs, 3) + " s";
    if (c.budget_seconds > 0) {
      timing += " of " + num(c.budget_seconds, 3) + " s";
      if (secs > c.budget_seconds) {
        o.pass = false;
        timing += ", over budget";
      }
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << ": " << o.detail << " ["
              << timing << "]" << std::endl;
  }
  return all ? 0 : 1;
}
