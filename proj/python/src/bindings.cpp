// Python module ardt._core.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

#include "ardt/core/model_io.hpp"
#include "ardt/core/regression.hpp"
#include "ardt/error.hpp"
#include "ardt/interpret/basis.hpp"
#include "ardt/interpret/inspect.hpp"
#include "ardt/interpret/kmeans.hpp"
#include "ardt/lm/context.hpp"
#include "ardt/lm/model.hpp"
#include "ardt/lm/tokenizer.hpp"
#include "ardt/tasks/classifier.hpp"
#include "ardt/tasks/tasks.hpp"
#include "ardt/theory/automaton.hpp"
#include "ardt/theory/circuit.hpp"
#include "ardt/theory/machine_io.hpp"
#include "ardt/theory/parity.hpp"
#include "ardt/theory/turing.hpp"

namespace py = pybind11;
using namespace ardt;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-D array");
  Matrix m(a.shape(0), a.shape(1));
  std::copy(a.data(), a.data() + a.size(), m.flat().begin());
  return m;
}

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw DimensionError("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

Array to_array(const Matrix& m) {
  Array a({m.rows(), m.cols()});
  std::copy(m.flat().begin(), m.flat().end(), a.mutable_data());
  return a;
}

Array to_array(const std::vector<double>& v) {
  Array a(v.size());
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

// JSON crosses the boundary as text.
py::object to_python(const nlohmann::json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

nlohmann::json from_python(const py::object& obj) {
  if (obj.is_none()) return nlohmann::json::object();
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

py::dict metrics(const lm::LmMetrics& m) {
  py::dict d;
  d["accuracy"] = m.accuracy;
  d["mse"] = m.mse;
  d["samples"] = m.samples;
  return d;
}

py::dict simulate_automaton(const std::string& spec, const std::string& input) {
  const auto a = theory::load_automaton(spec);
  const auto word = theory::parse_word(a.alphabet, input);
  if (word.empty()) throw InvalidArgument("input must have at least one symbol");
  const auto compiled = theory::compile_automaton(a, word.size());
  const auto states = theory::simulate_compiled_automaton(compiled, a, word);
  std::vector<std::string> names;
  for (int q : states) names.push_back(a.states[q]);
  py::dict d;
  d["trace"] = names;
  d["output"] = names.back();
  d["oracle"] = a.states[theory::run_automaton(a, word)];
  d["tree_leaves"] = compiled.ardt.tree.size();
  return d;
}

py::dict simulate_turing(const std::string& spec, const std::string& input) {
  const auto m = theory::load_turing(spec);
  const auto word = theory::parse_word(m.alphabet, input);
  const auto run = theory::run_turing(m, word);
  const auto compiled = theory::compile_turing(m);
  const auto out = compiled.run(theory::turing_prompt(m, word), theory::turing_length_complexity(m));
  std::vector<std::string> names;
  for (auto t : out) names.push_back(compiled.name(t));
  std::vector<std::vector<std::string>> configs;
  for (const auto& enc : run.encodings) {
    std::vector<std::string> c;
    for (auto t : enc) c.push_back(compiled.name(t));
    configs.push_back(c);
  }
  py::dict d;
  d["tokens"] = names;
  d["configurations"] = configs;
  d["output"] = names.back();
  d["oracle"] = m.alphabet[run.output];
  return d;
}

py::dict simulate_circuit(const std::string& spec, const std::string& input) {
  const auto c = theory::load_circuit(spec);
  const auto word = theory::parse_word(c.alphabet, input);
  const auto compiled = theory::compile_circuit(c);
  const auto out = compiled.run(word, theory::circuit_length_complexity(c));
  std::vector<std::string> names;
  for (auto t : out) names.push_back(compiled.name(t));
  py::dict d;
  d["gates"] = names;
  d["output"] = names.back();
  d["oracle"] = c.alphabet[theory::eval_circuit(c, word)];
  return d;
}

std::vector<py::tuple> examples(const std::vector<tasks::TaskExample>& xs) {
  std::vector<py::tuple> out;
  for (const auto& e : xs) out.push_back(py::make_tuple(e.prompt, e.label));
  return out;
}

std::vector<tasks::TaskExample> from_examples(const std::vector<std::pair<std::string, std::string>>& xs) {
  std::vector<tasks::TaskExample> out;
  for (const auto& [p, l] : xs) out.push_back({p, l, 0});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Autoregressive decision trees";
  m.attr("__version__") = ARDT_VERSION;

  static py::exception<Error> base(m, "ArdtError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(base, (std::string(e.kind()) + ": " + e.what()).c_str());
    }
  });

  // core
  py::class_<RegressionEnsemble>(m, "Ensemble")
      .def_property_readonly("input_dim", &RegressionEnsemble::input_dim)
      .def_property_readonly("output_dim", &RegressionEnsemble::output_dim)
      .def_property_readonly("node_count", &RegressionEnsemble::node_count)
      .def_property_readonly("trees", [](const RegressionEnsemble& e) { return e.trees().size(); })
      .def("predict",
           [](const RegressionEnsemble& e, const Array& x) {
             if (x.ndim() == 1) return to_array(e.predict(to_vector(x)));
             const Matrix rows = to_matrix(x);
             Matrix out(rows.rows(), e.output_dim());
             for (std::size_t r = 0; r < rows.rows(); ++r) e.predict(rows.row(r), out.row(r));
             return to_array(out);
           })
      .def("to_json", [](const RegressionEnsemble& e) { return to_json(e).dump(); })
      .def_static("from_json", [](const std::string& s) { return ensemble_from_json(nlohmann::json::parse(s)); });

  m.def(
      "fit_ensemble",
      [](const Array& x, const Array& y, int rounds, double learning_rate, int max_depth,
         std::size_t min_samples_leaf, std::uint64_t seed) {
        std::vector<double> history;
        auto model = fit_ensemble(to_matrix(x), to_matrix(y),
                                  BoostingParams{rounds, learning_rate, {max_depth, min_samples_leaf}, 1.0, seed},
                                  &history);
        return py::make_tuple(std::move(model), history);
      },
      py::arg("x"), py::arg("y"), py::arg("rounds") = 50, py::arg("learning_rate") = 0.3,
      py::arg("max_depth") = 6, py::arg("min_samples_leaf") = 1, py::arg("seed") = 20240521);

  // theory
  m.def("simulate_automaton", &simulate_automaton, py::arg("spec"), py::arg("input"));
  m.def("simulate_turing", &simulate_turing, py::arg("spec"), py::arg("input"));
  m.def("simulate_circuit", &simulate_circuit, py::arg("spec"), py::arg("input"));
  m.def("direct_parity_leaves", [](std::size_t n) { return theory::direct_parity_tree(n).size(); });
  m.def("parity_ardt_leaves",
        [](std::size_t n) { return theory::compile_automaton(theory::parity_automaton(), n).ardt.tree.size(); });

  // lm
  m.def("tokenize", &lm::tokenize);
  m.def("detokenize", [](const std::vector<std::string>& t) { return lm::detokenize(t); });
  m.def(
      "aggregate",
      [](const std::vector<TokenId>& context, const Array& table, double alpha, bool closed_form) {
        return to_array(lm::aggregate(context, TokenEmbedding(to_matrix(table)), alpha,
                                      closed_form ? lm::DecayConvention::kClosedForm
                                                  : lm::DecayConvention::kIncremental));
      },
      py::arg("context"), py::arg("table"), py::arg("alpha"), py::arg("closed_form") = true);

  py::class_<lm::LmBundle>(m, "LanguageModel")
      .def_static("load", &lm::load_bundle)
      .def("save", [](const lm::LmBundle& b, const std::filesystem::path& dir) { lm::save_bundle(dir, b); })
      .def("encode", &lm::LmBundle::encode)
      .def("generate", &lm::LmBundle::generate, py::arg("prompt"), py::arg("steps") = 20)
      .def("continue_text", &lm::LmBundle::continue_text, py::arg("prompt"), py::arg("steps") = 20)
      .def("words", [](const lm::LmBundle& b, const std::vector<TokenId>& ids) {
        return b.embeddings.vocabulary.decode(ids);
      })
      .def("evaluate", [](const lm::LmBundle& b, const std::vector<std::string>& docs) {
        return metrics(lm::evaluate_bundle(b, docs));
      })
      .def_property_readonly("embeddings", [](const lm::LmBundle& b) { return to_array(b.embeddings.vectors.table()); })
      .def_property_readonly("model", [](const lm::LmBundle& b) { return b.model; })
      .def_property_readonly("config", [](const lm::LmBundle& b) { return to_python(lm::to_json(b.config)); });

  m.def(
      "train_lm",
      [](const std::vector<std::string>& documents, const py::object& config) {
        lm::LmReport report;
        auto bundle = lm::train_lm(documents, lm::lm_config_from_json(from_python(config)), &report);
        py::dict r;
        r["train"] = metrics(report.train);
        r["held_out"] = metrics(report.held_out);
        r["baseline_accuracy"] = report.baseline_accuracy;
        r["mse_history"] = report.mse_history;
        r["embedding_loss"] = report.embedding_loss;
        return py::make_tuple(std::move(bundle), r);
      },
      py::arg("documents"), py::arg("config") = py::none());
  m.def("read_corpus", &lm::read_corpus);

  // interpret
  m.def("orthogonalize", [](const Array& c) { return to_array(interpret::orthogonalize(to_matrix(c))); });
  py::class_<interpret::Projection>(m, "Projection")
      .def(py::init([](const Array& basis) { return interpret::Projection(to_matrix(basis)); }))
      .def_property_readonly("rank", &interpret::Projection::rank)
      .def("__call__", [](const interpret::Projection& p, const Array& v) {
        if (v.ndim() == 1) return to_array(p(to_vector(v)));
        return to_array(p.apply(to_matrix(v)));
      });
  m.def(
      "kmeans",
      [](const Array& points, std::size_t k, std::size_t iterations, std::uint64_t seed) {
        auto r = interpret::kmeans(to_matrix(points), {k, iterations, seed});
        return py::make_tuple(to_array(r.centers), r.labels, r.inertia);
      },
      py::arg("points"), py::arg("k"), py::arg("iterations") = 100, py::arg("seed") = 20240521);
  m.def("export_dot", [](const RegressionEnsemble& e, std::size_t tree, const std::vector<std::string>& features) {
    if (tree >= e.trees().size()) throw InvalidArgument("no such tree");
    const auto& t = e.trees()[tree];
    std::vector<std::string> leaves;
    for (std::size_t i = 0; i < t.size(); ++i) leaves.push_back("leaf " + std::to_string(i));
    return interpret::export_dot(t, features, leaves);
  });
  m.def("feature_importance", [](const RegressionEnsemble& e) {
    const auto imp = interpret::feature_importance(e);
    return py::make_tuple(to_array(imp.average_gain), imp.splits);
  });

  // tasks
  m.def("generate_examples", [](const std::string& task, std::uint64_t seed, std::size_t n) {
    return examples(tasks::generate(tasks::parse_task(task), seed, n));
  });
  m.def("label_of", [](const std::string& task, const std::string& prompt) {
    return tasks::label_of(tasks::parse_task(task), prompt);
  });
  m.def("make_split", [](const std::string& task, std::uint64_t seed, std::size_t train, std::size_t test) {
    const auto s = tasks::make_split(tasks::parse_task(task), seed, train, test);
    return py::make_tuple(examples(s.train), examples(s.test));
  });
  py::class_<tasks::TaskClassifier>(m, "TaskClassifier")
      .def("predict", &tasks::TaskClassifier::predict)
      .def("evaluate", [](const tasks::TaskClassifier& c, const std::vector<std::pair<std::string, std::string>>& xs) {
        return tasks::eval_task(c, from_examples(xs));
      });
  m.def(
      "train_task_classifier",
      [](const std::string& task, const std::vector<std::pair<std::string, std::string>>& train,
         const py::object& params) {
        return tasks::train_task_classifier(tasks::parse_task(task), from_examples(train),
                                            tasks::classifier_params_from_json(from_python(params)));
      },
      py::arg("task"), py::arg("train"), py::arg("params") = py::none());
}
