#include "ardt/lm/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace ardt::lm {

void EmbeddingTable::validate() const {
  if (vectors.size() != vocabulary.size()) {
    throw DimensionError("embedding has " + std::to_string(vectors.size()) + " rows for " +
                         std::to_string(vocabulary.size()) + " words");
  }
  for (std::size_t t = 0; t < vectors.size(); ++t) {
    double norm = 0.0;
    for (double v : vectors[static_cast<TokenId>(t)]) {
      if (!std::isfinite(v)) throw InvalidArgument("non-finite embedding entry for '" + vocabulary.word(t) + "'");
      norm += v * v;
    }
    if (t != Vocabulary::kPad && norm == 0.0) {
      throw InvalidArgument("zero embedding for '" + vocabulary.word(static_cast<TokenId>(t)) + "'");
    }
  }
}

void save_embeddings(const std::filesystem::path& path, const EmbeddingTable& table) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t t = 0; t < table.vectors.size(); ++t) {
    out << table.vocabulary.word(static_cast<TokenId>(t));
    for (double v : table.vectors[static_cast<TokenId>(t)]) out << ' ' << v;
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  Vocabulary vocab;
  std::vector<std::vector<double>> rows(Vocabulary::kReserved);
  bool have_unk = false;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    std::vector<double> values;
    std::string token;
    while (fields >> token) {
      double v = 0.0;
      const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc() || end != token.data() + token.size()) {
        throw ParseError(where + ": '" + token + "' is not a number");
      }
      values.push_back(v);
    }
    if (values.empty()) throw ParseError(where + ": expected a word followed by its vector");
    if (dim == 0) dim = values.size();
    if (values.size() != dim) {
      throw ParseError(where + ": vector has " + std::to_string(values.size()) +
                       " values, earlier lines have " + std::to_string(dim));
    }
    if (vocab.find(word) && !(word == Vocabulary::kPadWord || word == Vocabulary::kUnkWord)) {
      throw ParseError(where + ": duplicate word '" + word + "'");
    }
    const TokenId id = vocab.add(word);
    if (static_cast<std::size_t>(id) >= rows.size()) rows.resize(id + 1);
    if (id == Vocabulary::kUnk) have_unk = true;
    rows[id] = std::move(values);
  }
  if (dim == 0) throw ParseError(path.string() + ": no embedding lines");

  Matrix table(rows.size(), dim);
  for (std::size_t t = Vocabulary::kReserved; t < rows.size(); ++t) {
    std::copy(rows[t].begin(), rows[t].end(), table.row(t).begin());
  }
  if (!rows[Vocabulary::kPad].empty()) {
    std::copy(rows[0].begin(), rows[0].end(), table.row(0).begin());
  }
  if (have_unk) {
    std::copy(rows[1].begin(), rows[1].end(), table.row(1).begin());
  } else if (rows.size() > Vocabulary::kReserved) {
    for (std::size_t t = Vocabulary::kReserved; t < rows.size(); ++t) {
      for (std::size_t c = 0; c < dim; ++c) table(1, c) += table(t, c);
    }
    for (std::size_t c = 0; c < dim; ++c) table(1, c) /= static_cast<double>(rows.size() - 2);
  }
  return EmbeddingTable{std::move(vocab), TokenEmbedding(std::move(table))};
}

namespace {

double sigmoid(double x) {
  if (x > 30) return 1.0;
  if (x < -30) return 0.0;
  return 1.0 / (1.0 + std::exp(-x));
}

}  // namespace

Word2VecResult train_embeddings(std::span<const std::vector<std::string>> documents,
                                const Word2VecParams& params) {
  if (params.epochs == 0) throw InvalidArgument("word2vec needs at least one epoch");
  if (params.dim == 0) throw InvalidArgument("embedding dimension must be positive");
  if (params.window == 0) throw InvalidArgument("context window must be positive");
  if (!(params.learning_rate > 0)) throw InvalidArgument("learning rate must be positive");
  std::size_t total_tokens = 0;
  for (const auto& d : documents) total_tokens += d.size();
  if (total_tokens == 0) throw InvalidArgument("corpus is empty");

  Vocabulary vocab = Vocabulary::build(documents, params.min_count);
  if (vocab.size() - Vocabulary::kReserved < kMinTrainableWords) {
    throw InvalidArgument("vocabulary has " + std::to_string(vocab.size() - Vocabulary::kReserved) +
                          " words, need at least " + std::to_string(kMinTrainableWords));
  }
  std::vector<std::vector<TokenId>> corpus;
  for (const auto& d : documents) corpus.push_back(vocab.encode(d));

  const std::size_t V = vocab.size();
  const std::size_t dim = params.dim;
  std::mt19937_64 rng(params.seed);

  Matrix in(V, dim), out(V, dim);
  {
    std::uniform_real_distribution<double> init(-0.5 / dim, 0.5 / dim);
    for (double& v : in.flat()) v = init(rng);
  }

  // Unigram^0.75 table over ids with non-zero counts.
  std::vector<double> weights(V, 0.0);
  for (std::size_t t = Vocabulary::kReserved; t < V; ++t) {
    weights[t] = std::pow(static_cast<double>(vocab.count(static_cast<TokenId>(t))), 0.75);
  }
  if (vocab.count(Vocabulary::kUnk) > 0) {
    weights[Vocabulary::kUnk] = std::pow(static_cast<double>(vocab.count(Vocabulary::kUnk)), 0.75);
  }
  std::discrete_distribution<int> negative(weights.begin(), weights.end());

  const double start_lr = params.learning_rate;
  const double total_steps = static_cast<double>(total_tokens * params.epochs);
  double step = 0;
  std::vector<double> grad(dim);
  std::uniform_int_distribution<std::size_t> shrink(0, params.window - 1);

  Word2VecResult result;
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    double loss = 0.0;
    std::size_t pairs = 0;
    for (const auto& doc : corpus) {
      for (std::size_t i = 0; i < doc.size(); ++i, ++step) {
        const double lr = start_lr * std::max(1e-4, 1.0 - step / total_steps);
        const std::size_t reach = params.window - shrink(rng);
        const std::size_t lo = i >= reach ? i - reach : 0;
        const std::size_t hi = std::min(doc.size() - 1, i + reach);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          auto centre = in.row(doc[j]);
          std::fill(grad.begin(), grad.end(), 0.0);
          for (std::size_t s = 0; s <= params.negatives; ++s) {
            TokenId target = doc[i];
            double label = 1.0;
            if (s > 0) {
              target = negative(rng);
              if (target == doc[i]) continue;
              label = 0.0;
            }
            auto ctx = out.row(target);
            double dot = 0.0;
            for (std::size_t c = 0; c < dim; ++c) dot += centre[c] * ctx[c];
            const double p = sigmoid(dot);
            loss -= label > 0 ? std::log(std::max(p, 1e-12)) : std::log(std::max(1.0 - p, 1e-12));
            const double g = lr * (label - p);
            for (std::size_t c = 0; c < dim; ++c) {
              grad[c] += g * ctx[c];
              ctx[c] += g * centre[c];
            }
          }
          for (std::size_t c = 0; c < dim; ++c) centre[c] += grad[c];
          ++pairs;
        }
      }
    }
    result.epoch_loss.push_back(pairs ? loss / static_cast<double>(pairs) : 0.0);
  }

  for (std::size_t c = 0; c < dim; ++c) in(Vocabulary::kPad, c) = 0.0;
  result.table = EmbeddingTable{std::move(vocab), TokenEmbedding(std::move(in))};
  return result;
}

double cosine(const TokenEmbedding& e, TokenId a, TokenId b) {
  auto x = e[a];
  auto y = e[b];
  double dot = 0, nx = 0, ny = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  if (nx == 0 || ny == 0) return 0.0;
  return dot / std::sqrt(nx * ny);
}

}  // namespace ardt::lm
