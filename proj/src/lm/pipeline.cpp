#include "ardt/lm/pipeline.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "ardt/lm/context.hpp"

namespace ardt::lm {

Dataset build_dataset(std::span<const std::vector<TokenId>> documents, const TokenEmbedding& psi,
                      double alpha, const DatasetParams& params) {
  check_alpha(alpha);
  if (params.min_context < 1 || params.max_context < params.min_context) {
    throw InvalidArgument("need 1 <= min_context <= max_context");
  }
  if (params.stride < 1) throw InvalidArgument("stride must be positive");

  std::mt19937_64 rng(params.seed);
  Dataset data{Matrix(0, psi.dim()), Matrix(0, psi.dim()), {}};
  std::vector<double> row(psi.dim());
  for (const auto& doc : documents) {
    for (std::size_t p = params.min_context; p < doc.size(); p += params.stride) {
      const std::size_t hi = std::min(params.max_context, p);
      const std::size_t len =
          std::uniform_int_distribution<std::size_t>(params.min_context, hi)(rng);
      std::fill(row.begin(), row.end(), 0.0);
      for (std::size_t i = p - len; i < p; ++i) update(row, doc[i], psi, alpha);
      data.x.append_row(row);
      data.y.append_row(psi[doc[p]]);
      data.targets.push_back(doc[p]);
    }
  }
  if (params.max_samples > 0 && data.targets.size() > params.max_samples) {
    std::vector<std::size_t> keep(data.targets.size());
    std::iota(keep.begin(), keep.end(), 0);
    std::shuffle(keep.begin(), keep.end(), rng);
    keep.resize(params.max_samples);
    std::sort(keep.begin(), keep.end());
    Dataset sub{Matrix(0, psi.dim()), Matrix(0, psi.dim()), {}};
    for (std::size_t r : keep) {
      sub.x.append_row(data.x.row(r));
      sub.y.append_row(data.y.row(r));
      sub.targets.push_back(data.targets[r]);
    }
    return sub;
  }
  return data;
}

TokenId nearest_token(const TokenEmbedding& psi, std::span<const double> u, TokenId first) {
  if (u.size() != psi.dim()) {
    throw DimensionError("query has " + std::to_string(u.size()) + " entries, embedding " +
                         std::to_string(psi.dim()));
  }
  if (first < 0 || static_cast<std::size_t>(first) >= psi.size()) {
    throw InvalidArgument("no decodable tokens");
  }
  TokenId best = first;
  double best_dist = std::numeric_limits<double>::infinity();
  for (auto t = first; static_cast<std::size_t>(t) < psi.size(); ++t) {
    auto e = psi[t];
    double dist = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) dist += (e[i] - u[i]) * (e[i] - u[i]);
    if (dist < best_dist) {
      best_dist = dist;
      best = t;
    }
  }
  return best;
}

std::vector<TokenId> generate(const RegressionEnsemble& model, const TokenEmbedding& psi,
                              std::span<const TokenId> prompt, std::size_t steps, double alpha) {
  check_alpha(alpha);
  if (prompt.empty()) throw InvalidArgument("prompt is empty");
  if (model.input_dim() != psi.dim() || model.output_dim() != psi.dim()) {
    throw DimensionError("model and embedding dimensions differ");
  }
  std::vector<double> v(psi.dim(), 0.0);
  for (TokenId t : prompt) update(v, t, psi, alpha);
  std::vector<TokenId> out;
  out.reserve(steps);
  std::vector<double> u(psi.dim());
  for (std::size_t s = 0; s < steps; ++s) {
    model.predict(v, u);
    const TokenId next = nearest_token(psi, u, kFirstDecodable);
    out.push_back(next);
    update(v, next, psi, alpha);
  }
  return out;
}

LmMetrics evaluate_lm(const RegressionEnsemble& model, const TokenEmbedding& psi,
                      const Dataset& held_out) {
  LmMetrics m;
  m.samples = held_out.targets.size();
  if (m.samples == 0) return m;
  std::vector<double> u(psi.dim());
  std::size_t hits = 0;
  double sq = 0.0;
  for (std::size_t r = 0; r < m.samples; ++r) {
    model.predict(held_out.x.row(r), u);
    if (nearest_token(psi, u, kFirstDecodable) == held_out.targets[r]) ++hits;
    auto y = held_out.y.row(r);
    for (std::size_t c = 0; c < u.size(); ++c) sq += (u[c] - y[c]) * (u[c] - y[c]);
  }
  m.accuracy = static_cast<double>(hits) / static_cast<double>(m.samples);
  m.mse = sq / static_cast<double>(m.samples * psi.dim());
  return m;
}

double constant_baseline_accuracy(const Dataset& held_out, TokenId token) {
  if (held_out.targets.empty()) return 0.0;
  const auto hits = std::count(held_out.targets.begin(), held_out.targets.end(), token);
  return static_cast<double>(hits) / static_cast<double>(held_out.targets.size());
}

}  // namespace ardt::lm
