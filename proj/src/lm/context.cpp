#include "ardt/lm/context.hpp"

#include <string>

namespace ardt::lm {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("decay alpha must lie strictly between 0 and 1, got " + std::to_string(alpha));
  }
}

std::vector<double> aggregate(std::span<const TokenId> context, const TokenEmbedding& psi,
                              double alpha, DecayConvention convention) {
  check_alpha(alpha);
  std::vector<double> v(psi.dim(), 0.0);
  for (TokenId t : context) update(v, t, psi, alpha);
  if (convention == DecayConvention::kClosedForm) {
    for (double& x : v) x *= alpha;
  }
  return v;
}

void update(std::span<double> v, TokenId token, const TokenEmbedding& psi, double alpha) {
  check_alpha(alpha);
  if (v.size() != psi.dim()) {
    throw DimensionError("context vector has " + std::to_string(v.size()) + " entries, embedding " +
                         std::to_string(psi.dim()));
  }
  auto e = psi[token];
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = alpha * v[i] + e[i];
}

}  // namespace ardt::lm
