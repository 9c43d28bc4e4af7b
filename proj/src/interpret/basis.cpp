#include "ardt/interpret/basis.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace ardt::interpret {

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  }
  return out;
}

Matrix from_eigen(const Eigen::MatrixXd& m) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  }
  return out;
}

void require_full_rank(const Eigen::MatrixXd& columns) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> pivoted(columns);
  const auto rank = pivoted.rank();
  if (rank < columns.cols()) {
    throw RankError("basis of " + std::to_string(columns.cols()) + " vectors has rank " +
                        std::to_string(rank),
                    static_cast<long>(rank));
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

Matrix orthogonalize(const Matrix& c) {
  if (c.rows() == 0 || c.rows() > c.cols()) {
    throw DimensionError("need 1 <= k <= d to orthogonalize a k x d matrix, got " +
                         std::to_string(c.rows()) + " x " + std::to_string(c.cols()));
  }
  const Eigen::MatrixXd ct = to_eigen(c).transpose();
  require_full_rank(ct);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(ct);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(ct.rows(), ct.cols());
  return from_eigen(q.transpose());
}

Projection::Projection(const Matrix& basis_vectors) : k_(basis_vectors.rows()), d_(basis_vectors.cols()) {
  if (k_ == 0 || k_ > d_) {
    throw DimensionError("need 1 <= k <= d basis vectors, got " + std::to_string(k_) + " in dimension " +
                         std::to_string(d_));
  }
  const Eigen::MatrixXd bt = to_eigen(basis_vectors).transpose();
  require_full_rank(bt);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(bt);
  q_ = qr.householderQ() * Eigen::MatrixXd::Identity(d_, k_);
  r_ = qr.matrixQR().topRows(k_).triangularView<Eigen::Upper>();
}

std::vector<double> Projection::operator()(std::span<const double> v) const {
  if (v.size() != d_) {
    throw DimensionError("vector has " + std::to_string(v.size()) + " entries, basis dimension " +
                         std::to_string(d_));
  }
  const Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Eigen::Index>(d_));
  const Eigen::VectorXd z = r_.triangularView<Eigen::Upper>().solve(q_.transpose() * x);
  return std::vector<double>(z.data(), z.data() + z.size());
}

Matrix Projection::apply(const Matrix& rows) const {
  Matrix out(rows.rows(), k_);
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    const auto z = (*this)(rows.row(r));
    std::copy(z.begin(), z.end(), out.row(r).begin());
  }
  return out;
}

Matrix ClusterBasis::word_vectors(const TokenEmbedding& psi) const {
  Matrix b(0, psi.dim());
  for (TokenId w : words) b.append_row(psi[w]);
  return b;
}

ClusterBasis build_cluster_basis(const TokenEmbedding& psi, const KMeansParams& params,
                                 TokenId first_word) {
  if (first_word < 0 || static_cast<std::size_t>(first_word) >= psi.size()) {
    throw InvalidArgument("no words to cluster");
  }
  Matrix points(0, psi.dim());
  for (auto t = static_cast<std::size_t>(first_word); t < psi.size(); ++t) {
    points.append_row(psi[static_cast<TokenId>(t)]);
  }
  KMeansResult clusters = kmeans(points, params);

  ClusterBasis basis;
  basis.centers = clusters.centers;
  std::vector<bool> used(points.rows(), false);
  for (std::size_t c = 0; c < params.k; ++c) {
    std::size_t best = points.rows();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.rows(); ++i) {
      if (used[i]) continue;
      const double dist = squared_distance(points.row(i), basis.centers.row(c));
      if (dist < best_d) {
        best_d = dist;
        best = i;
      }
    }
    used[best] = true;
    basis.words.push_back(static_cast<TokenId>(best) + first_word);
  }
  basis.orthonormal = orthogonalize(basis.word_vectors(psi));
  return basis;
}

TokenEmbedding project_embeddings(const TokenEmbedding& psi, const std::vector<TokenId>& basis_words) {
  Matrix b(0, psi.dim());
  for (TokenId w : basis_words) b.append_row(psi[w]);
  return TokenEmbedding(Projection(b).apply(psi.table()));
}

std::vector<ClusterSummary> cluster_report(const TokenEmbedding& psi, const ClusterBasis& basis,
                                           std::size_t neighbours, TokenId first_word) {
  std::vector<ClusterSummary> report;
  for (std::size_t c = 0; c < basis.words.size(); ++c) {
    std::vector<TokenId> order;
    for (auto t = static_cast<std::size_t>(first_word); t < psi.size(); ++t) {
      if (static_cast<TokenId>(t) != basis.words[c]) order.push_back(static_cast<TokenId>(t));
    }
    auto center = basis.centers.row(c);
    const std::size_t take = std::min(neighbours, order.size());
    std::partial_sort(order.begin(), order.begin() + take, order.end(), [&](TokenId a, TokenId b) {
      const double da = squared_distance(psi[a], center);
      const double db = squared_distance(psi[b], center);
      return da < db || (da == db && a < b);
    });
    order.resize(take);
    report.push_back(ClusterSummary{c, basis.words[c], std::move(order)});
  }
  return report;
}

}  // namespace ardt::interpret
