#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ardt/core/matrix.hpp"
#include "ardt/core/token_embedding.hpp"
#include "ardt/interpret/kmeans.hpp"

namespace ardt::interpret {

// Orthonormal rows spanning the row space of `c` (k x d, k <= d), from a
// Householder QR of c^T. Throws RankError when c has rank below k.
Matrix orthogonalize(const Matrix& c);

// Least-squares coordinates in a basis of k word vectors:
//   phi(v) = argmin_z || B^T z - v ||_2,  B = k x d basis-word embeddings.
class Projection {
 public:
  explicit Projection(const Matrix& basis_vectors);

  std::size_t rank() const noexcept { return k_; }
  std::size_t input_dim() const noexcept { return d_; }

  std::vector<double> operator()(std::span<const double> v) const;
  // Projects every row.
  Matrix apply(const Matrix& rows) const;

 private:
  std::size_t k_;
  std::size_t d_;
  Eigen::MatrixXd q_;  // d x k, orthonormal columns
  Eigen::MatrixXd r_;  // k x k upper triangular
};

// Cluster centers, the word nearest each center and the orthonormalized span
// of those words' vectors.
struct ClusterBasis {
  Matrix centers;
  std::vector<TokenId> words;
  Matrix orthonormal;

  Matrix word_vectors(const TokenEmbedding& psi) const;
};

// Clusters the embeddings of ids >= first_word. Each center is represented by
// the nearest of those words not already chosen for an earlier center.
ClusterBasis build_cluster_basis(const TokenEmbedding& psi, const KMeansParams& params,
                                 TokenId first_word = 2);

// Table of phi(psi(t)) for every token t.
TokenEmbedding project_embeddings(const TokenEmbedding& psi, const std::vector<TokenId>& basis_words);

struct ClusterSummary {
  std::size_t cluster;
  TokenId representative;
  std::vector<TokenId> neighbours;  // closest words to the center after the representative
};

std::vector<ClusterSummary> cluster_report(const TokenEmbedding& psi, const ClusterBasis& basis,
                                           std::size_t neighbours = 4, TokenId first_word = 2);

}  // namespace ardt::interpret
