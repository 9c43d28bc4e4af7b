#pragma once

#include <cstddef>
#include <span>

#include "ardt/core/matrix.hpp"

namespace ardt {

// Token id -> d-dimensional vector. Row t of the table is the embedding of
// token t; ids are dense in [0, size()).
class TokenEmbedding {
 public:
  TokenEmbedding() = default;
  explicit TokenEmbedding(Matrix table) : table_(std::move(table)) {}

  std::size_t size() const noexcept { return table_.rows(); }
  std::size_t dim() const noexcept { return table_.cols(); }

  bool contains(TokenId token) const noexcept {
    return token >= 0 && static_cast<std::size_t>(token) < table_.rows();
  }

  std::span<const double> operator[](TokenId token) const {
    if (!contains(token)) {
      throw InvalidArgument("token id " + std::to_string(token) + " outside embedding of size " +
                            std::to_string(size()));
    }
    return table_.row(static_cast<std::size_t>(token));
  }

  const Matrix& table() const noexcept { return table_; }

 private:
  Matrix table_;
};

}  // namespace ardt
