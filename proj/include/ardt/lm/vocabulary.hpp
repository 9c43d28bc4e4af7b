#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ardt/core/matrix.hpp"

namespace ardt::lm {

// Word <-> id map with frequency counts. Ids 0 and 1 are always PAD and UNK.
class Vocabulary {
 public:
  static constexpr TokenId kPad = 0;
  static constexpr TokenId kUnk = 1;
  static constexpr std::size_t kReserved = 2;
  static inline const std::string kPadWord = "<pad>";
  static inline const std::string kUnkWord = "<unk>";

  Vocabulary();

  // Words seen at least `min_count` times, most frequent first (ties by word),
  // capped at `max_size` entries including the reserved ones (0 = no cap).
  // Occurrences of dropped words are counted towards UNK.
  static Vocabulary build(std::span<const std::vector<std::string>> documents,
                          std::size_t min_count = 1, std::size_t max_size = 0);

  // Adds `word` (or increases its count) and returns its id.
  TokenId add(const std::string& word, std::size_t count = 0);

  std::optional<TokenId> find(const std::string& word) const;
  // UNK when absent.
  TokenId id(const std::string& word) const;
  const std::string& word(TokenId id) const;
  std::size_t count(TokenId id) const;
  std::size_t size() const noexcept { return words_.size(); }

  std::vector<TokenId> encode(std::span<const std::string> words) const;
  std::vector<std::string> decode(std::span<const TokenId> ids) const;

  // Most frequent non-reserved token, lowest id on ties.
  TokenId most_frequent() const;

  // One "word<TAB>count" line per id, in id order.
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  bool operator==(const Vocabulary& other) const {
    return words_ == other.words_ && counts_ == other.counts_;
  }

 private:
  std::vector<std::string> words_;
  std::vector<std::size_t> counts_;
  std::unordered_map<std::string, TokenId> index_;
};

}  // namespace ardt::lm
