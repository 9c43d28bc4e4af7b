#include "ardt/lm/vocabulary.hpp"

#include <algorithm>
#include <fstream>
#include <map>

namespace ardt::lm {

Vocabulary::Vocabulary() {
  add(kPadWord);
  add(kUnkWord);
}

Vocabulary Vocabulary::build(std::span<const std::vector<std::string>> documents,
                             std::size_t min_count, std::size_t max_size) {
  std::map<std::string, std::size_t> counts;
  for (const auto& doc : documents) {
    for (const auto& w : doc) ++counts[w];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked;
  std::size_t unknown = 0;
  for (auto& [w, c] : counts) {
    if (w == kPadWord || w == kUnkWord) {
      unknown += c;
    } else if (c >= std::max<std::size_t>(min_count, 1)) {
      ranked.emplace_back(w, c);
    } else {
      unknown += c;
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (max_size > 0) {
    const std::size_t keep = max_size > kReserved ? max_size - kReserved : 0;
    for (std::size_t i = keep; i < ranked.size(); ++i) unknown += ranked[i].second;
    if (ranked.size() > keep) ranked.resize(keep);
  }
  Vocabulary vocab;
  vocab.counts_[kUnk] = unknown;
  for (const auto& [w, c] : ranked) vocab.add(w, c);
  return vocab;
}

TokenId Vocabulary::add(const std::string& word, std::size_t count) {
  if (auto it = index_.find(word); it != index_.end()) {
    counts_[it->second] += count;
    return it->second;
  }
  const auto id = static_cast<TokenId>(words_.size());
  words_.push_back(word);
  counts_.push_back(count);
  index_.emplace(word, id);
  return id;
}

std::optional<TokenId> Vocabulary::find(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::id(const std::string& word) const { return find(word).value_or(kUnk); }

const std::string& Vocabulary::word(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= words_.size()) {
    throw InvalidArgument("token id " + std::to_string(id) + " outside vocabulary of size " +
                          std::to_string(words_.size()));
  }
  return words_[id];
}

std::size_t Vocabulary::count(TokenId id) const {
  word(id);
  return counts_[id];
}

std::vector<TokenId> Vocabulary::encode(std::span<const std::string> words) const {
  std::vector<TokenId> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(id(w));
  return out;
}

std::vector<std::string> Vocabulary::decode(std::span<const TokenId> ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (TokenId t : ids) out.push_back(word(t));
  return out;
}

TokenId Vocabulary::most_frequent() const {
  if (words_.size() <= kReserved) throw InvalidArgument("vocabulary has no ordinary words");
  TokenId best = static_cast<TokenId>(kReserved);
  for (std::size_t i = kReserved; i < words_.size(); ++i) {
    if (counts_[i] > counts_[best]) best = static_cast<TokenId>(i);
  }
  return best;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (std::size_t i = 0; i < words_.size(); ++i) out << words_[i] << '\t' << counts_[i] << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  Vocabulary vocab;
  vocab.words_.clear();
  vocab.counts_.clear();
  vocab.index_.clear();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (tab == std::string::npos || tab == 0) throw ParseError(where + ": expected word<TAB>count");
    std::size_t count = 0;
    try {
      std::size_t used = 0;
      count = std::stoull(line.substr(tab + 1), &used);
      if (used != line.size() - tab - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(where + ": bad count");
    }
    const std::string w = line.substr(0, tab);
    if (vocab.index_.count(w)) throw ParseError(where + ": duplicate word '" + w + "'");
    vocab.add(w, count);
  }
  if (vocab.words_.size() < kReserved || vocab.words_[kPad] != kPadWord ||
      vocab.words_[kUnk] != kUnkWord) {
    throw ParseError(path.string() + ": the first two entries must be " + kPadWord + " and " +
                     kUnkWord);
  }
  return vocab;
}

}  // namespace ardt::lm
