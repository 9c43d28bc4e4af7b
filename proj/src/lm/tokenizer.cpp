#include "ardt/lm/tokenizer.hpp"

#include <fstream>
#include <sstream>

#include "ardt/error.hpp"

namespace ardt::lm {

namespace {

bool word_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

bool space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char lower(unsigned char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool closing(const std::string& t) {
  return t == "." || t == "," || t == "!" || t == "?" || t == ";" || t == ":" || t == ")" ||
         t == "]" || t == "}";
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) out.push_back(std::move(word));
    word.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (word_char(c)) {
      word.push_back(lower(c));
    } else if (c == '\'' && !word.empty() && i + 1 < text.size() &&
               word_char(static_cast<unsigned char>(text[i + 1]))) {
      word.push_back('\'');
    } else {
      flush();
      if (!space(c)) out.emplace_back(1, static_cast<char>(c));
    }
  }
  flush();
  return out;
}

std::string detokenize(std::span<const std::string> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty() && !closing(t)) out.push_back(' ');
    out += t;
  }
  return out;
}

std::vector<std::string> split_documents(std::string_view text) {
  std::vector<std::string> docs;
  std::string current;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    bool blank = true;
    for (char c : line) blank = blank && space(static_cast<unsigned char>(c));
    if (blank) {
      if (!current.empty()) docs.push_back(std::move(current));
      current.clear();
    } else {
      if (!current.empty()) current.push_back('\n');
      current.append(line);
    }
    start = end + 1;
  }
  if (!current.empty()) docs.push_back(std::move(current));
  return docs;
}

std::vector<std::string> read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read corpus " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return split_documents(buffer.str());
}

std::vector<std::vector<std::string>> tokenize_documents(std::span<const std::string> documents) {
  std::vector<std::vector<std::string>> out;
  out.reserve(documents.size());
  for (const auto& d : documents) out.push_back(tokenize(d));
  return out;
}

}  // namespace ardt::lm
