#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ardt::lm {

// Lowercases ASCII letters and splits into words and single punctuation
// marks. A word is a run of ASCII letters and digits plus any non-ASCII
// bytes; an apostrophe between two word characters stays inside the word
// ("didn't"). Every other non-space character is a token of its own.
std::vector<std::string> tokenize(std::string_view text);

// Joins with single spaces, attaching closing punctuation to the previous
// token. tokenize(detokenize(t)) == t for any output t of tokenize.
std::string detokenize(std::span<const std::string> tokens);

// Documents are separated by blank lines.
std::vector<std::string> split_documents(std::string_view text);
std::vector<std::string> read_corpus(const std::filesystem::path& path);
std::vector<std::vector<std::string>> tokenize_documents(std::span<const std::string> documents);

}  // namespace ardt::lm
