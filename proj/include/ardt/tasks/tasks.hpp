#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace ardt::tasks {

enum class Task { kBoolean, kNavigate, kWebOfLies };

// "bool", "navigate", "weboflies".
Task parse_task(const std::string& name);
std::string task_name(Task task);
// (positive, negative) answer words: True/False or Yes/No.
std::pair<std::string, std::string> answers(Task task);

struct TaskExample {
  std::string prompt;
  std::string label;
  std::uint64_t seed = 0;  // seed of the draw that produced this example
};

inline constexpr int kGeneratorVersion = 1;

// Expressions over True/False with not/and/or and parentheses, nesting depth
// at most 3, written with spaced parentheses: "not ( True ) and ( True ) is".
std::vector<TaskExample> gen_boolean(std::uint64_t seed, std::size_t n);
// Instruction lists in one of two modes (turning, or always-face-forward with
// sideways steps); label is whether the walk ends at the origin.
std::vector<TaskExample> gen_navigate(std::uint64_t seed, std::size_t n);
// Chains "A tells the truth. B says A lies. ... Does X tell the truth?".
std::vector<TaskExample> gen_web_of_lies(std::uint64_t seed, std::size_t n);
// Labels alternate positive/negative, so sets are balanced to within one.
std::vector<TaskExample> generate(Task task, std::uint64_t seed, std::size_t n);

// Evaluators that read the prompt text; generators label with them.
// Throw ParseError on text outside the generator's grammar.
bool eval_boolean_text(const std::string& prompt);
bool eval_navigate_text(const std::string& prompt);
bool eval_web_of_lies_text(const std::string& prompt);
std::string label_of(Task task, const std::string& prompt);

// "prompt<TAB>label" per line.
void save_examples(const std::filesystem::path& path, const std::vector<TaskExample>& examples);
std::vector<TaskExample> load_examples(const std::filesystem::path& path);

struct Manifest {
  Task task = Task::kBoolean;
  std::uint64_t seed = 0;
  std::size_t train = 0;
  std::size_t test = 0;
  int generator_version = kGeneratorVersion;
};
nlohmann::json to_json(const Manifest& manifest);
Manifest manifest_from_json(const nlohmann::json& doc);

struct Split {
  std::vector<TaskExample> train;
  std::vector<TaskExample> test;
};

// Draws train and test sets from independent streams of `seed`. Test prompts
// are distinct from each other and from every training prompt.
Split make_split(Task task, std::uint64_t seed, std::size_t train, std::size_t test);

// Writes train.tsv, test.tsv and manifest.json into `dir`.
void write_split(const std::filesystem::path& dir, const Manifest& manifest, const Split& split);

}  // namespace ardt::tasks
