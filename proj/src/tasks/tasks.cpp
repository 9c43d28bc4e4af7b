#include "ardt/tasks/tasks.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "ardt/core/model_io.hpp"
#include "ardt/error.hpp"
#include "ardt/lm/tokenizer.hpp"

namespace ardt::tasks {

Task parse_task(const std::string& name) {
  if (name == "bool" || name == "boolean") return Task::kBoolean;
  if (name == "navigate") return Task::kNavigate;
  if (name == "weboflies" || name == "web-of-lies") return Task::kWebOfLies;
  throw InvalidArgument("unknown task '" + name + "' (expected bool, navigate or weboflies)");
}

std::string task_name(Task task) {
  switch (task) {
    case Task::kBoolean: return "bool";
    case Task::kNavigate: return "navigate";
    case Task::kWebOfLies: return "weboflies";
  }
  return "?";
}

std::pair<std::string, std::string> answers(Task task) {
  if (task == Task::kBoolean) return {"True", "False"};
  return {"Yes", "No"};
}

namespace {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// ---- boolean expressions -------------------------------------------------

std::string boolean_expr(Rng& rng, int depth) {
  const int pick = depth == 0 ? uniform(rng, 0, 1) : uniform(rng, 0, 5);
  switch (pick) {
    case 0: return "True";
    case 1: return "False";
    case 2: return "not " + boolean_expr(rng, depth - 1);
    case 3: return "( " + boolean_expr(rng, depth - 1) + " )";
    case 4: return boolean_expr(rng, depth - 1) + " and " + boolean_expr(rng, depth - 1);
    default: return boolean_expr(rng, depth - 1) + " or " + boolean_expr(rng, depth - 1);
  }
}

// Precedence: not > and > or.
class BoolParser {
 public:
  explicit BoolParser(std::vector<std::string> tokens) : t_(std::move(tokens)) {}

  bool parse() {
    const bool v = disjunction();
    if (i_ != t_.size()) fail();
    return v;
  }

 private:
  bool disjunction() {
    bool v = conjunction();
    while (peek("or")) {
      ++i_;
      const bool rhs = conjunction();
      v = v || rhs;
    }
    return v;
  }
  bool conjunction() {
    bool v = negation();
    while (peek("and")) {
      ++i_;
      const bool rhs = negation();
      v = v && rhs;
    }
    return v;
  }
  bool negation() {
    if (peek("not")) {
      ++i_;
      return !negation();
    }
    return atom();
  }
  bool atom() {
    if (peek("true")) return ++i_, true;
    if (peek("false")) return ++i_, false;
    if (peek("(")) {
      ++i_;
      const bool v = disjunction();
      if (!peek(")")) fail();
      ++i_;
      return v;
    }
    fail();
    return false;
  }
  bool peek(const char* s) const { return i_ < t_.size() && t_[i_] == s; }
  [[noreturn]] void fail() const {
    throw ParseError("malformed boolean expression at token " + std::to_string(i_));
  }

  std::vector<std::string> t_;
  std::size_t i_ = 0;
};

// ---- navigate -----------------------------------------------------------

const char* kNavigateQuestion = "If you follow these instructions, do you return to the starting point?";

std::string steps_phrase(int n) { return "Take " + std::to_string(n) + (n == 1 ? " step" : " steps"); }

std::string navigate_prompt(Rng& rng) {
  std::string text = kNavigateQuestion;
  const int count = uniform(rng, 2, 6);
  if (uniform(rng, 0, 1) == 0) {
    text += " Always face forward.";
    static const char* dirs[] = {"forward", "backward", "left", "right"};
    for (int i = 0; i < count; ++i) {
      text += " " + steps_phrase(uniform(rng, 1, 5)) + " " + dirs[uniform(rng, 0, 3)] + ".";
    }
  } else {
    static const char* turns[] = {"Turn left.", "Turn right.", "Turn around."};
    for (int i = 0; i < count; ++i) {
      if (uniform(rng, 0, 2) == 0) {
        text += std::string(" ") + turns[uniform(rng, 0, 2)];
      } else {
        text += " " + steps_phrase(uniform(rng, 1, 5)) + ".";
      }
    }
  }
  return text;
}

// A walk that returns: a random prefix followed by the moves that undo it.
std::string navigate_returning_prompt(Rng& rng) {
  std::string text = kNavigateQuestion;
  text += " Always face forward.";
  static const char* dirs[] = {"forward", "backward", "left", "right"};
  static const int opposite[] = {1, 0, 3, 2};
  const int half = uniform(rng, 1, 3);
  std::vector<std::pair<int, int>> moves;
  for (int i = 0; i < half; ++i) {
    const int d = uniform(rng, 0, 3);
    const int n = uniform(rng, 1, 5);
    moves.emplace_back(d, n);
    moves.emplace_back(opposite[d], n);
  }
  std::shuffle(moves.begin(), moves.end(), rng);
  for (auto [d, n] : moves) text += " " + steps_phrase(n) + " " + dirs[d] + ".";
  return text;
}

// ---- web of lies ---------------------------------------------------------

const std::vector<std::string> kPeople = {"Delbert", "Delfina", "Antwan", "Fidel", "Sherrie",
                                          "Jerry",   "Jamey",   "Raymond", "Millicent", "Vina",
                                          "Kristian", "Ka"};

std::string web_prompt(Rng& rng) {
  const int count = uniform(rng, 3, 5);
  std::vector<std::string> people = kPeople;
  std::shuffle(people.begin(), people.end(), rng);
  std::string text = people[0] + (uniform(rng, 0, 1) ? " tells the truth." : " lies.");
  for (int i = 1; i < count; ++i) {
    text += " " + people[i] + " says " + people[i - 1] +
            (uniform(rng, 0, 1) ? " tells the truth." : " lies.");
  }
  text += " Does " + people[count - 1] + " tell the truth?";
  return text;
}

std::vector<std::string> sentences(const std::string& text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    current.push_back(c);
    if (c == '.' || c == '?') {
      const auto start = current.find_first_not_of(' ');
      out.push_back(current.substr(start));
      current.clear();
    }
  }
  if (current.find_first_not_of(' ') != std::string::npos) {
    throw ParseError("unterminated sentence: '" + current + "'");
  }
  return out;
}

using PromptMaker = std::string (*)(Rng&);

std::vector<TaskExample> balanced(Task task, std::uint64_t seed, std::size_t n,
                                  PromptMaker make, PromptMaker make_positive = nullptr) {
  Rng rng(seed);
  std::vector<TaskExample> out;
  const auto [yes, no] = answers(task);
  std::uint64_t draw = 0;
  while (out.size() < n) {
    const bool want_positive = out.size() % 2 == 0;
    // Each attempt reseeds from the stream so every example is reproducible
    // from its own seed.
    const std::uint64_t example_seed = rng();
    Rng local(example_seed);
    ++draw;
    std::string prompt =
        (want_positive && make_positive && uniform(local, 0, 1) == 0) ? make_positive(local) : make(local);
    std::string label = label_of(task, prompt);
    if ((label == yes) != want_positive) continue;
    out.push_back(TaskExample{std::move(prompt), std::move(label), example_seed});
  }
  return out;
}

std::string boolean_prompt(Rng& rng) {
  while (true) {
    std::string e = boolean_expr(rng, uniform(rng, 2, 3));
    std::size_t literals = 0;
    for (std::size_t p = 0; (p = e.find("True", p)) != std::string::npos; ++p) ++literals;
    for (std::size_t p = 0; (p = e.find("False", p)) != std::string::npos; ++p) ++literals;
    if (literals >= 3) return e + " is";
  }
}

}  // namespace

bool eval_boolean_text(const std::string& prompt) {
  auto tokens = lm::tokenize(prompt);
  if (!tokens.empty() && tokens.back() == "is") tokens.pop_back();
  if (tokens.empty()) throw ParseError("empty boolean expression");
  return BoolParser(std::move(tokens)).parse();
}

bool eval_navigate_text(const std::string& prompt) {
  if (prompt.rfind(kNavigateQuestion, 0) != 0) throw ParseError("not a navigate prompt");
  const auto parts = sentences(prompt.substr(std::string(kNavigateQuestion).size()));
  int x = 0, y = 0;
  int dx = 0, dy = 1;  // facing +y
  for (const std::string& s : parts) {
    if (s == "Always face forward.") continue;
    if (s == "Turn left.") {
      std::tie(dx, dy) = std::pair{-dy, dx};
    } else if (s == "Turn right.") {
      std::tie(dx, dy) = std::pair{dy, -dx};
    } else if (s == "Turn around.") {
      dx = -dx;
      dy = -dy;
    } else if (s.rfind("Take ", 0) == 0) {
      std::istringstream in(s.substr(5));
      int n = 0;
      std::string unit, dir;
      if (!(in >> n >> unit)) throw ParseError("bad instruction '" + s + "'");
      in >> dir;
      int mx = dx, my = dy;
      if (unit.back() == '.') unit.pop_back();
      if (!dir.empty() && dir.back() == '.') dir.pop_back();
      if (unit != "step" && unit != "steps") throw ParseError("bad instruction '" + s + "'");
      if (dir == "backward") {
        mx = -dx, my = -dy;
      } else if (dir == "left") {
        mx = -dy, my = dx;
      } else if (dir == "right") {
        mx = dy, my = -dx;
      } else if (!dir.empty() && dir != "forward") {
        throw ParseError("bad direction in '" + s + "'");
      }
      x += n * mx;
      y += n * my;
    } else {
      throw ParseError("bad instruction '" + s + "'");
    }
  }
  return x == 0 && y == 0;
}

bool eval_web_of_lies_text(const std::string& prompt) {
  const auto parts = sentences(prompt);
  if (parts.size() < 2) throw ParseError("web-of-lies prompt needs a fact and a question");
  std::map<std::string, bool> honest;
  auto ends_with = [](const std::string& s, const std::string& tail) {
    return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
  };
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    const std::string& s = parts[i];
    bool claim;
    std::string head;
    static const std::string kTruth = " tells the truth.";
    static const std::string kLies = " lies.";
    if (ends_with(s, kTruth)) {
      claim = true;
      head = s.substr(0, s.size() - kTruth.size());
    } else if (ends_with(s, kLies)) {
      claim = false;
      head = s.substr(0, s.size() - kLies.size());
    } else {
      throw ParseError("bad statement '" + s + "'");
    }
    const auto says = head.find(" says ");
    if (says == std::string::npos) {
      honest[head] = claim;
    } else {
      const std::string speaker = head.substr(0, says);
      const std::string subject = head.substr(says + 6);
      if (!honest.count(subject)) throw ParseError("'" + subject + "' is not known yet");
      honest[speaker] = claim == honest[subject];
    }
  }
  const std::string& q = parts.back();
  static const std::string kQuestion = " tell the truth?";
  if (q.rfind("Does ", 0) != 0 || !ends_with(q, kQuestion)) {
    throw ParseError("bad question '" + q + "'");
  }
  const std::string who = q.substr(5, q.size() - 5 - kQuestion.size());
  if (!honest.count(who)) throw ParseError("'" + who + "' is not known");
  return honest[who];
}

std::string label_of(Task task, const std::string& prompt) {
  const auto [yes, no] = answers(task);
  bool value = false;
  switch (task) {
    case Task::kBoolean: value = eval_boolean_text(prompt); break;
    case Task::kNavigate: value = eval_navigate_text(prompt); break;
    case Task::kWebOfLies: value = eval_web_of_lies_text(prompt); break;
  }
  return value ? yes : no;
}

std::vector<TaskExample> gen_boolean(std::uint64_t seed, std::size_t n) {
  return balanced(Task::kBoolean, seed, n, boolean_prompt);
}

std::vector<TaskExample> gen_navigate(std::uint64_t seed, std::size_t n) {
  return balanced(Task::kNavigate, seed, n, navigate_prompt, navigate_returning_prompt);
}

std::vector<TaskExample> gen_web_of_lies(std::uint64_t seed, std::size_t n) {
  return balanced(Task::kWebOfLies, seed, n, web_prompt);
}

std::vector<TaskExample> generate(Task task, std::uint64_t seed, std::size_t n) {
  switch (task) {
    case Task::kBoolean: return gen_boolean(seed, n);
    case Task::kNavigate: return gen_navigate(seed, n);
    case Task::kWebOfLies: return gen_web_of_lies(seed, n);
  }
  return {};
}

void save_examples(const std::filesystem::path& path, const std::vector<TaskExample>& examples) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& e : examples) {
    if (e.prompt.find_first_of("\t\n") != std::string::npos) {
      throw InvalidArgument("prompt contains a tab or newline");
    }
    out << e.prompt << '\t' << e.label << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<TaskExample> load_examples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<TaskExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected prompt<TAB>label");
    }
    out.push_back(TaskExample{line.substr(0, tab), line.substr(tab + 1), 0});
  }
  return out;
}

nlohmann::json to_json(const Manifest& m) {
  return nlohmann::json{{"task", task_name(m.task)},
                        {"seed", m.seed},
                        {"train", m.train},
                        {"test", m.test},
                        {"generator_version", m.generator_version},
                        {"files", {{"train", "train.tsv"}, {"test", "test.tsv"}}}};
}

Manifest manifest_from_json(const nlohmann::json& doc) {
  try {
    Manifest m;
    m.task = parse_task(doc.at("task").get<std::string>());
    m.seed = doc.at("seed").get<std::uint64_t>();
    m.train = doc.at("train").get<std::size_t>();
    m.test = doc.at("test").get<std::size_t>();
    m.generator_version = doc.at("generator_version").get<int>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad manifest: ") + e.what());
  }
}

Split make_split(Task task, std::uint64_t seed, std::size_t train, std::size_t test) {
  Split split;
  Rng streams(seed);
  const std::uint64_t train_seed = streams();
  const std::uint64_t test_seed = streams();
  split.train = generate(task, train_seed, train);
  std::set<std::string> seen;
  for (const auto& e : split.train) seen.insert(e.prompt);
  // Test examples come in batches from their own stream; prompts seen in
  // training or earlier in the test set are skipped while keeping the label
  // alternation.
  const auto [yes, no] = answers(task);
  std::vector<TaskExample> pos, neg;
  Rng batches(test_seed);
  for (int round = 0; split.test.size() < test; ++round) {
    if (round == 1000) {
      throw SimulationError("could not draw " + std::to_string(test) + " unseen test prompts");
    }
    for (auto& e : generate(task, batches(), 2 * test + 2)) {
      if (!seen.insert(e.prompt).second) continue;
      (e.label == yes ? pos : neg).push_back(std::move(e));
    }
    split.test.clear();
    for (std::size_t i = 0; split.test.size() < test; ++i) {
      auto& pool = i % 2 == 0 ? pos : neg;
      if (i / 2 >= pool.size()) break;
      split.test.push_back(pool[i / 2]);
    }
  }
  return split;
}

void write_split(const std::filesystem::path& dir, const Manifest& manifest, const Split& split) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  save_examples(dir / "train.tsv", split.train);
  save_examples(dir / "test.tsv", split.test);
  save_json(dir / "manifest.json", to_json(manifest));
}

}  // namespace ardt::tasks
