#pragma once

// Second readers for generated task prompts and exported DOT text. Written
// with different techniques from the library (regex scans, shunting-yard) and
// throwing std::runtime_error on anything unexpected.

#include <iterator>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <stack>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

inline void expect(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

// Shunting-yard to postfix, then a stack machine.
inline bool boolean_expression(const std::string& prompt) {
  std::istringstream in(prompt);
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(t);
  expect(!tokens.empty() && tokens.back() == "is", "boolean prompt must end with 'is'");
  tokens.pop_back();
  auto prec = [](const std::string& op) { return op == "not" ? 3 : op == "and" ? 2 : 1; };
  std::vector<std::string> out, ops;
  for (const auto& t : tokens) {
    if (t == "True" || t == "False") {
      out.push_back(t);
    } else if (t == "(" || t == "not") {
      ops.push_back(t);
    } else if (t == ")") {
      while (!ops.empty() && ops.back() != "(") out.push_back(ops.back()), ops.pop_back();
      expect(!ops.empty(), "unbalanced ')'");
      ops.pop_back();
    } else {
      expect(t == "and" || t == "or", "unknown token " + t);
      while (!ops.empty() && ops.back() != "(" && prec(ops.back()) >= prec(t)) {
        out.push_back(ops.back());
        ops.pop_back();
      }
      ops.push_back(t);
    }
  }
  while (!ops.empty()) out.push_back(ops.back()), ops.pop_back();
  std::stack<bool> st;
  auto pop = [&] {
    expect(!st.empty(), "operator without operand");
    const bool v = st.top();
    st.pop();
    return v;
  };
  for (const auto& t : out) {
    if (t == "True" || t == "False") {
      st.push(t == "True");
    } else if (t == "not") {
      st.push(!pop());
    } else {
      const bool b = pop(), a = pop();
      st.push(t == "and" ? (a && b) : (a || b));
    }
  }
  expect(st.size() == 1, "malformed expression");
  return st.top();
}

inline bool walk_returns(const std::string& prompt) {
  const std::regex sentence(R"(([A-Z][^.?]*)[.?])");
  const std::regex take(R"(Take (\d+) steps?(?: (forward|backward|left|right))?)");
  int x = 0, y = 0, dx = 0, dy = 1;
  for (auto it = std::sregex_iterator(prompt.begin(), prompt.end(), sentence); it != std::sregex_iterator();
       ++it) {
    const std::string s = (*it)[1];
    std::smatch m;
    if (std::regex_match(s, m, take)) {
      const int n = std::stoi(m[1]);
      const std::string dir = m[2].matched ? std::string(m[2]) : "forward";
      // Sideways steps leave the facing direction alone.
      int ax = dx, ay = dy;
      if (dir == "backward") ax = -dx, ay = -dy;
      if (dir == "left") ax = -dy, ay = dx;
      if (dir == "right") ax = dy, ay = -dx;
      x += n * ax;
      y += n * ay;
    } else if (s == "Turn left") {
      std::tie(dx, dy) = std::pair{-dy, dx};
    } else if (s == "Turn right") {
      std::tie(dx, dy) = std::pair{dy, -dx};
    } else if (s == "Turn around") {
      dx = -dx, dy = -dy;
    } else {
      expect(s == "Always face forward" || s.rfind("If you follow these instructions, do you return", 0) == 0,
             "unknown instruction: " + s);
    }
  }
  return x == 0 && y == 0;
}

// The asked-about person is truthful iff the first person's truthfulness,
// flipped once per "says ... lies" claim, ends up true.
inline bool liar_chain(const std::string& prompt) {
  const bool truthful = std::regex_search(prompt, std::regex(R"(^\w+ tells the truth\.)"));
  expect(truthful || std::regex_search(prompt, std::regex(R"(^\w+ lies\.)")), "no opening fact");
  const std::regex lie_claim(R"(\w+ says \w+ lies\.)");
  const auto flips = std::distance(std::sregex_iterator(prompt.begin(), prompt.end(), lie_claim),
                                   std::sregex_iterator());
  return truthful != (flips % 2 == 1);
}

struct Dot {
  std::map<int, std::string> labels;
  std::set<int> leaves;
  std::vector<std::tuple<int, int, std::string>> edges;
};

inline Dot parse_dot(const std::string& text) {
  Dot p;
  const std::regex node(R"re(^\s*n(\d+) \[label="((?:[^"\\]|\\.)*)"(, shape=ellipse)?\];$)re");
  const std::regex edge(R"re(^\s*n(\d+) -> n(\d+) \[label="(yes|no)"\];$)re");
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  expect(line == "digraph tree {", "missing digraph header");
  bool closed = false;
  while (std::getline(in, line)) {
    expect(!closed, "text after closing brace");
    std::smatch m;
    if (std::regex_match(line, m, node)) {
      const int id = std::stoi(m[1]);
      expect(p.labels.emplace(id, m[2]).second, "duplicate node");
      if (m[3].matched) p.leaves.insert(id);
    } else if (std::regex_match(line, m, edge)) {
      p.edges.emplace_back(std::stoi(m[1]), std::stoi(m[2]), m[3]);
    } else if (line == "}") {
      closed = true;
    } else {
      expect(line.find("node [") != std::string::npos, "unparsed line: " + line);
    }
  }
  expect(closed, "missing closing brace");
  return p;
}

// A binary tree rooted at n0: every internal node has one yes and one no
// edge, every other node exactly one parent, every edge endpoint declared.
inline bool is_binary_tree(const Dot& d) {
  std::map<int, int> parents, yes, no;
  for (const auto& [from, to, kind] : d.edges) {
    if (!d.labels.count(from) || !d.labels.count(to) || d.leaves.count(from)) return false;
    ++parents[to];
    ++(kind == "yes" ? yes : no)[from];
  }
  if (!d.labels.count(0)) return false;
  for (const auto& [id, _] : d.labels) {
    if (parents[id] != (id == 0 ? 0 : 1)) return false;
    const bool leaf = d.leaves.count(id) > 0;
    if (yes[id] != (leaf ? 0 : 1) || no[id] != (leaf ? 0 : 1)) return false;
  }
  return true;
}

}  // namespace oracle
