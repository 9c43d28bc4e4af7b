#pragma once

// Reference implementations used by the tests. They are written against the
// problem definitions rather than the library code paths: brute-force split
// search, string-based machine simulation, memoised circuit recursion.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ardt/core/matrix.hpp"
#include "ardt/theory/automaton.hpp"
#include "ardt/theory/circuit.hpp"
#include "ardt/theory/turing.hpp"

namespace oracle {

inline double sse(const ardt::Matrix& y, const std::vector<std::size_t>& rows) {
  if (rows.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t c = 0; c < y.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t r : rows) mean += y(r, c);
    mean /= static_cast<double>(rows.size());
    for (std::size_t r : rows) total += (y(r, c) - mean) * (y(r, c) - mean);
  }
  return total;
}

struct Split {
  int feature;
  double low;   // largest value going left
  double high;  // smallest value going right
  double sse;
};

// Tries every feature and every cut between two observed values, computing
// both sides' squared error from scratch.
inline std::optional<Split> best_split(const ardt::Matrix& x, const ardt::Matrix& y,
                                       const std::vector<std::size_t>& rows,
                                       std::size_t min_leaf) {
  std::optional<Split> best;
  const double parent = sse(y, rows);
  for (std::size_t f = 0; f < x.cols(); ++f) {
    std::vector<double> values;
    for (std::size_t r : rows) values.push_back(x(r, f));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      std::vector<std::size_t> left, right;
      for (std::size_t r : rows) (x(r, f) <= values[i] ? left : right).push_back(r);
      if (left.size() < min_leaf || right.size() < min_leaf) continue;
      const double s = sse(y, left) + sse(y, right);
      if (parent - s <= 1e-12 * parent) continue;
      if (!best || s < best->sse - 1e-12 * std::max(1.0, parent)) {
        best = Split{static_cast<int>(f), values[i], values[i + 1], s};
      }
    }
  }
  return best;
}

// Greedy tree grown with best_split; returns the training SSE of its leaves.
inline double greedy_tree_sse(const ardt::Matrix& x, const ardt::Matrix& y,
                              const std::vector<std::size_t>& rows, int depth_left,
                              std::size_t min_leaf) {
  if (depth_left == 0 || rows.size() < 2 * min_leaf) return sse(y, rows);
  auto split = best_split(x, y, rows, min_leaf);
  if (!split) return sse(y, rows);
  std::vector<std::size_t> left, right;
  for (std::size_t r : rows) (x(r, split->feature) <= split->low ? left : right).push_back(r);
  return greedy_tree_sse(x, y, left, depth_left - 1, min_leaf) +
         greedy_tree_sse(x, y, right, depth_left - 1, min_leaf);
}

inline int automaton_state(const ardt::theory::Automaton& a, const std::vector<int>& input,
                           std::size_t prefix) {
  if (prefix == 0) return a.initial;
  return a.transitions[automaton_state(a, input, prefix - 1)][input[prefix - 1]];
}

// Configuration strings "cells with the state name spliced in before the
// head", one per iteration, built with std::string operations.
struct TuringTrace {
  std::vector<std::vector<std::string>> configurations;
  bool fell_off = false;
};

inline TuringTrace turing_trace(const ardt::theory::TuringMachine& m, const std::vector<int>& input) {
  std::vector<std::string> tape(m.memory, m.alphabet[m.empty]);
  for (std::size_t i = 0; i < input.size(); ++i) tape[i] = m.alphabet[input[i]];
  long head = 0;
  std::string state = m.states[m.initial];
  TuringTrace trace;
  auto snapshot = [&] {
    std::vector<std::string> config = tape;
    config.insert(config.begin() + head, state);
    trace.configurations.push_back(config);
  };
  snapshot();
  for (std::size_t i = 1; i < m.runtime; ++i) {
    const long q = std::find(m.states.begin(), m.states.end(), state) - m.states.begin();
    const long a = std::find(m.alphabet.begin(), m.alphabet.end(), tape[head]) - m.alphabet.begin();
    const auto& t = m.transitions[q][a];
    tape[head] = m.alphabet[t.write];
    state = m.states[t.next_state];
    head += t.move == ardt::theory::Move::kLeft ? -1 : 1;
    if (head < 0 || head >= static_cast<long>(m.memory)) {
      trace.fell_off = true;
      return trace;
    }
    snapshot();
  }
  return trace;
}

inline int circuit_node(const ardt::theory::Circuit& c, const std::vector<int>& input, int node,
                        std::map<int, int>& memo) {
  if (node < c.num_inputs) return input[node];
  if (auto it = memo.find(node); it != memo.end()) return it->second;
  const auto& gate = c.gates[node - c.num_inputs];
  int index = 0;
  for (int in : gate.inputs) {
    index = index * static_cast<int>(c.alphabet.size()) + circuit_node(c, input, in, memo);
  }
  return memo[node] = gate.table[index];
}

inline int circuit_output(const ardt::theory::Circuit& c, const std::vector<int>& input) {
  std::map<int, int> memo;
  return circuit_node(c, input, static_cast<int>(c.size()) - 1, memo);
}

// All words of length n over `symbols` letters, in lexicographic order.
inline std::vector<std::vector<int>> all_words(int symbols, std::size_t n) {
  std::vector<std::vector<int>> out;
  std::vector<int> word(n, 0);
  while (true) {
    out.push_back(word);
    std::size_t i = n;
    while (i > 0 && word[i - 1] == symbols - 1) word[--i] = 0;
    if (i == 0) break;
    ++word[i - 1];
  }
  return out;
}

}  // namespace oracle
