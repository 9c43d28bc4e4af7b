#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ardt/theory/compiled.hpp"

namespace ardt::theory {

enum class Move { kLeft, kRight };

struct Transition {
  int next_state = 0;
  int write = 0;
  Move move = Move::kRight;
};

// Turing machine over a tape of `memory` cells, run for `runtime` iterations.
// `empty` indexes the blank symbol in `alphabet`.
struct TuringMachine {
  std::vector<std::string> alphabet;
  int empty = 0;
  std::vector<std::string> states;
  int initial = 0;
  std::vector<std::vector<Transition>> transitions;  // [state][symbol]
  std::size_t memory = 1;
  std::size_t runtime = 1;

  void validate() const;
};

// Token layout: symbols, states, then PAD, SEP and BOS.
struct TuringTokens {
  int symbols;
  int states;
  TokenId symbol(int a) const { return a; }
  TokenId state(int q) const { return symbols + q; }
  TokenId pad() const { return symbols + states; }
  TokenId sep() const { return symbols + states + 1; }
  TokenId bos() const { return symbols + states + 2; }
  int count() const { return symbols + states + 3; }
  bool is_state(TokenId t) const { return t >= symbols && t < symbols + states; }
  bool is_symbol(TokenId t) const { return t >= 0 && t < symbols; }

  static TuringTokens of(const TuringMachine& m) {
    return {static_cast<int>(m.alphabet.size()), static_cast<int>(m.states.size())};
  }
};

// Configuration encodings s_1..s_T, where s_1 is the initial configuration
// and s_{i+1} follows from s_i by one transition. Each encoding is the tape
// with the state token inserted right before the cell under the head, so it
// has M+1 tokens. `output` is the rightmost tape cell of s_T.
struct TuringRun {
  std::vector<std::vector<TokenId>> encodings;
  int output = 0;
};

// Runs the machine directly on an M-cell tape holding `input` followed by
// blanks. Throws SimulationError if the head leaves the tape.
TuringRun run_turing(const TuringMachine& machine, std::span<const int> input);

// Local rule on the first four window tokens, with the first-chunk cases.
TokenId turing_window_rule(const TuringMachine& machine, std::span<const TokenId> first_four);

// Sliding-window tree with context length M+3 reading the first four window
// positions. Prompted with turing_prompt(), T*(M+2) steps produce chunks
// (SEP, s_1), ..., (SEP, s_T).
CompiledArdt compile_turing(const TuringMachine& machine);

// BOS followed by the M-cell tape.
std::vector<TokenId> turing_prompt(const TuringMachine& machine, std::span<const int> input);

std::size_t turing_length_complexity(const TuringMachine& machine);

// A random machine together with inputs on which the oracle keeps the head on
// the tape for all T iterations.
struct TuringCase {
  TuringMachine machine;
  std::vector<std::vector<int>> inputs;
};

struct TuringCaseLimits {
  int max_states = 3;
  int max_symbols = 3;
  std::size_t max_memory = 6;
  std::size_t max_runtime = 10;
  std::size_t inputs = 10;
};

TuringCase random_turing_case(std::uint64_t seed, const TuringCaseLimits& limits = {});

}  // namespace ardt::theory
