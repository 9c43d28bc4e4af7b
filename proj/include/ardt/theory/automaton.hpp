#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ardt/theory/compiled.hpp"

namespace ardt::theory {

// Deterministic finite automaton. Symbols and states are indices into
// `alphabet` and `states`; transitions[q][a] is the next state.
struct Automaton {
  std::vector<std::string> alphabet;
  std::vector<std::string> states;
  int initial = 0;
  std::vector<std::vector<int>> transitions;

  void validate() const;
};

// Token layout of a compiled automaton: symbols first, then states, then PAD.
struct AutomatonTokens {
  int symbols;
  int states;
  TokenId symbol(int a) const { return a; }
  TokenId state(int q) const { return symbols + q; }
  TokenId pad() const { return symbols + states; }
  int count() const { return symbols + states + 1; }
  bool is_state(TokenId t) const { return t >= symbols && t < symbols + states; }
};

inline constexpr std::size_t kMaxAutomatonInput = 1u << 16;

// Folds the transition function from the initial state.
int run_automaton(const Automaton& automaton, std::span<const int> input);

// Sliding-window tree with context length n+1 reading the last token and the
// token n positions before it. On an n-symbol prompt it emits q_0, ..., q_n;
// emission n+1 is the automaton's output state.
CompiledArdt compile_automaton(const Automaton& automaton, std::size_t input_length);

// Runs the compiled tree for n+1 steps and maps the emissions back to states.
std::vector<int> simulate_compiled_automaton(const CompiledArdt& compiled,
                                             const Automaton& automaton,
                                             std::span<const int> input);

Automaton parity_automaton();
Automaton random_automaton(std::uint64_t seed, int max_symbols, int max_states);

}  // namespace ardt::theory
