#include "ardt/theory/automaton.hpp"

#include <random>
#include <set>

namespace ardt::theory {

void Automaton::validate() const {
  if (alphabet.size() < 2) throw InvalidArgument("automaton alphabet needs at least 2 symbols");
  if (states.size() < 2) throw InvalidArgument("automaton needs at least 2 states");
  if (initial < 0 || static_cast<std::size_t>(initial) >= states.size()) {
    throw InvalidArgument("initial state out of range");
  }
  if (transitions.size() != states.size()) {
    throw InvalidArgument("transition table must have one row per state");
  }
  for (const auto& row : transitions) {
    if (row.size() != alphabet.size()) {
      throw InvalidArgument("transition table must cover every symbol");
    }
    for (int next : row) {
      if (next < 0 || static_cast<std::size_t>(next) >= states.size()) {
        throw InvalidArgument("transition to unknown state " + std::to_string(next));
      }
    }
  }
  std::set<std::string> names(alphabet.begin(), alphabet.end());
  names.insert(states.begin(), states.end());
  if (names.size() != alphabet.size() + states.size()) {
    throw InvalidArgument("symbol and state names must be distinct");
  }
}

int run_automaton(const Automaton& automaton, std::span<const int> input) {
  int state = automaton.initial;
  for (int symbol : input) {
    if (symbol < 0 || static_cast<std::size_t>(symbol) >= automaton.alphabet.size()) {
      throw InvalidArgument("symbol " + std::to_string(symbol) + " not in the alphabet");
    }
    state = automaton.transitions[state][symbol];
  }
  return state;
}

CompiledArdt compile_automaton(const Automaton& automaton, std::size_t input_length) {
  automaton.validate();
  if (input_length == 0) throw InvalidArgument("input length must be at least 1");
  if (input_length > kMaxAutomatonInput) {
    throw InvalidArgument("input length " + std::to_string(input_length) +
                          " exceeds the maximum window of " + std::to_string(kMaxAutomatonInput));
  }
  const AutomatonTokens tokens{static_cast<int>(automaton.alphabet.size()),
                               static_cast<int>(automaton.states.size())};
  const TokenId start = tokens.state(automaton.initial);

  // Extended transition on (most recent token, token n back).
  auto step = [&](std::span<const TokenId> args) -> TokenId {
    const TokenId previous = args[0];
    const TokenId back = args[1];
    if (back == tokens.pad()) return start;
    if (tokens.is_state(previous) && back >= 0 && back < tokens.symbols) {
      return tokens.state(automaton.transitions[previous - tokens.symbols][back]);
    }
    return start;
  };

  const std::size_t window = input_length + 1;
  const int positions[] = {static_cast<int>(window - 1), 0};
  TokenEmbedding embedding = boolean_embedding(static_cast<std::size_t>(tokens.count()));
  DecisionTree tree = junta_to_tree(step, positions, embedding, window, start);

  std::vector<std::string> names = automaton.alphabet;
  names.insert(names.end(), automaton.states.begin(), automaton.states.end());
  names.emplace_back("<PAD>");
  return CompiledArdt{std::move(names), std::move(embedding),
                      SlidingWindowTree{std::move(tree), tokens.pad()}};
}

std::vector<int> simulate_compiled_automaton(const CompiledArdt& compiled,
                                             const Automaton& automaton,
                                             std::span<const int> input) {
  const AutomatonTokens tokens{static_cast<int>(automaton.alphabet.size()),
                               static_cast<int>(automaton.states.size())};
  std::vector<TokenId> prompt;
  prompt.reserve(input.size());
  for (int a : input) {
    if (a < 0 || a >= tokens.symbols) throw InvalidArgument("symbol not in the alphabet");
    prompt.push_back(tokens.symbol(a));
  }
  std::vector<int> states;
  for (TokenId t : compiled.run(prompt, input.size() + 1)) {
    states.push_back(tokens.is_state(t) ? t - tokens.symbols : -1);
  }
  return states;
}

Automaton parity_automaton() {
  return Automaton{{"0", "1"}, {"even", "odd"}, 0, {{0, 1}, {1, 0}}};
}

Automaton random_automaton(std::uint64_t seed, int max_symbols, int max_states) {
  if (max_symbols < 2 || max_states < 2) throw InvalidArgument("automata need >= 2 symbols/states");
  std::mt19937_64 rng(seed);
  const int symbols = std::uniform_int_distribution<int>(2, max_symbols)(rng);
  const int states = std::uniform_int_distribution<int>(2, max_states)(rng);
  Automaton a;
  for (int i = 0; i < symbols; ++i) a.alphabet.push_back(std::to_string(i));
  for (int q = 0; q < states; ++q) a.states.push_back("q" + std::to_string(q));
  a.initial = std::uniform_int_distribution<int>(0, states - 1)(rng);
  std::uniform_int_distribution<int> pick(0, states - 1);
  a.transitions.assign(states, std::vector<int>(symbols));
  for (auto& row : a.transitions) {
    for (int& next : row) next = pick(rng);
  }
  return a;
}

}  // namespace ardt::theory
