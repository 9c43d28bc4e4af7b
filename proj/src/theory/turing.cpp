#include "ardt/theory/turing.hpp"

#include <random>
#include <set>

namespace ardt::theory {

void TuringMachine::validate() const {
  if (alphabet.empty()) throw InvalidArgument("Turing machine alphabet is empty");
  if (empty < 0 || static_cast<std::size_t>(empty) >= alphabet.size()) {
    throw InvalidArgument("blank symbol not in the alphabet");
  }
  if (states.empty()) throw InvalidArgument("Turing machine has no states");
  if (initial < 0 || static_cast<std::size_t>(initial) >= states.size()) {
    throw InvalidArgument("initial state out of range");
  }
  if (memory < 1) throw InvalidArgument("memory must be at least 1 cell");
  if (runtime < 1) throw InvalidArgument("runtime must be at least 1 iteration");
  if (transitions.size() != states.size()) {
    throw InvalidArgument("transition table must have one row per state");
  }
  for (const auto& row : transitions) {
    if (row.size() != alphabet.size()) throw InvalidArgument("transition table must be total");
    for (const Transition& t : row) {
      if (t.next_state < 0 || static_cast<std::size_t>(t.next_state) >= states.size() ||
          t.write < 0 || static_cast<std::size_t>(t.write) >= alphabet.size()) {
        throw InvalidArgument("transition refers to an unknown state or symbol");
      }
    }
  }
  std::set<std::string> names(alphabet.begin(), alphabet.end());
  names.insert(states.begin(), states.end());
  if (names.size() != alphabet.size() + states.size()) {
    throw InvalidArgument("symbol and state names must be distinct");
  }
}

namespace {

std::vector<TokenId> encode(const TuringTokens& tokens, const std::vector<int>& tape,
                            std::size_t head, int state) {
  std::vector<TokenId> out;
  out.reserve(tape.size() + 1);
  for (std::size_t i = 0; i < tape.size(); ++i) {
    if (i == head) out.push_back(tokens.state(state));
    out.push_back(tokens.symbol(tape[i]));
  }
  return out;
}

std::vector<int> initial_tape(const TuringMachine& machine, std::span<const int> input) {
  if (input.size() >= machine.memory) {
    throw InvalidArgument("input of length " + std::to_string(input.size()) +
                          " does not fit below memory " + std::to_string(machine.memory));
  }
  std::vector<int> tape(machine.memory, machine.empty);
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (input[i] < 0 || static_cast<std::size_t>(input[i]) >= machine.alphabet.size()) {
      throw InvalidArgument("input symbol " + std::to_string(input[i]) + " not in the alphabet");
    }
    tape[i] = input[i];
  }
  return tape;
}

}  // namespace

TuringRun run_turing(const TuringMachine& machine, std::span<const int> input) {
  machine.validate();
  const TuringTokens tokens = TuringTokens::of(machine);
  std::vector<int> tape = initial_tape(machine, input);
  std::size_t head = 0;
  int state = machine.initial;

  TuringRun run;
  run.encodings.push_back(encode(tokens, tape, head, state));
  for (std::size_t step = 1; step < machine.runtime; ++step) {
    const Transition& t = machine.transitions[state][tape[head]];
    tape[head] = t.write;
    state = t.next_state;
    if (t.move == Move::kLeft) {
      if (head == 0) {
        throw SimulationError("head moves left of cell 1 at iteration " + std::to_string(step));
      }
      --head;
    } else {
      if (head + 1 >= machine.memory) {
        throw SimulationError("head moves right of cell " + std::to_string(machine.memory) +
                              " at iteration " + std::to_string(step));
      }
      ++head;
    }
    run.encodings.push_back(encode(tokens, tape, head, state));
  }
  run.output = tape.back();
  return run;
}

TokenId turing_window_rule(const TuringMachine& machine, std::span<const TokenId> x) {
  if (x.size() != 4) throw InvalidArgument("the Turing rule reads exactly four tokens");
  const TuringTokens tokens = TuringTokens::of(machine);
  auto leading = [&](TokenId t) { return t == tokens.pad() || t == tokens.bos(); };

  // First chunk: SEP, then q0, then the prompt's tape is copied by the
  // general rule below.
  if (leading(x[0]) && leading(x[1]) && leading(x[2])) return tokens.sep();
  if (leading(x[0]) && leading(x[1])) return tokens.state(machine.initial);
  if (x[1] == tokens.sep()) return tokens.sep();

  auto delta = [&](TokenId q, TokenId a) -> const Transition& {
    return machine.transitions[q - tokens.symbols][a];
  };
  if (!tokens.is_state(x[0]) && !tokens.is_state(x[1]) && !tokens.is_state(x[2])) return x[1];
  if (tokens.is_state(x[0])) {
    if (!tokens.is_symbol(x[1])) return x[1];
    const Transition& t = delta(x[0], x[1]);
    return t.move == Move::kRight ? tokens.state(t.next_state) : tokens.symbol(t.write);
  }
  if (tokens.is_state(x[1])) {
    if (!tokens.is_symbol(x[2])) return x[1];
    const Transition& t = delta(x[1], x[2]);
    return t.move == Move::kRight ? tokens.symbol(t.write) : x[0];
  }
  if (!tokens.is_symbol(x[3])) return x[1];
  const Transition& t = delta(x[2], x[3]);
  return t.move == Move::kRight ? x[1] : tokens.state(t.next_state);
}

CompiledArdt compile_turing(const TuringMachine& machine) {
  machine.validate();
  const TuringTokens tokens = TuringTokens::of(machine);
  TokenEmbedding embedding = boolean_embedding(static_cast<std::size_t>(tokens.count()));
  const int positions[] = {0, 1, 2, 3};
  auto rule = [&](std::span<const TokenId> args) { return turing_window_rule(machine, args); };
  DecisionTree tree = junta_to_tree(rule, positions, embedding, machine.memory + 3, tokens.sep());

  std::vector<std::string> names = machine.alphabet;
  names.insert(names.end(), machine.states.begin(), machine.states.end());
  names.insert(names.end(), {"<PAD>", "<SEP>", "<BOS>"});
  return CompiledArdt{std::move(names), std::move(embedding),
                      SlidingWindowTree{std::move(tree), tokens.pad()}};
}

std::vector<TokenId> turing_prompt(const TuringMachine& machine, std::span<const int> input) {
  const TuringTokens tokens = TuringTokens::of(machine);
  std::vector<TokenId> prompt{tokens.bos()};
  for (int a : initial_tape(machine, input)) prompt.push_back(tokens.symbol(a));
  return prompt;
}

std::size_t turing_length_complexity(const TuringMachine& machine) {
  return machine.runtime * (machine.memory + 2);
}

namespace {

bool stays_on_tape(const TuringMachine& machine, std::span<const int> input) {
  try {
    run_turing(machine, input);
    return true;
  } catch (const SimulationError&) {
    return false;
  }
}

}  // namespace

TuringCase random_turing_case(std::uint64_t seed, const TuringCaseLimits& limits) {
  if (limits.max_symbols < 2 || limits.max_states < 1 || limits.max_memory < 2 ||
      limits.max_runtime < 1) {
    throw InvalidArgument("Turing case limits too small");
  }
  std::mt19937_64 rng(seed);
  auto uniform = [&](auto lo, auto hi) {
    return std::uniform_int_distribution<decltype(hi)>(lo, hi)(rng);
  };
  constexpr int kMaxAttempts = 1'000'000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    TuringCase c;
    TuringMachine& m = c.machine;
    const int symbols = uniform(2, limits.max_symbols);
    const int states = uniform(1, limits.max_states);
    m.alphabet.push_back("_");
    for (int a = 1; a < symbols; ++a) m.alphabet.push_back(std::string(1, static_cast<char>('a' + a - 1)));
    for (int q = 0; q < states; ++q) m.states.push_back("q" + std::to_string(q));
    m.empty = 0;
    m.initial = 0;
    m.memory = uniform(std::size_t{2}, limits.max_memory);
    m.runtime = uniform(std::size_t{1}, limits.max_runtime);
    m.transitions.assign(states, std::vector<Transition>(symbols));
    for (auto& row : m.transitions) {
      for (Transition& t : row) {
        t.next_state = uniform(0, states - 1);
        t.write = uniform(0, symbols - 1);
        t.move = uniform(0, 1) == 0 ? Move::kLeft : Move::kRight;
      }
    }
    bool ok = true;
    for (std::size_t i = 0; i < limits.inputs && ok; ++i) {
      std::vector<int> input(uniform(std::size_t{0}, m.memory - 1));
      for (int& a : input) a = uniform(1, symbols - 1);
      ok = stays_on_tape(m, input);
      c.inputs.push_back(std::move(input));
    }
    if (ok) return c;
  }
  throw SimulationError("no boundary-safe Turing machine found for seed " + std::to_string(seed));
}

}  // namespace ardt::theory
