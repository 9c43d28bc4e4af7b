#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ardt/theory/compiled.hpp"

namespace ardt::theory {

// `inputs` index earlier circuit nodes (0..n-1 are the inputs, gate g is node
// n+g). `table` lists outputs for every assignment of the inputs in
// lexicographic order, first input most significant.
struct Gate {
  std::vector<int> inputs;
  std::vector<int> table;
};

// k-sparse circuit over `alphabet`; the last gate is the output node.
struct Circuit {
  std::vector<std::string> alphabet;
  int num_inputs = 0;
  int max_fan_in = 2;
  std::vector<Gate> gates;

  std::size_t size() const noexcept { return static_cast<std::size_t>(num_inputs) + gates.size(); }
  void validate() const;
};

// Values of every node in topological order.
std::vector<int> eval_circuit_nodes(const Circuit& circuit, std::span<const int> input);
int eval_circuit(const Circuit& circuit, std::span<const int> input);

// Sliding-window tree with context length N. A spine of PAD tests locates the
// current iteration from the number of leading PADs and hands off to the
// junta tree of the gate computed at that iteration. Prompted with the n
// inputs, it emits the N-n gate values in order.
CompiledArdt compile_circuit(const Circuit& circuit);

inline std::size_t circuit_length_complexity(const Circuit& c) { return c.gates.size(); }

struct CircuitLimits {
  int max_nodes = 12;
  int max_inputs = 6;
  int fan_in = 2;
};

// Boolean circuit with gates of fan-in 1..fan_in and random truth tables.
Circuit random_circuit(std::uint64_t seed, const CircuitLimits& limits = {});

}  // namespace ardt::theory
