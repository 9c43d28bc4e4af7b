#include "ardt/theory/circuit.hpp"

#include <algorithm>
#include <random>

namespace ardt::theory {

namespace {

std::size_t table_size(std::size_t alphabet, std::size_t fan_in) {
  std::size_t size = 1;
  for (std::size_t i = 0; i < fan_in; ++i) size *= alphabet;
  return size;
}

}  // namespace

void Circuit::validate() const {
  if (alphabet.empty()) throw InvalidArgument("circuit alphabet is empty");
  if (num_inputs < 1) throw InvalidArgument("circuit needs at least one input node");
  if (gates.empty()) throw InvalidArgument("circuit needs at least one gate");
  if (max_fan_in < 0) throw InvalidArgument("max fan-in must be non-negative");
  const int symbols = static_cast<int>(alphabet.size());
  for (std::size_t g = 0; g < gates.size(); ++g) {
    const Gate& gate = gates[g];
    const int node = num_inputs + static_cast<int>(g);
    if (static_cast<int>(gate.inputs.size()) > max_fan_in) {
      throw InvalidArgument("gate at node " + std::to_string(node) + " has fan-in " +
                            std::to_string(gate.inputs.size()) + " > k = " +
                            std::to_string(max_fan_in));
    }
    for (int in : gate.inputs) {
      if (in < 0 || in >= node) {
        throw InvalidArgument("edge " + std::to_string(in) + " -> " + std::to_string(node) +
                              " is not topological");
      }
    }
    if (gate.table.size() != table_size(alphabet.size(), gate.inputs.size())) {
      throw InvalidArgument("gate at node " + std::to_string(node) + " has a truth table of size " +
                            std::to_string(gate.table.size()));
    }
    for (int v : gate.table) {
      if (v < 0 || v >= symbols) throw InvalidArgument("truth table entry outside the alphabet");
    }
  }
}

std::vector<int> eval_circuit_nodes(const Circuit& circuit, std::span<const int> input) {
  if (input.size() != static_cast<std::size_t>(circuit.num_inputs)) {
    throw InvalidArgument("circuit expects " + std::to_string(circuit.num_inputs) +
                          " inputs, got " + std::to_string(input.size()));
  }
  const int symbols = static_cast<int>(circuit.alphabet.size());
  std::vector<int> values(input.begin(), input.end());
  for (int v : values) {
    if (v < 0 || v >= symbols) throw InvalidArgument("input symbol outside the alphabet");
  }
  values.reserve(circuit.size());
  for (const Gate& gate : circuit.gates) {
    std::size_t index = 0;
    for (int in : gate.inputs) index = index * symbols + values[in];
    values.push_back(gate.table[index]);
  }
  return values;
}

int eval_circuit(const Circuit& circuit, std::span<const int> input) {
  return eval_circuit_nodes(circuit, input).back();
}

CompiledArdt compile_circuit(const Circuit& circuit) {
  circuit.validate();
  const int symbols = static_cast<int>(circuit.alphabet.size());
  const TokenId pad = symbols;
  const int n = circuit.num_inputs;
  const int total = static_cast<int>(circuit.size());
  const int gates = total - n;
  const std::size_t window = static_cast<std::size_t>(total);

  TokenEmbedding embedding = boolean_embedding(static_cast<std::size_t>(symbols + 1));
  const std::size_t d = embedding.dim();
  const auto pad_code = embedding[pad];

  // Before iteration t (0-based) the sequence holds n+t tokens, so the window
  // starts with N-n-t PADs and node u sits at window position N-n-t+u.
  auto gate_tree = [&](int t) {
    const Gate& gate = circuit.gates[t];
    const int shift = total - n - t;
    std::vector<int> positions;
    for (int in : gate.inputs) positions.push_back(shift + in);
    auto f = [&gate, symbols, pad](std::span<const TokenId> args) -> TokenId {
      std::size_t index = 0;
      for (TokenId a : args) {
        if (a == pad) return pad;
        index = index * symbols + a;
      }
      return gate.table[index];
    };
    return junta_to_tree(f, positions, embedding, window, pad);
  };

  // Spine over window positions 1..N-n: the first non-PAD position p means
  // iteration N-n-p. At each level the PAD-matching branch continues the spine
  // and the other branch holds that iteration's gate tree.
  std::vector<TreeNode> nodes;
  int parent = -1;
  bool parent_right = false;
  auto link = [&](int child) {
    if (parent < 0) return;
    (parent_right ? nodes[parent].right : nodes[parent].left) = child;
  };
  for (int p = 1; p <= gates; ++p) {
    for (std::size_t j = 0; j < d; ++j) {
      const int slot = static_cast<int>(nodes.size());
      nodes.push_back(TreeNode::split(p, static_cast<int>(j), 1.0));
      link(slot);
      const bool pad_goes_right = pad_code[j] >= 1.0;
      const int off_spine = append_subtree(nodes, gate_tree(gates - p));
      (pad_goes_right ? nodes[slot].left : nodes[slot].right) = off_spine;
      parent = slot;
      parent_right = pad_goes_right;
    }
  }
  // All checked positions PAD cannot happen on a valid prompt.
  const int end = static_cast<int>(nodes.size());
  nodes.push_back(TreeNode::leaf(pad));
  link(end);

  DecisionTree tree(window, d, std::move(nodes));
  std::vector<std::string> names = circuit.alphabet;
  names.emplace_back("<PAD>");
  return CompiledArdt{std::move(names), std::move(embedding), SlidingWindowTree{std::move(tree), pad}};
}

Circuit random_circuit(std::uint64_t seed, const CircuitLimits& limits) {
  if (limits.max_nodes < 2 || limits.max_inputs < 1 || limits.fan_in < 1) {
    throw InvalidArgument("circuit limits too small");
  }
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Circuit c;
  c.alphabet = {"0", "1"};
  c.max_fan_in = limits.fan_in;
  c.num_inputs = uniform(1, std::min(limits.max_inputs, limits.max_nodes - 1));
  const int total = uniform(c.num_inputs + 1, limits.max_nodes);
  for (int node = c.num_inputs; node < total; ++node) {
    Gate gate;
    const int fan_in = uniform(1, std::min(limits.fan_in, node));
    std::vector<int> pool(node);
    for (int i = 0; i < node; ++i) pool[i] = i;
    std::shuffle(pool.begin(), pool.end(), rng);
    gate.inputs.assign(pool.begin(), pool.begin() + fan_in);
    std::sort(gate.inputs.begin(), gate.inputs.end());
    gate.table.resize(table_size(2, static_cast<std::size_t>(fan_in)));
    for (int& v : gate.table) v = uniform(0, 1);
    c.gates.push_back(std::move(gate));
  }
  return c;
}

}  // namespace ardt::theory
