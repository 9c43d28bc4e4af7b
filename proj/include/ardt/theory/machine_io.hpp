#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ardt/theory/automaton.hpp"
#include "ardt/theory/circuit.hpp"
#include "ardt/theory/turing.hpp"

namespace ardt::theory {

// Machine description files (JSON). Symbols and states are referred to by
// name; see data/specs/ for examples.
//
// automaton: {"alphabet": [...], "states": [...], "initial": "q",
//             "transitions": {"q": {"a": "q'"}}}
// turing:    {"alphabet": [...], "empty": "_", "states": [...], "initial": "q",
//             "memory": M, "runtime": T,
//             "transitions": {"q": {"a": ["q'", "b", "L" | "R"]}}}
// circuit:   {"alphabet": [...], "inputs": n, "max_fan_in": k,
//             "gates": [{"inputs": [i, j], "table": [...]}]}
Automaton automaton_from_json(const nlohmann::json& doc);
TuringMachine turing_from_json(const nlohmann::json& doc);
Circuit circuit_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const Automaton& automaton);
nlohmann::json to_json(const TuringMachine& machine);
nlohmann::json to_json(const Circuit& circuit);

Automaton load_automaton(const std::filesystem::path& path);
TuringMachine load_turing(const std::filesystem::path& path);
Circuit load_circuit(const std::filesystem::path& path);

// Parses an input word. Separators (commas or whitespace) split it into
// symbol names; without separators every character is one symbol.
std::vector<int> parse_word(const std::vector<std::string>& alphabet, const std::string& text);
std::string format_word(const std::vector<std::string>& alphabet, const std::vector<int>& word);

}  // namespace ardt::theory
