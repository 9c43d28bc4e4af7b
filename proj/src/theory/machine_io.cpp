#include "ardt/theory/machine_io.hpp"

#include <algorithm>
#include <cctype>

#include "ardt/core/model_io.hpp"

namespace ardt::theory {

using nlohmann::json;

namespace {

template <typename T>
T get(const json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) {
    throw ParseError(std::string("missing field '") + name + "'");
  }
  try {
    return doc.at(name).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad field '") + name + "': " + e.what());
  }
}

int index_of(const std::vector<std::string>& names, const std::string& name, const char* what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ParseError(std::string("unknown ") + what + " '" + name + "'");
  return static_cast<int>(it - names.begin());
}

const json& object_field(const json& doc, const char* name) {
  if (!doc.contains(name) || !doc.at(name).is_object()) {
    throw ParseError(std::string("field '") + name + "' must be an object");
  }
  return doc.at(name);
}

}  // namespace

Automaton automaton_from_json(const json& doc) {
  Automaton a;
  a.alphabet = get<std::vector<std::string>>(doc, "alphabet");
  a.states = get<std::vector<std::string>>(doc, "states");
  a.initial = index_of(a.states, get<std::string>(doc, "initial"), "state");
  a.transitions.assign(a.states.size(), std::vector<int>(a.alphabet.size(), -1));
  const json& delta = object_field(doc, "transitions");
  for (const auto& [state, row] : delta.items()) {
    const int q = index_of(a.states, state, "state");
    if (!row.is_object()) throw ParseError("transitions of '" + state + "' must be an object");
    for (const auto& [symbol, next] : row.items()) {
      if (!next.is_string()) throw ParseError("transition target must be a state name");
      a.transitions[q][index_of(a.alphabet, symbol, "symbol")] =
          index_of(a.states, next.get<std::string>(), "state");
    }
  }
  for (std::size_t q = 0; q < a.states.size(); ++q) {
    for (std::size_t s = 0; s < a.alphabet.size(); ++s) {
      if (a.transitions[q][s] < 0) {
        throw ParseError("no transition for (" + a.states[q] + ", " + a.alphabet[s] + ")");
      }
    }
  }
  a.validate();
  return a;
}

TuringMachine turing_from_json(const json& doc) {
  TuringMachine m;
  m.alphabet = get<std::vector<std::string>>(doc, "alphabet");
  m.empty = index_of(m.alphabet, get<std::string>(doc, "empty"), "symbol");
  m.states = get<std::vector<std::string>>(doc, "states");
  m.initial = index_of(m.states, get<std::string>(doc, "initial"), "state");
  m.memory = get<std::size_t>(doc, "memory");
  m.runtime = get<std::size_t>(doc, "runtime");
  std::vector<std::vector<bool>> seen(m.states.size(), std::vector<bool>(m.alphabet.size()));
  m.transitions.assign(m.states.size(), std::vector<Transition>(m.alphabet.size()));
  for (const auto& [state, row] : object_field(doc, "transitions").items()) {
    const int q = index_of(m.states, state, "state");
    if (!row.is_object()) throw ParseError("transitions of '" + state + "' must be an object");
    for (const auto& [symbol, entry] : row.items()) {
      const int a = index_of(m.alphabet, symbol, "symbol");
      if (!entry.is_array() || entry.size() != 3 || !entry[0].is_string() ||
          !entry[1].is_string() || !entry[2].is_string()) {
        throw ParseError("transition (" + state + ", " + symbol +
                         ") must be [next_state, write, \"L\"|\"R\"]");
      }
      Transition& t = m.transitions[q][a];
      t.next_state = index_of(m.states, entry[0].get<std::string>(), "state");
      t.write = index_of(m.alphabet, entry[1].get<std::string>(), "symbol");
      const std::string move = entry[2].get<std::string>();
      if (move == "L") {
        t.move = Move::kLeft;
      } else if (move == "R") {
        t.move = Move::kRight;
      } else {
        throw ParseError("head move must be \"L\" or \"R\", got \"" + move + "\"");
      }
      seen[q][a] = true;
    }
  }
  for (std::size_t q = 0; q < m.states.size(); ++q) {
    for (std::size_t a = 0; a < m.alphabet.size(); ++a) {
      if (!seen[q][a]) throw ParseError("no transition for (" + m.states[q] + ", " + m.alphabet[a] + ")");
    }
  }
  m.validate();
  return m;
}

Circuit circuit_from_json(const json& doc) {
  Circuit c;
  c.alphabet = get<std::vector<std::string>>(doc, "alphabet");
  c.num_inputs = get<int>(doc, "inputs");
  c.max_fan_in = doc.contains("max_fan_in") ? get<int>(doc, "max_fan_in") : 2;
  const auto gates = get<json>(doc, "gates");
  if (!gates.is_array()) throw ParseError("field 'gates' must be an array");
  for (const json& g : gates) {
    c.gates.push_back(Gate{get<std::vector<int>>(g, "inputs"), get<std::vector<int>>(g, "table")});
  }
  c.validate();
  return c;
}

json to_json(const Automaton& a) {
  json delta = json::object();
  for (std::size_t q = 0; q < a.states.size(); ++q) {
    for (std::size_t s = 0; s < a.alphabet.size(); ++s) {
      delta[a.states[q]][a.alphabet[s]] = a.states[a.transitions[q][s]];
    }
  }
  return json{{"alphabet", a.alphabet},
              {"states", a.states},
              {"initial", a.states[a.initial]},
              {"transitions", delta}};
}

json to_json(const TuringMachine& m) {
  json delta = json::object();
  for (std::size_t q = 0; q < m.states.size(); ++q) {
    for (std::size_t a = 0; a < m.alphabet.size(); ++a) {
      const Transition& t = m.transitions[q][a];
      delta[m.states[q]][m.alphabet[a]] =
          json::array({m.states[t.next_state], m.alphabet[t.write], t.move == Move::kLeft ? "L" : "R"});
    }
  }
  return json{{"alphabet", m.alphabet}, {"empty", m.alphabet[m.empty]},
              {"states", m.states},     {"initial", m.states[m.initial]},
              {"memory", m.memory},     {"runtime", m.runtime},
              {"transitions", delta}};
}

json to_json(const Circuit& c) {
  json gates = json::array();
  for (const Gate& g : c.gates) gates.push_back(json{{"inputs", g.inputs}, {"table", g.table}});
  return json{{"alphabet", c.alphabet}, {"inputs", c.num_inputs}, {"max_fan_in", c.max_fan_in},
              {"gates", gates}};
}

Automaton load_automaton(const std::filesystem::path& path) {
  return automaton_from_json(load_json(path));
}

TuringMachine load_turing(const std::filesystem::path& path) {
  return turing_from_json(load_json(path));
}

Circuit load_circuit(const std::filesystem::path& path) {
  return circuit_from_json(load_json(path));
}

std::vector<int> parse_word(const std::vector<std::string>& alphabet, const std::string& text) {
  std::vector<std::string> parts;
  const bool separated = std::any_of(text.begin(), text.end(), [](unsigned char c) {
    return c == ',' || std::isspace(c);
  });
  if (separated) {
    std::string current;
    for (unsigned char c : text) {
      if (c == ',' || std::isspace(c)) {
        if (!current.empty()) parts.push_back(std::move(current));
        current.clear();
      } else {
        current.push_back(static_cast<char>(c));
      }
    }
    if (!current.empty()) parts.push_back(std::move(current));
  } else {
    for (char c : text) parts.emplace_back(1, c);
  }
  std::vector<int> word;
  for (const std::string& p : parts) word.push_back(index_of(alphabet, p, "symbol"));
  return word;
}

std::string format_word(const std::vector<std::string>& alphabet, const std::vector<int>& word) {
  const bool single = std::all_of(alphabet.begin(), alphabet.end(),
                                  [](const std::string& s) { return s.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (!single && i > 0) out += ' ';
    out += alphabet.at(word[i]);
  }
  return out;
}

}  // namespace ardt::theory
