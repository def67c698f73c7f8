#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pm/game.hpp"

namespace pm {

/// Raised on any malformed game file. Messages carry 1-based row/column
/// positions where a matrix entry is at fault.
struct GameFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw GameFormatError(std::string("missing field '") + key + "'");
  return *it;
}

inline std::vector<std::string> string_list(const nlohmann::json& j, const char* key) {
  if (!j.is_array()) throw GameFormatError(std::string("field '") + key + "' must be a list of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw GameFormatError(std::string("field '") + key + "' must be a list of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace detail

/// Parses the JSON game-file format. Every structural defect is reported
/// with enough position information to fix the file by hand.
inline Game load_game(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw GameFormatError(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw GameFormatError("top level must be an object");

  Game g;
  const auto& name = detail::require_field(j, "name");
  if (!name.is_string()) throw GameFormatError("field 'name' must be a string");
  g.name = name.get<std::string>();
  g.actions = detail::string_list(detail::require_field(j, "actions"), "actions");
  g.outcomes = detail::string_list(detail::require_field(j, "outcomes"), "outcomes");
  g.alphabet = detail::string_list(detail::require_field(j, "alphabet"), "alphabet");
  if (g.actions.empty()) throw GameFormatError("'actions' must not be empty");
  if (g.outcomes.empty()) throw GameFormatError("'outcomes' must not be empty");
  if (g.alphabet.empty()) throw GameFormatError("'alphabet' must not be empty");
  for (std::size_t a = 0; a < g.alphabet.size(); ++a)
    for (std::size_t b = a + 1; b < g.alphabet.size(); ++b)
      if (g.alphabet[a] == g.alphabet[b])
        throw GameFormatError("alphabet symbol '" + g.alphabet[a] + "' listed twice");

  const int n = static_cast<int>(g.actions.size());
  const int m = static_cast<int>(g.outcomes.size());

  const auto& gain = detail::require_field(j, "gain");
  if (!gain.is_array() || static_cast<int>(gain.size()) != n)
    throw GameFormatError("gain must have " + std::to_string(n) + " rows (one per action)");
  g.gain.resize(n, m);
  for (int r = 0; r < n; ++r) {
    const auto& row = gain[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != m)
      throw GameFormatError("gain row " + std::to_string(r + 1) + " has " +
                            std::to_string(row.is_array() ? row.size() : 0) + " entries, expected " +
                            std::to_string(m));
    for (int c = 0; c < m; ++c) {
      const auto& cell = row[static_cast<std::size_t>(c)];
      std::string entry;
      if (cell.is_string())
        entry = cell.get<std::string>();
      else if (cell.is_number_integer())
        entry = std::to_string(cell.get<long long>());
      else
        throw GameFormatError("gain row " + std::to_string(r + 1) + " column " + std::to_string(c + 1) +
                              ": expected a rational string");
      try {
        g.gain(r, c) = parse_rational(entry);
      } catch (const std::invalid_argument& e) {
        throw GameFormatError("gain row " + std::to_string(r + 1) + " column " + std::to_string(c + 1) +
                              ": " + e.what());
      }
    }
  }

  const auto& feedback = detail::require_field(j, "feedback");
  if (!feedback.is_array() || static_cast<int>(feedback.size()) != n)
    throw GameFormatError("feedback must have " + std::to_string(n) + " rows (one per action)");
  g.feedback.resize(n, m);
  for (int r = 0; r < n; ++r) {
    const auto& row = feedback[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != m)
      throw GameFormatError("feedback row " + std::to_string(r + 1) + " has " +
                            std::to_string(row.is_array() ? row.size() : 0) + " entries, expected " +
                            std::to_string(m));
    for (int c = 0; c < m; ++c) {
      const auto& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_string())
        throw GameFormatError("feedback row " + std::to_string(r + 1) + " column " +
                              std::to_string(c + 1) + ": expected an alphabet symbol");
      const std::string sym = cell.get<std::string>();
      int idx = -1;
      for (std::size_t s = 0; s < g.alphabet.size(); ++s)
        if (g.alphabet[s] == sym) {
          idx = static_cast<int>(s);
          break;
        }
      if (idx < 0)
        throw GameFormatError("feedback row " + std::to_string(r + 1) + " column " +
                              std::to_string(c + 1) + ": unknown symbol '" + sym + "'");
      g.feedback(r, c) = idx;
    }
  }

  try {
    validate_game(g);
  } catch (const std::invalid_argument& e) {
    throw GameFormatError(e.what());
  }
  return g;
}

/// Canonical text form: rationals in lowest terms, fixed field order, two
/// space indentation. load_game(save_game(g)) reproduces g field for field.
inline std::string save_game(const Game& g) {
  nlohmann::ordered_json j;
  j["name"] = g.name;
  j["actions"] = g.actions;
  j["outcomes"] = g.outcomes;
  j["alphabet"] = g.alphabet;
  nlohmann::ordered_json gain = nlohmann::ordered_json::array();
  for (int r = 0; r < g.num_actions(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int c = 0; c < g.num_outcomes(); ++c) row.push_back(to_string(g.gain(r, c)));
    gain.push_back(std::move(row));
  }
  j["gain"] = std::move(gain);
  nlohmann::ordered_json feedback = nlohmann::ordered_json::array();
  for (int r = 0; r < g.num_actions(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int c = 0; c < g.num_outcomes(); ++c) row.push_back(g.symbol_at(r, c));
    feedback.push_back(std::move(row));
  }
  j["feedback"] = std::move(feedback);
  return j.dump(2) + "\n";
}

inline Game load_game_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GameFormatError("cannot open game file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_game(buf.str());
}

inline void save_game_file(const Game& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GameFormatError("cannot write game file '" + path + "'");
  out << save_game(g);
}

}  // namespace pm
