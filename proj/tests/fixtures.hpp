#pragma once

// Hand-built games covering each classifier verdict.

#include "pm/game.hpp"

namespace fixtures {

inline pm::Game from_rows(std::string name, std::vector<std::vector<const char*>> gains,
                          std::vector<std::vector<const char*>> symbols) {
  pm::Game g;
  g.name = std::move(name);
  const int n = static_cast<int>(gains.size());
  const int m = static_cast<int>(gains.front().size());
  for (int i = 0; i < n; ++i) g.actions.push_back("a" + std::to_string(i + 1));
  for (int o = 0; o < m; ++o) g.outcomes.push_back("o" + std::to_string(o + 1));
  g.gain.resize(n, m);
  g.feedback.resize(n, m);
  for (int i = 0; i < n; ++i)
    for (int o = 0; o < m; ++o) {
      g.gain(i, o) =
          pm::parse_rational(gains[static_cast<std::size_t>(i)][static_cast<std::size_t>(o)]);
      const std::string sym = symbols[static_cast<std::size_t>(i)][static_cast<std::size_t>(o)];
      int idx = -1;
      for (std::size_t s = 0; s < g.alphabet.size(); ++s)
        if (g.alphabet[s] == sym) idx = static_cast<int>(s);
      if (idx < 0) {
        idx = static_cast<int>(g.alphabet.size());
        g.alphabet.push_back(sym);
      }
      g.feedback(i, o) = idx;
    }
  pm::validate_game(g);
  return g;
}

/// One action dominates everywhere: the game is Trivial.
inline pm::Game trivial_game() {
  return from_rows("trivial-fixture", {{"1", "1"}, {"0", "0"}},
                   {{"s", "s"}, {"s", "s"}});
}

/// Two strongly Pareto actions, constant uninformative feedback: Hopeless.
inline pm::Game hopeless_game() {
  return from_rows("hopeless-fixture", {{"1", "0"}, {"0", "1"}},
                   {{"s", "s"}, {"s", "s"}});
}

/// Two strongly Pareto actions with blind feedback plus a never-optimal
/// revealing action. The revealing action makes every difference globally
/// observable, but its empty cell keeps it out of the neighborhood of the
/// (a1,a2) boundary, so that pair fails the local test: Hard.
inline pm::Game hard_game() {
  return from_rows("hard-fixture", {{"1", "0"}, {"0", "1"}, {"-1", "-1"}},
                   {{"c", "c"}, {"c", "c"}, {"x", "y"}});
}

}  // namespace fixtures
