#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pm/dense.hpp"

namespace pm {

/// Feedback symbols of the dueling construction, in canonical alphabet order.
inline constexpr const char* kLossSymbol = "□";  // □  first < second
inline constexpr const char* kTieSymbol = "◇";   // ◇  first = second
inline constexpr const char* kWinSymbol = "■";   // ■  first > second

/// Unordered arm pair with 1-based indices, normalized so first <= second.
struct ActionPair {
  int first = 0;
  int second = 0;
  friend bool operator==(const ActionPair&, const ActionPair&) = default;
};

/// A finite partial-monitoring game. Gains are exact rationals; feedback
/// entries index into `alphabet`. Losses are never stored: loss(i,m) is
/// -gain(i,m) by convention, so argmin over losses is argmax over gains.
/// Instances are immutable after construction and safe to share across
/// threads.
struct Game {
  std::string name;
  std::vector<std::string> actions;
  std::vector<std::string> outcomes;
  std::vector<std::string> alphabet;
  RatMatrix gain;             // |N| x |M|
  Eigen::MatrixXi feedback;   // |N| x |M|, symbol indices

  int num_actions() const { return static_cast<int>(actions.size()); }
  int num_outcomes() const { return static_cast<int>(outcomes.size()); }
  const std::string& symbol_at(int action, int outcome) const {
    return alphabet[static_cast<std::size_t>(feedback(action, outcome))];
  }
  RatVector gain_row(int action) const { return gain.row(action).transpose(); }
  RatVector loss_row(int action) const { return (-gain.row(action)).transpose(); }
};

/// Checks the structural invariants shared by every Game. Throws
/// std::invalid_argument describing the first violation.
inline void validate_game(const Game& g) {
  const int n = g.num_actions();
  const int m = g.num_outcomes();
  if (n < 1 || m < 1) throw std::invalid_argument("game needs at least one action and one outcome");
  if (g.gain.rows() != n || g.gain.cols() != m)
    throw std::invalid_argument("gain matrix must be |N| x |M|");
  if (g.feedback.rows() != n || g.feedback.cols() != m)
    throw std::invalid_argument("feedback matrix must be |N| x |M|");
  if (g.alphabet.empty()) throw std::invalid_argument("alphabet must not be empty");
  std::vector<bool> used(g.alphabet.size(), false);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      int s = g.feedback(i, j);
      if (s < 0 || s >= static_cast<int>(g.alphabet.size()))
        throw std::invalid_argument("feedback entry indexes outside the alphabet");
      used[static_cast<std::size_t>(s)] = true;
    }
  for (std::size_t s = 0; s < used.size(); ++s)
    if (!used[s])
      throw std::invalid_argument("alphabet symbol '" + g.alphabet[s] + "' never occurs in feedback");
}

namespace detail {

inline void check_arm_count(int arms) {
  if (arms < 2 || arms > 16)
    throw std::invalid_argument("arm count must be between 2 and 16, got " + std::to_string(arms));
}

inline int outcome_bit(int outcome, int arm, int arms) {
  // big-endian: arm 1 owns the most significant bit
  return (outcome >> (arms - arm)) & 1;
}

inline std::string outcome_label(int outcome, int arms) {
  std::string s(static_cast<std::size_t>(arms), '0');
  for (int a = 1; a <= arms; ++a)
    if (outcome_bit(outcome, a, arms)) s[static_cast<std::size_t>(a - 1)] = '1';
  return s;
}

inline std::string pair_label(const ActionPair& p, int arms) {
  if (arms <= 9) return std::to_string(p.first) + std::to_string(p.second);
  return std::to_string(p.first) + "-" + std::to_string(p.second);
}

}  // namespace detail

/// All unordered arm pairs (i,j) with i <= j, in lexicographic order. This is
/// the row order of the dueling gain/feedback matrices.
inline std::vector<ActionPair> dueling_action_pairs(int arms) {
  detail::check_arm_count(arms);
  std::vector<ActionPair> pairs;
  pairs.reserve(static_cast<std::size_t>(arms * (arms + 1) / 2));
  for (int i = 1; i <= arms; ++i)
    for (int j = i; j <= arms; ++j) pairs.push_back({i, j});
  return pairs;
}

/// Index of pair (first,second) in dueling_action_pairs order.
inline int dueling_pair_index(const ActionPair& p, int arms) {
  return (p.first - 1) * arms - (p.first - 1) * (p.first - 2) / 2 + (p.second - p.first);
}

/// Binary utility-based dueling bandit with `arms` arms: actions are the
/// K(K+1)/2 unordered arm pairs, outcomes the 2^K binary gain vectors. The
/// gain of a duel is the average of the two arms' gains; the feedback symbol
/// is the duel's sign (□ loss, ◇ tie, ■ win for the lower-indexed arm).
inline Game build_dueling_game(int arms) {
  detail::check_arm_count(arms);
  Game g;
  g.name = "dueling-" + std::to_string(arms);
  g.alphabet = {kLossSymbol, kTieSymbol, kWinSymbol};
  const auto pairs = dueling_action_pairs(arms);
  const int n = static_cast<int>(pairs.size());
  const int m = 1 << arms;
  g.actions.reserve(static_cast<std::size_t>(n));
  for (const auto& p : pairs) g.actions.push_back(detail::pair_label(p, arms));
  g.outcomes.reserve(static_cast<std::size_t>(m));
  for (int o = 0; o < m; ++o) g.outcomes.push_back(detail::outcome_label(o, arms));
  g.gain.resize(n, m);
  g.feedback.resize(n, m);
  for (int a = 0; a < n; ++a) {
    const auto [i, j] = pairs[static_cast<std::size_t>(a)];
    for (int o = 0; o < m; ++o) {
      const int bi = detail::outcome_bit(o, i, arms);
      const int bj = detail::outcome_bit(o, j, arms);
      g.gain(a, o) = make_rational(bi + bj, 2);
      g.feedback(a, o) = bi < bj ? 0 : (bi == bj ? 1 : 2);
    }
  }
  return g;
}

/// Multi-armed bandit with binary gains: K actions, 2^K outcomes, and the
/// chosen arm's gain revealed verbatim as the feedback symbol ("0" or "1").
inline Game build_mab_game(int arms) {
  detail::check_arm_count(arms);
  Game g;
  g.name = "mab-" + std::to_string(arms);
  g.alphabet = {"0", "1"};
  const int m = 1 << arms;
  for (int i = 1; i <= arms; ++i) g.actions.push_back(std::to_string(i));
  for (int o = 0; o < m; ++o) g.outcomes.push_back(detail::outcome_label(o, arms));
  g.gain.resize(arms, m);
  g.feedback.resize(arms, m);
  for (int a = 0; a < arms; ++a)
    for (int o = 0; o < m; ++o) {
      const int bit = detail::outcome_bit(o, a + 1, arms);
      g.gain(a, o) = Rational(bit);
      g.feedback(a, o) = bit;
    }
  return g;
}

/// Discretized dynamic pricing: the seller posts a price, the buyer holds a
/// hidden valuation, and the only feedback is whether the sale happened.
/// Prices must lie in (0,1] and valuations in [0,1], both strictly
/// increasing.
inline Game build_pricing_game(const std::vector<Rational>& prices,
                               const std::vector<Rational>& valuations) {
  if (prices.empty() || valuations.empty())
    throw std::invalid_argument("prices and valuations must be non-empty");
  for (std::size_t k = 0; k + 1 < prices.size(); ++k)
    if (!(prices[k] < prices[k + 1]))
      throw std::invalid_argument("prices must be strictly increasing");
  for (std::size_t k = 0; k + 1 < valuations.size(); ++k)
    if (!(valuations[k] < valuations[k + 1]))
      throw std::invalid_argument("valuations must be strictly increasing");
  for (const auto& p : prices)
    if (!(p > 0 && p <= 1)) throw std::invalid_argument("prices must lie in (0,1]");
  for (const auto& v : valuations)
    if (!(v >= 0 && v <= 1)) throw std::invalid_argument("valuations must lie in [0,1]");

  Game g;
  g.name = "pricing-" + std::to_string(prices.size()) + "x" + std::to_string(valuations.size());
  const int n = static_cast<int>(prices.size());
  const int m = static_cast<int>(valuations.size());
  for (const auto& p : prices) g.actions.push_back(to_string(p));
  for (const auto& v : valuations) g.outcomes.push_back(to_string(v));
  g.gain.resize(n, m);
  Eigen::MatrixXi sold(n, m);
  for (int a = 0; a < n; ++a)
    for (int o = 0; o < m; ++o) {
      const bool s = prices[static_cast<std::size_t>(a)] <= valuations[static_cast<std::size_t>(o)];
      sold(a, o) = s ? 1 : 0;
      g.gain(a, o) = s ? prices[static_cast<std::size_t>(a)] : Rational(0);
    }
  // alphabet in first-occurrence order over the feedback matrix
  std::vector<std::string> names = {"not sold", "sold"};
  std::vector<int> index_of(2, -1);
  g.feedback.resize(n, m);
  for (int a = 0; a < n; ++a)
    for (int o = 0; o < m; ++o) {
      int& idx = index_of[static_cast<std::size_t>(sold(a, o))];
      if (idx < 0) {
        idx = static_cast<int>(g.alphabet.size());
        g.alphabet.push_back(names[static_cast<std::size_t>(sold(a, o))]);
      }
      g.feedback(a, o) = idx;
    }
  return g;
}

/// Recovers the arm count of a game that is structurally a dueling build:
/// matching sizes, the canonical □/◇/■ alphabet, and gain/feedback matrices
/// identical to build_dueling_game(K). Labels and name are ignored.
inline std::optional<int> dueling_arm_count(const Game& g) {
  const int m = g.num_outcomes();
  int arms = 0;
  for (int k = 2; k <= 16; ++k)
    if ((1 << k) == m) {
      arms = k;
      break;
    }
  if (arms == 0) return std::nullopt;
  if (g.num_actions() != arms * (arms + 1) / 2) return std::nullopt;
  const Game ref = build_dueling_game(arms);
  if (g.alphabet != ref.alphabet) return std::nullopt;
  if (g.feedback != ref.feedback) return std::nullopt;
  for (int a = 0; a < g.num_actions(); ++a)
    for (int o = 0; o < m; ++o)
      if (g.gain(a, o) != ref.gain(a, o)) return std::nullopt;
  return arms;
}

/// First action whose label matches, or nullopt.
inline std::optional<int> find_action(const Game& g, std::string_view label) {
  for (int i = 0; i < g.num_actions(); ++i)
    if (g.actions[static_cast<std::size_t>(i)] == label) return i;
  return std::nullopt;
}

}  // namespace pm
