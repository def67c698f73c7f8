#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "pm/cells.hpp"
#include "pm/game.hpp"
#include "pm/linalg.hpp"

namespace pm {

/// 0/1 incidence matrix of feedback symbols versus outcomes for one action.
/// Rows follow `symbols`; each column sums to exactly one because every
/// outcome emits exactly one symbol.
struct SignalMatrix {
  int action = 0;
  std::vector<int> symbols;  // alphabet indices of the symbols in this row
  Eigen::MatrixXi entries;   // s_i x |M|
};

/// Signal matrix of `action`. Symbols occurring in the action's feedback row
/// are ordered by first occurrence, except that the canonical dueling
/// alphabet keeps its □, ◇, ■ order.
inline SignalMatrix signal_matrix(const Game& g, int action) {
  const int m = g.num_outcomes();
  SignalMatrix s;
  s.action = action;
  std::vector<int> seen;
  for (int o = 0; o < m; ++o) {
    const int sym = g.feedback(action, o);
    if (std::find(seen.begin(), seen.end(), sym) == seen.end()) seen.push_back(sym);
  }
  const bool dueling_alphabet =
      g.alphabet == std::vector<std::string>{kLossSymbol, kTieSymbol, kWinSymbol};
  if (dueling_alphabet) std::sort(seen.begin(), seen.end());
  s.symbols = std::move(seen);
  s.entries.setZero(static_cast<int>(s.symbols.size()), m);
  for (int o = 0; o < m; ++o) {
    const int sym = g.feedback(action, o);
    const auto it = std::find(s.symbols.begin(), s.symbols.end(), sym);
    s.entries(static_cast<int>(it - s.symbols.begin()), o) = 1;
  }
  return s;
}

/// Vertical concatenation, in the given order.
inline RatMatrix stack_signal_matrices(const std::vector<SignalMatrix>& mats) {
  if (mats.empty()) return RatMatrix(0, 0);
  const int cols = static_cast<int>(mats.front().entries.cols());
  int rows = 0;
  for (const auto& s : mats) {
    if (s.entries.cols() != cols)
      throw std::invalid_argument("signal matrices disagree on the outcome count");
    rows += static_cast<int>(s.entries.rows());
  }
  RatMatrix out(rows, cols);
  int r = 0;
  for (const auto& s : mats)
    for (int i = 0; i < s.entries.rows(); ++i, ++r)
      for (int c = 0; c < cols; ++c) out(r, c) = Rational(s.entries(i, c));
  return out;
}

struct ObservabilityCheck {
  bool observable = false;
  std::optional<RatVector> certificate;  // c with c^T . stack = (loss_i - loss_j)^T
};

namespace detail {

inline RatVector loss_difference(const Game& g, int i, int j) {
  return (g.gain.row(j) - g.gain.row(i)).transpose();  // loss_i - loss_j
}

inline ObservabilityCheck observability_against(const RatMatrix& stack, const RatVector& diff) {
  auto res = in_row_space(stack, diff);
  return {res.member, std::move(res.certificate)};
}

}  // namespace detail

/// Global observability of the pair (i,j): membership of loss_i - loss_j in
/// the row space of the stack of every action's signal matrix.
inline ObservabilityCheck global_observability(const Game& g, int i, int j) {
  std::vector<SignalMatrix> all;
  all.reserve(static_cast<std::size_t>(g.num_actions()));
  for (int k = 0; k < g.num_actions(); ++k) all.push_back(signal_matrix(g, k));
  return detail::observability_against(stack_signal_matrices(all), detail::loss_difference(g, i, j));
}

/// Local observability of a neighbor pair: same membership test against the
/// stack of the neighborhood actions' signal matrices only.
inline ObservabilityCheck local_observability(const Game& g, int i, int j,
                                              const std::vector<int>& neighborhood) {
  std::vector<SignalMatrix> local;
  local.reserve(neighborhood.size());
  for (int k : neighborhood) local.push_back(signal_matrix(g, k));
  return detail::observability_against(stack_signal_matrices(local),
                                       detail::loss_difference(g, i, j));
}

/// Overload that looks the neighborhood up in a report and rejects pairs
/// that are not neighbors.
inline ObservabilityCheck local_observability(const Game& g, int i, int j,
                                              const NeighborReport& neighbors) {
  const NeighborPair* p = neighbors.find(i, j);
  if (p == nullptr)
    throw std::invalid_argument("actions " + std::to_string(i) + " and " + std::to_string(j) +
                                " are not a neighbor pair");
  return local_observability(g, i, j, p->neighborhood);
}

/// Observability facts for one pair of strongly Pareto-optimal actions.
/// `locally` is present only when the pair is a neighbor pair.
struct PairObservability {
  int i = 0;
  int j = 0;
  bool globally = false;
  std::optional<RatVector> global_certificate;
  std::optional<bool> locally;
  std::optional<RatVector> local_certificate;
};

struct ObservabilityReport {
  std::vector<PairObservability> pairs;
};

/// Runs the global test on every (lexicographic) pair of strongly Pareto
/// actions and the local test on every neighbor pair.
inline ObservabilityReport observability_report(const Game& g, const CellReport& cells,
                                                const NeighborReport& neighbors) {
  ObservabilityReport report;
  std::vector<SignalMatrix> all;
  for (int k = 0; k < g.num_actions(); ++k) all.push_back(signal_matrix(g, k));
  const RatMatrix global_stack = stack_signal_matrices(all);

  for (int i = 0; i < g.num_actions(); ++i) {
    if (!cells.strongly_pareto(i)) continue;
    for (int j = i + 1; j < g.num_actions(); ++j) {
      if (!cells.strongly_pareto(j)) continue;
      PairObservability p;
      p.i = i;
      p.j = j;
      auto glob = detail::observability_against(global_stack, detail::loss_difference(g, i, j));
      p.globally = glob.observable;
      p.global_certificate = std::move(glob.certificate);
      if (const NeighborPair* np = neighbors.find(i, j)) {
        auto loc = local_observability(g, i, j, np->neighborhood);
        p.locally = loc.observable;
        p.local_certificate = std::move(loc.certificate);
      }
      report.pairs.push_back(std::move(p));
    }
  }
  return report;
}

enum class Verdict { Trivial, Easy, Hard, Hopeless };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Trivial: return "Trivial";
    case Verdict::Easy: return "Easy";
    case Verdict::Hard: return "Hard";
    case Verdict::Hopeless: return "Hopeless";
  }
  return "?";
}

/// Stable CLI exit code for a verdict.
inline int verdict_exit_code(Verdict v) {
  switch (v) {
    case Verdict::Trivial: return 10;
    case Verdict::Easy: return 11;
    case Verdict::Hard: return 12;
    case Verdict::Hopeless: return 13;
  }
  return 1;
}

/// Classification with machine-checkable evidence: the dominating action for
/// Trivial, the offending pair for Hopeless/Hard, and the full list of
/// locally observable neighbor pairs for Easy.
struct Classification {
  Verdict verdict = Verdict::Easy;
  std::optional<int> trivial_action;
  std::optional<std::pair<int, int>> hopeless_pair;
  std::optional<std::pair<int, int>> hard_pair;
  std::vector<std::pair<int, int>> easy_pairs;
};

/// Action whose cell is the whole simplex, if any: equivalent to its gain row
/// dominating every other row componentwise, which needs no LP.
inline std::optional<int> dominant_action(const Game& g) {
  for (int i = 0; i < g.num_actions(); ++i) {
    bool dominant = true;
    for (int j = 0; j < g.num_actions() && dominant; ++j) {
      if (j == i) continue;
      for (int o = 0; o < g.num_outcomes(); ++o)
        if (g.gain(i, o) < g.gain(j, o)) {
          dominant = false;
          break;
        }
    }
    if (dominant) return i;
  }
  return std::nullopt;
}

inline Classification classify_from(const Game& g, const NeighborReport& neighbors,
                                    const ObservabilityReport& obs) {
  Classification c;
  if (auto dom = dominant_action(g)) {
    c.verdict = Verdict::Trivial;
    c.trivial_action = dom;
    return c;
  }
  for (const auto& p : obs.pairs)
    if (!p.globally) {
      c.verdict = Verdict::Hopeless;
      c.hopeless_pair = std::make_pair(p.i, p.j);
      return c;
    }
  for (const auto& p : neighbors.pairs) {
    const PairObservability* po = nullptr;
    for (const auto& q : obs.pairs)
      if (q.i == p.i && q.j == p.j) {
        po = &q;
        break;
      }
    if (po == nullptr || !po->locally.has_value() || !*po->locally) {
      c.verdict = Verdict::Hard;
      c.hard_pair = std::make_pair(p.i, p.j);
      return c;
    }
    c.easy_pairs.emplace_back(p.i, p.j);
  }
  c.verdict = Verdict::Easy;
  return c;
}

/// Everything the classifier derives, bundled for reporting.
struct GameAnalysis {
  CellReport cells;
  NeighborReport neighbors;
  ObservabilityReport observability;
  Classification classification;
};

inline GameAnalysis analyze(const Game& g) {
  GameAnalysis a;
  a.cells = cell_decomposition(g);
  a.neighbors = neighbor_pairs(g, a.cells);
  a.observability = observability_report(g, a.cells, a.neighbors);
  a.classification = classify_from(g, a.neighbors, a.observability);
  return a;
}

inline Classification classify(const Game& g) { return analyze(g).classification; }

/// Outcome of the B.H = G solvability test. `conflict` names two outcome
/// columns whose feedback columns agree symbol-for-symbol across all actions
/// while the gain columns differ; such a pair rules out a solution for every
/// numeric encoding of the symbols, not just the one supplied.
struct FeedexpResult {
  bool feasible = false;
  std::optional<RatMatrix> coefficient_matrix;        // B with B . H_num = G
  std::optional<std::pair<int, int>> conflict;        // outcome column indices
};

/// Tests whether some matrix B satisfies B . H_num = G, where H_num applies
/// `encoding` (one Rational per alphabet symbol) entrywise to the feedback
/// matrix. Solved row by row as a row-space membership against H_num.
inline FeedexpResult feedexp_precondition(const Game& g, const std::vector<Rational>& encoding) {
  if (encoding.size() != g.alphabet.size())
    throw std::invalid_argument("encoding must assign a value to every alphabet symbol");
  const int n = g.num_actions();
  const int m = g.num_outcomes();
  FeedexpResult result;

  // structural conflict scan, independent of the encoding
  std::map<std::vector<int>, int> first_with_column;
  for (int o = 0; o < m && !result.conflict; ++o) {
    std::vector<int> column(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) column[static_cast<std::size_t>(i)] = g.feedback(i, o);
    auto [it, inserted] = first_with_column.emplace(std::move(column), o);
    if (inserted) continue;
    const int prev = it->second;
    for (int i = 0; i < n; ++i)
      if (g.gain(i, prev) != g.gain(i, o)) {
        result.conflict = std::make_pair(prev, o);
        break;
      }
  }

  RatMatrix h_num(n, m);
  for (int i = 0; i < n; ++i)
    for (int o = 0; o < m; ++o)
      h_num(i, o) = encoding[static_cast<std::size_t>(g.feedback(i, o))];

  RatMatrix b(n, n);
  bool feasible = true;
  for (int i = 0; i < n && feasible; ++i) {
    auto row = in_row_space(h_num, g.gain_row(i));
    if (row.member)
      b.row(i) = row.certificate->transpose();
    else
      feasible = false;
  }
  result.feasible = feasible;
  if (feasible) result.coefficient_matrix = std::move(b);
  return result;
}

/// The default numeric encoding: symbols that already parse as rationals keep
/// their value; the dueling alphabet maps to □=0, ◇=1/2, ■=1. Anything else
/// needs an explicit encoding.
inline std::vector<Rational> default_symbol_encoding(const Game& g) {
  std::vector<Rational> enc;
  enc.reserve(g.alphabet.size());
  bool numeric = true;
  for (const auto& s : g.alphabet) {
    try {
      enc.push_back(parse_rational(s));
    } catch (const std::invalid_argument&) {
      numeric = false;
      break;
    }
  }
  if (numeric) return enc;
  if (g.alphabet == std::vector<std::string>{kLossSymbol, kTieSymbol, kWinSymbol})
    return {Rational(0), make_rational(1, 2), Rational(1)};
  throw std::invalid_argument("no default numeric encoding for this alphabet; supply one");
}

/// A single outcome distribution shared by every cell of a dueling game: the
/// vertex concentrated on the all-ones outcome, where every duel earns the
/// maximal gain 1.
struct PointLocalWitness {
  RatVector point;                  // delta at the all-ones outcome
  std::vector<int> optimal_actions; // argmax of expected gain at the point
};

inline PointLocalWitness point_local_witness(const Game& g) {
  auto arms = dueling_arm_count(g);
  if (!arms) throw std::invalid_argument("point-local witness needs a dueling game");
  const int m = g.num_outcomes();
  PointLocalWitness w;
  w.point = RatVector::Zero(m);
  w.point(m - 1) = 1;  // all-ones outcome is the last column
  Rational best(0);
  for (int i = 0; i < g.num_actions(); ++i) best = std::max(best, g.gain(i, m - 1));
  for (int i = 0; i < g.num_actions(); ++i)
    if (g.gain(i, m - 1) == best) w.optimal_actions.push_back(i);
  return w;
}

}  // namespace pm
