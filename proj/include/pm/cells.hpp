#pragma once

#include <optional>
#include <vector>

#include "pm/game.hpp"
#include "pm/polytope.hpp"

namespace pm {

enum class CellStatus { StronglyPareto, Degenerate, NonPareto };

inline const char* to_string(CellStatus s) {
  switch (s) {
    case CellStatus::StronglyPareto: return "strongly-pareto";
    case CellStatus::Degenerate: return "degenerate";
    case CellStatus::NonPareto: return "non-pareto";
  }
  return "?";
}

struct CellInfo {
  CellStatus status = CellStatus::NonPareto;
  int dim = -1;
  std::optional<RatVector> witness;  // relative-interior point of the cell
};

/// Per-action cell classification. Actions sharing an identical gain row have
/// identical cells; they are grouped, every member carries the group's cell
/// data, and only the lowest-index representative takes part in neighbor
/// enumeration.
struct CellReport {
  std::vector<CellInfo> cells;
  std::vector<int> representative;                 // rep action index per action
  std::vector<std::vector<int>> duplicate_groups;  // groups with >= 2 members

  bool strongly_pareto(int action) const {
    return cells[static_cast<std::size_t>(action)].status == CellStatus::StronglyPareto;
  }
};

/// Probability simplex over `m` outcomes: coordinates sum to one and are
/// nonnegative.
inline ConstraintSet<Rational> simplex_constraints(int m) {
  ConstraintSet<Rational> cs;
  cs.num_vars = m;
  cs.equalities.push_back({RatVector::Ones(m), Rational(1)});
  for (int j = 0; j < m; ++j) {
    RatVector e = RatVector::Zero(m);
    e(j) = 1;
    cs.inequalities.push_back({std::move(e), Rational(0)});
  }
  return cs;
}

/// Constraints whose feasible set is exactly the cell of `action`: the
/// simplex plus one optimality comparison row per competing action.
inline ConstraintSet<Rational> cell_constraints(const Game& g, int action) {
  ConstraintSet<Rational> cs = simplex_constraints(g.num_outcomes());
  for (int j = 0; j < g.num_actions(); ++j) {
    if (j == action) continue;
    cs.inequalities.push_back({(g.gain.row(action) - g.gain.row(j)).transpose(), Rational(0)});
  }
  return cs;
}

/// Constraints for C_i intersected with C_j. The comparison rows of both
/// cells are included, plus the explicit equality gain_i.q = gain_j.q that
/// holds everywhere on the intersection.
inline ConstraintSet<Rational> intersection_constraints(const Game& g, int i, int j) {
  ConstraintSet<Rational> cs = simplex_constraints(g.num_outcomes());
  for (int k = 0; k < g.num_actions(); ++k) {
    if (k != i) cs.inequalities.push_back({(g.gain.row(i) - g.gain.row(k)).transpose(), Rational(0)});
    if (k != j) cs.inequalities.push_back({(g.gain.row(j) - g.gain.row(k)).transpose(), Rational(0)});
  }
  cs.equalities.push_back({(g.gain.row(i) - g.gain.row(j)).transpose(), Rational(0)});
  return cs;
}

/// Classifies every action by the dimension of its cell: full-dimensional
/// (|M|-1) cells are strongly Pareto-optimal, non-empty lower-dimensional
/// cells degenerate, empty cells non-Pareto.
inline CellReport cell_decomposition(const Game& g) {
  const int n = g.num_actions();
  const int m = g.num_outcomes();
  CellReport report;
  report.cells.resize(static_cast<std::size_t>(n));
  report.representative.resize(static_cast<std::size_t>(n));

  std::vector<int> group_of(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < n; ++i) {
    if (group_of[static_cast<std::size_t>(i)] >= 0) continue;
    groups.push_back({i});
    group_of[static_cast<std::size_t>(i)] = static_cast<int>(groups.size()) - 1;
    for (int j = i + 1; j < n; ++j) {
      if (group_of[static_cast<std::size_t>(j)] >= 0) continue;
      if (g.gain.row(i) == g.gain.row(j)) {
        groups.back().push_back(j);
        group_of[static_cast<std::size_t>(j)] = group_of[static_cast<std::size_t>(i)];
      }
    }
  }

  for (const auto& group : groups) {
    const int rep = group.front();
    auto dr = polytope_dimension(cell_constraints(g, rep));
    CellInfo info;
    info.dim = dr.dim;
    info.witness = dr.interior_witness;
    if (dr.dim == m - 1)
      info.status = CellStatus::StronglyPareto;
    else if (dr.dim >= 0)
      info.status = CellStatus::Degenerate;
    else
      info.status = CellStatus::NonPareto;
    for (int member : group) {
      report.cells[static_cast<std::size_t>(member)] = info;
      report.representative[static_cast<std::size_t>(member)] = rep;
    }
    if (group.size() >= 2) report.duplicate_groups.push_back(group);
  }
  return report;
}

/// A neighbor pair (i,j) with its neighborhood action set and a
/// relative-interior witness of C_i intersect C_j.
struct NeighborPair {
  int i = 0;
  int j = 0;
  std::vector<int> neighborhood;  // every k with C_i cap C_j subseteq C_k
  RatVector witness;
};

struct NeighborReport {
  std::vector<NeighborPair> pairs;

  const NeighborPair* find(int i, int j) const {
    for (const auto& p : pairs)
      if ((p.i == i && p.j == j) || (p.i == j && p.j == i)) return &p;
    return nullptr;
  }
};

/// Enumerates neighbor pairs among strongly Pareto-optimal representatives:
/// (i,j) qualifies iff dim(C_i cap C_j) == |M|-2. For qualifying pairs the
/// neighborhood set N_ij = { k : C_i cap C_j subseteq C_k } is read off the
/// relative-interior witness w: on the intersection the optimal value is
/// gain_i.q, and an affine function that is nonnegative on a convex set and
/// zero at a relative-interior point vanishes identically, so the containment
/// holds iff gain_k.w == gain_i.w. Membership is tested for every action,
/// degenerate and duplicate ones included.
inline NeighborReport neighbor_pairs(const Game& g, const CellReport& cells) {
  const int n = g.num_actions();
  const int m = g.num_outcomes();
  NeighborReport report;
  std::vector<int> reps;
  for (int i = 0; i < n; ++i)
    if (cells.representative[static_cast<std::size_t>(i)] == i && cells.strongly_pareto(i))
      reps.push_back(i);

  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = a + 1; b < reps.size(); ++b) {
      const int i = reps[a];
      const int j = reps[b];
      auto dr = polytope_dimension(intersection_constraints(g, i, j));
      if (dr.dim != m - 2) continue;
      NeighborPair pair;
      pair.i = i;
      pair.j = j;
      pair.witness = *dr.interior_witness;
      const Rational best = dot<Rational>(g.gain_row(i), pair.witness);
      for (int k = 0; k < n; ++k)
        if (dot<Rational>(g.gain_row(k), pair.witness) == best) pair.neighborhood.push_back(k);
      report.pairs.push_back(std::move(pair));
    }
  return report;
}

}  // namespace pm
