#pragma once

#include <optional>
#include <vector>

#include "pm/linalg.hpp"
#include "pm/linprog.hpp"

namespace pm {

struct DimensionResult {
  int dim = -1;                              // -1 means empty
  std::optional<RatVector> interior_witness; // relative-interior point when non-empty
};

/// Dimension of the affine hull of { x : equalities hold, inequalities hold },
/// together with a relative-interior witness.
///
/// An inequality a.x >= b is implicit iff its maximum slack over the feasible
/// set is zero; then dim = num_vars - rank(equality rows + implicit rows).
/// Each slack-maximizing LP gets the extra row a.x <= b+1 so it stays bounded
/// even on unbounded sets; that cannot change whether the maximum is zero.
/// The witness is the exact average of every feasible point collected along
/// the way: it has strictly positive slack on each non-implicit inequality
/// and lies on all implicit ones. Averaging also lets most rows skip their LP
/// entirely, because a row whose slack at the running average is already
/// positive cannot be implicit.
inline DimensionResult polytope_dimension(const ConstraintSet<Rational>& cs) {
  const int n = cs.num_vars;
  LinearProgram<Rational> feas{RatVector::Zero(n), cs};
  auto first = solve_lp(feas);
  if (first.status == LpStatus::Infeasible) return {};

  std::vector<RatVector> points;
  points.push_back(first.point);
  RatVector sum = first.point;

  std::vector<int> implicit_rows;
  for (int k = 0; k < static_cast<int>(cs.inequalities.size()); ++k) {
    const auto& row = cs.inequalities[static_cast<std::size_t>(k)];
    Rational avg_slack = dot<Rational>(row.coeffs, sum) - row.rhs * Rational(points.size());
    if (avg_slack > 0) continue;

    LinearProgram<Rational> slack_lp{row.coeffs, cs};
    slack_lp.constraints.inequalities.push_back({-row.coeffs, -(row.rhs + 1)});
    auto res = solve_lp(slack_lp);
    if (res.status != LpStatus::Optimal)
      throw std::logic_error("slack LP must be feasible and bounded");
    if (res.value == row.rhs) {
      implicit_rows.push_back(k);
    } else {
      points.push_back(res.point);
      sum += res.point;
    }
  }

  RatMatrix eq_rows(static_cast<int>(cs.equalities.size()) + static_cast<int>(implicit_rows.size()), n);
  int r = 0;
  for (const auto& eq : cs.equalities) eq_rows.row(r++) = eq.coeffs.transpose();
  for (int k : implicit_rows)
    eq_rows.row(r++) = cs.inequalities[static_cast<std::size_t>(k)].coeffs.transpose();

  DimensionResult out;
  out.dim = n - matrix_rank(eq_rows);
  RatVector witness = sum / Rational(points.size());
  out.interior_witness = std::move(witness);
  return out;
}

}  // namespace pm
