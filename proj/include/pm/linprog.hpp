#pragma once

#include <stdexcept>
#include <vector>

#include "pm/dense.hpp"

namespace pm {

/// One linear constraint: coeffs . x (== or >=) rhs depending on which list
/// it sits in.
template <class Scalar>
struct LinearConstraint {
  DenseVector<Scalar> coeffs;
  Scalar rhs{};
};

template <class Scalar>
struct ConstraintSet {
  int num_vars = 0;
  std::vector<LinearConstraint<Scalar>> equalities;    // coeffs . x == rhs
  std::vector<LinearConstraint<Scalar>> inequalities;  // coeffs . x >= rhs
};

/// maximize objective . x subject to the constraint set; variables are free
/// unless constrained.
template <class Scalar>
struct LinearProgram {
  DenseVector<Scalar> objective;
  ConstraintSet<Scalar> constraints;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <class Scalar>
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Scalar value{};
  DenseVector<Scalar> point;  // only meaningful when Optimal
};

namespace detail {

template <class Scalar>
void check_lp_shape(const LinearProgram<Scalar>& lp) {
  const int n = lp.constraints.num_vars;
  if (n < 1) throw std::invalid_argument("linear program needs at least one variable");
  if (lp.objective.size() != n) throw std::invalid_argument("objective length mismatch");
  for (const auto& c : lp.constraints.equalities)
    if (c.coeffs.size() != n) throw std::invalid_argument("equality row length mismatch");
  for (const auto& c : lp.constraints.inequalities)
    if (c.coeffs.size() != n) throw std::invalid_argument("inequality row length mismatch");
}

/// Dense simplex tableau with an explicit objective row. Entering and leaving
/// variables follow Bland's rule (lowest eligible index), which prevents
/// cycling and makes every solve deterministic.
template <class Scalar>
class SimplexTableau {
 public:
  SimplexTableau(DenseMatrix<Scalar> rows, DenseVector<Scalar> rhs, std::vector<int> basis)
      : t_(std::move(rows)), rhs_(std::move(rhs)), basis_(std::move(basis)) {}

  int rows() const { return static_cast<int>(t_.rows()); }
  int cols() const { return static_cast<int>(t_.cols()); }
  const std::vector<int>& basis() const { return basis_; }
  const Scalar& rhs(int r) const { return rhs_(r); }
  const Scalar& at(int r, int c) const { return t_(r, c); }

  /// Installs costs and prices out the current basis; obj_[j] holds the
  /// negated reduced cost, obj_value_ the current objective value.
  void set_objective(const DenseVector<Scalar>& costs) {
    obj_ = -costs;
    obj_value_ = Scalar{};
    for (int r = 0; r < rows(); ++r) {
      const Scalar f = obj_(basis_[static_cast<std::size_t>(r)]);
      if (!(f == Scalar{})) {
        obj_ -= f * t_.row(r).transpose();
        obj_value_ -= f * rhs_(r);
        obj_(basis_[static_cast<std::size_t>(r)]) = Scalar{};  // keep exact zeros
      }
    }
  }

  /// Runs the pivot loop. Returns false when the objective is unbounded
  /// above, true at optimality. `blocked` marks columns that may not enter.
  bool maximize(const std::vector<bool>& blocked) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < cols(); ++j)
        if (!blocked[static_cast<std::size_t>(j)] && obj_(j) < Scalar{}) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      int leave = -1;
      Scalar best_ratio{};
      for (int r = 0; r < rows(); ++r) {
        if (!(t_(r, enter) > Scalar{})) continue;
        Scalar ratio = rhs_(r) / t_(r, enter);
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio &&
             basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)]))
          leave = r, best_ratio = ratio;
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  void pivot(int r, int c) {
    const Scalar p = t_(r, c);
    t_.row(r) /= p;
    rhs_(r) /= p;
    for (int i = 0; i < rows(); ++i) {
      if (i == r) continue;
      const Scalar f = t_(i, c);
      if (f == Scalar{}) continue;
      t_.row(i) -= f * t_.row(r);
      rhs_(i) -= f * rhs_(r);
      t_(i, c) = Scalar{};
    }
    const Scalar fo = obj_(c);
    if (!(fo == Scalar{})) {
      obj_ -= fo * t_.row(r).transpose();
      obj_value_ -= fo * rhs_(r);
      obj_(c) = Scalar{};
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  const Scalar& objective_value() const { return obj_value_; }

  /// Value of structural column j in the current basic solution.
  Scalar column_value(int j) const {
    for (int r = 0; r < rows(); ++r)
      if (basis_[static_cast<std::size_t>(r)] == j) return rhs_(r);
    return Scalar{};
  }

  /// Drops the given rows and columns (used to retire artificials after
  /// phase 1). Basis indices are remapped.
  void shrink(const std::vector<bool>& drop_row, const std::vector<bool>& drop_col,
              std::vector<int>& col_remap) {
    col_remap.assign(static_cast<std::size_t>(cols()), -1);
    int nc = 0;
    for (int c = 0; c < cols(); ++c)
      if (!drop_col[static_cast<std::size_t>(c)]) col_remap[static_cast<std::size_t>(c)] = nc++;
    int nr = 0;
    for (int r = 0; r < rows(); ++r)
      if (!drop_row[static_cast<std::size_t>(r)]) ++nr;
    DenseMatrix<Scalar> nt(nr, nc);
    DenseVector<Scalar> nrhs(nr);
    std::vector<int> nbasis;
    nbasis.reserve(static_cast<std::size_t>(nr));
    int ri = 0;
    for (int r = 0; r < rows(); ++r) {
      if (drop_row[static_cast<std::size_t>(r)]) continue;
      int ci = 0;
      for (int c = 0; c < cols(); ++c)
        if (!drop_col[static_cast<std::size_t>(c)]) nt(ri, ci++) = t_(r, c);
      nrhs(ri) = rhs_(r);
      nbasis.push_back(col_remap[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])]);
      ++ri;
    }
    t_ = std::move(nt);
    rhs_ = std::move(nrhs);
    basis_ = std::move(nbasis);
  }

 private:
  DenseMatrix<Scalar> t_;
  DenseVector<Scalar> rhs_;
  std::vector<int> basis_;
  DenseVector<Scalar> obj_;
  Scalar obj_value_{};
};

}  // namespace detail

/// Number of simplex solves performed so far (diagnostics only).
inline std::size_t& lp_solve_count() {
  static std::size_t count = 0;
  return count;
}

/// Exact two-phase simplex over the given scalar. With Rational this is an
/// exact LP solver: the optimum, the witness point, and the Infeasible /
/// Unbounded verdicts carry no rounding at all.
///
/// Internals: variables get split into x = u - v unless a row of the exact
/// form x_j >= 0 certifies nonnegativity (those rows fold into the variable
/// bound instead of occupying a tableau row). Inequalities receive slack
/// columns, rows are sign-normalized so the right-hand side is nonnegative,
/// and artificial columns are added only where no slack can start basic.
template <class Scalar>
LpResult<Scalar> solve_lp(const LinearProgram<Scalar>& lp) {
  detail::check_lp_shape(lp);
  ++lp_solve_count();
  const auto& cs = lp.constraints;
  const int n = cs.num_vars;

  // fold "x_j >= 0" rows into variable bounds
  std::vector<bool> nonneg(static_cast<std::size_t>(n), false);
  std::vector<int> kept_ineqs;
  for (int k = 0; k < static_cast<int>(cs.inequalities.size()); ++k) {
    const auto& row = cs.inequalities[static_cast<std::size_t>(k)];
    int nz = -1;
    bool single = true;
    for (int j = 0; j < n && single; ++j)
      if (!(row.coeffs(j) == Scalar{})) {
        if (nz >= 0)
          single = false;
        else
          nz = j;
      }
    if (single && nz >= 0 && row.coeffs(nz) > Scalar{} && row.rhs == Scalar{})
      nonneg[static_cast<std::size_t>(nz)] = true;
    else
      kept_ineqs.push_back(k);
  }

  // column layout: u_j, then v_j for unsigned variables, then slacks
  std::vector<int> pos_col(static_cast<std::size_t>(n)), neg_col(static_cast<std::size_t>(n), -1);
  int ncols = 0;
  for (int j = 0; j < n; ++j) pos_col[static_cast<std::size_t>(j)] = ncols++;
  for (int j = 0; j < n; ++j)
    if (!nonneg[static_cast<std::size_t>(j)]) neg_col[static_cast<std::size_t>(j)] = ncols++;
  const int slack_base = ncols;
  ncols += static_cast<int>(kept_ineqs.size());

  const int m = static_cast<int>(cs.equalities.size()) + static_cast<int>(kept_ineqs.size());
  DenseMatrix<Scalar> rows = DenseMatrix<Scalar>::Zero(m, ncols);
  DenseVector<Scalar> rhs = DenseVector<Scalar>::Zero(m);
  std::vector<int> basis(static_cast<std::size_t>(m), -1);
  std::vector<int> needs_artificial;

  auto fill_structural = [&](int r, const DenseVector<Scalar>& coeffs) {
    for (int j = 0; j < n; ++j) {
      if (coeffs(j) == Scalar{}) continue;
      rows(r, pos_col[static_cast<std::size_t>(j)]) = coeffs(j);
      if (neg_col[static_cast<std::size_t>(j)] >= 0)
        rows(r, neg_col[static_cast<std::size_t>(j)]) = -coeffs(j);
    }
  };

  int r = 0;
  for (const auto& eq : cs.equalities) {
    fill_structural(r, eq.coeffs);
    rhs(r) = eq.rhs;
    if (rhs(r) < Scalar{}) {
      rows.row(r) = -rows.row(r);
      rhs(r) = -rhs(r);
    }
    needs_artificial.push_back(r);
    ++r;
  }
  for (std::size_t s = 0; s < kept_ineqs.size(); ++s) {
    const auto& iq = cs.inequalities[static_cast<std::size_t>(kept_ineqs[s])];
    fill_structural(r, iq.coeffs);
    rhs(r) = iq.rhs;
    const int slack = slack_base + static_cast<int>(s);
    rows(r, slack) = Scalar(-1);
    if (rhs(r) <= Scalar{}) {  // negate so the slack can start basic
      rows.row(r) = -rows.row(r);
      rhs(r) = -rhs(r);
      basis[static_cast<std::size_t>(r)] = slack;
    } else {
      needs_artificial.push_back(r);
    }
    ++r;
  }

  const int art_base = ncols;
  const int total = ncols + static_cast<int>(needs_artificial.size());
  DenseMatrix<Scalar> tab = DenseMatrix<Scalar>::Zero(m, total);
  tab.leftCols(ncols) = rows;
  for (std::size_t a = 0; a < needs_artificial.size(); ++a) {
    const int row_idx = needs_artificial[a];
    const int col = art_base + static_cast<int>(a);
    tab(row_idx, col) = Scalar(1);
    basis[static_cast<std::size_t>(row_idx)] = col;
  }

  detail::SimplexTableau<Scalar> t(std::move(tab), std::move(rhs), std::move(basis));
  std::vector<bool> blocked(static_cast<std::size_t>(total), false);

  LpResult<Scalar> result;
  if (!needs_artificial.empty()) {
    DenseVector<Scalar> phase1 = DenseVector<Scalar>::Zero(total);
    for (int c = art_base; c < total; ++c) phase1(c) = Scalar(-1);
    t.set_objective(phase1);
    t.maximize(blocked);  // bounded above by zero
    if (!(t.objective_value() == Scalar{})) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    // pivot leftover artificials out of the basis; fully zero rows are
    // redundant constraints and get dropped
    std::vector<bool> drop_row(static_cast<std::size_t>(m), false);
    for (int row_idx = 0; row_idx < t.rows(); ++row_idx) {
      if (t.basis()[static_cast<std::size_t>(row_idx)] < art_base) continue;
      int col = -1;
      for (int c = 0; c < art_base; ++c)
        if (!(t.at(row_idx, c) == Scalar{})) {
          col = c;
          break;
        }
      if (col >= 0)
        t.pivot(row_idx, col);
      else
        drop_row[static_cast<std::size_t>(row_idx)] = true;
    }
    std::vector<bool> drop_col(static_cast<std::size_t>(total), false);
    for (int c = art_base; c < total; ++c) drop_col[static_cast<std::size_t>(c)] = true;
    std::vector<int> remap;
    t.shrink(drop_row, drop_col, remap);
    blocked.assign(static_cast<std::size_t>(ncols), false);
  }

  DenseVector<Scalar> costs = DenseVector<Scalar>::Zero(ncols);
  for (int j = 0; j < n; ++j) {
    if (lp.objective(j) == Scalar{}) continue;
    costs(pos_col[static_cast<std::size_t>(j)]) = lp.objective(j);
    if (neg_col[static_cast<std::size_t>(j)] >= 0)
      costs(neg_col[static_cast<std::size_t>(j)]) = -lp.objective(j);
  }
  t.set_objective(costs);
  if (!t.maximize(blocked)) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  result.status = LpStatus::Optimal;
  result.point = DenseVector<Scalar>::Zero(n);
  for (int j = 0; j < n; ++j) {
    Scalar val = t.column_value(pos_col[static_cast<std::size_t>(j)]);
    if (neg_col[static_cast<std::size_t>(j)] >= 0)
      val -= t.column_value(neg_col[static_cast<std::size_t>(j)]);
    result.point(j) = val;
  }
  result.value = Scalar{};
  for (int j = 0; j < n; ++j) result.value += lp.objective(j) * result.point(j);
  return result;
}

}  // namespace pm
