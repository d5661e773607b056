#ifndef TLAB_SIMPLEX_HPP
#define TLAB_SIMPLEX_HPP

#include "tlab/core.hpp"

#include <limits>

namespace tlab {

template <class Scalar>
struct CoveringLpResult {
  Vector<Scalar> primal; // x, one per column of A
  Vector<Scalar> dual;   // y, one per row of A
  Scalar value;
  long pivots = 0;
};

/**
 * Solves the covering program
 *
 *     min c.x   s.t.  A x >= 1,  x >= 0
 *
 * for a nonnegative cost vector through its packing dual
 * max 1.y s.t. A^T y <= c, y >= 0, whose all-slack basis is feasible, so no
 * phase one is needed. Dense tableau, Bland's rule. The primal solution is
 * read off the reduced costs of the dual slacks.
 *
 * Scalar may be double (pivot tolerance 1e-12) or Rational (exact).
 */
template <class Scalar>
CoveringLpResult<Scalar> solve_covering_lp(const Matrix<Scalar>& A,
                                           const Vector<Scalar>& c) {
  const Eigen::Index rows = A.rows(); // covering constraints
  const Eigen::Index vars = A.cols(); // primal variables
  if (c.size() != vars) throw InputError("cost vector length mismatch");
  for (Eigen::Index j = 0; j < vars; ++j)
    if (c(j) < Scalar(0)) throw InputError("covering LP needs nonnegative costs");

  const Scalar eps = ScalarTraits<Scalar>::tolerance();
  const Eigen::Index width = rows + vars + 1;
  const Eigen::Index rhs = width - 1;

  Matrix<Scalar> tab = Matrix<Scalar>::Zero(vars + 1, width);
  tab.topLeftCorner(vars, rows) = A.transpose();
  tab.block(0, rows, vars, vars).setIdentity();
  tab.col(rhs).head(vars) = c;
  tab.row(vars).head(rows).setConstant(Scalar(-1));

  std::vector<Eigen::Index> basis(vars);
  for (Eigen::Index i = 0; i < vars; ++i) basis[i] = rows + i;

  CoveringLpResult<Scalar> out;
  while (true) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < rhs; ++j)
      if (tab(vars, j) < -eps) {
        enter = j;
        break;
      }
    if (enter < 0) break;

    Eigen::Index leave = -1;
    Scalar best_ratio(0);
    for (Eigen::Index i = 0; i < vars; ++i) {
      if (!(tab(i, enter) > eps)) continue;
      const Scalar ratio = tab(i, rhs) / tab(i, enter);
      if (leave < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0)
      throw InputError("covering LP infeasible: some constraint has no variable");

    tab.row(leave) /= Scalar(tab(leave, enter));
    for (Eigen::Index i = 0; i <= vars; ++i) {
      if (i == leave) continue;
      const Scalar f = tab(i, enter);
      if (f == Scalar(0)) continue;
      tab.row(i) -= f * tab.row(leave);
    }
    basis[leave] = enter;
    ++out.pivots;
  }

  out.dual = Vector<Scalar>::Zero(rows);
  for (Eigen::Index i = 0; i < vars; ++i)
    if (basis[i] < rows) out.dual(basis[i]) = tab(i, rhs);
  out.primal = tab.row(vars).segment(rows, vars).transpose();
  for (Eigen::Index j = 0; j < vars; ++j)
    if (out.primal(j) < Scalar(0)) out.primal(j) = Scalar(0);
  out.value = tab(vars, rhs);
  return out;
}

} // namespace tlab

#endif // TLAB_SIMPLEX_HPP
