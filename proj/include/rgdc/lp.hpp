#pragma once

#include "rgdc/types.hpp"

namespace rgdc::numerics {

enum class LpSense { maximize, minimize };
enum class LpConstraintSense { less_equal, greater_equal };
enum class LpStatus { optimal, infeasible, unbounded };

/**
 * A small dense linear program over free (sign-unrestricted) variables:
 *
 *     sense   objective . z
 *     s.t.    constraint_matrix z  (<=|>=)  constraint_rhs   row-wise.
 */
struct LpProblem {
  Vector objective;
  Matrix constraint_matrix;
  Vector constraint_rhs;
  LpSense sense = LpSense::maximize;
  LpConstraintSense constraint_sense = LpConstraintSense::less_equal;
};

// optimizer/objective_value are meaningful only when status == optimal;
// optimizer is empty otherwise.
struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Vector optimizer;
  double objective_value = 0.0;
};

inline constexpr double kLpFeasibilityTol = 1e-9;
inline constexpr double kLpReducedCostTol = 1e-9;

/**
 * Dense two-phase simplex. Free variables are handled by splitting
 * z = z+ - z-; Dantzig pricing with a Bland's-rule fallback when cycling is
 * suspected. All four sense combinations are accepted and reduced to the
 * canonical maximize/<= form.
 *
 * Throws std::invalid_argument on dimension mismatch and SolverFailure when
 * the pivot loop degenerates (distinct from an infeasible result).
 */
LpResult solve_lp(const LpProblem& problem);

/**
 * Minimization/>= companion, implemented by negate-and-reuse: the minimizer
 * of  min c.z  s.t.  M z >= N  is the negated maximizer of
 * max c.z  s.t.  M z <= -N, and the optimal values are negatives of each
 * other. Requires sense == minimize and constraint_sense == greater_equal.
 */
LpResult solve_lp_min_geq(const LpProblem& problem);

/**
 * Maximizes objective . z over { M z <= N } intersected with the box
 * |z_i| <= box_radius. Seidel's randomized incremental method with a fixed
 * seed, expected O(rows) per call in low dimension; falls back to the dense
 * simplex when the computed point fails a residual check. The box keeps every
 * problem bounded, so the status is optimal or infeasible, never unbounded;
 * callers that need to detect unbounded directions pick a radius far outside
 * the region of interest and test the returned value against it.
 */
LpResult solve_boxed_max(const Vector& objective, const Matrix& constraint_matrix,
                         const Vector& constraint_rhs, double box_radius);

}  // namespace rgdc::numerics
