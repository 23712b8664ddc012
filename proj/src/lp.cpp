#include "rgdc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "rgdc/errors.hpp"

namespace rgdc::numerics {
namespace {

constexpr double kPivotTol = 1e-11;

struct Tableau {
  Matrix T;                 // (m+2) x (ncols+1); row m phase-2 obj, row m+1 phase-1 obj
  std::vector<int> basis;   // per constraint row
  int m = 0;
  int ncols = 0;            // rhs lives at column ncols

  void pivot(int prow, int pcol) {
    T.row(prow) /= T(prow, pcol);
    for (int r = 0; r < T.rows(); ++r) {
      if (r == prow) continue;
      const double f = T(r, pcol);
      if (f != 0.0) T.row(r) -= f * T.row(prow);
    }
    basis[prow] = pcol;
  }
};

enum class PivotOutcome { optimal, unbounded, limit };

// Runs the pivot loop on objective row `orow`, entering columns restricted to
// [0, col_limit). Dantzig pricing; switches to Bland's rule once the
// iteration count suggests cycling.
PivotOutcome run_pivots(Tableau& tab, int orow, int col_limit, double ctol) {
  const long bland_after = 5L * (tab.m + 20);
  const long hard_cap = 100L * (tab.m + 20) + 5000;
  bool bland = false;
  for (long iter = 0;; ++iter) {
    if (iter > hard_cap) return PivotOutcome::limit;
    if (iter > bland_after) bland = true;

    int enter = -1;
    if (bland) {
      for (int j = 0; j < col_limit; ++j) {
        if (tab.T(orow, j) < -ctol) {
          enter = j;
          break;
        }
      }
    } else {
      double best = -ctol;
      for (int j = 0; j < col_limit; ++j) {
        if (tab.T(orow, j) < best) {
          best = tab.T(orow, j);
          enter = j;
        }
      }
    }
    if (enter < 0) return PivotOutcome::optimal;

    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < tab.m; ++i) {
      const double a = tab.T(i, enter);
      if (a <= kPivotTol) continue;
      const double ratio = tab.T(i, tab.ncols) / a;
      if (leave < 0 || ratio < best_ratio - 1e-12) {
        best_ratio = ratio;
        leave = i;
      } else if (ratio <= best_ratio + 1e-12 * (1.0 + std::abs(best_ratio))) {
        // Near-tie: Bland picks the smallest basis index, the default rule
        // prefers the numerically larger pivot.
        if (bland) {
          if (tab.basis[i] < tab.basis[leave]) leave = i;
        } else if (a > tab.T(leave, enter)) {
          leave = i;
        }
      }
    }
    if (leave < 0) return PivotOutcome::unbounded;
    tab.pivot(leave, enter);
  }
}

// Canonical core: maximize c.z subject to M z <= N with z free.
LpResult solve_canonical(const Vector& c, const Matrix& M, const Vector& N) {
  const int m = static_cast<int>(M.rows());
  const int k = static_cast<int>(M.cols());
  const int slack0 = 2 * k;
  const int art0 = slack0 + m;

  std::vector<int> art_of_row(m, -1);
  int n_art = 0;
  for (int i = 0; i < m; ++i)
    if (N(i) < 0.0) art_of_row[i] = n_art++;

  Tableau tab;
  tab.m = m;
  tab.ncols = art0 + n_art;
  tab.T = Matrix::Zero(m + 2, tab.ncols + 1);
  tab.basis.resize(m);

  for (int i = 0; i < m; ++i) {
    const double sgn = (N(i) < 0.0) ? -1.0 : 1.0;
    tab.T.block(i, 0, 1, k) = sgn * M.row(i);
    tab.T.block(i, k, 1, k) = -sgn * M.row(i);
    tab.T(i, slack0 + i) = sgn;
    tab.T(i, tab.ncols) = sgn * N(i);
    if (art_of_row[i] >= 0) {
      tab.T(i, art0 + art_of_row[i]) = 1.0;
      tab.basis[i] = art0 + art_of_row[i];
    } else {
      tab.basis[i] = slack0 + i;
    }
  }

  // Phase-2 objective row: entries z_j - c_j for the initial basis.
  for (int j = 0; j < k; ++j) {
    tab.T(m, j) = -c(j);
    tab.T(m, k + j) = c(j);
  }

  const double rhs_scale = 1.0 + (m > 0 ? N.cwiseAbs().maxCoeff() : 0.0);
  const double obj_scale = 1.0 + (k > 0 ? c.cwiseAbs().maxCoeff() : 0.0);

  if (n_art > 0) {
    // Phase-1 objective: maximize -(sum of artificials).
    for (int i = 0; i < m; ++i) {
      if (art_of_row[i] < 0) continue;
      tab.T.row(m + 1).head(tab.ncols) -= tab.T.row(i).head(tab.ncols);
      tab.T(m + 1, tab.ncols) -= tab.T(i, tab.ncols);
    }
    for (int i = 0; i < m; ++i)
      if (art_of_row[i] >= 0) tab.T(m + 1, art0 + art_of_row[i]) = 0.0;

    const PivotOutcome out =
        run_pivots(tab, m + 1, tab.ncols, kLpReducedCostTol);
    if (out == PivotOutcome::limit)
      throw SolverFailure("simplex phase 1 exceeded the iteration limit");
    if (out == PivotOutcome::unbounded)
      throw SolverFailure("simplex phase 1 became unbounded");

    const double residual = -tab.T(m + 1, tab.ncols);
    if (residual > 10.0 * kLpFeasibilityTol * rhs_scale)
      return LpResult{LpStatus::infeasible, Vector(), 0.0};

    // Degenerate pivots remove artificials that are still basic; rows where
    // that is impossible are redundant and stay inert at level zero.
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] < art0) continue;
      for (int j = 0; j < art0; ++j) {
        if (std::abs(tab.T(i, j)) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  const PivotOutcome out =
      run_pivots(tab, m, art0, kLpReducedCostTol * obj_scale);
  if (out == PivotOutcome::limit)
    throw SolverFailure("simplex phase 2 exceeded the iteration limit");
  if (out == PivotOutcome::unbounded)
    return LpResult{LpStatus::unbounded, Vector(), 0.0};

  Vector full = Vector::Zero(tab.ncols);
  for (int i = 0; i < m; ++i) full(tab.basis[i]) = tab.T(i, tab.ncols);
  Vector z = full.head(k) - full.segment(k, k);

  if (m > 0) {
    const Vector violation = M * z - N;
    for (int i = 0; i < m; ++i) {
      if (violation(i) > 1e-7 * (1.0 + std::abs(N(i))))
        throw SolverFailure("simplex returned an infeasible basis");
    }
  }
  const double objective_value = c.dot(z);
  return LpResult{LpStatus::optimal, std::move(z), objective_value};
}

void check_dimensions(const LpProblem& p) {
  if (p.constraint_matrix.rows() != p.constraint_rhs.size())
    throw std::invalid_argument("LpProblem: rhs length != constraint rows");
  if (p.constraint_matrix.cols() != p.objective.size())
    throw std::invalid_argument("LpProblem: objective length != columns");
  require_finite("LpProblem.objective", p.objective);
  require_finite("LpProblem.constraint_matrix", p.constraint_matrix);
  require_finite("LpProblem.constraint_rhs", p.constraint_rhs);
}

constexpr double kSeidelNullRow = 1e-12;

using SeidelRows = std::vector<std::pair<RowVector, double>>;

// Fisher-Yates with the raw engine output so the order is identical across
// standard libraries.
void seidel_shuffle(SeidelRows& rows, std::mt19937& rng) {
  for (std::size_t i = rows.size(); i > 1; --i)
    std::swap(rows[i - 1], rows[rng() % i]);
}

// Base case: maximize c z over the interval cut out of [-box, box].
bool seidel_interval(const SeidelRows& rows, double c, double box, double& z) {
  double lo = -box;
  double hi = box;
  for (const auto& [a, b] : rows) {
    const double av = a(0);
    if (av > kSeidelNullRow)
      hi = std::min(hi, b / av);
    else if (av < -kSeidelNullRow)
      lo = std::max(lo, b / av);
    else if (b < -kLpFeasibilityTol * (1.0 + std::abs(b)))
      return false;
  }
  if (lo > hi) {
    if (lo - hi > 1e-9 * (1.0 + std::abs(lo) + std::abs(hi))) return false;
    lo = hi = 0.5 * (lo + hi);
  }
  if (c > 0.0)
    z = hi;
  else if (c < 0.0)
    z = lo;
  else
    z = std::min(std::max(0.0, lo), hi);
  return true;
}

// Incremental step: the optimum over the rows seen so far is kept; a violated
// row pins the optimum to its hyperplane, where the prior rows (and the box
// faces of the eliminated coordinate) are solved recursively in one dimension
// less. Returns false when the rows plus the box have no common point.
bool seidel_solve(SeidelRows rows, const Vector& c, double box,
                  std::mt19937& rng, Vector& z) {
  const Eigen::Index d = c.size();
  seidel_shuffle(rows, rng);
  if (d == 1) {
    z.resize(1);
    return seidel_interval(rows, c(0), box, z(0));
  }

  z.resize(d);
  for (Eigen::Index j = 0; j < d; ++j)
    z(j) = c(j) > 0.0 ? box : (c(j) < 0.0 ? -box : 0.0);

  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RowVector& a = rows[i].first;
    const double b = rows[i].second;
    const double slack_noise = a.cwiseAbs().dot(z.cwiseAbs());
    if (a.dot(z) <=
        b + kLpFeasibilityTol * (1.0 + std::abs(b)) + 64.0 * kEps * slack_noise)
      continue;

    Eigen::Index p = 0;
    const double ap_abs = a.cwiseAbs().maxCoeff(&p);
    if (ap_abs <= kSeidelNullRow) return false;
    const double ap = a(p);

    const auto project = [&](const RowVector& ar, double br) {
      const double f = ar(p) / ap;
      RowVector pr(d - 1);
      Eigen::Index t = 0;
      for (Eigen::Index j = 0; j < d; ++j)
        if (j != p) pr(t++) = ar(j) - f * a(j);
      return std::make_pair(std::move(pr), br - f * b);
    };

    SeidelRows sub;
    sub.reserve(i + 2);
    for (std::size_t r = 0; r < i; ++r)
      sub.push_back(project(rows[r].first, rows[r].second));
    RowVector unit = RowVector::Zero(d);
    unit(p) = 1.0;
    sub.push_back(project(unit, box));
    unit(p) = -1.0;
    sub.push_back(project(unit, box));

    Vector subc(d - 1);
    {
      const double f = c(p) / ap;
      Eigen::Index t = 0;
      for (Eigen::Index j = 0; j < d; ++j)
        if (j != p) subc(t++) = c(j) - f * a(j);
    }

    Vector subz;
    if (!seidel_solve(std::move(sub), subc, box, rng, subz)) return false;

    double acc = b;
    Eigen::Index t = 0;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (j == p) continue;
      z(j) = subz(t);
      acc -= a(j) * subz(t);
      ++t;
    }
    z(p) = acc / ap;
  }
  return true;
}

}  // namespace

LpResult solve_lp(const LpProblem& problem) {
  check_dimensions(problem);
  const bool leq =
      problem.constraint_sense == LpConstraintSense::less_equal;
  const bool maximize = problem.sense == LpSense::maximize;

  const Matrix M =
      leq ? problem.constraint_matrix : Matrix(-problem.constraint_matrix);
  const Vector N =
      leq ? problem.constraint_rhs : Vector(-problem.constraint_rhs);
  const Vector c =
      maximize ? problem.objective : Vector(-problem.objective);

  LpResult res = solve_canonical(c, M, N);
  if (res.status == LpStatus::optimal && !maximize)
    res.objective_value = -res.objective_value;
  return res;
}

LpResult solve_lp_min_geq(const LpProblem& problem) {
  if (problem.sense != LpSense::minimize ||
      problem.constraint_sense != LpConstraintSense::greater_equal)
    throw std::invalid_argument(
        "solve_lp_min_geq expects a minimize/>= problem");
  check_dimensions(problem);

  LpProblem mirrored;
  mirrored.objective = problem.objective;
  mirrored.constraint_matrix = problem.constraint_matrix;
  mirrored.constraint_rhs = -problem.constraint_rhs;
  mirrored.sense = LpSense::maximize;
  mirrored.constraint_sense = LpConstraintSense::less_equal;

  LpResult res = solve_lp(mirrored);
  if (res.status == LpStatus::optimal) {
    res.optimizer = -res.optimizer;
    res.objective_value = -res.objective_value;
  }
  return res;
}

LpResult solve_boxed_max(const Vector& objective, const Matrix& constraint_matrix,
                         const Vector& constraint_rhs, double box_radius) {
  if (constraint_matrix.rows() != constraint_rhs.size())
    throw std::invalid_argument("solve_boxed_max: rhs length != constraint rows");
  if (constraint_matrix.cols() != objective.size())
    throw std::invalid_argument("solve_boxed_max: objective length != columns");
  if (!(box_radius > 0.0) || !std::isfinite(box_radius))
    throw std::invalid_argument("solve_boxed_max: box radius must be positive");
  require_finite("solve_boxed_max.objective", objective);
  require_finite("solve_boxed_max.constraint_matrix", constraint_matrix);
  require_finite("solve_boxed_max.constraint_rhs", constraint_rhs);

  const Eigen::Index m = constraint_matrix.rows();
  const Eigen::Index d = objective.size();
  if (d == 0) {
    for (Eigen::Index i = 0; i < m; ++i)
      if (constraint_rhs(i) <
          -kLpFeasibilityTol * (1.0 + std::abs(constraint_rhs(i))))
        return {LpStatus::infeasible, Vector(), 0.0};
    return {LpStatus::optimal, Vector(), 0.0};
  }

  SeidelRows rows;
  rows.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i)
    rows.emplace_back(constraint_matrix.row(i), constraint_rhs(i));

  std::mt19937 rng(0x5eed11u);
  Vector z;
  if (seidel_solve(std::move(rows), objective, box_radius, rng, z)) {
    bool clean = z.cwiseAbs().maxCoeff() <= box_radius * (1.0 + 1e-9);
    if (clean && m > 0) {
      const Vector violation = constraint_matrix * z - constraint_rhs;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (violation(i) > 1e-7 * (1.0 + std::abs(constraint_rhs(i)))) {
          clean = false;
          break;
        }
      }
    }
    if (clean) {
      const double value = objective.dot(z);
      return {LpStatus::optimal, std::move(z), value};
    }
  }

  // Degenerate geometry: redo the query through the exact simplex with the
  // box written out as explicit rows.
  Matrix Mb(m + 2 * d, d);
  Vector Nb(m + 2 * d);
  Mb.topRows(m) = constraint_matrix;
  Nb.head(m) = constraint_rhs;
  Mb.middleRows(m, d) = Matrix::Identity(d, d);
  Mb.bottomRows(d) = -Matrix::Identity(d, d);
  Nb.tail(2 * d).setConstant(box_radius);
  return solve_canonical(objective, Mb, Nb);
}

}  // namespace rgdc::numerics
