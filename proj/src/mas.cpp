#include "rgdc/mas.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rgdc/errors.hpp"
#include "rgdc/format.hpp"
#include "rgdc/lp.hpp"

namespace rgdc::mas {

namespace {

using numerics::LpConstraintSense;
using numerics::LpProblem;
using numerics::LpResult;
using numerics::LpSense;
using numerics::LpStatus;

constexpr long kStoppingCap = 10000;
constexpr double kRedundancyMargin = 1e-9;
constexpr double kMembershipTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Redundancy queries run over the accumulated rows clipped to this box. Any
// vertex of an admissible set here lies orders of magnitude inside it, so a
// query value at the box scale can only come from a direction the rows leave
// unbounded, and such a candidate is never redundant.
constexpr double kRedundancyBox = 1e7;

double redundancy_bound(double rhs) {
  return rhs + kRedundancyMargin * (1.0 + std::abs(rhs));
}

const Matrix& channel_output(const DiscreteLtiSystem& sys,
                             OutputChannel channel) {
  return channel == OutputChannel::tracking ? sys.C_tr : sys.C_st;
}

Matrix channel_feedthrough(const DiscreteLtiSystem& sys,
                           OutputChannel channel) {
  if (channel == OutputChannel::tracking) return Matrix::Zero(1, 1);
  return sys.D_st;
}

// Tightening applied to the steady-state block: s_i - eps*|s_i|, with the
// scale of the whole bound vector substituted when s_i is exactly zero so
// the tightening never degenerates.
Vector tightened_steady_rhs(const Vector& s, double epsilon) {
  const double fallback = std::max(1.0, s.size() ? s.cwiseAbs().maxCoeff() : 1.0);
  Vector out(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double scale = s(i) != 0.0 ? std::abs(s(i)) : fallback;
    out(i) = s(i) - epsilon * scale;
  }
  return out;
}

struct Interval {
  double lo = -kInf;
  double hi = kInf;
};

// Feasible v-interval of the 1-D system {g_i v <= rhs_i}.
Interval steady_interval(const Vector& g, const Vector& rhs) {
  Interval iv;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (g(i) > 0.0)
      iv.hi = std::min(iv.hi, rhs(i) / g(i));
    else if (g(i) < 0.0)
      iv.lo = std::max(iv.lo, rhs(i) / g(i));
    else if (rhs(i) < 0.0)
      throw ConstructionError("steady-state constraint set is infeasible");
  }
  if (iv.lo > iv.hi)
    throw ConstructionError("steady-state constraint set is infeasible");
  return iv;
}

// Incrementally grown row set { coeffs z <= rhs } with redundancy queries
// answered by the boxed Seidel solver.
class RedundancyChecker {
 public:
  explicit RedundancyChecker(Eigen::Index dim) : dim_(dim) {}

  void add_row(const RowVector& coeffs, double rhs) {
    rows_.emplace_back(coeffs, rhs);
  }

  std::size_t size() const { return rows_.size(); }

  bool is_redundant(const RowVector& coeffs, double rhs) const {
    const auto m = static_cast<Eigen::Index>(rows_.size());
    Matrix M(m, dim_);
    Vector N(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      M.row(i) = rows_[i].first;
      N(i) = rows_[i].second;
    }
    const LpResult res =
        numerics::solve_boxed_max(coeffs.transpose(), M, N, kRedundancyBox);
    if (res.status == LpStatus::infeasible)
      throw ConstructionError(
          "accumulated constraint set is infeasible during redundancy check");
    return res.objective_value <= redundancy_bound(rhs);
  }

 private:
  Eigen::Index dim_;
  std::vector<std::pair<RowVector, double>> rows_;
};

struct PendingRow {
  RowVector coeffs;  // x coefficients then v coefficient
  double rhs = 0.0;
  RowTag tag;
};

void validate_build_inputs(const DiscreteLtiSystem& sys, const Matrix& S,
                           const Vector& s, OutputChannel channel,
                           double epsilon) {
  if (S.rows() == 0)
    throw ConstructionError("constraint set has no rows");
  if (s.size() != S.rows())
    throw std::invalid_argument("constraint bounds must match S row count");
  const Eigen::Index p = channel_output(sys, channel).rows();
  if (S.cols() != p)
    throw std::invalid_argument(
        "constraint matrix column count must match output dimension");
  for (Eigen::Index i = 0; i < S.rows(); ++i)
    if (S.row(i).cwiseAbs().maxCoeff() == 0.0)
      throw std::invalid_argument("constraint rows must be nonzero");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  numerics::require_finite("constraint matrix S", S);
  numerics::require_finite("constraint bounds s", s);
}

MasRepresentation assemble(std::vector<PendingRow> rows, Eigen::Index n,
                           Eigen::Index n_steady, long jstar, double epsilon) {
  MasRepresentation rep;
  const auto m = static_cast<Eigen::Index>(rows.size());
  rep.H_x.resize(m, n);
  rep.H_v.resize(m);
  rep.h.resize(m);
  rep.tags.reserve(rows.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    rep.H_x.row(i) = rows[i].coeffs.head(n);
    rep.H_v(i) = rows[i].coeffs(n);
    rep.h(i) = rows[i].rhs;
    rep.tags.push_back(rows[i].tag);
  }
  rep.admissibility_index = jstar;
  rep.epsilon = epsilon;
  rep.steady_state_rows.resize(n_steady);
  for (Eigen::Index i = 0; i < n_steady; ++i) rep.steady_state_rows[i] = i;
  rep.orientation = Orientation::less_equal;
  return rep;
}

// One minimality sweep: drop every non-steady row that is implied by the
// others. Removals leave the feasible set unchanged, so a single pass in
// index order suffices.
void prune_minimal(std::vector<PendingRow>& rows, Eigen::Index n_steady) {
  const std::size_t m = rows.size();
  std::vector<bool> keep(m, true);
  const Eigen::Index dim = rows.empty() ? 0 : rows.front().coeffs.size();
  for (std::size_t j = n_steady; j < m; ++j) {
    RedundancyChecker checker(dim);
    for (std::size_t i = 0; i < m; ++i)
      if (i != j && keep[i]) checker.add_row(rows[i].coeffs, rows[i].rhs);
    if (checker.is_redundant(rows[j].coeffs, rows[j].rhs)) keep[j] = false;
  }
  std::vector<PendingRow> kept;
  kept.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    if (keep[i]) kept.push_back(std::move(rows[i]));
  rows = std::move(kept);
}

MasRepresentation build_leq_mas(const DiscreteLtiSystem& sys, const Matrix& S,
                                const Vector& s, OutputChannel channel,
                                double epsilon) {
  validate_build_inputs(sys, S, s, channel, epsilon);
  const Eigen::Index n = sys.order();
  const Eigen::Index q = S.rows();
  const Matrix& C = channel_output(sys, channel);
  const Matrix D = channel_feedthrough(sys, channel);
  const Matrix& P = sys.equilibrium_gain();
  const Vector g = S * (C * P + D);

  const Vector steady_rhs = tightened_steady_rhs(s, epsilon);
  steady_interval(g, steady_rhs);  // throws when the steady set is empty

  RedundancyChecker checker(n + 1);
  std::vector<PendingRow> rows;
  for (Eigen::Index i = 0; i < q; ++i) {
    PendingRow row;
    row.coeffs = RowVector::Zero(n + 1);
    row.coeffs(n) = g(i);
    row.rhs = steady_rhs(i);
    row.tag = {-1, i};
    checker.add_row(row.coeffs, row.rhs);
    rows.push_back(std::move(row));
  }

  long jstar = -1;
  bool terminated = false;
  Matrix CAt = C;  // C A^t
  for (long t = 0; t <= kStoppingCap; ++t) {
    std::vector<PendingRow> pending;
    for (Eigen::Index i = 0; i < q; ++i) {
      PendingRow row;
      row.coeffs.resize(n + 1);
      row.coeffs.head(n) = S.row(i) * CAt;
      row.coeffs(n) = g(i) - row.coeffs.head(n).dot(P.col(0));
      row.rhs = s(i);
      row.tag = {t, i};
      if (!checker.is_redundant(row.coeffs, row.rhs))
        pending.push_back(std::move(row));
    }
    if (pending.empty() && t >= 1) {
      jstar = t - 1;
      terminated = true;
      break;
    }
    for (auto& row : pending) {
      checker.add_row(row.coeffs, row.rhs);
      rows.push_back(std::move(row));
    }
    CAt = CAt * sys.A;
  }
  if (!terminated)
    throw ConstructionError(
        "MAS construction did not finitely determine within the stopping cap");

  prune_minimal(rows, q);
  return assemble(std::move(rows), n, q, jstar, epsilon);
}

bool near_equal_row(const RowVector& a, double ra, const RowVector& b,
                    double rb) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() <= 1e-12 * scale &&
         std::abs(ra - rb) <= 1e-12 * std::max(1.0, std::abs(ra));
}

// Robust construction for the constant-but-unknown vertex model. Holding the
// parameter at any single vertex must keep the trajectory admissible forever,
// so every row of every vertex's nominal MAS is a necessary constraint, and
// the pooled rows are also sufficient: a point satisfying them is admissible
// under each vertex realization by that vertex's own finite determination.
// The pooled minimal representation is therefore the maximal such set and is
// contained in each vertex MAS by construction.
//
// Mixed products of different vertex A matrices would tighten the set further
// until it became invariant under step-by-step parameter switching. That
// refinement is deliberately not attempted: when vertex rotation rates
// detune, the pruned product frontier sustains hundreds of surviving rows per
// depth for thousands of depths before the family's joint decay wins (the
// case-study vertex pair peaks near a factor 100 of transient growth), so the
// switching-invariant set is far smaller and practically unreachable.
MasRepresentation build_robust_leq(const UncertainSystem& usys,
                                   const Matrix& S, const Vector& s,
                                   OutputChannel channel, double epsilon,
                                   long product_cap) {
  if (product_cap <= 0)
    throw std::invalid_argument("product_cap must be positive");
  const auto L = usys.vertex_systems.size();
  if (L == 1) return build_leq_mas(usys.nominal(), S, s, channel, epsilon);

  const DiscreteLtiSystem& nominal = usys.nominal();
  validate_build_inputs(nominal, S, s, channel, epsilon);
  const Eigen::Index n = nominal.order();
  const Eigen::Index q = S.rows();

  // Steady-state rows collected over every vertex, deduplicated.
  std::vector<PendingRow> steady;
  Vector g_all(static_cast<Eigen::Index>(L) * q);
  Vector rhs_all(g_all.size());
  const Vector steady_rhs = tightened_steady_rhs(s, epsilon);
  Eigen::Index k = 0;
  for (const auto& vert : usys.vertex_systems) {
    const Vector g = S * (channel_output(vert, channel) * vert.equilibrium_gain() +
                          channel_feedthrough(vert, channel));
    for (Eigen::Index i = 0; i < q; ++i, ++k) {
      g_all(k) = g(i);
      rhs_all(k) = steady_rhs(i);
      PendingRow row;
      row.coeffs = RowVector::Zero(n + 1);
      row.coeffs(n) = g(i);
      row.rhs = steady_rhs(i);
      row.tag = {-1, i};
      const bool dup = std::any_of(
          steady.begin(), steady.end(), [&](const PendingRow& other) {
            return near_equal_row(row.coeffs, row.rhs, other.coeffs, other.rhs);
          });
      if (!dup) steady.push_back(std::move(row));
    }
  }
  steady_interval(g_all, rhs_all);  // throws when the steady set is empty

  std::vector<PendingRow> rows = steady;

  // Pool each vertex's back-propagated rows; coincident rows (shared output
  // maps give identical leading blocks) collapse to one copy. Tags keep the
  // originating prediction step for provenance.
  long products_used = 0;
  long jstar = 0;
  for (const auto& vert : usys.vertex_systems) {
    const MasRepresentation base = build_leq_mas(vert, S, s, channel, epsilon);
    const auto base_steady =
        static_cast<Eigen::Index>(base.steady_state_rows.size());
    products_used += static_cast<long>(base.rows() - base_steady);
    if (products_used > product_cap)
      throw ConstructionError(
          "robust MAS construction exceeded the vertex-product cap");
    jstar = std::max(jstar, base.admissibility_index);
    for (Eigen::Index i = base_steady; i < base.h.size(); ++i) {
      PendingRow row;
      row.coeffs.resize(n + 1);
      row.coeffs.head(n) = base.H_x.row(i);
      row.coeffs(n) = base.H_v(i);
      row.rhs = base.h(i);
      row.tag = base.tags[i];
      const bool dup = std::any_of(
          rows.begin(), rows.end(), [&](const PendingRow& other) {
            return near_equal_row(row.coeffs, row.rhs, other.coeffs, other.rhs);
          });
      if (!dup) rows.push_back(std::move(row));
    }
  }

  const auto n_steady = static_cast<Eigen::Index>(steady.size());
  prune_minimal(rows, n_steady);
  return assemble(std::move(rows), n, n_steady, jstar, epsilon);
}

// The r = -1 dynamic build yields { H z <= raw_h }; storing h = -raw_h with
// the greater-equal sense gives the canonical r = +1 plus-representation
// sharing the same H matrices.
MasRepresentation flip_to_plus(MasRepresentation rep) {
  rep.h = -rep.h;
  rep.orientation = Orientation::greater_equal;
  return rep;
}

Matrix unit_scalar_matrix() {
  Matrix S(1, 1);
  S(0, 0) = 1.0;
  return S;
}

}  // namespace

UncertainSystem::UncertainSystem(std::vector<DiscreteLtiSystem> vertices,
                                 std::size_t nominal)
    : vertex_systems(std::move(vertices)), nominal_index(nominal) {
  if (vertex_systems.empty())
    throw std::invalid_argument("UncertainSystem: need at least one vertex");
  if (nominal_index >= vertex_systems.size())
    throw std::invalid_argument("UncertainSystem: nominal_index out of range");
  const auto& first = vertex_systems.front();
  for (const auto& vert : vertex_systems)
    if (vert.order() != first.order() ||
        vert.static_output_count() != first.static_output_count())
      throw std::invalid_argument(
          "UncertainSystem: vertex systems must share dimensions");
}

std::pair<Vector, double> prediction_row(const DiscreteLtiSystem& sys,
                                         const RowVector& S_row,
                                         OutputChannel channel, long t) {
  if (t < 0) throw std::invalid_argument("prediction_row: t must be >= 0");
  const Matrix& C = channel_output(sys, channel);
  const Matrix D = channel_feedthrough(sys, channel);
  if (S_row.size() != C.rows())
    throw std::invalid_argument(
        "prediction_row: S_row length must match output dimension");
  const Eigen::Index n = sys.order();
  Matrix At = Matrix::Identity(n, n);
  for (long k = 0; k < t; ++k) At = At * sys.A;
  const Matrix& P = sys.equilibrium_gain();
  const Vector coeff_x = (S_row * C * At).transpose();
  const double g = (S_row * (C * P + D))(0, 0);
  const double coeff_v = g - coeff_x.dot(P.col(0));
  return {coeff_x, coeff_v};
}

bool is_redundant(const MasRepresentation& partial,
                  const Vector& candidate_coeffs, double candidate_rhs) {
  if (partial.rows() == 0)
    throw std::invalid_argument("is_redundant: partial set must be non-empty");
  if (candidate_coeffs.size() != partial.order() + 1)
    throw std::invalid_argument(
        "is_redundant: candidate must stack x coefficients and v coefficient");

  Matrix M(partial.rows(), partial.order() + 1);
  M.leftCols(partial.order()) = partial.H_x;
  M.col(partial.order()) = partial.H_v;

  // The >= case is the mirror image: min c.z over { M z >= h } is the negated
  // max of -c over { -M z <= -h }.
  const bool leq = partial.orientation == Orientation::less_equal;
  const LpResult res = leq
      ? numerics::solve_boxed_max(candidate_coeffs, M, partial.h,
                                  kRedundancyBox)
      : numerics::solve_boxed_max(-candidate_coeffs, -M, Vector(-partial.h),
                                  kRedundancyBox);
  if (res.status == LpStatus::infeasible)
    throw ConstructionError("is_redundant: partial set is infeasible");
  if (leq)
    return res.objective_value <= redundancy_bound(candidate_rhs);
  return -res.objective_value >=
         candidate_rhs - kRedundancyMargin * (1.0 + std::abs(candidate_rhs));
}

MasRepresentation build_static_mas(const DiscreteLtiSystem& sys,
                                   const ConstraintSet& constraints,
                                   double epsilon) {
  return build_leq_mas(sys, constraints.S, constraints.s,
                       OutputChannel::static_outputs, epsilon);
}

DynamicMasPair build_dynamic_mas_pair(const DiscreteLtiSystem& sys,
                                      double epsilon) {
  const Matrix S = unit_scalar_matrix();
  Vector plus_one(1), minus_one(1);
  plus_one << 1.0;
  minus_one << -1.0;
  DynamicMasPair pair;
  pair.rep_minus =
      build_leq_mas(sys, S, plus_one, OutputChannel::tracking, epsilon);
  pair.rep_plus = flip_to_plus(
      build_leq_mas(sys, S, minus_one, OutputChannel::tracking, epsilon));
  return pair;
}

DynamicMasSelection select_dynamic_mas(const DynamicMasPair& pair, double r,
                                       double y_tr) {
  if (r > 0.0) {
    if (y_tr <= r)
      return {&pair.rep_minus, Orientation::less_equal, r, 1};
    return {&pair.rep_plus, Orientation::greater_equal, r, 2};
  }
  if (r < 0.0) {
    if (y_tr <= r)
      return {&pair.rep_plus, Orientation::less_equal, r, 3};
    return {&pair.rep_minus, Orientation::greater_equal, r, 4};
  }
  const MasRepresentation* rep = pair.rep_plus.rows() > pair.rep_minus.rows()
                                     ? &pair.rep_plus
                                     : &pair.rep_minus;
  const Orientation o = y_tr <= 0.0 ? Orientation::less_equal
                                    : Orientation::greater_equal;
  return {rep, o, 0.0, 0};
}

bool contains(const MasRepresentation& rep, Orientation orientation,
              double rhs_scale, const Vector& x, double v) {
  if (x.size() != rep.order())
    throw std::invalid_argument("contains: state dimension mismatch");
  const Vector lhs = rep.H_x * x + rep.H_v * v;
  for (Eigen::Index i = 0; i < rep.rows(); ++i) {
    const double bound = rhs_scale * rep.h(i);
    const double tol = kMembershipTol * (1.0 + std::abs(bound));
    if (orientation == Orientation::less_equal) {
      if (lhs(i) > bound + tol) return false;
    } else {
      if (lhs(i) < bound - tol) return false;
    }
  }
  return true;
}

MasRepresentation build_robust_mas_polytopic(const UncertainSystem& usys,
                                             const ConstraintSet& constraints,
                                             OutputChannel channel,
                                             double epsilon, long product_cap) {
  return build_robust_leq(usys, constraints.S, constraints.s, channel, epsilon,
                          product_cap);
}

DynamicMasPair build_robust_dynamic_mas_pair(const UncertainSystem& usys,
                                             double epsilon, long product_cap) {
  const Matrix S = unit_scalar_matrix();
  Vector plus_one(1), minus_one(1);
  plus_one << 1.0;
  minus_one << -1.0;
  DynamicMasPair pair;
  pair.rep_minus = build_robust_leq(usys, S, plus_one, OutputChannel::tracking,
                                    epsilon, product_cap);
  pair.rep_plus = flip_to_plus(build_robust_leq(
      usys, S, minus_one, OutputChannel::tracking, epsilon, product_cap));
  return pair;
}

MasRepresentation shrink_for_disturbance(const MasRepresentation& rep,
                                         const Vector& row_margins) {
  if (row_margins.size() != rep.rows())
    throw std::invalid_argument(
        "shrink_for_disturbance: one margin per row required");
  if (row_margins.size() > 0 && row_margins.minCoeff() < 0.0)
    throw std::invalid_argument(
        "shrink_for_disturbance: margins must be nonnegative");

  MasRepresentation out = rep;
  if (rep.orientation == Orientation::less_equal)
    out.h = rep.h - row_margins;
  else
    out.h = rep.h + row_margins;

  Matrix M(out.rows(), out.order() + 1);
  M.leftCols(out.order()) = out.H_x;
  M.col(out.order()) = out.H_v;
  LpProblem prob;
  prob.objective = Vector::Zero(out.order() + 1);
  prob.constraint_matrix = std::move(M);
  prob.constraint_rhs = out.h;
  prob.sense = LpSense::maximize;
  prob.constraint_sense = rep.orientation == Orientation::less_equal
                              ? LpConstraintSense::less_equal
                              : LpConstraintSense::greater_equal;
  if (numerics::solve_lp(prob).status == LpStatus::infeasible)
    throw ConstructionError(
        "shrink_for_disturbance: margins make the set empty");
  return out;
}

void write_mas_csv(const MasRepresentation& rep, std::ostream& out) {
  out << "t,source_row";
  for (Eigen::Index j = 0; j < rep.order(); ++j)
    out << ",coeff_x_" << (j + 1);
  out << ",coeff_v,h\n";
  for (Eigen::Index i = 0; i < rep.rows(); ++i) {
    const RowTag tag = i < static_cast<Eigen::Index>(rep.tags.size())
                           ? rep.tags[i]
                           : RowTag{0, 0};
    out << tag.t << ',' << tag.source_row;
    for (Eigen::Index j = 0; j < rep.order(); ++j)
      out << ',' << detail::g17(rep.H_x(i, j));
    out << ',' << detail::g17(rep.H_v(i)) << ',' << detail::g17(rep.h(i))
        << '\n';
  }
}

void write_mas_csv(const MasRepresentation& rep, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open output file: " + path);
  write_mas_csv(rep, f);
}

}  // namespace rgdc::mas
