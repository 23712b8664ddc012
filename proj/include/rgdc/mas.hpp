#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rgdc/system.hpp"
#include "rgdc/types.hpp"

namespace rgdc::mas {

using numerics::RowVector;

enum class Orientation : std::uint8_t { less_equal, greater_equal };

// Which output block a constraint row acts on: the scalar tracking output
// y_tr = C_tr x, or the static outputs y_st = C_st x + D_st v.
enum class OutputChannel : std::uint8_t { tracking, static_outputs };

// Static constraints S y <= s on the selected output channel.
struct ConstraintSet {
  Matrix S;  // q x p
  Vector s;  // q
};

// Provenance of one inequality row: prediction time t (-1 for the
// steady-state block) and the constraint row it was propagated from.
struct RowTag {
  long t = 0;
  Eigen::Index source_row = 0;
};

// Finitely determined polyhedral representation
//   { (x, v) : H_x x + H_v v <= h }   (orientation less_equal)
//   { (x, v) : H_x x + H_v v >= h }   (orientation greater_equal)
// The steady-state rows come first; the remaining rows correspond to
// prediction times t in [0, admissibility_index] and the representation is
// minimal (no such row is redundant against the rest).
struct MasRepresentation {
  Matrix H_x;
  Vector H_v;
  Vector h;
  long admissibility_index = 0;  // j*
  double epsilon = 0.0;
  std::vector<Eigen::Index> steady_state_rows;
  Orientation orientation = Orientation::less_equal;
  std::vector<RowTag> tags;

  Eigen::Index rows() const { return H_x.rows(); }
  Eigen::Index order() const { return H_x.cols(); }
  bool is_steady_row(Eigen::Index i) const {
    return i < static_cast<Eigen::Index>(steady_state_rows.size());
  }
};

// The two dynamic-constraint representations. rep_minus is the r = +1 set
// { H z <= h^- } with steady-state bound 1-eps; rep_plus is canonically the
// r = +1 set { H z >= h^+ } with steady-state bound 1+eps. Scaling by r and
// flipping the sense for r < 0 yields all four selection cases.
struct DynamicMasPair {
  MasRepresentation rep_minus;
  MasRepresentation rep_plus;
};

struct DynamicMasSelection {
  const MasRepresentation* rep = nullptr;
  Orientation orientation = Orientation::less_equal;
  double rhs_scale = 0.0;
  int mas_case = 0;  // 1..4 per the selection table, 0 when r == 0
};

// Polytopic model uncertainty given by vertex systems; the true plant is an
// (unknown) convex combination. nominal_index picks the design model.
struct UncertainSystem {
  std::vector<DiscreteLtiSystem> vertex_systems;
  std::size_t nominal_index = 0;

  UncertainSystem(std::vector<DiscreteLtiSystem> vertices, std::size_t nominal);

  const DiscreteLtiSystem& nominal() const {
    return vertex_systems[nominal_index];
  }
};

// Coefficients of the prediction constraint at time t for one constraint row:
//   S_row C A^t x + S_row (C (I - A^t)(I - A)^{-1} B + D) v <= s_row.
std::pair<Vector, double> prediction_row(const DiscreteLtiSystem& sys,
                                         const RowVector& S_row,
                                         OutputChannel channel, long t);

// True iff the candidate row is implied by the rows of `partial` (within the
// redundancy margin). candidate_coeffs stacks the x coefficients followed by
// the v coefficient. Throws ConstructionError when `partial` is infeasible.
bool is_redundant(const MasRepresentation& partial,
                  const Vector& candidate_coeffs, double candidate_rhs);

MasRepresentation build_static_mas(const DiscreteLtiSystem& sys,
                                   const ConstraintSet& constraints,
                                   double epsilon);

DynamicMasPair build_dynamic_mas_pair(const DiscreteLtiSystem& sys,
                                      double epsilon);

// Table-driven choice of representation, inequality sense and RHS scale for
// governing toward reference r with current tracking output y_tr. For r = 0
// the larger representation is used with RHS 0.
DynamicMasSelection select_dynamic_mas(const DynamicMasPair& pair, double r,
                                       double y_tr);

bool contains(const MasRepresentation& rep, Orientation orientation,
              double rhs_scale, const Vector& x, double v);

inline bool contains(const MasRepresentation& rep, const Vector& x, double v) {
  return contains(rep, rep.orientation, 1.0, x, v);
}

// Robust admissible set for the vertex family: the maximal set from which
// holding the plant at any single vertex satisfies the constraints for all
// future steps. Constraint rows are back-propagated through every vertex's
// matrix powers with per-depth redundancy pruning (each vertex terminating
// at the first depth that adds only redundant rows), pooled, and reduced to
// a minimal representation, so the result is contained in each vertex's
// nominal MAS by construction. product_cap bounds the total number of
// back-propagated rows the vertices may keep; constructions that exceed it
// throw ConstructionError.
MasRepresentation build_robust_mas_polytopic(const UncertainSystem& usys,
                                             const ConstraintSet& constraints,
                                             OutputChannel channel,
                                             double epsilon,
                                             long product_cap = 5000);

DynamicMasPair build_robust_dynamic_mas_pair(const UncertainSystem& usys,
                                             double epsilon,
                                             long product_cap = 5000);

// Row-wise RHS tightening for bounded additive disturbances (support
// function margins). Throws ConstructionError if the shrunk set is empty.
MasRepresentation shrink_for_disturbance(const MasRepresentation& rep,
                                         const Vector& row_margins);

void write_mas_csv(const MasRepresentation& rep, std::ostream& out);
void write_mas_csv(const MasRepresentation& rep, const std::string& path);

}  // namespace rgdc::mas
