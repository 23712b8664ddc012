#pragma once

// Shared fixtures and sampling helpers for the test binaries.

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "rgdc/lp.hpp"
#include "rgdc/mas.hpp"
#include "rgdc/system.hpp"

namespace rgdc::testsupport {

using mas::ConstraintSet;
using mas::DiscreteLtiSystem;
using mas::MasRepresentation;
using mas::Orientation;
using numerics::Matrix;
using numerics::Vector;

// First-order lag with unit DC gain: x+ = 0.5 x + 0.5 v, y_tr = x.
// The static output duplicates the state so static constraints bound x.
inline DiscreteLtiSystem make_scalar() {
  Matrix A(1, 1), B(1, 1), C_tr(1, 1), C_st(1, 1), D_st(1, 1);
  A << 0.5;
  B << 0.5;
  C_tr << 1.0;
  C_st << 1.0;
  D_st << 0.0;
  return DiscreteLtiSystem(A, B, C_tr, C_st, D_st, 1.0);
}

// Lightly damped complex pole pair 0.92 +- 0.18i; the oscillatory step
// response keeps a few dozen prediction times active, which exercises the
// construction loop without the cost of the case-study plant.
inline DiscreteLtiSystem make_oscillatory() {
  Matrix A(2, 2), B(2, 1), C_tr(1, 2), C_st(1, 2), D_st(1, 1);
  A << 0.92, 0.18, -0.18, 0.92;
  B << 1.0, 0.0;
  C_tr << 0.485, 0.0;
  C_st << 0.0, 1.0;
  D_st << 0.0;
  return DiscreteLtiSystem(A, B, C_tr, C_st, D_st, 1.0);
}

// One member of a rotation family: A = 0.93 R(theta) with B chosen so that
// (I - A)^{-1} B = [1; 0] for every theta. Each member has unit DC gain and
// the family forms a valid polytopic uncertainty set with oscillatory
// transients on both output channels.
inline DiscreteLtiSystem make_rot_member(double theta) {
  const double rho = 0.93;
  const double c = rho * std::cos(theta);
  const double s = rho * std::sin(theta);
  Matrix A(2, 2), B(2, 1), C_tr(1, 2), C_st(1, 2), D_st(1, 1);
  A << c, s, -s, c;
  B << 1.0 - c, s;
  C_tr << 1.0, 0.0;
  C_st << 1.0, 1.0;
  D_st << 0.0;
  return DiscreteLtiSystem(A, B, C_tr, C_st, D_st, 1.0);
}

inline ConstraintSet symmetric_bound(double level) {
  ConstraintSet c;
  c.S = Matrix(2, 1);
  c.S << 1.0, -1.0;
  c.s = Vector(2);
  c.s << level, level;
  return c;
}

// sup of coeffs . z over a less_equal representation, via LP.
inline std::pair<bool, double> row_max_over(const MasRepresentation& rep,
                                            const Vector& coeffs) {
  numerics::LpProblem p;
  p.objective = coeffs;
  p.constraint_matrix = Matrix(rep.rows(), rep.order() + 1);
  p.constraint_matrix.leftCols(rep.order()) = rep.H_x;
  p.constraint_matrix.col(rep.order()) = rep.H_v;
  p.constraint_rhs = rep.h;
  const auto res = numerics::solve_lp(p);
  if (res.status != numerics::LpStatus::optimal) return {false, 0.0};
  return {true, res.objective_value};
}

// Uniform-ish samples of a less_equal representation containing z0 = 0 in
// its interior: shoot a random ray from the origin, walk a random fraction
// of the distance to the boundary (capped for unbounded directions).
class RepSampler {
 public:
  RepSampler(const MasRepresentation& rep, std::uint64_t seed)
      : rep_(rep), rng_(seed), unit_(0.0, 1.0), normal_(0.0, 1.0) {}

  // Returns (x, v) stacked.
  Vector draw() {
    const Eigen::Index d = rep_.order() + 1;
    Vector dir(d);
    for (Eigen::Index i = 0; i < d; ++i) dir(i) = normal_(rng_);
    const double nrm = dir.norm();
    if (nrm < 1e-12) return draw();
    dir /= nrm;

    double theta = 10.0;  // cap for unbounded directions
    for (Eigen::Index i = 0; i < rep_.rows(); ++i) {
      double along = rep_.H_x.row(i).dot(dir.head(rep_.order())) +
                     rep_.H_v(i) * dir(rep_.order());
      if (rep_.orientation == Orientation::greater_equal) along = -along;
      const double bound = rep_.orientation == Orientation::less_equal
                               ? rep_.h(i)
                               : -rep_.h(i);
      if (along > 1e-14) theta = std::min(theta, bound / along);
    }
    return unit_(rng_) * theta * dir;
  }

 private:
  const MasRepresentation& rep_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_;
  std::normal_distribution<double> normal_;
};

}  // namespace rgdc::testsupport
