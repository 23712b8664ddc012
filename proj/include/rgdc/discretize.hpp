#pragma once

#include <utility>

#include "rgdc/types.hpp"

namespace rgdc::numerics {

/**
 * Zero-order-hold discretization of x' = A_cont x + B_cont u at sample time
 * Ts, computed through the augmented-matrix exponential
 *
 *     exp([A B; 0 0] Ts) = [A_d B_d; 0 I],
 *
 * so that A_d = exp(A_cont Ts) and B_d integrates the input over one sample.
 * Throws std::invalid_argument for a non-square A_cont, mismatched B_cont, or
 * Ts <= 0.
 */
std::pair<Matrix, Matrix> zoh_discretize(const Matrix& A_cont,
                                         const Matrix& B_cont, double Ts);

}  // namespace rgdc::numerics
