#pragma once

#include <span>
#include <vector>

#include "polmin/lowrank.hpp"
#include "polmin/matrix.hpp"

namespace polmin {

/// Euclidean projection of v onto {x : sum x = 1, l <= x <= u}.
/// Breakpoint search on x_i(mu) = clamp(v_i - mu, l_i, u_i): sort the 2k
/// breakpoints {v_i - u_i, v_i - l_i} and interpolate on the active segment.
/// O(k log k); throws on infeasible bounds.
std::vector<double> project_row(std::span<const double> v,
                                std::span<const double> lower,
                                std::span<const double> upper);

/// Row-wise projection onto the feasible set Q.
Matrix project_matrix(const Matrix& v, const Bounds& bounds);

}  // namespace polmin
