#pragma once

#include "distbeam/types.hpp"

namespace distbeam {

/// Brute-force finite-difference reference solution of the interface problem:
/// second-order central differences on each side of x0, a doubled node at the
/// interface carrying the left and right values, and the two coupling rows
/// A u(x0-) = B u(x0+), A u'(x0-) = B u'(x0+) with 3-point one-sided stencils.
struct OracleSolution {
    GridFunction left;     // nodes [0, x0], last value is u(x0-)
    GridFunction right;    // nodes [x0, 1], first value is u(x0+)
    double snapped_x0;     // interface node actually used
    double snap_shift;     // |snapped_x0 - requested x0|
    double order_estimate; // NaN unless filled by estimate_order

    double u_left_at_x0() const { return left.values.back(); }
    double u_right_at_x0() const { return right.values.front(); }
};

/// Solves on a grid of spacing ~h (h <= 1e-3 recommended); x0 is snapped to
/// the nearest node and the shift recorded. Throws SolverError (with pivot
/// data) when the banded system is numerically singular, which happens at the
/// exceptional parameter values.
OracleSolution fd_interface_solve(const BeamProblem& problem, double h);

/// Richardson order estimate from solutions at h, h/2, h/4 compared on the
/// common nodes away from the interface.
double oracle_order_estimate(const BeamProblem& problem, double h);

} // namespace distbeam
