#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "distbeam/types.hpp"

namespace distbeam {

/// C^2 smoothing of the jump coefficient: outside [x0-eps, x0+eps] it equals
/// the jump constant; inside it follows the odd quintic transition
/// sigma(t) = (15t - 10t^3 + 3t^5)/8, the unique odd quintic with
/// sigma(+-1) = +-1 and vanishing first and second derivatives there.
struct SmoothedCoefficient {
    JumpConstant base;
    double eps;

    double eval(double x) const;
    double d1(double x) const;
    double d2(double x) const;
};

SmoothedCoefficient smooth_coefficient(const JumpConstant& a, double eps);

/// Solves the regularized two-point problem (a_eps u)'' + P u = g on a uniform
/// n-interval grid through the substitution v = a_eps u (so no numerical
/// differentiation of a_eps): v'' + (P/a_eps) v = g, v(0) = v(1) = 0.
/// Requires n >= 200 and h <= eps/20 (ResolutionError otherwise); throws
/// SolverError with the pivot magnitude if the tridiagonal system degenerates.
GridFunction solve_regularized(const BeamProblem& problem, double eps, int n);

struct CompactSet {
    std::vector<std::pair<double, double>> intervals;

    /// [0, x0-d] U [x0+d, 1]
    static CompactSet standoff(double x0, double d = 0.1);
    bool contains(double x) const;
    double distance_to(double x) const;
};

struct ConvergenceRow {
    double eps;
    double sup_error; // sup over K-grid-nodes of |u_eps - u_closed_form|
    double grid_h;
    int n;
    bool ok;
    std::string message; // failure reason when !ok
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows; // in the order of the requested eps list
    CompactSet K;
};

int default_n_rule(double eps); // clamp(ceil(40/eps), 4000, 200000)

/// For each eps: regularized solve, then the sup distance to the closed-form
/// solution over the grid nodes inside K. Failed rows are marked and the
/// study continues.
ConvergenceTable convergence_study(
    const BeamProblem& problem, std::span<const double> eps_list, const CompactSet& K,
    const std::function<int(double)>& n_rule = default_n_rule);

} // namespace distbeam
