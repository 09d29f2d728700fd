#pragma once

#include <functional>
#include <span>

#include "distbeam/types.hpp"

namespace distbeam::quad {

struct Options {
    double abs_tol = 1e-11;
    int max_depth = 60;        // bisection depth cap per panel
    long max_evals = 80000000; // hard safety cap on integrand evaluations
};

/// Globally adaptive Gauss-Kronrod 15 integration of f over [a,b].
///
/// `splits` are mandatory panel boundaries (coefficient jumps, support kinks).
/// `singularities` carry algebraic endpoint behaviour |x-s|^alpha with
/// alpha in (-1,0); each becomes a split and the adjacent panels are computed
/// under the de-singularizing substitution x = s +- tau^(1/(1+alpha)).
/// Throws QuadratureError on non-finite samples or when the subdivision cap
/// is exceeded before the tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> splits = {},
                 std::span<const Singularity> singularities = {},
                 const Options& opts = {});

/// Convenience wrapper for a smooth integrand without split points.
double integrate_smooth(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-11);

} // namespace distbeam::quad
