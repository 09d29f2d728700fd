#pragma once

#include <cstdint>
#include <vector>

#include "distbeam/types.hpp"

namespace distbeam {

/// C-infinity bump exp(-1/((x-lo)(hi-x))) on (lo,hi), zero outside, with
/// analytic first and second derivatives.
struct SmoothBump {
    double lo = -1.0;
    double hi = 1.0;

    double value(double x) const;
    double d1(double x) const;
    double d2(double x) const;
};

/// Peak-normalized bump test function on (center-radius, center+radius),
/// smooth and compactly supported with all derivatives vanishing at the
/// support endpoints. value(center) == 1.
class TestFunction {
public:
    TestFunction(double center, double radius);

    double center() const { return center_; }
    double radius() const { return radius_; }
    double support_lo() const { return center_ - radius_; }
    double support_hi() const { return center_ + radius_; }

    double value(double x) const;
    double d1(double x) const;
    double d2(double x) const;

private:
    double center_;
    double radius_;
    double amp_; // scales the raw bump so the peak is exactly 1
};

/// Family of bump test functions on (0,1) for weak-residual checks: two
/// straddling x0, one straddling each declared singularity of g, the rest
/// spread over the interval. `seed` jitters only the non-anchored centers.
std::vector<TestFunction> make_test_family(double x0,
                                           const std::vector<Singularity>& singularities,
                                           int count = 12, std::uint64_t seed = 0);

} // namespace distbeam
