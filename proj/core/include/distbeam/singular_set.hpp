#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "distbeam/types.hpp"

namespace distbeam {

/// tan(s) + nu*mu*tan(mu*s). Throws DomainError within 1e-12 of a pole of
/// either tangent.
double h_function(double s, double mu, double nu);

/// nu*t*sin(s)*cos(t) + s*sin(t)*cos(s): det H of the two-force trigonometric
/// case vanishes exactly on the zero set of f.
double f_function(double s, double t, double nu);

/// |det H| / scale for raw parameters (no forcing enters the determinant).
double det_residual(double A, double B, double x0, double P1, double P2);

enum class Provenance : std::uint8_t { Z0, Z1 };

struct SpectrumEntry {
    double p;
    Provenance provenance;
    bool both_cosines; // Z0 only: both cosine factors vanish at this value
    bool singular;     // det H actually vanishes (Z1, or Z0 with both cosines)
    double residual;   // |det H| / scale at the value
};

struct RationalityReport {
    double value;    // sqrt(B/A) * x0 / (1 - x0)
    bool rational;   // matched p/q with q <= 1e6 by continued fractions
    long long num = 0, den = 0;
    bool odd_odd = false; // of the form (2l+1)/(2k+1): both-cosine values exist
};

/// Candidate singular axial-force values for constant P > 0, merged from Z0
/// (cosine-factor zeros, at most countable, flagged; only the both-cosine ones
/// are genuinely singular) and Z1 (roots of the tangent equation between
/// consecutive poles, always singular).
struct SpectrumReport {
    double A, B, x0;
    std::vector<SpectrumEntry> entries; // ascending in p
    RationalityReport ratio;
    std::vector<std::pair<double, double>> skipped_intervals; // non-bracketing, in s

    std::vector<double> p_values() const;
    std::vector<SpectrumEntry> singular_entries() const;
};

SpectrumReport pl_sequence(double A, double B, double x0, int count);

enum class ZeroPlane : std::uint8_t {
    MPrime, // P1 > 0, P2 > 0: zero set of f(s,t)
    N       // P1 > 0, P2 < 0: zero set of nu*t*sin(s)*cosh(t) + s*sinh(t)*cos(s)
};

struct Window {
    double s_lo, s_hi, t_lo, t_hi;
};

struct ZeroCurveSet {
    ZeroPlane plane;
    double nu;
    double A, B, x0;
    Window window;
    std::vector<std::vector<std::array<double, 2>>> curves; // polylines in (s,t)

    /// Maps a traced vertex to the force pair it represents.
    std::array<double, 2> to_forces(const std::array<double, 2>& vertex) const;
};

/// Marching-squares trace of the zero set on a grid_n x grid_n lattice with
/// per-edge bisection refinement. Lattice lines on the degenerate axes s = 0
/// or t = 0 (where the zero function vanishes identically but the force pair
/// leaves the open quadrant) are inset by one cell.
ZeroCurveSet trace_zero_set(ZeroPlane plane, double A, double B, double x0,
                            const Window& window, int grid_n);

struct Classification {
    enum class Kind : std::uint8_t { Unique, Singular, NearSingular } kind;
    double residual; // |det H| / scale (0 for the unconditional P1,P2 < 0 case)
};

/// P1 < 0 and P2 < 0 is unconditionally unique; otherwise classified by
/// |det H|/scale against the thresholds 1e-9 (Singular) and 1e-4 (NearSingular).
Classification classify_parameters(const BeamProblem& problem);

} // namespace distbeam
