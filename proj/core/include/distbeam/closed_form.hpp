#pragma once

#include <functional>
#include <span>
#include <vector>

#include "distbeam/bump.hpp"
#include "distbeam/types.hpp"

namespace distbeam {

/// Branch of the homogeneous solution, by the sign of force/coef.
enum class Branch { Hyperbolic, Trigonometric, Polynomial };

enum class Side { Minus, Plus };

/// Homogeneous basis of coef*u'' + force*u = 0 evaluated at x:
/// force < 0 -> {sinh(wx), cosh(wx)}, force > 0 -> {sin(wx), cos(wx)},
/// force = 0 -> {x, 1}, with w = sqrt(|force|/coef).
struct HomogeneousBasis {
    double phi1, phi2, dphi1, dphi2;
};
HomogeneousBasis homogeneous_basis(double coef, double force, double x);

/// Duhamel particular solution of coef*u'' + force*u = g with zero data at
/// the base point (0 on the minus side, 1 on the plus side). The derivative
/// comes from the differentiated kernel, not from differencing.
struct ParticularValue {
    double value;
    double derivative;
};
ParticularValue particular_solution(Side side, const ForcingTerm& g, double coef,
                                    double force, double x, double abs_tol = 1e-11);

/// The 2x2 interface system H y = z coupling the boundary-reduced homogeneous
/// solutions of the two sides through A u(x0-) = B u(x0+) and the same for u'.
struct InterfaceSystem {
    double h11, h12, h21, h22;
    double z1, z2;
    double det;   // h11*h22 - h12*h21 as computed from the stored entries
    double scale; // max(|h11*h22|, |h12*h21|, 1)
    double kappa; // normalization factor exp(sqrt(|P2|/B)) carried by column 2
    Branch branch_minus, branch_plus;
};
InterfaceSystem interface_system(const BeamProblem& problem, double quad_tol = 1e-11);

struct OneSidedLimits {
    double u_minus, u_plus;   // u(x0-), u(x0+)
    double du_minus, du_plus; // u'(x0-), u'(x0+)
};

struct SolveOptions {
    double singular_threshold = 1e-9; // reject when |det|/scale is below this
    double quad_tol = 1e-11;
};

/// Closed-form solution u = u_- + u_+ with the free coefficients fixed by the
/// interface system. u_minus lives on [0,x0], u_plus on [x0,1]; both satisfy
/// their boundary condition exactly by construction.
class PiecewiseSolution {
public:
    PiecewiseSolution(BeamProblem problem, double c1, double d1,
                      const SolveOptions& opts = {});

    const BeamProblem& problem() const { return problem_; }
    Branch branch_minus() const { return system_.branch_minus; }
    Branch branch_plus() const { return system_.branch_plus; }
    double c1() const { return c1_; }
    double d1() const { return d1_; }
    double kappa() const { return system_.kappa; }
    const InterfaceSystem& system() const { return system_; }

    double eval_minus(double x) const;
    double eval_plus(double x) const;
    double deriv_minus(double x) const;
    double deriv_plus(double x) const;

    /// Value at x, taking the minus branch left of x0 and the plus branch
    /// from x0 on.
    double eval(double x) const;
    double deriv(double x) const;

    const OneSidedLimits& limits() const { return limits_; }

private:
    BeamProblem problem_;
    InterfaceSystem system_;
    double c1_, d1_;
    double quad_tol_;
    OneSidedLimits limits_;
};

OneSidedLimits one_sided_limits(const PiecewiseSolution& s);

/// Solves the interface problem. Throws SingularParameterError carrying
/// det and scale when |det|/scale falls below opts.singular_threshold.
PiecewiseSolution solve(const BeamProblem& problem, const SolveOptions& opts = {});

/// Assembles the solution for externally supplied free coefficients
/// (stored-run re-checks, perturbation studies).
PiecewiseSolution assemble_solution(const BeamProblem& problem, double c1, double d1,
                                    const SolveOptions& opts = {});

/// max over the family of |int a u psi'' + int (P u - g) psi|, the
/// distributional residual with (a u)'' moved onto the test function.
double weak_residual(const PiecewiseSolution& s, const BeamProblem& problem,
                     std::span<const TestFunction> tests);

/// Displacement w with w'' = u, w(0) = w(1) = 0, plus the jumps of w and w'
/// at x0 measured from independent left- and right-anchored quadratures.
struct Displacement {
    std::function<double(double)> w;
    std::function<double(double)> w_prime;
    double jump_delta; // w(x0+) - w(x0-)
    double jump_theta; // w'(x0+) - w'(x0-)
};
Displacement recover_displacement(const PiecewiseSolution& s);

} // namespace distbeam
