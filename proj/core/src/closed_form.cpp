#include "distbeam/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "distbeam/parallel.hpp"
#include "distbeam/quadrature.hpp"

namespace distbeam {
namespace {

Branch branch_of(double force) {
    if (force < 0.0) return Branch::Hyperbolic;
    if (force > 0.0) return Branch::Trigonometric;
    return Branch::Polynomial;
}

double omega_of(double coef, double force) {
    return force == 0.0 ? 0.0 : std::sqrt(std::abs(force) / coef);
}

// Boundary-reduced homogeneous solution of one side: vanishes at 0 (minus)
// or at 1 (plus).
struct SideBasis {
    Branch branch;
    double omega;
    double shift; // 0 for the minus side, 1 for the plus side

    double phi(double x) const {
        const double s = x - shift;
        switch (branch) {
            case Branch::Hyperbolic: return std::sinh(omega * s);
            case Branch::Trigonometric: return std::sin(omega * s);
            case Branch::Polynomial: return s;
        }
        return 0.0;
    }
    double dphi(double x) const {
        const double s = x - shift;
        switch (branch) {
            case Branch::Hyperbolic: return omega * std::cosh(omega * s);
            case Branch::Trigonometric: return omega * std::cos(omega * s);
            case Branch::Polynomial: return 1.0;
        }
        return 0.0;
    }
};

SideBasis side_basis(Side side, double coef, double force) {
    return SideBasis{branch_of(force), omega_of(coef, force), side == Side::Minus ? 0.0 : 1.0};
}

// Duhamel kernel k(xi) with k(0)=0, k'(0)=1 solving coef*k'' + force*k = 0.
double kernel(Branch branch, double omega, double xi) {
    switch (branch) {
        case Branch::Hyperbolic: return std::sinh(omega * xi) / omega;
        case Branch::Trigonometric: return std::sin(omega * xi) / omega;
        case Branch::Polynomial: return xi;
    }
    return 0.0;
}

double kernel_d(Branch branch, double omega, double xi) {
    switch (branch) {
        case Branch::Hyperbolic: return std::cosh(omega * xi);
        case Branch::Trigonometric: return std::cos(omega * xi);
        case Branch::Polynomial: return 1.0;
    }
    return 0.0;
}

// One Duhamel integral: value kernel or differentiated kernel.
double duhamel(Side side, const ForcingTerm& g, double coef, double force, double x,
               double abs_tol, bool derivative_kernel) {
    const double base = side == Side::Minus ? 0.0 : 1.0;
    if (x == base) return 0.0;
    const Branch branch = branch_of(force);
    const double omega = omega_of(coef, force);
    quad::Options opts;
    opts.abs_tol = abs_tol;
    const double value = quad::integrate(
        [&](double tau) {
            return g(tau) * (derivative_kernel ? kernel_d(branch, omega, x - tau)
                                               : kernel(branch, omega, x - tau));
        },
        base, x, {}, g.singularities(), opts);
    return value / coef;
}

struct Assembly {
    InterfaceSystem sys;
    ParticularValue pm; // particular value/derivative at x0, minus side
    ParticularValue pp; // particular value/derivative at x0, plus side
};

Assembly assemble(const BeamProblem& problem, double quad_tol) {
    const double A = problem.A(), B = problem.B(), x0 = problem.x0();
    const SideBasis bm = side_basis(Side::Minus, A, problem.P1());
    const SideBasis bp = side_basis(Side::Plus, B, problem.P2());
    const double kappa = std::exp(std::sqrt(std::abs(problem.P2()) / B));

    Assembly out;
    out.pm = particular_solution(Side::Minus, problem.g(), A, problem.P1(), x0, quad_tol);
    out.pp = particular_solution(Side::Plus, problem.g(), B, problem.P2(), x0, quad_tol);

    InterfaceSystem& sys = out.sys;
    sys.h11 = 2.0 * A * bm.phi(x0);
    sys.h21 = 2.0 * A * bm.dphi(x0);
    sys.h12 = -2.0 * B * kappa * bp.phi(x0);
    sys.h22 = -2.0 * B * kappa * bp.dphi(x0);
    sys.z1 = B * out.pp.value - A * out.pm.value;
    sys.z2 = B * out.pp.derivative - A * out.pm.derivative;
    sys.det = sys.h11 * sys.h22 - sys.h12 * sys.h21;
    sys.scale = std::max({std::abs(sys.h11 * sys.h22), std::abs(sys.h12 * sys.h21), 1.0});
    sys.kappa = kappa;
    sys.branch_minus = bm.branch;
    sys.branch_plus = bp.branch;
    return out;
}

} // namespace

HomogeneousBasis homogeneous_basis(double coef, double force, double x) {
    if (!(coef > 0.0))
        throw DomainError("homogeneous_basis: coefficient must be positive");
    const double w = omega_of(coef, force);
    switch (branch_of(force)) {
        case Branch::Hyperbolic:
            return {std::sinh(w * x), std::cosh(w * x), w * std::cosh(w * x),
                    w * std::sinh(w * x)};
        case Branch::Trigonometric:
            return {std::sin(w * x), std::cos(w * x), w * std::cos(w * x),
                    -w * std::sin(w * x)};
        case Branch::Polynomial: return {x, 1.0, 1.0, 0.0};
    }
    return {};
}

ParticularValue particular_solution(Side side, const ForcingTerm& g, double coef,
                                    double force, double x, double abs_tol) {
    if (!(coef > 0.0))
        throw DomainError("particular_solution: coefficient must be positive");
    const double base = side == Side::Minus ? 0.0 : 1.0;
    if (side == Side::Minus && !(x >= 0.0))
        throw DomainError("particular_solution: minus side needs x >= 0");
    if (side == Side::Plus && !(x <= 1.0))
        throw DomainError("particular_solution: plus side needs x <= 1");
    if (x == base) return {0.0, 0.0};
    return {duhamel(side, g, coef, force, x, abs_tol, false),
            duhamel(side, g, coef, force, x, abs_tol, true)};
}

InterfaceSystem interface_system(const BeamProblem& problem, double quad_tol) {
    return assemble(problem, quad_tol).sys;
}

PiecewiseSolution::PiecewiseSolution(BeamProblem problem, double c1, double d1,
                                     const SolveOptions& opts)
    : problem_(std::move(problem)), c1_(c1), d1_(d1), quad_tol_(opts.quad_tol) {
    const Assembly as = assemble(problem_, quad_tol_);
    system_ = as.sys;
    // One-sided limits from the branch formulas, with the same particular
    // values that entered z, so A u(x0-) - B u(x0+) cancels to solver precision.
    const double x0 = problem_.x0();
    const SideBasis bm = side_basis(Side::Minus, problem_.A(), problem_.P1());
    const SideBasis bp = side_basis(Side::Plus, problem_.B(), problem_.P2());
    limits_.u_minus = 2.0 * c1_ * bm.phi(x0) + as.pm.value;
    limits_.u_plus = 2.0 * d1_ * system_.kappa * bp.phi(x0) + as.pp.value;
    limits_.du_minus = 2.0 * c1_ * bm.dphi(x0) + as.pm.derivative;
    limits_.du_plus = 2.0 * d1_ * system_.kappa * bp.dphi(x0) + as.pp.derivative;
}

double PiecewiseSolution::eval_minus(double x) const {
    const SideBasis b = side_basis(Side::Minus, problem_.A(), problem_.P1());
    return 2.0 * c1_ * b.phi(x) +
           duhamel(Side::Minus, problem_.g(), problem_.A(), problem_.P1(), x, quad_tol_, false);
}

double PiecewiseSolution::eval_plus(double x) const {
    const SideBasis b = side_basis(Side::Plus, problem_.B(), problem_.P2());
    return 2.0 * d1_ * system_.kappa * b.phi(x) +
           duhamel(Side::Plus, problem_.g(), problem_.B(), problem_.P2(), x, quad_tol_, false);
}

double PiecewiseSolution::deriv_minus(double x) const {
    const SideBasis b = side_basis(Side::Minus, problem_.A(), problem_.P1());
    return 2.0 * c1_ * b.dphi(x) +
           duhamel(Side::Minus, problem_.g(), problem_.A(), problem_.P1(), x, quad_tol_, true);
}

double PiecewiseSolution::deriv_plus(double x) const {
    const SideBasis b = side_basis(Side::Plus, problem_.B(), problem_.P2());
    return 2.0 * d1_ * system_.kappa * b.dphi(x) +
           duhamel(Side::Plus, problem_.g(), problem_.B(), problem_.P2(), x, quad_tol_, true);
}

double PiecewiseSolution::eval(double x) const {
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("PiecewiseSolution::eval: x outside [0,1]");
    return x < problem_.x0() ? eval_minus(x) : eval_plus(x);
}

double PiecewiseSolution::deriv(double x) const {
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("PiecewiseSolution::deriv: x outside [0,1]");
    return x < problem_.x0() ? deriv_minus(x) : deriv_plus(x);
}

OneSidedLimits one_sided_limits(const PiecewiseSolution& s) { return s.limits(); }

PiecewiseSolution solve(const BeamProblem& problem, const SolveOptions& opts) {
    const InterfaceSystem sys = interface_system(problem, opts.quad_tol);
    if (std::abs(sys.det) / sys.scale <= opts.singular_threshold)
        throw SingularParameterError(
            "solve: interface system is singular (|det|/scale = " +
                std::to_string(std::abs(sys.det) / sys.scale) +
                "), the parameters sit on the exceptional set",
            sys.det, sys.scale);

    // Cramer in extended precision: det can be small against the products and
    // the interface identity still has to come out at the 1e-10 level.
    const long double h11 = sys.h11, h12 = sys.h12, h21 = sys.h21, h22 = sys.h22;
    const long double z1 = sys.z1, z2 = sys.z2;
    const long double det = h11 * h22 - h12 * h21;
    const long double c1 = (z1 * h22 - h12 * z2) / det;
    const long double d1 = (h11 * z2 - z1 * h21) / det;
    return PiecewiseSolution(problem, static_cast<double>(c1), static_cast<double>(d1), opts);
}

PiecewiseSolution assemble_solution(const BeamProblem& problem, double c1, double d1,
                                    const SolveOptions& opts) {
    return PiecewiseSolution(problem, c1, d1, opts);
}

double weak_residual(const PiecewiseSolution& s, const BeamProblem& problem,
                     std::span<const TestFunction> tests) {
    if (tests.empty()) throw DomainError("weak_residual: empty test family");
    const double x0 = problem.x0();
    const auto& sings = problem.g().singularities();
    const double splits_arr[] = {x0};

    std::vector<double> residuals(tests.size(), 0.0);
    parallel_for(tests.size(), [&](std::size_t i) {
        const TestFunction& psi = tests[i];
        const double lo = std::max(0.0, psi.support_lo());
        const double hi = std::min(1.0, psi.support_hi());
        quad::Options opts;
        opts.abs_tol = 1e-10;
        // (a u)'' paired with psi via two integrations by parts; a u is C^1
        // across x0 so no boundary terms appear.
        const double bending = quad::integrate(
            [&](double x) {
                const double a = x < x0 ? problem.A() : problem.B();
                return a * s.eval(x) * psi.d2(x);
            },
            lo, hi, splits_arr, sings, opts);
        const double load = quad::integrate(
            [&](double x) {
                const double p = x < x0 ? problem.P1() : problem.P2();
                return (p * s.eval(x) - problem.g()(x)) * psi.value(x);
            },
            lo, hi, splits_arr, sings, opts);
        residuals[i] = std::abs(bending + load);
    });
    return *std::max_element(residuals.begin(), residuals.end());
}

Displacement recover_displacement(const PiecewiseSolution& s) {
    const auto sol = std::make_shared<PiecewiseSolution>(s);
    const double x0 = sol->problem().x0();
    const auto sings = sol->problem().g().singularities();
    const std::vector<double> splits{x0};

    quad::Options opts;
    opts.abs_tol = 1e-12;

    auto integral = [sol, sings, splits, opts](const std::function<double(double)>& f,
                                               double a, double b) {
        return quad::integrate(f, a, b, splits, sings, opts);
    };

    // Left-anchored representation: w(x) = int_0^x (x-t) u dt + c x, w(1) = 0.
    const double c = -integral([sol](double t) { return (1.0 - t) * sol->eval(t); }, 0.0, 1.0);
    // Right-anchored representation: w(x) = int_x^1 (t-x) u dt + d (1-x), w(0) = 0.
    const double d = -integral([sol](double t) { return t * sol->eval(t); }, 0.0, 1.0);

    auto w_minus = [sol, integral, c](double x) {
        return integral([sol, x](double t) { return (x - t) * sol->eval(t); }, 0.0, x) + c * x;
    };
    auto w_plus = [sol, integral, d](double x) {
        return integral([sol, x](double t) { return (t - x) * sol->eval(t); }, x, 1.0) +
               d * (1.0 - x);
    };
    auto wp_minus = [sol, integral, c](double x) {
        return integral([sol](double t) { return sol->eval(t); }, 0.0, x) + c;
    };
    auto wp_plus = [sol, integral, d](double x) {
        return -integral([sol](double t) { return sol->eval(t); }, x, 1.0) - d;
    };

    Displacement disp;
    disp.jump_delta = w_plus(x0) - w_minus(x0);
    disp.jump_theta = wp_plus(x0) - wp_minus(x0);
    disp.w = [x0, w_minus, w_plus](double x) { return x <= x0 ? w_minus(x) : w_plus(x); };
    disp.w_prime = [x0, wp_minus, wp_plus](double x) {
        return x <= x0 ? wp_minus(x) : wp_plus(x);
    };
    return disp;
}

} // namespace distbeam
