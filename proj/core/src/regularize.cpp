#include "distbeam/regularize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "distbeam/closed_form.hpp"
#include "distbeam/parallel.hpp"
#include "distbeam/quadrature.hpp"

namespace distbeam {
namespace {

// odd quintic transition on [-1,1]: sigma(+-1) = +-1, sigma'(+-1) = sigma''(+-1) = 0
double sigma(double t) { return (15.0 * t - 10.0 * t * t * t + 3.0 * t * t * t * t * t) / 8.0; }
double sigma_d1(double t) { return (15.0 - 30.0 * t * t + 15.0 * t * t * t * t) / 8.0; }
double sigma_d2(double t) { return (-60.0 * t + 60.0 * t * t * t) / 8.0; }

double rhs_sample(const ForcingTerm& g, double x, double h, double radius) {
    const Singularity* near = nullptr;
    for (const auto& s : g.singularities())
        if (std::abs(x - s.location) <= radius) {
            near = &s;
            break;
        }
    if (!near) return g(x);
    quad::Options opts;
    opts.abs_tol = 1e-12;
    const double splits[] = {x};
    const Singularity sing[] = {*near};
    const double lo = std::max(0.0, x - h);
    const double hi = std::min(1.0, x + h);
    return quad::integrate(
        [&](double t) { return g(t) * (h - std::abs(t - x)) / (h * h); }, lo, hi, splits,
        sing, opts);
}

} // namespace

double SmoothedCoefficient::eval(double x) const {
    const double t = (x - base.x0()) / eps;
    if (t <= -1.0) return base.left();
    if (t >= 1.0) return base.right();
    return 0.5 * (base.left() + base.right()) +
           0.5 * (base.right() - base.left()) * sigma(t);
}

double SmoothedCoefficient::d1(double x) const {
    const double t = (x - base.x0()) / eps;
    if (t <= -1.0 || t >= 1.0) return 0.0;
    return 0.5 * (base.right() - base.left()) * sigma_d1(t) / eps;
}

double SmoothedCoefficient::d2(double x) const {
    const double t = (x - base.x0()) / eps;
    if (t <= -1.0 || t >= 1.0) return 0.0;
    return 0.5 * (base.right() - base.left()) * sigma_d2(t) / (eps * eps);
}

SmoothedCoefficient smooth_coefficient(const JumpConstant& a, double eps) {
    if (!(eps > 0.0) || eps >= std::min(a.x0(), 1.0 - a.x0()))
        throw DomainError("smooth_coefficient: need 0 < eps < min(x0, 1-x0)");
    return SmoothedCoefficient{a, eps};
}

GridFunction solve_regularized(const BeamProblem& problem, double eps, int n) {
    if (n < 200) throw ResolutionError("solve_regularized: n must be >= 200");
    const double h = 1.0 / n;
    if (h > eps / 20.0)
        throw ResolutionError("solve_regularized: grid too coarse, need h <= eps/20 (h = " +
                              std::to_string(h) + ", eps = " + std::to_string(eps) + ")");
    const SmoothedCoefficient a_eps = smooth_coefficient(problem.a(), eps);
    const double avg_radius = 0.05;

    // v = a_eps u: v'' + (P/a_eps) v = g, Dirichlet on v
    std::vector<double> sub(n - 1, 1.0), diag(n - 1), sup(n - 1, 1.0), rhs(n - 1);
    for (int i = 1; i < n; ++i) {
        const double x = static_cast<double>(i) * h;
        const double p = problem.p().eval(x);
        diag[i - 1] = -2.0 + h * h * p / a_eps.eval(x);
        rhs[i - 1] = h * h * rhs_sample(problem.g(), x, h, avg_radius);
    }

    // Thomas sweep; this system is strictly diagonally dominant for the
    // regimes of interest, so a vanishing pivot signals genuine degeneracy.
    double min_pivot = 1e300;
    for (int i = 1; i < n - 1; ++i) {
        const double pivot = diag[i - 1];
        min_pivot = std::min(min_pivot, std::abs(pivot));
        if (std::abs(pivot) < 1e-12)
            throw SolverError("solve_regularized: numerically singular tridiagonal system, "
                              "pivot = " + std::to_string(pivot),
                              pivot);
        const double w = sub[i] / pivot;
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    min_pivot = std::min(min_pivot, std::abs(diag[n - 2]));
    if (std::abs(diag[n - 2]) < 1e-12)
        throw SolverError("solve_regularized: numerically singular tridiagonal system, pivot = " +
                          std::to_string(diag[n - 2]),
                          diag[n - 2]);

    std::vector<double> v(n - 1);
    v[n - 2] = rhs[n - 2] / diag[n - 2];
    for (int i = n - 3; i >= 0; --i) v[i] = (rhs[i] - sup[i] * v[i + 1]) / diag[i];

    GridFunction out;
    out.x0_grid = 0.0;
    out.h = h;
    out.values.resize(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 1; i < n; ++i)
        out.values[static_cast<std::size_t>(i)] =
            v[i - 1] / a_eps.eval(static_cast<double>(i) * h);
    return out;
}

CompactSet CompactSet::standoff(double x0, double d) {
    CompactSet K;
    K.intervals = {{0.0, x0 - d}, {x0 + d, 1.0}};
    return K;
}

bool CompactSet::contains(double x) const {
    for (const auto& [lo, hi] : intervals)
        if (x >= lo - 1e-12 && x <= hi + 1e-12) return true;
    return false;
}

double CompactSet::distance_to(double x) const {
    double d = 1e300;
    for (const auto& [lo, hi] : intervals) {
        if (x >= lo && x <= hi) return 0.0;
        d = std::min({d, std::abs(x - lo), std::abs(x - hi)});
    }
    return d;
}

int default_n_rule(double eps) {
    const double raw = std::ceil(40.0 / eps);
    return static_cast<int>(std::clamp(raw, 4000.0, 200000.0));
}

ConvergenceTable convergence_study(const BeamProblem& problem,
                                   std::span<const double> eps_list, const CompactSet& K,
                                   const std::function<int(double)>& n_rule) {
    if (eps_list.empty()) throw DomainError("convergence_study: empty eps list");
    for (const auto& [lo, hi] : K.intervals)
        if (!(lo >= 0.0 && hi <= 1.0 && lo < hi))
            throw DomainError("convergence_study: K must consist of intervals in [0,1]");
    const double dist = K.distance_to(problem.x0());
    for (double eps : eps_list) {
        // eps may touch K (the transition band is open), never cut into it
        if (!(eps > 0.0) || eps > dist + 1e-12)
            throw DomainError("convergence_study: eps must lie in (0, dist(K, x0)]");
        if (!(eps < std::min(problem.x0(), 1.0 - problem.x0())))
            throw DomainError("convergence_study: eps too large for the transition band");
    }

    const PiecewiseSolution reference = solve(problem);

    ConvergenceTable table;
    table.K = K;
    table.rows.resize(eps_list.size());

    // closed-form reference values are cached per distinct grid size
    std::vector<int> ns(eps_list.size());
    for (std::size_t i = 0; i < eps_list.size(); ++i) ns[i] = n_rule(eps_list[i]);

    std::vector<std::vector<double>> ref_cache(eps_list.size());
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        bool reused = false;
        for (std::size_t j = 0; j < i; ++j)
            if (ns[j] == ns[i]) {
                ref_cache[i] = ref_cache[j];
                reused = true;
                break;
            }
        if (reused) continue;
        const int n = ns[i];
        const double h = 1.0 / n;
        std::vector<double> ref(static_cast<std::size_t>(n) + 1, 0.0);
        std::vector<std::size_t> idx;
        for (int k = 0; k <= n; ++k)
            if (K.contains(k * h)) idx.push_back(static_cast<std::size_t>(k));
        parallel_for(idx.size(), [&](std::size_t q) {
            const std::size_t k = idx[q];
            ref[k] = reference.eval(static_cast<double>(k) * h);
        });
        ref_cache[i] = std::move(ref);
    }

    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        ConvergenceRow& row = table.rows[i];
        row.eps = eps_list[i];
        row.n = ns[i];
        row.grid_h = 1.0 / ns[i];
        try {
            const GridFunction u_eps = solve_regularized(problem, eps_list[i], ns[i]);
            double sup = 0.0;
            for (std::size_t k = 0; k < u_eps.values.size(); ++k) {
                const double x = u_eps.x(k);
                if (!K.contains(x)) continue;
                sup = std::max(sup, std::abs(u_eps.values[k] - ref_cache[i][k]));
            }
            row.sup_error = sup;
            row.ok = true;
        } catch (const Error& e) {
            row.ok = false;
            row.sup_error = std::numeric_limits<double>::quiet_NaN();
            row.message = e.what();
        }
    }
    return table;
}

} // namespace distbeam
