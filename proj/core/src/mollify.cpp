#include "distbeam/mollify.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "distbeam/quadrature.hpp"

namespace distbeam::mollify {
namespace {

// int_z^hi phi(t) dt, the Heaviside tail of the mollifier.
double tail(const MollifierSpec& m, double z, double abs_tol = 1e-13) {
    if (z <= m.support_lo) return 1.0;
    if (z >= m.support_hi) return 0.0;
    return quad::integrate_smooth(m.phi, z, m.support_hi, abs_tol);
}

double phi_derivative(const MollifierSpec& m, int k, double z) {
    switch (k) {
        case 0: return m.phi(z);
        case 1: return m.phi_d1(z);
        case 2: return m.phi_d2(z);
        default:
            throw DomainError("mollify: delta derivatives beyond order 2 are not supported "
                              "(analytic mollifier derivatives stop there)");
    }
}

// Support of u * phi_eps, conservatively.
struct Interval {
    double lo, hi;
};

Interval conv_support(const DistDescriptor& u, const MollifierSpec& m, double eps) {
    const double lo = eps * m.support_lo, hi = eps * m.support_hi;
    switch (u.kind) {
        case DistDescriptor::Kind::DeltaDerivative:
            return {u.anchor + lo, u.anchor + hi};
        case DistDescriptor::Kind::PiecewiseL1: return {lo, 1.0 + hi};
        case DistDescriptor::Kind::HeavisidePlus:
        case DistDescriptor::Kind::HeavisideMinus:
        case DistDescriptor::Kind::JumpCoefficient:
            return {-1e300, 1e300};
    }
    return {-1e300, 1e300};
}

// Points where the convolved factor changes analytic form.
void conv_kinks(const DistDescriptor& u, const MollifierSpec& m, double eps,
                std::vector<double>& out) {
    switch (u.kind) {
        case DistDescriptor::Kind::HeavisidePlus:
        case DistDescriptor::Kind::HeavisideMinus:
        case DistDescriptor::Kind::JumpCoefficient:
            out.push_back(u.anchor + eps * m.support_lo);
            out.push_back(u.anchor + eps * m.support_hi);
            break;
        case DistDescriptor::Kind::DeltaDerivative:
            out.push_back(u.anchor + eps * m.support_lo);
            out.push_back(u.anchor + eps * m.support_hi);
            break;
        case DistDescriptor::Kind::PiecewiseL1:
            out.push_back(u.anchor - eps);
            out.push_back(u.anchor + eps);
            out.push_back(eps * m.support_lo);
            out.push_back(1.0 + eps * m.support_hi);
            break;
    }
}

} // namespace

double MollifierSpec::integral(double abs_tol) const {
    return quad::integrate_smooth(phi, support_lo, support_hi, abs_tol);
}

MollifierSpec MollifierSpec::bump() {
    static const SmoothBump b{-1.0, 1.0};
    static const double norm = quad::integrate_smooth([](double t) { return b.value(t); },
                                                      -1.0, 1.0, 1e-15);
    MollifierSpec m;
    m.name = "bump";
    m.phi = [](double t) { return b.value(t) / norm; };
    m.phi_d1 = [](double t) { return b.d1(t) / norm; };
    m.phi_d2 = [](double t) { return b.d2(t) / norm; };
    return m;
}

MollifierSpec MollifierSpec::shifted_bump() {
    static const SmoothBump b{-1.0, 0.5};
    static const double norm = quad::integrate_smooth([](double t) { return b.value(t); },
                                                      -1.0, 0.5, 1e-15);
    MollifierSpec m;
    m.name = "shifted_bump";
    m.support_hi = 0.5;
    m.phi = [](double t) { return b.value(t) / norm; };
    m.phi_d1 = [](double t) { return b.d1(t) / norm; };
    m.phi_d2 = [](double t) { return b.d2(t) / norm; };
    return m;
}

MollifierSpec MollifierSpec::poly_bump() {
    // int_-1^1 (1-x^2)^4 dx = 256/315
    constexpr double c = 315.0 / 256.0;
    MollifierSpec m;
    m.name = "poly_bump";
    m.phi = [](double t) {
        if (std::abs(t) >= 1.0) return 0.0;
        const double w = 1.0 - t * t;
        return c * w * w * w * w;
    };
    m.phi_d1 = [](double t) {
        if (std::abs(t) >= 1.0) return 0.0;
        const double w = 1.0 - t * t;
        return c * 4.0 * w * w * w * (-2.0 * t);
    };
    m.phi_d2 = [](double t) {
        if (std::abs(t) >= 1.0) return 0.0;
        const double w = 1.0 - t * t;
        return c * (48.0 * t * t * w * w - 8.0 * w * w * w);
    };
    return m;
}

DistDescriptor DistDescriptor::heaviside_plus(double x0) {
    return {Kind::HeavisidePlus, x0, 0, nullptr, 0.0, 0.0};
}
DistDescriptor DistDescriptor::heaviside_minus(double x0) {
    return {Kind::HeavisideMinus, x0, 0, nullptr, 0.0, 0.0};
}
DistDescriptor DistDescriptor::delta_derivative(double x0, int k) {
    if (k < 0) throw DomainError("delta_derivative: k must be >= 0");
    return {Kind::DeltaDerivative, x0, k, nullptr, 0.0, 0.0};
}
DistDescriptor DistDescriptor::piecewise_l1(std::function<double(double)> f, double jump_at) {
    return {Kind::PiecewiseL1, jump_at, 0, std::move(f), 0.0, 0.0};
}
DistDescriptor DistDescriptor::jump_coefficient(const JumpConstant& a) {
    return {Kind::JumpCoefficient, a.x0(), 0, nullptr, a.left(), a.right()};
}

double convolved(const DistDescriptor& u, const MollifierSpec& m, double eps, double x) {
    if (!(eps > 0.0)) throw DomainError("convolved: eps must be positive");
    const double z = (x - u.anchor) / eps;
    switch (u.kind) {
        case DistDescriptor::Kind::HeavisideMinus: return tail(m, z);
        case DistDescriptor::Kind::HeavisidePlus: return 1.0 - tail(m, z);
        case DistDescriptor::Kind::JumpCoefficient:
            return u.right + (u.left - u.right) * tail(m, z);
        case DistDescriptor::Kind::DeltaDerivative:
            return phi_derivative(m, u.k, z) / std::pow(eps, u.k + 1);
        case DistDescriptor::Kind::PiecewiseL1: {
            // (f * phi_eps)(x) = int f(x - eps t) phi(t) dt over the overlap
            // of supp phi with {t : 0 <= x - eps t <= 1}
            const double t_lo = std::max(m.support_lo, (x - 1.0) / eps);
            const double t_hi = std::min(m.support_hi, x / eps);
            if (t_lo >= t_hi) return 0.0;
            const double t_jump = (x - u.anchor) / eps;
            const double splits[] = {t_jump};
            quad::Options opts;
            opts.abs_tol = 1e-12;
            return quad::integrate(
                [&](double t) { return u.f(x - eps * t) * m.phi(t); }, t_lo, t_hi, splits,
                {}, opts);
        }
    }
    return 0.0;
}

double mollified_pairing(const DistDescriptor& u, const DistDescriptor& v,
                         const TestFunction& psi, const MollifierSpec& m, double eps) {
    if (!(eps > 0.0)) throw DomainError("mollified_pairing: eps must be positive");
    const Interval su = conv_support(u, m, eps);
    const Interval sv = conv_support(v, m, eps);
    const double lo = std::max({psi.support_lo(), su.lo, sv.lo});
    const double hi = std::min({psi.support_hi(), su.hi, sv.hi});
    if (lo >= hi) return 0.0;

    std::vector<double> splits;
    conv_kinks(u, m, eps, splits);
    conv_kinks(v, m, eps, splits);

    quad::Options opts;
    const int k_total = (u.kind == DistDescriptor::Kind::DeltaDerivative ? u.k : 0) +
                        (v.kind == DistDescriptor::Kind::DeltaDerivative ? v.k : 0);
    opts.abs_tol = 1e-11 * std::max(1.0, std::pow(eps, -k_total));
    return quad::integrate(
        [&](double x) {
            return convolved(u, m, eps, x) * convolved(v, m, eps, x) * psi.value(x);
        },
        lo, hi, splits, {}, opts);
}

ProductLimit model_product_limit(const DistDescriptor& u, const DistDescriptor& v,
                                 const TestFunction& psi, const MollifierSpec& m,
                                 std::span<const double> schedule) {
    if (schedule.size() < 5)
        throw DomainError("model_product_limit: schedule needs at least 5 entries");
    for (std::size_t i = 0; i + 1 < schedule.size(); ++i)
        if (!(schedule[i + 1] <= 0.5 * schedule[i] + 1e-15))
            throw DomainError("model_product_limit: schedule must be geometric with ratio <= 1/2");

    std::vector<double> vals(schedule.size());
    for (std::size_t i = 0; i < schedule.size(); ++i)
        vals[i] = mollified_pairing(u, v, psi, m, schedule[i]);

    const std::size_t n = vals.size();
    const double mag = std::max({std::abs(vals[n - 1]), std::abs(vals[n - 2]), 1.0});

    // all-zero pairing: a converged limit of 0
    if (std::all_of(vals.begin(), vals.end(), [](double v) { return std::abs(v) < 1e-13; }))
        return {ProductLimit::Kind::Converged, 0.0, 0.0, 0.0};

    // contraction of successive differences over the last three steps
    double worst_contraction = 0.0;
    bool contraction_defined = true;
    for (std::size_t i = n - 3; i < n - 1; ++i) {
        const double d0 = std::abs(vals[i] - vals[i - 1]);
        const double d1 = std::abs(vals[i + 1] - vals[i]);
        if (d0 < 1e-14 * mag) {
            contraction_defined = d1 < 1e-13 * mag;
            continue;
        }
        worst_contraction = std::max(worst_contraction, d1 / d0);
    }
    if (contraction_defined && worst_contraction <= 0.75) {
        // Aitken extrapolation on the last triple
        const double v0 = vals[n - 3], v1 = vals[n - 2], v2 = vals[n - 1];
        const double denom = (v2 - v1) - (v1 - v0);
        double limit = v2;
        if (std::abs(denom) > 1e-14 * mag)
            limit = v2 - (v2 - v1) * (v2 - v1) / denom;
        return {ProductLimit::Kind::Converged, limit, worst_contraction, 0.0};
    }

    // growth pattern |v| ~ eps^-k
    double min_growth = 1e300;
    for (std::size_t i = n - 3; i < n - 1; ++i) {
        const double g = std::abs(vals[i + 1]) / std::max(std::abs(vals[i]), 1e-300);
        min_growth = std::min(min_growth, g);
    }
    if (min_growth >= 1.5) {
        // least-squares slope of log|v| against log(1/eps)
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const std::size_t fit_n = n;
        for (std::size_t i = 0; i < fit_n; ++i) {
            const double x = std::log(1.0 / schedule[i]);
            const double y = std::log(std::max(std::abs(vals[i]), 1e-300));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double slope =
            (fit_n * sxy - sx * sy) / (fit_n * sxx - sx * sx);
        return {ProductLimit::Kind::Diverged, 0.0, 0.0, slope};
    }

    throw InconclusiveError(
        "model_product_limit: neither contraction (<= 0.75) nor growth (>= 1.5) fits "
        "the pairing values");
}

double support_check(const DistDescriptor& u, const DistDescriptor& v,
                     const TestFunction& psi, const MollifierSpec& m, double eps) {
    const double inflate_lo = 0.0 + eps * m.support_lo;
    const double inflate_hi = 1.0 + eps * m.support_hi;
    if (psi.support_hi() > inflate_lo && psi.support_lo() < inflate_hi)
        throw PreconditionError(
            "support_check: test-function support overlaps [0,1] inflated by eps");
    return mollified_pairing(u, v, psi, m, eps);
}

StrictNetReport validate_strict_net(const StrictDeltaNet& net,
                                    std::span<const double> eps_schedule) {
    if (eps_schedule.size() < 2)
        throw DomainError("validate_strict_net: need at least 2 schedule entries");
    StrictNetReport rep{true, true, true, 0.0};
    double prev_radius = 1e300;
    for (double eps : eps_schedule) {
        const double r = net.support_radius(eps);
        if (!(r <= prev_radius + 1e-15)) rep.support_shrinks = false;
        prev_radius = r;
        const auto slice = [&](double x) { return net.rho(eps, x); };
        const double integral = quad::integrate_smooth(slice, -r, r, 1e-12);
        if (std::abs(integral - 1.0) > 1e-9) rep.unit_integral = false;
        const double l1 = quad::integrate_smooth([&](double x) { return std::abs(slice(x)); },
                                                 -r, r, 1e-10);
        rep.max_l1 = std::max(rep.max_l1, l1);
    }
    if (!(net.support_radius(eps_schedule.back()) <
          0.5 * net.support_radius(eps_schedule.front()) + 1e-12))
        rep.support_shrinks = false;
    rep.l1_bounded = rep.max_l1 < 100.0;
    return rep;
}

StrictDeltaNet as_strict_net(const MollifierSpec& m) {
    const auto phi = m.phi;
    const double reach = std::max(std::abs(m.support_lo), std::abs(m.support_hi));
    StrictDeltaNet net;
    net.rho = [phi](double eps, double x) { return phi(x / eps) / eps; };
    net.support_radius = [reach](double eps) { return reach * eps; };
    return net;
}

} // namespace distbeam::mollify
