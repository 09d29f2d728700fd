#include "distbeam/singular_set.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

namespace distbeam {
namespace {

constexpr double kPi = std::numbers::pi;

double tan_pole_distance(double s) {
    // distance from s to the nearest (k+1/2)*pi
    const double k = std::round(s / kPi - 0.5);
    return std::abs(s - (k + 0.5) * kPi);
}

// det H of the interface system for raw parameters, forcing-free, computed in
// extended precision together with its scale.
struct DetValue {
    double det;
    double scale;
};

DetValue raw_det(double A, double B, double x0, double P1, double P2) {
    auto phi = [](double force, double coef, double s) -> long double {
        if (force < 0.0) return std::sinh(std::sqrt(-force / coef) * s);
        if (force > 0.0) return std::sin(std::sqrt(force / coef) * s);
        return s;
    };
    auto dphi = [](double force, double coef, double s) -> long double {
        if (force < 0.0) {
            const double w = std::sqrt(-force / coef);
            return w * std::cosh(w * s);
        }
        if (force > 0.0) {
            const double w = std::sqrt(force / coef);
            return w * std::cos(w * s);
        }
        return 1.0L;
    };
    const long double kappa = std::exp(std::sqrt(std::abs(P2) / B));
    const long double h11 = 2.0L * A * phi(P1, A, x0);
    const long double h21 = 2.0L * A * dphi(P1, A, x0);
    const long double h12 = -2.0L * B * kappa * phi(P2, B, x0 - 1.0);
    const long double h22 = -2.0L * B * kappa * dphi(P2, B, x0 - 1.0);
    const long double det = h11 * h22 - h12 * h21;
    const long double scale =
        std::max({fabsl(h11 * h22), fabsl(h12 * h21), 1.0L});
    return {static_cast<double>(det), static_cast<double>(scale)};
}

RationalityReport detect_rationality(double A, double B, double x0) {
    RationalityReport rep;
    rep.value = std::sqrt(B / A) * x0 / (1.0 - x0);
    // continued-fraction convergents with denominator cap 1e6
    double x = rep.value;
    long long p0 = 1, q0 = 0, p1 = static_cast<long long>(std::floor(x)), q1 = 1;
    double frac = x - std::floor(x);
    for (int it = 0; it < 64; ++it) {
        if (q1 > 1000000) break;
        if (std::abs(rep.value - static_cast<double>(p1) / static_cast<double>(q1)) <=
            1e-12 * std::max(1.0, rep.value)) {
            rep.rational = true;
            rep.num = p1;
            rep.den = q1;
            rep.odd_odd = (p1 % 2 != 0) && (q1 % 2 != 0);
            return rep;
        }
        if (frac < 1e-15) break;
        x = 1.0 / frac;
        const long long a = static_cast<long long>(std::floor(x));
        frac = x - std::floor(x);
        const long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    rep.rational = false;
    return rep;
}

} // namespace

double h_function(double s, double mu, double nu) {
    if (!(mu > 0.0) || !(nu > 0.0))
        throw DomainError("h_function: mu and nu must be positive");
    if (tan_pole_distance(s) < 1e-12 || tan_pole_distance(mu * s) / mu < 1e-12)
        throw DomainError("h_function: s within 1e-12 of a tangent pole");
    return std::tan(s) + nu * mu * std::tan(mu * s);
}

double f_function(double s, double t, double nu) {
    return nu * t * std::sin(s) * std::cos(t) + s * std::sin(t) * std::cos(s);
}

double det_residual(double A, double B, double x0, double P1, double P2) {
    const DetValue d = raw_det(A, B, x0, P1, P2);
    return std::abs(d.det) / d.scale;
}

std::vector<double> SpectrumReport::p_values() const {
    std::vector<double> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.p);
    return out;
}

std::vector<SpectrumEntry> SpectrumReport::singular_entries() const {
    std::vector<SpectrumEntry> out;
    for (const auto& e : entries)
        if (e.singular) out.push_back(e);
    return out;
}

SpectrumReport pl_sequence(double A, double B, double x0, int count) {
    if (!(A > 0.0) || !(B > 0.0)) throw DomainError("pl_sequence: A, B must be positive");
    if (!(x0 > 0.0 && x0 < 1.0)) throw DomainError("pl_sequence: x0 must be in (0,1)");
    if (count < 1) throw DomainError("pl_sequence: count must be >= 1");

    SpectrumReport rep;
    rep.A = A;
    rep.B = B;
    rep.x0 = x0;
    rep.ratio = detect_rationality(A, B, x0);

    // In s = sqrt(P/A) x0 the determinant vanishes at the roots of
    //   tan(s) + sqrt(B/A) tan(mu s) = 0,  mu = sqrt(A/B)(1-x0)/x0,
    // away from the tangent poles. The poles themselves are exactly the
    // cosine-factor zeros Z0 (left family from tan(s), right family from
    // tan(mu s)); a pole shared by both tangents is a both-cosine point, where
    // det H does vanish.
    const double mu = std::sqrt(A / B) * (1.0 - x0) / x0;
    const double coeff = std::sqrt(B / A);
    auto h_det = [&](double s) { return std::tan(s) + coeff * std::tan(mu * s); };
    auto to_p = [&](double s) { return A * (s / x0) * (s / x0); };

    // March over pole-bounded intervals in increasing s, harvesting the pole
    // (a Z0 entry) and the unique sign-change root inside each interval
    // (a Z1 entry; h_det is strictly increasing between poles).
    struct Pole {
        double s;
        bool left_family;  // pole of tan(s): cos(sqrt(P/A) x0) = 0
        bool right_family; // pole of tan(mu s): cos(sqrt(P/B)(x0-1)) = 0
    };
    auto next_pole = [&](int k_left, int k_right) {
        const double s_left = (k_left + 0.5) * kPi;
        const double s_right = (k_right + 0.5) * kPi / mu;
        Pole p;
        if (std::abs(s_left - s_right) <= 1e-10 * std::max(1.0, s_left)) {
            // coincident poles: keep the exact odd multiple of pi/2 so both
            // cosine factors vanish to machine precision at the mapped P
            p = {s_left, true, true};
        } else if (s_left < s_right) {
            p = {s_left, true, false};
        } else {
            p = {s_right, false, true};
        }
        return p;
    };

    int k_left = 0, k_right = 0;
    double prev_s = 0.0;
    while (static_cast<int>(rep.entries.size()) < count) {
        const Pole pole = next_pole(k_left, k_right);
        if (pole.left_family) ++k_left;
        if (pole.right_family) ++k_right;

        // Z1 root strictly inside (prev_s, pole.s): h_det runs from -inf
        // (just right of the previous pole; +2s near the origin) to +inf.
        {
            const double len = pole.s - prev_s;
            double a = prev_s + (prev_s == 0.0 ? 1e-9 : len * 1e-12);
            double b = pole.s - len * 1e-12;
            double fa = h_det(a), fb = h_det(b);
            if (fa > 0.0 && prev_s == 0.0) {
                // no root in the first interval: h_det ~ (1+coeff*mu) s > 0 there
            } else if (fa * fb >= 0.0) {
                rep.skipped_intervals.emplace_back(prev_s, pole.s);
            } else {
                for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
                    const double m = 0.5 * (a + b);
                    const double fm = h_det(m);
                    if (fa * fm <= 0.0) {
                        b = m;
                        fb = fm;
                    } else {
                        a = m;
                        fa = fm;
                    }
                }
                const double s_root = 0.5 * (a + b);
                const double p = to_p(s_root);
                rep.entries.push_back(
                    {p, Provenance::Z1, false, true, det_residual(A, B, x0, p, p)});
            }
            // equal signs with prev_s > 0 cannot happen for a strictly
            // increasing h_det; the bracket endpoints sit against the poles
        }
        if (static_cast<int>(rep.entries.size()) >= count) break;

        const double p_pole = to_p(pole.s);
        const bool both = pole.left_family && pole.right_family;
        rep.entries.push_back({p_pole, Provenance::Z0, both, both,
                               det_residual(A, B, x0, p_pole, p_pole)});
        prev_s = pole.s;
    }

    rep.entries.resize(static_cast<std::size_t>(count));
    return rep;
}

std::array<double, 2> ZeroCurveSet::to_forces(const std::array<double, 2>& vertex) const {
    const double P1 = A * (vertex[0] / x0) * (vertex[0] / x0);
    const double t_scaled = vertex[1] / (1.0 - x0);
    const double P2 = (plane == ZeroPlane::MPrime ? 1.0 : -1.0) * B * t_scaled * t_scaled;
    return {P1, P2};
}

ZeroCurveSet trace_zero_set(ZeroPlane plane, double A, double B, double x0,
                            const Window& window, int grid_n) {
    if (grid_n < 16) throw DomainError("trace_zero_set: grid_n must be >= 16");
    if (!(window.s_lo >= 0.0) || !(window.t_lo >= 0.0))
        throw DomainError("trace_zero_set: window must sit in the matching quadrant");
    if (!(window.s_hi > window.s_lo) || !(window.t_hi > window.t_lo))
        throw DomainError("trace_zero_set: empty window");

    const double nu = x0 / (1.0 - x0);
    auto F = [plane, nu](double s, double t) {
        if (plane == ZeroPlane::MPrime) return f_function(s, t, nu);
        return nu * t * std::sin(s) * std::cosh(t) + s * std::sinh(t) * std::cos(s);
    };

    const double ds = (window.s_hi - window.s_lo) / grid_n;
    const double dt = (window.t_hi - window.t_lo) / grid_n;
    // inset one cell off the degenerate axes (F vanishes identically there)
    const double s_lo = window.s_lo == 0.0 ? ds : window.s_lo;
    const double t_lo = window.t_lo == 0.0 ? dt : window.t_lo;
    const int ns = static_cast<int>(std::floor((window.s_hi - s_lo) / ds)) + 1;
    const int nt = static_cast<int>(std::floor((window.t_hi - t_lo) / dt)) + 1;

    std::vector<double> val(static_cast<std::size_t>(ns) * nt);
    auto V = [&](int i, int j) -> double& { return val[static_cast<std::size_t>(j) * ns + i]; };
    auto Sx = [&](int i) { return s_lo + i * ds; };
    auto Ty = [&](int j) { return t_lo + j * dt; };
    for (int j = 0; j < nt; ++j)
        for (int i = 0; i < ns; ++i) V(i, j) = F(Sx(i), Ty(j));

    auto sgn = [](double v) { return v >= 0.0; }; // exact zeros count as positive

    // Bisect an edge with a sign change down to machine width so the vertex
    // satisfies |F| well below the 1e-8 contract (classification needs the
    // determinant residual at the vertex under 1e-9).
    auto refine = [&](double sa, double ta, double fa, double sb, double tb,
                      double fb) -> std::array<double, 2> {
        for (int it = 0; it < 90; ++it) {
            const double sm = 0.5 * (sa + sb), tm = 0.5 * (ta + tb);
            const double fm = F(sm, tm);
            if (fm == 0.0) return {sm, tm};
            if ((fa < 0.0) != (fm < 0.0)) {
                sb = sm;
                tb = tm;
                fb = fm;
            } else {
                sa = sm;
                ta = tm;
                fa = fm;
            }
            if (std::abs(sb - sa) + std::abs(tb - ta) < 1e-15 * (1.0 + std::abs(sa) + std::abs(ta)))
                break;
        }
        (void)fb;
        return {0.5 * (sa + sb), 0.5 * (ta + tb)};
    };

    // vertex per cut edge; edges keyed by (i, j, horizontal?)
    std::map<std::tuple<int, int, bool>, int> edge_vertex;
    std::vector<std::array<double, 2>> vertices;
    auto vertex_on = [&](int i, int j, bool horizontal) -> int {
        const auto key = std::make_tuple(i, j, horizontal);
        auto it = edge_vertex.find(key);
        if (it != edge_vertex.end()) return it->second;
        const double sa = Sx(i), ta = Ty(j);
        const double sb = horizontal ? Sx(i + 1) : Sx(i);
        const double tb = horizontal ? Ty(j) : Ty(j + 1);
        const double fa = V(i, j);
        const double fb = horizontal ? V(i + 1, j) : V(i, j + 1);
        vertices.push_back(refine(sa, ta, fa, sb, tb, fb));
        const int id = static_cast<int>(vertices.size()) - 1;
        edge_vertex.emplace(key, id);
        return id;
    };

    // marching squares: collect segments (pairs of vertex ids)
    std::vector<std::array<int, 2>> segments;
    for (int j = 0; j + 1 < nt; ++j) {
        for (int i = 0; i + 1 < ns; ++i) {
            const bool bl = sgn(V(i, j)), br = sgn(V(i + 1, j));
            const bool tl = sgn(V(i, j + 1)), tr = sgn(V(i + 1, j + 1));
            const int config = (bl ? 1 : 0) | (br ? 2 : 0) | (tr ? 4 : 0) | (tl ? 8 : 0);
            if (config == 0 || config == 15) continue;
            const int bottom = (bl != br) ? vertex_on(i, j, true) : -1;
            const int top = (tl != tr) ? vertex_on(i, j + 1, true) : -1;
            const int left = (bl != tl) ? vertex_on(i, j, false) : -1;
            const int right = (br != tr) ? vertex_on(i + 1, j, false) : -1;
            switch (config) {
                case 1: case 14: segments.push_back({bottom, left}); break;
                case 2: case 13: segments.push_back({bottom, right}); break;
                case 4: case 11: segments.push_back({top, right}); break;
                case 8: case 7: segments.push_back({top, left}); break;
                case 3: case 12: segments.push_back({left, right}); break;
                case 6: case 9: segments.push_back({bottom, top}); break;
                case 5: case 10: {
                    // saddle: resolve by the sign of F at the cell center
                    const bool center = sgn(F(0.5 * (Sx(i) + Sx(i + 1)),
                                              0.5 * (Ty(j) + Ty(j + 1))));
                    const bool pair_bl = (config == 5) == center;
                    if (pair_bl) {
                        segments.push_back({bottom, left});
                        segments.push_back({top, right});
                    } else {
                        segments.push_back({bottom, right});
                        segments.push_back({top, left});
                    }
                    break;
                }
                default: break;
            }
        }
    }

    // link segments into polylines (every vertex touches at most two segments)
    std::multimap<int, int> adj; // vertex -> segment index
    for (int k = 0; k < static_cast<int>(segments.size()); ++k) {
        adj.emplace(segments[k][0], k);
        adj.emplace(segments[k][1], k);
    }
    std::vector<bool> used(segments.size(), false);
    ZeroCurveSet out;
    out.plane = plane;
    out.nu = nu;
    out.A = A;
    out.B = B;
    out.x0 = x0;
    out.window = window;

    auto walk = [&](int seg_start) {
        std::vector<int> chain{segments[seg_start][0], segments[seg_start][1]};
        used[seg_start] = true;
        for (int dir = 0; dir < 2; ++dir) {
            for (;;) {
                const int tip = dir == 0 ? chain.back() : chain.front();
                int next_seg = -1;
                auto [lo_it, hi_it] = adj.equal_range(tip);
                for (auto it = lo_it; it != hi_it; ++it)
                    if (!used[it->second]) {
                        next_seg = it->second;
                        break;
                    }
                if (next_seg < 0) break;
                used[next_seg] = true;
                const auto& sg = segments[next_seg];
                const int other = sg[0] == tip ? sg[1] : sg[0];
                if (dir == 0)
                    chain.push_back(other);
                else
                    chain.insert(chain.begin(), other);
            }
        }
        std::vector<std::array<double, 2>> poly;
        poly.reserve(chain.size());
        for (int id : chain) poly.push_back(vertices[static_cast<std::size_t>(id)]);
        out.curves.push_back(std::move(poly));
    };
    for (int k = 0; k < static_cast<int>(segments.size()); ++k)
        if (!used[k]) walk(k);

    return out;
}

Classification classify_parameters(const BeamProblem& problem) {
    if (problem.P1() < 0.0 && problem.P2() < 0.0)
        return {Classification::Kind::Unique, 0.0};
    const double r =
        det_residual(problem.A(), problem.B(), problem.x0(), problem.P1(), problem.P2());
    if (r <= 1e-9) return {Classification::Kind::Singular, r};
    if (r <= 1e-4) return {Classification::Kind::NearSingular, r};
    return {Classification::Kind::Unique, r};
}

} // namespace distbeam
