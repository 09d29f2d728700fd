#include "distbeam/bump.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace distbeam {

double SmoothBump::value(double x) const {
    if (x <= lo || x >= hi) return 0.0;
    const double w = (x - lo) * (hi - x);
    return std::exp(-1.0 / w);
}

double SmoothBump::d1(double x) const {
    if (x <= lo || x >= hi) return 0.0;
    const double w = (x - lo) * (hi - x);
    const double dw = (lo + hi) - 2.0 * x;
    return value(x) * dw / (w * w);
}

double SmoothBump::d2(double x) const {
    if (x <= lo || x >= hi) return 0.0;
    const double w = (x - lo) * (hi - x);
    const double dw = (lo + hi) - 2.0 * x;
    const double u = dw / (w * w); // (d/dx)(-1/w)
    const double du = -2.0 / (w * w) - 2.0 * dw * dw / (w * w * w);
    return value(x) * (u * u + du);
}

TestFunction::TestFunction(double center, double radius)
    : center_(center), radius_(radius), amp_(std::exp(1.0)) {
    if (!(radius > 0.0)) throw DomainError("TestFunction: radius must be positive");
}

namespace {
const SmoothBump kUnitBump{-1.0, 1.0};
}

double TestFunction::value(double x) const {
    return amp_ * kUnitBump.value((x - center_) / radius_);
}

double TestFunction::d1(double x) const {
    return amp_ * kUnitBump.d1((x - center_) / radius_) / radius_;
}

double TestFunction::d2(double x) const {
    return amp_ * kUnitBump.d2((x - center_) / radius_) / (radius_ * radius_);
}

std::vector<TestFunction> make_test_family(double x0,
                                           const std::vector<Singularity>& singularities,
                                           int count, std::uint64_t seed) {
    if (count < 2) throw DomainError("make_test_family: need at least 2 test functions");
    std::vector<TestFunction> family;
    family.reserve(static_cast<std::size_t>(count));

    auto clamped = [](double c, double r) {
        // keep the support strictly inside (0,1)
        r = std::min({r, 0.5 * c + 1e-6, 0.5 * (1.0 - c) + 1e-6});
        r = std::min(r, 0.45 * std::min(c, 1.0 - c) + 0.02);
        r = std::max(r, 1e-3);
        if (c - r <= 0.0) r = 0.95 * c;
        if (c + r >= 1.0) r = 0.95 * (1.0 - c);
        return TestFunction(c, r);
    };

    const double r0 = std::min({0.08, 0.8 * x0, 0.8 * (1.0 - x0)});
    // two bumps straddling the interface
    family.push_back(clamped(x0 - 0.4 * r0, r0));
    family.push_back(clamped(x0 + 0.4 * r0, r0));
    // one straddling each declared singularity of g
    for (const auto& s : singularities) {
        if (static_cast<int>(family.size()) >= count) break;
        const double c = std::clamp(s.location, 0.05, 0.95);
        family.push_back(clamped(c, std::min(0.06, r0)));
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-0.02, 0.02);
    const int remaining = count - static_cast<int>(family.size());
    for (int i = 0; i < remaining; ++i) {
        double c = (i + 1.0) / (remaining + 1.0);
        if (seed != 0) c = std::clamp(c + jitter(rng), 0.05, 0.95);
        family.push_back(clamped(c, 0.08));
    }
    return family;
}

} // namespace distbeam
