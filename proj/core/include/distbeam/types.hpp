#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "distbeam/errors.hpp"

namespace distbeam {

/// Location and strength of an integrable algebraic singularity:
/// |f| ~ |x - location|^exponent near `location`, with exponent in (-1, 0).
struct Singularity {
    double location;
    double exponent;
};

/// Piecewise-constant coefficient on [0,1] with a single interior jump at x0.
/// Used both for the stiffness a (left/right must be positive and distinct)
/// and for the axial force P (any reals, equal values = constant force).
class JumpConstant {
public:
    JumpConstant(double left, double right, double x0)
        : left_(left), right_(right), x0_(x0) {
        if (!(x0 > 0.0 && x0 < 1.0))
            throw DomainError("JumpConstant: x0 must lie in (0,1), got " + std::to_string(x0));
        if (!std::isfinite(left) || !std::isfinite(right))
            throw DomainError("JumpConstant: non-finite value");
    }

    double left() const { return left_; }
    double right() const { return right_; }
    double x0() const { return x0_; }

    /// Value at x: left of the jump, right of it, or the midpoint convention
    /// exactly at x0 (symmetric under (A,B,x0) -> (B,A,1-x0) reflection).
    double eval(double x) const {
        if (!(x >= 0.0 && x <= 1.0))
            throw DomainError("eval_jump: x outside [0,1], got " + std::to_string(x));
        if (x < x0_) return left_;
        if (x > x0_) return right_;
        return 0.5 * (left_ + right_);
    }

private:
    double left_;
    double right_;
    double x0_;
};

inline double eval_jump(const JumpConstant& c, double x) { return c.eval(x); }

/// Evaluable right-hand side g on [0,1] with declared integrable singularities.
class ForcingTerm {
public:
    ForcingTerm(std::function<double(double)> eval,
                std::vector<Singularity> singularities = {},
                std::string label = "")
        : eval_(std::move(eval)), singularities_(std::move(singularities)),
          label_(std::move(label)) {
        if (!eval_) throw DomainError("ForcingTerm: empty evaluator");
        for (const auto& s : singularities_) {
            if (!(s.location >= 0.0 && s.location <= 1.0))
                throw DomainError("ForcingTerm: singularity location outside [0,1]");
            if (!(s.exponent > -1.0 && s.exponent < 0.0))
                throw DomainError("ForcingTerm: singularity exponent must be in (-1,0), got " +
                                  std::to_string(s.exponent));
        }
    }

    static ForcingTerm zero() {
        return ForcingTerm([](double) { return 0.0; }, {}, "0");
    }
    static ForcingTerm constant(double c) {
        return ForcingTerm([c](double) { return c; }, {}, std::to_string(c));
    }

    double operator()(double x) const { return eval_(x); }
    const std::vector<Singularity>& singularities() const { return singularities_; }
    const std::string& label() const { return label_; }
    bool smooth() const { return singularities_.empty(); }

private:
    std::function<double(double)> eval_;
    std::vector<Singularity> singularities_;
    std::string label_;
};

/// The interface problem (a u)'' + P u = g on [0,1], u(0) = u(1) = 0,
/// with a and P jumping at the same interior point.
class BeamProblem {
public:
    BeamProblem(JumpConstant a, JumpConstant p, ForcingTerm g)
        : a_(a), p_(p), g_(std::move(g)) {
        if (a_.x0() != p_.x0())
            throw DomainError("BeamProblem: a and P must jump at the same x0");
        if (!(a_.left() > 0.0) || !(a_.right() > 0.0))
            throw DomainError("BeamProblem: stiffness values must be positive");
        if (a_.left() == a_.right())
            throw DomainError("BeamProblem: stiffness must actually jump (A != B)");
    }

    /// Constant axial force.
    BeamProblem(double A, double B, double x0, double P, ForcingTerm g)
        : BeamProblem(JumpConstant(A, B, x0), JumpConstant(P, P, x0), std::move(g)) {}

    const JumpConstant& a() const { return a_; }
    const JumpConstant& p() const { return p_; }
    const ForcingTerm& g() const { return g_; }

    double A() const { return a_.left(); }
    double B() const { return a_.right(); }
    double x0() const { return a_.x0(); }
    double P1() const { return p_.left(); }
    double P2() const { return p_.right(); }

private:
    JumpConstant a_;
    JumpConstant p_;
    ForcingTerm g_;
};

/// Sampled function on a uniform grid covering a sub-interval of [0,1].
struct GridFunction {
    double x0_grid = 0.0;
    double h = 0.0;
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(double start, double spacing, std::vector<double> vals)
        : x0_grid(start), h(spacing), values(std::move(vals)) {
        validate();
    }

    void validate() const {
        if (!(h > 0.0)) throw DomainError("GridFunction: spacing must be positive");
        if (values.empty()) throw DomainError("GridFunction: empty value list");
        const double end = x0_grid + h * static_cast<double>(values.size() - 1);
        if (x0_grid < -1e-12 || end > 1.0 + 1e-12)
            throw DomainError("GridFunction: grid must cover a sub-interval of [0,1]");
    }

    std::size_t size() const { return values.size(); }
    double x(std::size_t i) const { return x0_grid + h * static_cast<double>(i); }
    double back_x() const { return x(values.size() - 1); }
};

} // namespace distbeam
