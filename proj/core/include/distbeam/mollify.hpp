#pragma once

#include <functional>
#include <span>
#include <string>

#include "distbeam/bump.hpp"
#include "distbeam/types.hpp"

namespace distbeam::mollify {

/// Mollifier phi with unit integral and support inside [-1,1]; the model
/// delta net is phi_eps(x) = phi(x/eps)/eps. Derivatives up to order 2 are
/// analytic so delta-derivative convolutions stay exact.
struct MollifierSpec {
    enum class Kind { Model, Strict } kind = Kind::Model;
    std::string name;
    double support_lo = -1.0;
    double support_hi = 1.0;
    std::function<double(double)> phi, phi_d1, phi_d2;

    double integral(double abs_tol = 1e-13) const;

    static MollifierSpec bump();         // symmetric exp(-1/(1-x^2)), normalized
    static MollifierSpec shifted_bump(); // asymmetric bump on [-1, 0.5]
    static MollifierSpec poly_bump();    // (315/256)(1-x^2)^4
};

/// Distribution operand of a model product.
struct DistDescriptor {
    enum class Kind {
        HeavisidePlus,   // H(x - anchor)
        HeavisideMinus,  // H(anchor - x)
        DeltaDerivative, // delta^(k) at anchor, k >= 0
        PiecewiseL1,     // integrable function supported in [0,1]
        JumpCoefficient  // left + (right-left) H(x - anchor), e.g. the stiffness a
    };
    Kind kind;
    double anchor = 0.5;
    int k = 0;
    std::function<double(double)> f; // PiecewiseL1 only
    double left = 0.0, right = 0.0;  // JumpCoefficient only

    static DistDescriptor heaviside_plus(double x0);
    static DistDescriptor heaviside_minus(double x0);
    static DistDescriptor delta_derivative(double x0, int k);
    static DistDescriptor piecewise_l1(std::function<double(double)> f, double jump_at);
    static DistDescriptor jump_coefficient(const JumpConstant& a);
};

/// (u * phi_eps)(x): analytic for Heaviside tails and delta derivatives,
/// quadrature for PiecewiseL1.
double convolved(const DistDescriptor& u, const MollifierSpec& m, double eps, double x);

/// <(u*phi_eps)(v*phi_eps), psi>, the mollified pairing whose eps -> 0 limit
/// defines the model product.
double mollified_pairing(const DistDescriptor& u, const DistDescriptor& v,
                         const TestFunction& psi, const MollifierSpec& m, double eps);

struct ProductLimit {
    enum class Kind { Converged, Diverged } kind;
    double value = 0.0;           // extrapolated limit (Converged)
    double rate = 0.0;            // contraction ratio of successive differences
    double growth_exponent = 0.0; // fitted k in |v| ~ eps^-k (Diverged)
};

/// Classifies the pairing values along a geometric eps schedule (>= 5 entries,
/// ratio <= 1/2): contraction ratio <= 0.75 over the last three steps means
/// Converged (Aitken-extrapolated limit), growth ratio >= 1.5 means Diverged
/// (least-squares exponent). Throws InconclusiveError otherwise.
ProductLimit model_product_limit(const DistDescriptor& u, const DistDescriptor& v,
                                 const TestFunction& psi, const MollifierSpec& m,
                                 std::span<const double> schedule);

/// Pairing against a test function whose support avoids [0,1] inflated by eps;
/// the contract is exact zero up to quadrature round-off. Throws
/// PreconditionError when the supports overlap.
double support_check(const DistDescriptor& u, const DistDescriptor& v,
                     const TestFunction& psi, const MollifierSpec& m, double eps);

/// eps-indexed mollifier family rho(eps, x) with declared support radius.
struct StrictDeltaNet {
    std::function<double(double, double)> rho; // rho(eps, x)
    std::function<double(double)> support_radius;
};

struct StrictNetReport {
    bool support_shrinks;
    bool unit_integral;
    bool l1_bounded;
    double max_l1;
    bool ok() const { return support_shrinks && unit_integral && l1_bounded; }
};

/// Validates the three strict-delta-net conditions along the given schedule.
StrictNetReport validate_strict_net(const StrictDeltaNet& net,
                                    std::span<const double> eps_schedule);

/// Model net induced by a mollifier, as a strict net.
StrictDeltaNet as_strict_net(const MollifierSpec& m);

} // namespace distbeam::mollify
