#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ubound {

/// Parameters of the damped scalar equation u'' + c u' + b u = f.
struct ScalarParams {
    double b;  ///< stiffness, 1/time^2
    double c;  ///< damping, 1/time

    ScalarParams(double stiffness, double damping);
};

/// Damping regime, by the sign of the characteristic discriminant c^2 - 4b.
enum class Regime {
    NonOscillatory,  ///< c^2 > 4b: two real decay rates
    Critical,        ///< c^2 = 4b (within tolerance): double root
    Oscillatory,     ///< c^2 < 4b: complex conjugate roots
};

/// Regime classification with the derived quantities used by the kernels.
///
/// Non-oscillatory: alpha >= beta > 0 with alpha*beta = b, alpha + beta = c.
/// Oscillatory: roots -gamma +/- i*omega with gamma = c/2, omega = sqrt(b - c^2/4).
/// `first_zero_datum` is s0 (first kernel zero, non-oscillatory/critical) or
/// y0 = atan(delta) (phase of the first zero, oscillatory).
struct RegimeData {
    Regime regime;
    double b, c;
    double delta;             ///< |1 - 4b/c^2|^{1/2}
    double alpha = 0.0, beta = 0.0;
    double gamma = 0.0, omega = 0.0;
    double first_zero_datum;
};

enum class BoundKind {
    ExactClosedForm,
    QuadratureOracle,
    GuaranteedUpper,
    GuaranteedLower,
    Empirical,
};

/// A bound value plus provenance and (when known) an absolute error bound.
struct BoundEstimate {
    double value;
    BoundKind kind;
    std::string provenance;
    std::optional<double> tolerance;
};

const char* to_string(BoundKind kind);
const char* to_string(Regime regime);

/// Classify (b, c) into a regime; |c^2 - 4b| <= rel_tol * c^2 maps to Critical.
RegimeData classify_regime(const ScalarParams& p, double rel_tol = 1e-12);

/// Optimal velocity constant K(b, c): the L1 norm of the velocity kernel,
/// in closed form. Continuous across the regime boundary.
BoundEstimate optimal_velocity_bound(const ScalarParams& p);

/// Optimal position constant: (1/b) coth(c pi / (2 sqrt(4b - c^2))) when
/// c < 2 sqrt(b), and 1/b otherwise.
BoundEstimate optimal_position_bound(const ScalarParams& p);

/// Velocity kernel g(s): the impulse response of u'. g(0) = 1 in every regime.
double velocity_kernel(const RegimeData& r, double s);

/// Position kernel G(s): the impulse response of u. G(0) = 0, integral 1/b.
double position_kernel(const RegimeData& r, double s);

/// Integral of the position kernel over [0, s] in closed form; s may be +inf.
double position_kernel_integral(const RegimeData& r, double s);

/// Zeros of the velocity kernel in (0, horizon], strictly increasing.
std::vector<double> kernel_sign_changes(const RegimeData& r, double horizon);

/// Zeros of the position kernel in (0, horizon] (none unless oscillatory).
std::vector<double> position_kernel_sign_changes(const RegimeData& r, double horizon);

/// Independent quadrature oracle for K(b, c): integrates |g| panel by panel
/// between its known sign changes and truncates where the exponential envelope
/// drops below the tolerance budget. The reported value satisfies
/// |value - K(b, c)| <= abs_tol. Throws std::runtime_error if `max_panels`
/// Gauss-Kronrod panels do not suffice to reach abs_tol.
BoundEstimate quadrature_bound_oracle(const ScalarParams& p, double abs_tol,
                                      std::size_t max_panels = 8'000'000);

/// Same oracle pattern applied to |G|, against optimal_position_bound.
BoundEstimate position_bound_oracle(const ScalarParams& p, double abs_tol,
                                    std::size_t max_panels = 8'000'000);

/// Published ultimate-bound constants, for comparison columns.
struct HistoricalBounds {
    double loud_u;    ///< min{1/b + 4/c^2, 1/b + 4/(c sqrt(b))}
    double loud_v;    ///< 4/c
    double fithar_u;  ///< max{1/b, 2/(c sqrt(b))}
    double fithar_v;  ///< 2/c + 1/sqrt(b) if c < 2 sqrt(b), else 2/sqrt(b)
    double haraux_u;  ///< sharp position constant (= optimal_position_bound)
};
HistoricalBounds historical_bounds(const ScalarParams& p);

/// Exponential majorant ||S(t)|| <= constant * exp(-rate * t) for the companion
/// semigroup. The rate is beta (non-oscillatory), c/2 (oscillatory) or
/// c/2 * (1 - 1e-3) (critical, absorbing the polynomial factor); the constant
/// is fitted numerically on a time grid and padded by 10%.
struct DecayEnvelope {
    double rate;
    double constant;
};
DecayEnvelope decay_envelope(const ScalarParams& p);

namespace detail {

/// The two regime basis functions with the decay factored in:
/// emC = e^{-ms} C(s), emS = e^{-ms} S(s), where m = c/2 and
/// C, S = cosh(hs), sinh(hs)/h (non-oscillatory) / 1, s (critical) /
/// cos(ws), sin(ws)/w (oscillatory). Then
///   g(s) = emC - m*emS,  G(s) = emS,  int_0^s G = (1 - emC - m*emS)/b.
/// Evaluation switches to plain exponentials once h*s is large, so the forms
/// stay accurate both near the critical boundary and deep in the tails.
struct KernelBasis {
    double emC;
    double emS;
};
KernelBasis kernel_basis(const RegimeData& r, double s);

}  // namespace detail

}  // namespace ubound
