#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "ubound/scalar.hpp"
#include "ubound/signal.hpp"

namespace ubound {

/// Per-mode positions and velocities at one instant.
struct ModalState {
    std::vector<double> u;
    std::vector<double> v;
    double time = 0.0;

    static ModalState zero(std::size_t modes, double t = 0.0);
    std::size_t mode_count() const { return u.size(); }
};

enum class EvolutionMethod { ExactPiecewise, RungeKutta4 };

enum class StateFunctional { VelocityNorm, PositionNorm, Energy };

/// Sampled evolution. Exact-piecewise trajectories sample every forcing
/// breakpoint and carry the per-segment forcing so sup estimators can place
/// inter-sample extrema exactly.
struct Trajectory {
    std::vector<ModalState> samples;
    EvolutionMethod method = EvolutionMethod::ExactPiecewise;
    double step = 0.0;  ///< RK4 step size; 0 for exact trajectories
    std::vector<double> spectrum;
    double damping = 0.0;
    std::vector<std::vector<double>> segment_forcing;  ///< per inter-sample segment (exact only)
};

/// Segment-exact evolution for piecewise-constant forcing: on each segment the
/// state is advanced with the closed-form propagator of u'' + cu' + lambda u =
/// phi, so the only error is roundoff. `max_sample_dt` > 0 inserts additional
/// samples so no gap exceeds it.
Trajectory evolve_exact(const std::vector<double>& spectrum, double c, const ForcingSignal& f,
                        const ModalState& initial, double t_end, double max_sample_dt = 0.0);

/// Classical fixed-step RK4 on the first-order system; forcing sampled once
/// per step (segment value at the step midpoint).
Trajectory evolve_rk4(const std::vector<double>& spectrum, double c, const ForcingSignal& f,
                      const ModalState& initial, double t_end, double dt);

/// RK4 with arbitrary (smooth) forcing evaluated at the stage times.
Trajectory evolve_rk4(const std::vector<double>& spectrum, double c,
                      const std::function<void(double, std::span<double>)>& forcing,
                      const ModalState& initial, double t_end, double dt);

/// State at t = 0 of the unique globally bounded solution, for forcing
/// supported in t <= 0: per mode the kernel is integrated against each
/// constant segment in closed form.
ModalState bounded_solution_at_zero(const std::vector<double>& spectrum, double c,
                                    const ForcingSignal& f);

struct PeriodicSolutionResult {
    ModalState at_zero;
    Trajectory one_period;  ///< from t = 0 to t = T
};

/// The unique periodic solution under periodic forcing, via the per-mode 2x2
/// fixed point U0 = M_T U0 + D_T with exact segment propagators.
PeriodicSolutionResult periodic_solution(const std::vector<double>& spectrum, double c,
                                         const ForcingSignal& f);

/// Supremum of the chosen functional over the trajectory after `burn_in`.
/// For exact trajectories and the velocity functional, the closed-form
/// critical points inside each segment are also examined, so the result does
/// not depend on sampling density.
double ultimate_sup_estimator(const Trajectory& traj, double burn_in, StateFunctional functional);

/// Text table: header, then comma-separated rows (time, u_i, v_i per mode).
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

}  // namespace ubound
