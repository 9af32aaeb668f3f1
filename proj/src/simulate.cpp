#include "ubound/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "ubound/text.hpp"

namespace ubound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_problem(const std::vector<double>& spectrum, double c, const ForcingSignal& f) {
    if (spectrum.empty()) throw std::invalid_argument("simulator: empty spectrum");
    for (double lam : spectrum)
        if (!(lam > 0.0)) throw std::invalid_argument("simulator: eigenvalues must be positive");
    if (!(c > 0.0)) throw std::invalid_argument("simulator: c > 0 violated");
    if (f.channels() != spectrum.size())
        throw std::invalid_argument("simulator: forcing channels (" +
                                    std::to_string(f.channels()) + ") do not match spectrum size (" +
                                    std::to_string(spectrum.size()) + ")");
}

std::vector<RegimeData> mode_regimes(const std::vector<double>& spectrum, double c) {
    std::vector<RegimeData> regimes;
    regimes.reserve(spectrum.size());
    for (double lam : spectrum) regimes.push_back(classify_regime(ScalarParams(lam, c)));
    return regimes;
}

// Advance one mode across a segment of constant forcing phi.
void propagate_mode(const RegimeData& rd, double phi, double dt, double& u, double& v) {
    const auto [emC, emS] = detail::kernel_basis(rd, dt);
    const double m = 0.5 * rd.c;
    const double steady = phi / rd.b;
    const double x = u - steady;
    const double u_next = steady + (emC + m * emS) * x + emS * v;
    const double v_next = -rd.b * emS * x + (emC - m * emS) * v;
    u = u_next;
    v = v_next;
}

}  // namespace

ModalState ModalState::zero(std::size_t modes, double t) {
    ModalState s;
    s.u.assign(modes, 0.0);
    s.v.assign(modes, 0.0);
    s.time = t;
    return s;
}

Trajectory evolve_exact(const std::vector<double>& spectrum, double c, const ForcingSignal& f,
                        const ModalState& initial, double t_end, double max_sample_dt) {
    check_problem(spectrum, c, f);
    if (initial.mode_count() != spectrum.size())
        throw std::invalid_argument("evolve_exact: initial state does not match spectrum size");
    const double t0 = initial.time;
    if (!(t_end >= t0)) throw std::invalid_argument("evolve_exact: t_end >= start time violated");

    const auto regimes = mode_regimes(spectrum, c);

    std::vector<double> edges = f.breakpoints_in(t0, t_end);
    edges.push_back(t_end);
    if (max_sample_dt > 0.0) {
        std::vector<double> refined;
        double prev = t0;
        for (double e : edges) {
            const double gap = e - prev;
            const int pieces = std::max(1, static_cast<int>(std::ceil(gap / max_sample_dt)));
            for (int k = 1; k < pieces; ++k)
                refined.push_back(prev + gap * static_cast<double>(k) / pieces);
            refined.push_back(e);
            prev = e;
        }
        edges = std::move(refined);
    }

    Trajectory traj;
    traj.method = EvolutionMethod::ExactPiecewise;
    traj.spectrum = spectrum;
    traj.damping = c;
    traj.samples.push_back(initial);
    traj.samples.back().time = t0;

    ModalState state = initial;
    std::vector<double> phi(spectrum.size());
    for (double e : edges) {
        const double dt = e - state.time;
        if (dt <= 0.0) continue;
        f.values(0.5 * (state.time + e), phi);
        for (std::size_t i = 0; i < spectrum.size(); ++i)
            propagate_mode(regimes[i], phi[i], dt, state.u[i], state.v[i]);
        state.time = e;
        traj.segment_forcing.push_back(phi);
        traj.samples.push_back(state);
    }
    return traj;
}

namespace {

// One RK4 driver, two forcing styles: `prepare_step(t, h, phi)` runs once per
// step (piecewise-constant signals sample their segment value there) and
// `stage_fill(t, phi)` runs at every stage time (smooth forcing).
template <class PrepareStep, class StageFill>
Trajectory rk4_core(const std::vector<double>& spectrum, double c, PrepareStep&& prepare_step,
                    StageFill&& stage_fill, const ModalState& initial, double t_end, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("evolve_rk4: dt > 0 violated");
    const std::size_t n = spectrum.size();
    const double t0 = initial.time;
    const auto steps = static_cast<std::size_t>(std::ceil((t_end - t0) / dt - 1e-12));

    Trajectory traj;
    traj.method = EvolutionMethod::RungeKutta4;
    traj.step = dt;
    traj.spectrum = spectrum;
    traj.damping = c;
    traj.samples.reserve(steps + 1);
    traj.samples.push_back(initial);

    ModalState s = initial;
    std::vector<double> phi(n), ku1(n), kv1(n), ku2(n), kv2(n), ku3(n), kv3(n), ku4(n), kv4(n),
        ut(n), vt(n);

    auto derivs = [&](double t, const std::vector<double>& u, const std::vector<double>& v,
                      std::vector<double>& du, std::vector<double>& dv) {
        stage_fill(t, phi);
        for (std::size_t i = 0; i < n; ++i) {
            du[i] = v[i];
            dv[i] = phi[i] - spectrum[i] * u[i] - c * v[i];
        }
    };

    for (std::size_t k = 0; k < steps; ++k) {
        const double t = s.time;
        const double h = std::min(dt, t_end - t);
        prepare_step(t, h, phi);

        derivs(t, s.u, s.v, ku1, kv1);
        for (std::size_t i = 0; i < n; ++i) {
            ut[i] = s.u[i] + 0.5 * h * ku1[i];
            vt[i] = s.v[i] + 0.5 * h * kv1[i];
        }
        derivs(t + 0.5 * h, ut, vt, ku2, kv2);
        for (std::size_t i = 0; i < n; ++i) {
            ut[i] = s.u[i] + 0.5 * h * ku2[i];
            vt[i] = s.v[i] + 0.5 * h * kv2[i];
        }
        derivs(t + 0.5 * h, ut, vt, ku3, kv3);
        for (std::size_t i = 0; i < n; ++i) {
            ut[i] = s.u[i] + h * ku3[i];
            vt[i] = s.v[i] + h * kv3[i];
        }
        derivs(t + h, ut, vt, ku4, kv4);
        for (std::size_t i = 0; i < n; ++i) {
            s.u[i] += h / 6.0 * (ku1[i] + 2.0 * ku2[i] + 2.0 * ku3[i] + ku4[i]);
            s.v[i] += h / 6.0 * (kv1[i] + 2.0 * kv2[i] + 2.0 * kv3[i] + kv4[i]);
        }
        s.time = t + h;
        traj.samples.push_back(s);
    }
    return traj;
}

}  // namespace

Trajectory evolve_rk4(const std::vector<double>& spectrum, double c, const ForcingSignal& f,
                      const ModalState& initial, double t_end, double dt) {
    check_problem(spectrum, c, f);
    if (initial.mode_count() != spectrum.size())
        throw std::invalid_argument("evolve_rk4: initial state does not match spectrum size");
    return rk4_core(
        spectrum, c,
        [&f](double t, double h, std::vector<double>& phi) {
            f.values(t + 0.5 * h, phi);
        },
        [](double, std::vector<double>&) {}, initial, t_end, dt);
}

Trajectory evolve_rk4(const std::vector<double>& spectrum, double c,
                      const std::function<void(double, std::span<double>)>& forcing,
                      const ModalState& initial, double t_end, double dt) {
    if (spectrum.empty()) throw std::invalid_argument("simulator: empty spectrum");
    if (initial.mode_count() != spectrum.size())
        throw std::invalid_argument("evolve_rk4: initial state does not match spectrum size");
    return rk4_core(
        spectrum, c, [](double, double, std::vector<double>&) {},
        [&forcing](double t, std::vector<double>& phi) { forcing(t, std::span<double>(phi)); },
        initial, t_end, dt);
}

ModalState bounded_solution_at_zero(const std::vector<double>& spectrum, double c,
                                    const ForcingSignal& f) {
    check_problem(spectrum, c, f);
    if (f.period())
        throw std::invalid_argument(
            "bounded_solution_at_zero: periodic forcing has no summable tail; use periodic_solution");
    const auto regimes = mode_regimes(spectrum, c);
    const auto& bps = f.breakpoints();
    const std::size_t segs = f.segment_count();

    ModalState out = ModalState::zero(spectrum.size(), 0.0);
    for (std::size_t seg = 0; seg < segs; ++seg) {
        const double p = (seg == 0) ? -kInf : bps[seg - 1];
        const double q = (seg == bps.size()) ? kInf : bps[seg];
        const double s_lo = std::max(0.0, -q);
        const double s_hi = -p;  // +inf for the leading segment
        if (!(s_hi > s_lo)) continue;
        const auto phi = f.segment(seg);
        for (std::size_t i = 0; i < spectrum.size(); ++i) {
            if (phi[i] == 0.0) continue;
            const RegimeData& rd = regimes[i];
            out.v[i] += phi[i] * (position_kernel(rd, s_hi) - position_kernel(rd, s_lo));
            out.u[i] +=
                phi[i] * (position_kernel_integral(rd, s_hi) - position_kernel_integral(rd, s_lo));
        }
    }
    return out;
}

PeriodicSolutionResult periodic_solution(const std::vector<double>& spectrum, double c,
                                         const ForcingSignal& f) {
    check_problem(spectrum, c, f);
    if (!f.period()) throw std::invalid_argument("periodic_solution: forcing must be periodic");
    const double T = *f.period();
    const auto regimes = mode_regimes(spectrum, c);

    const auto& bps = f.breakpoints();
    const double w1 = bps.back();
    const double w0 = w1 - T;

    ModalState at_w0 = ModalState::zero(spectrum.size(), w0);
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        const RegimeData& rd = regimes[i];
        const double m = 0.5 * c;
        // Compose the affine map U -> M U + d across the window segments.
        double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
        double d1 = 0.0, d2 = 0.0;
        double a = w0;
        for (std::size_t seg = 0; seg < bps.size(); ++seg) {
            const double b = bps[seg];
            const double dt = b - a;
            const double phi = f.segment(seg)[i];
            const auto [emC, emS] = detail::kernel_basis(rd, dt);
            const double s11 = emC + m * emS, s12 = emS;
            const double s21 = -rd.b * emS, s22 = emC - m * emS;
            const double steady = phi / rd.b;
            // d_seg = (I - S) * (steady, 0)
            const double e1 = (1.0 - s11) * steady;
            const double e2 = -s21 * steady;
            const double n11 = s11 * m11 + s12 * m21, n12 = s11 * m12 + s12 * m22;
            const double n21 = s21 * m11 + s22 * m21, n22 = s21 * m12 + s22 * m22;
            const double f1 = s11 * d1 + s12 * d2 + e1;
            const double f2 = s21 * d1 + s22 * d2 + e2;
            m11 = n11;
            m12 = n12;
            m21 = n21;
            m22 = n22;
            d1 = f1;
            d2 = f2;
            a = b;
        }
        // Fixed point (I - M) U0 = d. det = (1 - e^{-alpha T})(1 - e^{-beta T}) > 0.
        const double a11 = 1.0 - m11, a12 = -m12, a21 = -m21, a22 = 1.0 - m22;
        const double det = a11 * a22 - a12 * a21;
        const double scale = std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
        if (!(std::abs(det) > 1e-14 * scale * scale))
            throw std::runtime_error("periodic_solution: (I - M_T) is numerically singular");
        at_w0.u[i] = (d1 * a22 - d2 * a12) / det;
        at_w0.v[i] = (a11 * d2 - a21 * d1) / det;
    }

    // Move the fixed point from the window start to t = 0 (mod the period).
    double delta = -w0;
    delta -= T * std::floor(delta / T);
    ModalState at_zero = at_w0;
    at_zero.time = 0.0;
    if (delta > 0.0) {
        Trajectory hop = evolve_exact(spectrum, c, f, at_w0, w0 + delta);
        at_zero.u = hop.samples.back().u;
        at_zero.v = hop.samples.back().v;
    }

    Trajectory period_traj = evolve_exact(spectrum, c, f, at_zero, T);
    return {std::move(at_zero), std::move(period_traj)};
}

namespace {

double functional_value(const std::vector<double>& u, const std::vector<double>& v,
                        const std::vector<double>& spectrum, StateFunctional functional) {
    double sq = 0.0;
    switch (functional) {
        case StateFunctional::VelocityNorm:
            for (double x : v) sq += x * x;
            break;
        case StateFunctional::PositionNorm:
            for (double x : u) sq += x * x;
            break;
        case StateFunctional::Energy:
            for (std::size_t i = 0; i < u.size(); ++i)
                sq += spectrum[i] * u[i] * u[i] + v[i] * v[i];
            break;
    }
    return std::sqrt(sq);
}

// Local times in (0, len) where mode velocity v(t) = e^{-mt}(P C(t) + Q S(t))
// has a critical point; at most one for non-oscillatory/critical modes,
// pi/omega-spaced for oscillatory ones.
void velocity_critical_points(const RegimeData& rd, double u0, double v0, double phi, double len,
                              std::vector<double>& out) {
    const double m = 0.5 * rd.c;
    const double x0 = u0 - phi / rd.b;
    const double P = v0;
    const double Q = -(m * v0 + rd.b * x0);
    const double a = Q - m * P;
    double kappa = 0.0;
    if (rd.regime == Regime::NonOscillatory) {
        const double h = 0.5 * (rd.alpha - rd.beta);
        kappa = h * h;
    } else if (rd.regime == Regime::Oscillatory) {
        kappa = -rd.omega * rd.omega;
    }
    const double bcoef = kappa * P - m * Q;

    switch (rd.regime) {
        case Regime::Critical: {
            if (bcoef != 0.0) {
                const double t = -a / bcoef;
                if (t > 0.0 && t < len) out.push_back(t);
            }
            break;
        }
        case Regime::NonOscillatory: {
            const double h = 0.5 * (rd.alpha - rd.beta);
            if (bcoef != 0.0) {
                const double ratio = -a * h / bcoef;
                if (std::abs(ratio) < 1.0) {
                    const double t = std::atanh(ratio) / h;
                    if (t > 0.0 && t < len) out.push_back(t);
                }
            }
            break;
        }
        case Regime::Oscillatory: {
            const double w = rd.omega;
            const double half_period = std::numbers::pi / w;
            double t = std::atan2(-a * w, bcoef) / w;
            t = std::fmod(t, half_period);
            if (t <= 0.0) t += half_period;
            for (; t < len; t += half_period) out.push_back(t);
            break;
        }
    }
}

}  // namespace

double ultimate_sup_estimator(const Trajectory& traj, double burn_in, StateFunctional functional) {
    if (traj.samples.empty()) throw std::invalid_argument("ultimate_sup_estimator: empty trajectory");
    if (!(traj.samples.back().time >= burn_in))
        throw std::invalid_argument("ultimate_sup_estimator: empty post-burn-in window");

    double best = -kInf;
    for (const auto& s : traj.samples)
        if (s.time >= burn_in) best = std::max(best, functional_value(s.u, s.v, traj.spectrum, functional));

    const bool exact = traj.method == EvolutionMethod::ExactPiecewise &&
                       traj.segment_forcing.size() + 1 == traj.samples.size();
    if (exact && functional == StateFunctional::VelocityNorm) {
        const auto regimes = mode_regimes(traj.spectrum, traj.damping);
        const std::size_t n = traj.spectrum.size();
        std::vector<double> candidates;
        std::vector<double> u(n), v(n);
        for (std::size_t seg = 0; seg + 1 < traj.samples.size(); ++seg) {
            const auto& s0 = traj.samples[seg];
            const double len = traj.samples[seg + 1].time - s0.time;
            if (s0.time + len < burn_in) continue;
            const auto& phi = traj.segment_forcing[seg];
            candidates.clear();
            for (std::size_t i = 0; i < n; ++i)
                velocity_critical_points(regimes[i], s0.u[i], s0.v[i], phi[i], len, candidates);
            for (double t : candidates) {
                if (s0.time + t < burn_in) continue;
                for (std::size_t i = 0; i < n; ++i) {
                    u[i] = s0.u[i];
                    v[i] = s0.v[i];
                    propagate_mode(regimes[i], phi[i], t, u[i], v[i]);
                }
                best = std::max(best, functional_value(u, v, traj.spectrum, functional));
            }
        }
    }
    return best;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    out << "time";
    for (std::size_t i = 0; i < traj.spectrum.size(); ++i)
        out << ",u" << (i + 1) << ",v" << (i + 1);
    out << '\n';
    for (const auto& s : traj.samples) {
        out << format_full(s.time);
        for (std::size_t i = 0; i < s.u.size(); ++i)
            out << ',' << format_full(s.u[i]) << ',' << format_full(s.v[i]);
        out << '\n';
    }
}

}  // namespace ubound
