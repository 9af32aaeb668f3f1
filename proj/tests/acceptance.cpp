// Acceptance suite: end-to-end checks of the optimal-bound laboratory, one
// printed pass/fail line per criterion. Exit code = number of failures.

#include <chrono>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ubound/bounds.hpp"
#include "ubound/equivalence.hpp"
#include "ubound/parallel.hpp"
#include "ubound/scalar.hpp"
#include "ubound/signal.hpp"
#include "ubound/simulate.hpp"

using namespace ubound;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

int failures = 0;

void report(int id, const std::string& label, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << label << " ("
              << detail << ")\n";
    if (!pass) ++failures;
}

std::string fmt(double x) {
    std::ostringstream out;
    out.precision(6);
    out << x;
    return out.str();
}

}  // namespace

int main() {
    std::cout.setf(std::ios::boolalpha);

    // ---- shared 20x20 log grid: b in [2^-6, 2^20], c in [2^-6, 2^12] ----
    const int n = 20;
    std::vector<double> bs(n), cs(n);
    for (int i = 0; i < n; ++i) {
        bs[i] = std::exp2(-6.0 + 26.0 * i / (n - 1));
        cs[i] = std::exp2(-6.0 + 18.0 * i / (n - 1));
    }
    std::vector<double> closed(n * n), oracle(n * n);

    const auto grid_start = std::chrono::steady_clock::now();
    parallel_for(static_cast<std::size_t>(n * n), [&](std::size_t cell) {
        const int i = static_cast<int>(cell) / n;
        const int j = static_cast<int>(cell) % n;
        const ScalarParams p(bs[i], cs[j]);
        closed[cell] = optimal_velocity_bound(p).value;
        oracle[cell] = quadrature_bound_oracle(p, 1e-9).value;
    });
    const double grid_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - grid_start).count();

    // 1. closed form vs quadrature oracle
    {
        double max_diff = 0.0;
        for (int cell = 0; cell < n * n; ++cell)
            max_diff = std::max(max_diff, std::abs(closed[cell] - oracle[cell]));
        report(1, "closed form vs oracle on the 20x20 grid",
               max_diff <= 1e-8 && grid_seconds <= 10.0,
               "max |K_closed - K_quad| = " + fmt(max_diff) + " <= 1e-8, runtime " +
                   fmt(grid_seconds) + " s <= 10 s");
    }

    // 2. critical constant K(1,2) = 2/e
    {
        const double k_closed = optimal_velocity_bound(ScalarParams(1.0, 2.0)).value;
        const double k_oracle = quadrature_bound_oracle(ScalarParams(1.0, 2.0), 1e-10).value;
        const double d1 = std::abs(k_closed - 2.0 / kE);
        const double d2 = std::abs(k_oracle - 2.0 / kE);
        report(2, "critical constant K(1,2) = 2/e", d1 <= 1e-12 && d2 <= 1e-10,
               "closed-form error " + fmt(d1) + " <= 1e-12, oracle error " + fmt(d2) + " <= 1e-10");
    }

    // 3. envelope 4/(pi c) < K < 2/c and optimality of both constants
    {
        bool strict = true;
        for (int i = 0; i < n && strict; ++i)
            for (int j = 0; j < n; ++j) {
                const double k = closed[i * n + j];
                if (!(k > 4.0 / (kPi * cs[j]) && k < 2.0 / cs[j])) {
                    strict = false;
                    break;
                }
            }
        const double k_stiff = optimal_velocity_bound(ScalarParams(1e8, 1.0)).value;
        const double k_soft = optimal_velocity_bound(ScalarParams(1e-8, 1.0)).value;
        const double stiff_err = std::abs(k_stiff - 4.0 / kPi);
        const double soft_err = std::abs(k_soft - 2.0);
        report(3, "envelope strict on the grid; c*K limits 4/pi and 2",
               strict && stiff_err <= 1e-3 && soft_err <= 1e-3,
               std::string("strict envelope: ") + (strict ? "yes" : "NO") + ", |cK(1e8,1) - 4/pi| = " +
                   fmt(stiff_err) + ", |cK(1e-8,1) - 2| = " + fmt(soft_err));
    }

    // 4. strict monotonicity along both grid axes
    {
        int violations = 0;
        for (int i = 0; i + 1 < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!(closed[(i + 1) * n + j] < closed[i * n + j])) ++violations;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j + 1 < n; ++j)
                if (!(closed[i * n + j + 1] < closed[i * n + j])) ++violations;
        report(4, "K strictly decreasing in b and in c on the grid", violations == 0,
               std::to_string(violations) + " violations");
    }

    // 5. extremal attainment via the exact Duhamel solution
    {
        bool pass = true;
        std::string detail;
        for (auto [b, c] : {std::pair{2.0, 3.0}, {1.0, 2.0}, {2.0, 2.0}}) {
            const ScalarParams p(b, c);
            const RegimeData r = classify_regime(p);
            const double horizon = 40.0 / decay_envelope(p).rate;
            const auto state = bounded_solution_at_zero({b}, c, extremal_scalar_forcing(r, horizon));
            const double err = std::abs(std::abs(state.v[0]) - optimal_velocity_bound(p).value);
            pass = pass && err <= 1e-6;
            detail += "(b=" + fmt(b) + ",c=" + fmt(c) + "): " + fmt(err) + " ";
        }
        report(5, "extremal forcing attains K within 1e-6 at horizon 40/delta", pass,
               detail + "<= 1e-6");
    }

    // 6. construction exactness and the lemma sandwich
    {
        auto build = build_construction(1.0, 2.0, {4.0, 16.0, 64.0}, 23.0);
        const auto value = evaluate_construction(build.construction, 23.0);
        const auto sim = bounded_solution_at_zero({4.0, 16.0, 64.0}, 23.0, build.forcing);
        double max_mode_diff = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            max_mode_diff = std::max(max_mode_diff, std::abs(value.per_mode_v0[i] - sim.v[i]));
        const double floor = 0.097208 * std::sqrt(6.0) / 23.0;
        const double ceiling = 2.0 * std::sqrt(3.0) / 23.0;
        const bool pass =
            max_mode_diff <= 1e-12 && value.norm_v0 >= floor && value.norm_v0 <= ceiling;
        report(6, "construction (eps=1, L=2, modes 4/16/64, c=23) is exact and sandwiched", pass,
               "max per-mode |closed - simulated| = " + fmt(max_mode_diff) + " <= 1e-12, norm " +
                   fmt(value.norm_v0) + " in [" + fmt(floor) + ", " + fmt(ceiling) + "]");
    }

    // 7. equivalence convergence with the proof's tail estimate
    {
        const auto rep = run_equivalence(ScalarParams(2.0, 3.0), {5.0, 10.0, 20.0}, {5.0, 10.0, 20.0});
        bool pass = true;
        std::string detail = "C = " + fmt(rep.tail_model.constant) + "; gaps";
        for (const auto& cell : rep.periodic) {
            const double allowed = 2.0 * rep.tail_model.constant * std::exp(-cell.parameter);
            pass = pass && cell.achieved_gap <= allowed;
            detail += " " + fmt(cell.achieved_gap);
        }
        // each 5-unit step of T shrinks the gap by (at least) e^{-5}; 1% slack
        // absorbs the geometric factor (1 - e^{-T})^{-1} of the periodization
        pass = pass && rep.periodic[1].achieved_gap <=
                           rep.periodic[0].achieved_gap * std::exp(-5.0) * 1.01;
        pass = pass && rep.periodic[2].achieved_gap <=
                           rep.periodic[1].achieved_gap * std::exp(-5.0) * 1.01;
        report(7, "|OB_P(T) - OB_G0| <= 2C e^{-T} with e^{-5} shrink per step", pass, detail);
    }

    // 8. log regime on the 2^i spectrum
    {
        std::vector<double> eigenvalues;
        for (int i = 1; i <= 40; ++i) eigenvalues.push_back(std::exp2(i));
        const auto spec = SpectrumModel::truncated(eigenvalues);
        const double eps0 = 0.2, L0 = 2.0, R = 20.0;
        const auto chain_idx = ratio_subsequence(spec, 2.0 * L0 / eps0, 400.0);
        std::vector<double> chain;
        for (auto idx : chain_idx) chain.push_back(spec.eigenvalues[idx]);
        const LogRegimeParams params(eps0, L0, R, spec.lambda_min());

        bool pass = true;
        std::vector<double> xs, ys;
        for (int nn = 5; nn <= 20; ++nn) {
            const double c = params.sigma(nn);
            std::size_t used = 0;
            while (used < chain.size() && c >= std::sqrt(4.0 * L0 * chain[used] / eps0)) ++used;
            if (used == 0) {
                pass = false;
                break;
            }
            std::vector<double> prefix(chain.begin(), chain.begin() + used);
            const auto build = build_construction(eps0, L0, prefix, c);
            const double scaled = c * evaluate_construction(build.construction, c).norm_v0;
            const double lo = c * log_regime_bound(params, c).bound.value;
            const double hi = c * upper_bound_general(spec, c).value;
            pass = pass && lo <= scaled && scaled <= hi;
            xs.push_back(std::log2(c));
            ys.push_back(scaled * scaled);
        }
        // least-squares slope of (cK)^2 against log2 c
        double xbar = 0.0, ybar = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            xbar += xs[k];
            ybar += ys[k];
        }
        xbar /= xs.size();
        ybar /= ys.size();
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            num += (xs[k] - xbar) * (ys[k] - ybar);
            den += (xs[k] - xbar) * (xs[k] - xbar);
        }
        const double slope = num / den;
        pass = pass && slope > 0.0;
        report(8, "2^i spectrum: c*K bracketed by the log-regime bounds, (cK)^2 grows in log2 c",
               pass, "fit slope = " + fmt(slope) + " > 0");
    }

    // 9. divergence of c*K along the 4^i construction thresholds
    {
        bool pass = true;
        double previous = 0.0;
        double last = 0.0;
        for (int nn = 1; nn <= 20; ++nn) {
            std::vector<double> modes;
            double lam = 4.0;
            for (int i = 0; i < nn; ++i, lam *= 4.0) modes.push_back(lam);
            const double c = std::sqrt(8.0 * modes.back());
            const auto build = build_construction(1.0, 2.0, modes, c);
            const double scaled = c * evaluate_construction(build.construction, c).norm_v0;
            pass = pass && scaled >= 0.097 * std::sqrt(nn + 3.0) && scaled > previous;
            previous = scaled;
            last = scaled;
        }
        report(9, "c_n * K_lower >= 0.097 sqrt(n+3), increasing for n = 1..20", pass,
               "final value " + fmt(last) + " >= " + fmt(0.097 * std::sqrt(23.0)));
    }

    // 10. non-monotonicity witness in [threshold, 10*threshold]
    {
        const double eps0 = 0.01, L0 = 3.2;
        const double ratio = 2.0 * L0 / eps0;
        const double threshold = std::sqrt(4.0 * L0 * ratio * ratio / eps0);
        bool pass = false;
        std::string detail;
        try {
            const auto witness = nonmonotonicity_witness(threshold, 10.0 * threshold, eps0, L0, 1.0);
            pass = witness.lower_a2 > witness.two_over_c &&
                   witness.two_over_c >= witness.scalar_k_a1 &&
                   witness.a1.lambda_max() < witness.a2.lambda_min();
            detail = "c* = " + fmt(witness.c_star) + ", K_lower(A2,c*) = " + fmt(witness.lower_a2) +
                     " > 2/c* = " + fmt(witness.two_over_c) +
                     " >= K(A1,c*) = " + fmt(witness.scalar_k_a1);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        report(10, "A1 < A2 with K(A1,c*) < K(A2,c*) lower estimate", pass, detail);
    }

    std::cout << (failures == 0 ? "all criteria passed" : "criteria FAILED: " +
                                                              std::to_string(failures))
              << "\n";
    return failures;
}
