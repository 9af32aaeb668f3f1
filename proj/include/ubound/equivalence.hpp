#pragma once

#include <iosfwd>
#include <vector>

#include "ubound/scalar.hpp"
#include "ubound/simulate.hpp"

namespace ubound {

/// One convergence cell of the equivalence experiment.
struct EquivalenceCell {
    double parameter;      ///< period T or horizon h
    double estimate;       ///< OB_P(T) or OB_U(h) estimate
    double predicted_gap;  ///< tail majorant from the decay envelope
    double achieved_gap;   ///< |estimate - ob_g0|
    bool pass;
};

/// Numerical embodiment of the equivalence of optimal bounds: the global
/// "time 0" bound (quadrature oracle), the periodic bounds under periodized
/// extremal forcing, and the ultimate bounds from forward simulation, all for
/// the same scalar problem, with the proof's quantitative tail estimates.
struct EquivalenceReport {
    double b, c;
    StateFunctional functional;
    double ob_g0;             ///< oracle value of the optimal constant
    double oracle_tolerance;  ///< absolute tolerance of the oracle
    DecayEnvelope tail_model;
    std::vector<EquivalenceCell> periodic;  ///< one cell per period
    std::vector<EquivalenceCell> ultimate;  ///< one cell per horizon
    bool verdict;                           ///< all cells pass
};

/// Run the experiment. `periods` and `horizons` must be nonempty and strictly
/// increasing; the functional must be velocity or position (the energy
/// seminorm has no closed-form oracle and is not part of verdicts).
EquivalenceReport run_equivalence(const ScalarParams& p, const std::vector<double>& periods,
                                  const std::vector<double>& horizons,
                                  StateFunctional functional = StateFunctional::VelocityNorm);

/// Machine-readable summary (comma-separated, '#' preamble).
void write_equivalence_csv(const EquivalenceReport& report, std::ostream& out);

/// Human-readable table.
void print_equivalence(const EquivalenceReport& report, std::ostream& out);

}  // namespace ubound
