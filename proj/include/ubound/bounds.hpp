#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "ubound/scalar.hpp"
#include "ubound/signal.hpp"

namespace ubound {

/// A self-adjoint coercive operator modeled by its eigenvalue list.
struct SpectrumModel {
    enum class Intent { Finite, TruncatedInfinite };

    std::vector<double> eigenvalues;  ///< nondecreasing, all positive
    Intent intent = Intent::Finite;

    static SpectrumModel finite(std::vector<double> eigenvalues);
    static SpectrumModel truncated(std::vector<double> eigenvalues);

    std::size_t size() const { return eigenvalues.size(); }
    double lambda_min() const { return eigenvalues.front(); }
    double lambda_max() const { return eigenvalues.back(); }
};

/// One block of the dyadic spectral partition [2^j b, 2^{j+1} b), plus the
/// tail block above c^2/4 (index -1).
struct PartitionBlock {
    int index;  ///< dyadic level j, or -1 for the infinity block
    double lo;
    double hi;  ///< +inf on the infinity block
    std::vector<std::size_t> members;  ///< eigenvalue indices
};

/// Upper bound valid for any coercive operator: 4/c when c^2 <= 4*lambda_1,
/// otherwise (4/c) sqrt(log2(c^2 / lambda_1)).
BoundEstimate upper_bound_general(const SpectrumModel& spec, double c);

/// Finite-dimensional upper bound 2 sqrt(d) / c (strict).
BoundEstimate upper_bound_finite_dim(std::size_t d, double c);

/// Bounded-operator bound (1 + sqrt(3 M / m)) / c; requires c^2 >= 4m.
BoundEstimate mM_bound(double m, double M, double c);

/// Dyadic partition of [lambda_1, inf) for c^2 > 4*lambda_1: k+2 blocks with
/// 2^k < c^2/(4 lambda_1) <= 2^{k+1}. Degenerates to a single infinity-style
/// block when c^2 <= 4*lambda_1.
std::vector<PartitionBlock> dyadic_partition(const SpectrumModel& spec, double c);

/// Guaranteed lower bound (e^{-eps} - 2 e^{-L}) sqrt(n+3) / c for admissible c.
BoundEstimate guaranteed_lower_bound(const ExtremalConstruction& con, double c);

/// Exact per-mode velocities u_i'(0) of the construction forcing at damping c,
/// straight from the closed-form exponential expressions.
struct ConstructionValue {
    std::vector<double> per_mode_v0;
    double norm_v0;
};
ConstructionValue evaluate_construction(const ExtremalConstruction& con, double c);

/// Parameters of the logarithmic lower-bound regime for eigenvalues growing
/// at most exponentially: requires e^{-eps0} - 2 e^{-L0} >= 1/2, and a
/// subsequence with ratios in [R0, R], R0 = 2 L0 / eps0.
struct LogRegimeParams {
    double eps0 = 0.2;
    double L0 = 2.0;
    double R;        ///< ratio cap, >= R0
    double lambda1;  ///< smallest eigenvalue of the subsequence

    LogRegimeParams(double eps0_, double L0_, double R_, double lambda1_);
    double R0() const { return 2.0 * L0 / eps0; }
    /// sigma_n = sqrt(2 R0 R^{n-1} lambda1)
    double sigma(int n) const;
    /// smallest n with sigma_n >= 1 and R^{n-1} >= 2 R0 lambda1
    int n0() const;
};

struct LogRegimeBound {
    BoundEstimate bound;  ///< (1/2) sqrt(log2 c) / (c sqrt(log2 R))
    int bracket_n;        ///< n with sigma_n <= c <= sigma_{n+1}
};
LogRegimeBound log_regime_bound(const LogRegimeParams& params, double c);

/// Synthetic spectrum from the eigenvalue counting law N(lambda) ~ gamma_w *
/// lambda^{d/2}: lambda_k = (k / gamma_w)^{2/d}.
SpectrumModel weyl_spectrum(int d, double gamma_w, std::size_t count);

/// Greedy maximal chain of indices whose consecutive eigenvalue ratios lie in
/// [r_lo, r_hi], starting from the first eigenvalue. Returns a single index
/// when no admissible successor exists.
std::vector<std::size_t> ratio_subsequence(const SpectrumModel& spec, double r_lo, double r_hi);

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending. Rejects asymmetric input and non-positive spectra (coercivity).
SpectrumModel symmetric_eigenvalues(const std::vector<std::vector<double>>& matrix,
                                    std::size_t dimension_cap = 512);

/// Dense matrix from text: row-major, whitespace-separated, '#' comments. The
/// token count must be a perfect square.
std::vector<std::vector<double>> read_matrix(std::istream& in);
std::vector<std::vector<double>> read_matrix_file(const std::string& path);

/// The two-dimensional counterexample to operator monotonicity: A1 = b*I and
/// A2 with eigenvalues (2 L0/eps0)^i such that A1 < A2 but the lower estimate
/// for K(A2, c) exceeds the scalar bound K(b, c) = K(A1, c) for large c.
struct NonMonotonicityReport {
    SpectrumModel a1;
    SpectrumModel a2;
    double c_star;
    double lower_a2;    ///< exact construction value for A2 at c_star
    double scalar_k_a1; ///< K(b, c_star), an exact value for A1
    double two_over_c;  ///< the 2/c ceiling that separates them
};
NonMonotonicityReport nonmonotonicity_witness(double c_lo, double c_hi, double eps0 = 0.01,
                                              double L0 = 3.2, double b = 1.0);

}  // namespace ubound
