#include "ubound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ubound/text.hpp"

namespace ubound {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_eigenvalues(const std::vector<double>& eigenvalues) {
    if (eigenvalues.empty()) throw std::invalid_argument("SpectrumModel: empty eigenvalue list");
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        if (!(eigenvalues[i] > 0.0) || !std::isfinite(eigenvalues[i]))
            throw std::invalid_argument("SpectrumModel: eigenvalues must be positive (coercivity)");
        if (i > 0 && eigenvalues[i] < eigenvalues[i - 1])
            throw std::invalid_argument("SpectrumModel: eigenvalues must be nondecreasing");
    }
}
}  // namespace

SpectrumModel SpectrumModel::finite(std::vector<double> eigenvalues) {
    validate_eigenvalues(eigenvalues);
    return {std::move(eigenvalues), Intent::Finite};
}

SpectrumModel SpectrumModel::truncated(std::vector<double> eigenvalues) {
    validate_eigenvalues(eigenvalues);
    return {std::move(eigenvalues), Intent::TruncatedInfinite};
}

BoundEstimate upper_bound_general(const SpectrumModel& spec, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("upper_bound_general: c > 0 violated");
    const double b = spec.lambda_min();
    double value;
    if (c * c <= 4.0 * b)
        value = 4.0 / c;
    else
        value = 4.0 / c * std::sqrt(std::log2(c * c / b));
    return {value, BoundKind::GuaranteedUpper, "general spectral upper bound", {}};
}

BoundEstimate upper_bound_finite_dim(std::size_t d, double c) {
    if (d < 1) throw std::invalid_argument("upper_bound_finite_dim: d >= 1 violated");
    if (!(c > 0.0)) throw std::invalid_argument("upper_bound_finite_dim: c > 0 violated");
    return {2.0 * std::sqrt(static_cast<double>(d)) / c, BoundKind::GuaranteedUpper,
            "finite-dimensional upper bound 2*sqrt(d)/c", {}};
}

BoundEstimate mM_bound(double m, double M, double c) {
    if (!(m > 0.0) || !(M >= m)) throw std::invalid_argument("mM_bound: 0 < m <= M violated");
    if (!(c * c >= 4.0 * m)) throw std::invalid_argument("mM_bound: c^2 >= 4m violated");
    return {(1.0 + std::sqrt(3.0 * M / m)) / c, BoundKind::GuaranteedUpper,
            "bounded-operator non-oscillatory bound", {}};
}

std::vector<PartitionBlock> dyadic_partition(const SpectrumModel& spec, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("dyadic_partition: c > 0 violated");
    const double b = spec.lambda_min();
    std::vector<PartitionBlock> blocks;

    if (c * c <= 4.0 * b) {
        PartitionBlock all{-1, b, kInf, {}};
        for (std::size_t i = 0; i < spec.size(); ++i) all.members.push_back(i);
        blocks.push_back(std::move(all));
        return blocks;
    }

    const double x = c * c / (4.0 * b);
    int k = 0;
    double pow_next = 2.0;  // 2^{k+1}
    while (pow_next < x) {
        ++k;
        pow_next *= 2.0;
    }
    // now 2^k < x <= 2^{k+1}
    double lo = b;
    for (int j = 0; j <= k; ++j) {
        blocks.push_back({j, lo, 2.0 * lo, {}});
        lo *= 2.0;
    }
    blocks.push_back({-1, lo, kInf, {}});

    for (std::size_t i = 0; i < spec.size(); ++i) {
        const double lam = spec.eigenvalues[i];
        bool placed = false;
        for (auto& blk : blocks) {
            if (lam >= blk.lo && lam < blk.hi) {
                blk.members.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) blocks.back().members.push_back(i);  // lam == +inf guard
    }
    return blocks;
}

BoundEstimate guaranteed_lower_bound(const ExtremalConstruction& con, double c) {
    if (!(c >= con.c_threshold))
        throw std::invalid_argument(
            "guaranteed_lower_bound: c >= sqrt(4*L*lambda_n/epsilon) violated (threshold " +
            format_full(con.c_threshold) + ")");
    return {con.guaranteed_gain / c, BoundKind::GuaranteedLower,
            "n-mode construction lower bound", {}};
}

ConstructionValue evaluate_construction(const ExtremalConstruction& con, double c) {
    const std::vector<double> times = construction_switch_times(con, c);  // validates c
    const std::size_t n = con.modes.size();

    ConstructionValue out;
    out.per_mode_v0.resize(n);
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lam = con.modes[i];
        const double root = std::sqrt(c * c - 4.0 * lam);
        const double alpha = 0.5 * (c + root);
        const double beta = 2.0 * lam / (c + root);
        const double T = times[i];
        const double ea_prev = (i == 0) ? 0.0 : std::exp(-alpha * times[i - 1]);
        const double eb_prev = (i == 0) ? 0.0 : std::exp(-beta * times[i - 1]);
        double v;
        if (i + 1 < n) {
            v = (ea_prev - std::exp(-alpha * T) - eb_prev + std::exp(-beta * T)) / root;
        } else {
            v = (2.0 * std::exp(-beta * T) - 2.0 * std::exp(-alpha * T) + ea_prev - eb_prev) / root;
        }
        out.per_mode_v0[i] = v;
        sq += v * v;
    }
    out.norm_v0 = std::sqrt(sq);
    return out;
}

LogRegimeParams::LogRegimeParams(double eps0_, double L0_, double R_, double lambda1_)
    : eps0(eps0_), L0(L0_), R(R_), lambda1(lambda1_) {
    if (!(eps0 > 0.0) || !(L0 > eps0))
        throw std::invalid_argument("LogRegimeParams: L0 > eps0 > 0 violated");
    if (!(std::exp(-eps0) - 2.0 * std::exp(-L0) >= 0.5))
        throw std::invalid_argument("LogRegimeParams: exp(-eps0) - 2*exp(-L0) >= 1/2 violated");
    if (!(R >= R0()))
        throw std::invalid_argument("LogRegimeParams: R >= R0 = 2*L0/eps0 violated");
    if (!(lambda1 > 0.0)) throw std::invalid_argument("LogRegimeParams: lambda1 > 0 violated");
}

double LogRegimeParams::sigma(int n) const {
    if (n < 1) throw std::invalid_argument("LogRegimeParams::sigma: n >= 1 violated");
    return std::sqrt(2.0 * R0() * std::pow(R, n - 1) * lambda1);
}

int LogRegimeParams::n0() const {
    for (int n = 1; n < 100000; ++n) {
        if (sigma(n) >= 1.0 && std::pow(R, n - 1) >= 2.0 * R0() * lambda1) return n;
    }
    throw std::runtime_error("LogRegimeParams: n0 not found below 1e5");
}

LogRegimeBound log_regime_bound(const LogRegimeParams& params, double c) {
    const int n_min = params.n0();
    if (!(c >= params.sigma(n_min)))
        throw std::invalid_argument("log_regime_bound: c >= sigma_{n0} violated (sigma_{n0} = " +
                                    format_full(params.sigma(n_min)) + ")");
    int n = n_min;
    while (params.sigma(n + 1) <= c) ++n;  // largest n with sigma_n <= c
    const double value = 0.5 * std::sqrt(std::log2(c)) / (c * std::sqrt(std::log2(params.R)));
    return {{value, BoundKind::GuaranteedLower, "log-regime lower bound", {}}, n};
}

SpectrumModel weyl_spectrum(int d, double gamma_w, std::size_t count) {
    if (d < 1) throw std::invalid_argument("weyl_spectrum: d >= 1 violated");
    if (!(gamma_w > 0.0)) throw std::invalid_argument("weyl_spectrum: gamma_w > 0 violated");
    if (count < 1) throw std::invalid_argument("weyl_spectrum: count >= 1 violated");
    std::vector<double> eigenvalues(count);
    const double expo = 2.0 / static_cast<double>(d);
    for (std::size_t k = 1; k <= count; ++k)
        eigenvalues[k - 1] = std::pow(static_cast<double>(k) / gamma_w, expo);
    return SpectrumModel::truncated(std::move(eigenvalues));
}

std::vector<std::size_t> ratio_subsequence(const SpectrumModel& spec, double r_lo, double r_hi) {
    if (!(r_lo > 1.0) || !(r_hi >= r_lo))
        throw std::invalid_argument("ratio_subsequence: r_hi >= r_lo > 1 violated");
    std::vector<std::size_t> chain{0};
    double last = spec.eigenvalues.front();
    std::size_t j = 1;
    while (j < spec.size()) {
        if (spec.eigenvalues[j] < r_lo * last) {
            ++j;
            continue;
        }
        if (spec.eigenvalues[j] > r_hi * last) break;  // overshoot: no admissible successor
        chain.push_back(j);
        last = spec.eigenvalues[j];
        ++j;
    }
    return chain;
}

SpectrumModel symmetric_eigenvalues(const std::vector<std::vector<double>>& matrix,
                                    std::size_t dimension_cap) {
    const std::size_t n = matrix.size();
    if (n == 0) throw std::invalid_argument("symmetric_eigenvalues: empty matrix");
    if (n > dimension_cap)
        throw std::invalid_argument("symmetric_eigenvalues: dimension exceeds cap of " +
                                    std::to_string(dimension_cap));
    for (const auto& row : matrix)
        if (row.size() != n) throw std::invalid_argument("symmetric_eigenvalues: matrix not square");

    double frob = 0.0, asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(matrix[i][j]))
                throw std::invalid_argument("symmetric_eigenvalues: entries must be finite");
            frob += matrix[i][j] * matrix[i][j];
            const double d = matrix[i][j] - matrix[j][i];
            asym += d * d;
        }
    frob = std::sqrt(frob);
    if (std::sqrt(asym) > 1e-12 * std::max(frob, 1e-300))
        throw std::invalid_argument("symmetric_eigenvalues: matrix not symmetric to 1e-12");

    // Cyclic Jacobi sweeps until the off-diagonal Frobenius mass is negligible.
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = 0.5 * (matrix[i][j] + matrix[j][i]);

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
        return std::sqrt(s);
    };

    const double target = 1e-12 * std::max(frob, 1e-300);
    for (int sweep = 0; sweep < 100 && off_norm() > target; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cs = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * cs;
                const double tau = sn / (1.0 + cs);
                const double app = a[p * n + p], aqq = a[q * n + q];
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = a[q * n + p] = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a[r * n + p], arq = a[r * n + q];
                    a[r * n + p] = a[p * n + r] = arp - sn * (arq + tau * arp);
                    a[r * n + q] = a[q * n + r] = arq + sn * (arp - tau * arq);
                }
            }
        }
    }
    if (off_norm() > target)
        throw std::runtime_error("symmetric_eigenvalues: Jacobi sweeps did not converge");

    std::vector<double> eigenvalues(n);
    for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = a[i * n + i];
    std::sort(eigenvalues.begin(), eigenvalues.end());
    if (!(eigenvalues.front() > 0.0))
        throw std::invalid_argument("symmetric_eigenvalues: non-positive eigenvalue " +
                                    format_full(eigenvalues.front()) + " (coercivity violated)");
    return SpectrumModel::finite(std::move(eigenvalues));
}

std::vector<std::vector<double>> read_matrix(std::istream& in) {
    std::vector<double> tokens;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::string token;
        while (fields >> token) tokens.push_back(parse_double(token));
    }
    if (tokens.empty()) throw std::runtime_error("matrix input: no entries");
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(tokens.size()))));
    if (n * n != tokens.size())
        throw std::runtime_error("matrix input: " + std::to_string(tokens.size()) +
                                 " entries do not form a square matrix");
    std::vector<std::vector<double>> matrix(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) matrix[i][j] = tokens[i * n + j];
    return matrix;
}

std::vector<std::vector<double>> read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return read_matrix(in);
}

NonMonotonicityReport nonmonotonicity_witness(double c_lo, double c_hi, double eps0, double L0,
                                              double b) {
    if (!(c_hi > c_lo) || !(c_lo > 0.0))
        throw std::invalid_argument("nonmonotonicity_witness: invalid c range");
    const double margin = std::exp(-eps0) - 2.0 * std::exp(-L0);
    if (!(margin * std::sqrt(5.0) >= 2.0))
        throw std::invalid_argument(
            "nonmonotonicity_witness: (e^-eps0 - 2e^-L0)*sqrt(5) >= 2 violated");
    const double ratio = 2.0 * L0 / eps0;
    if (!(b > 0.0) || !(b < ratio))
        throw std::invalid_argument("nonmonotonicity_witness: need 0 < b < lambda_min(A2)");

    auto build = build_construction(eps0, L0, {ratio, ratio * ratio},
                                    std::max(c_lo, std::sqrt(4.0 * L0 * ratio * ratio / eps0)));
    const ExtremalConstruction& con = build.construction;

    const int grid = 200;
    for (int k = 0; k <= grid; ++k) {
        const double c =
            c_lo * std::pow(c_hi / c_lo, static_cast<double>(k) / grid);
        if (c < con.c_threshold) continue;
        const double lower = evaluate_construction(con, c).norm_v0;
        const double ceiling = 2.0 / c;
        if (lower > ceiling) {
            NonMonotonicityReport report{
                SpectrumModel::finite({b, b}),
                SpectrumModel::finite({ratio, ratio * ratio}),
                c,
                lower,
                optimal_velocity_bound(ScalarParams(b, c)).value,
                ceiling,
            };
            return report;
        }
    }
    throw std::runtime_error(
        "nonmonotonicity_witness: no admissible c in range exceeded 2/c (range too low?)");
}

}  // namespace ubound
