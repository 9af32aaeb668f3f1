// Command-line front end: optimal-bound constants, parameter sweeps, the
// n-mode worst-case construction, equivalence experiments, and the synthetic
// Laplacian demonstration of the (log c)^{1/2} regime.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
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
#include "ubound/text.hpp"

namespace {

using namespace ubound;

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
    bool log_spaced = false;

    std::vector<double> points() const {
        std::vector<double> xs(count);
        for (int i = 0; i < count; ++i) {
            const double t = static_cast<double>(i) / (count - 1);
            xs[i] = log_spaced ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
        }
        return xs;
    }
};

Range parse_range(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 3 || parts.size() > 4)
        throw std::invalid_argument("range must be lo:hi:n or lo:hi:n:log, got '" + text + "'");
    Range r;
    r.lo = parse_double(parts[0]);
    r.hi = parse_double(parts[1]);
    r.count = static_cast<int>(parse_double(parts[2]));
    r.log_spaced = parts.size() == 4 && parts[3] == "log";
    if (!(r.lo > 0.0) || !(r.hi > r.lo)) throw std::invalid_argument("range endpoints must be positive and increasing");
    if (r.count < 2) throw std::invalid_argument("range count must be >= 2");
    return r;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

StateFunctional parse_functional(const std::string& name) {
    if (name == "velocity") return StateFunctional::VelocityNorm;
    if (name == "position") return StateFunctional::PositionNorm;
    if (name == "energy") return StateFunctional::Energy;
    throw std::invalid_argument("functional must be velocity, position or energy");
}

std::vector<double> read_spectrum_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::vector<double> eigenvalues;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        eigenvalues.push_back(parse_double(line.substr(first)));
    }
    if (eigenvalues.empty()) throw std::runtime_error("spectrum file has no eigenvalues: " + path);
    return eigenvalues;
}

// --modes accepts an inline list "4,16,64", a generator "geom:l1:ratio:n" or
// "weyl:d:gamma:n", or a spectrum file (one eigenvalue per line).
std::vector<double> parse_modes(const std::string& spec) {
    if (spec.rfind("geom:", 0) == 0) {
        std::vector<std::string> parts;
        std::stringstream ss(spec.substr(5));
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        if (parts.size() != 3) throw std::invalid_argument("geom generator needs geom:lambda1:ratio:count");
        const double l1 = parse_double(parts[0]);
        const double ratio = parse_double(parts[1]);
        const int n = static_cast<int>(parse_double(parts[2]));
        if (n < 1) throw std::invalid_argument("geom generator count must be >= 1");
        std::vector<double> modes(n);
        double lam = l1;
        for (int i = 0; i < n; ++i, lam *= ratio) modes[i] = lam;
        return modes;
    }
    if (spec.rfind("weyl:", 0) == 0) {
        std::vector<std::string> parts;
        std::stringstream ss(spec.substr(5));
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        if (parts.size() != 3) throw std::invalid_argument("weyl generator needs weyl:d:gamma:count");
        const auto s = weyl_spectrum(static_cast<int>(parse_double(parts[0])), parse_double(parts[1]),
                                     static_cast<std::size_t>(parse_double(parts[2])));
        return s.eigenvalues;
    }
    if (spec.rfind("matrix:", 0) == 0)
        return symmetric_eigenvalues(read_matrix_file(spec.substr(7))).eigenvalues;
    if (spec.find(',') != std::string::npos) {
        std::vector<double> modes;
        for (const auto& field : split_csv(spec)) modes.push_back(parse_double(field));
        return modes;
    }
    return read_spectrum_file(spec);
}

void print_bound(std::ostream& out, const char* label, const BoundEstimate& e) {
    out << "  " << label << " = " << format_full(e.value) << "  [" << to_string(e.kind);
    if (e.tolerance && *e.tolerance > 0.0) out << ", +/- " << format_full(*e.tolerance);
    out << "] (" << e.provenance << ")\n";
}

int cmd_constants(double b, double c, double oracle_tol) {
    const ScalarParams p(b, c);
    const RegimeData r = classify_regime(p);
    std::cout << "regime: " << to_string(r.regime) << " (delta = " << format_full(r.delta) << ")\n";
    if (r.regime == Regime::NonOscillatory)
        std::cout << "  alpha = " << format_full(r.alpha) << ", beta = " << format_full(r.beta)
                  << ", s0 = " << format_full(r.first_zero_datum) << "\n";
    else if (r.regime == Regime::Oscillatory)
        std::cout << "  gamma = " << format_full(r.gamma) << ", omega = " << format_full(r.omega)
                  << ", y0 = " << format_full(r.first_zero_datum) << "\n";

    print_bound(std::cout, "K(b,c) velocity bound ", optimal_velocity_bound(p));
    print_bound(std::cout, "oracle check          ", quadrature_bound_oracle(p, oracle_tol));
    print_bound(std::cout, "position bound        ", optimal_position_bound(p));
    std::cout << "  envelope: 4/(pi c) = " << format_full(4.0 / (std::numbers::pi * c))
              << " < K < 2/c = " << format_full(2.0 / c) << "\n";

    const HistoricalBounds h = historical_bounds(p);
    std::cout << "historical constants:\n";
    std::cout << "  loud_u   = " << format_full(h.loud_u) << "\n";
    std::cout << "  loud_v   = " << format_full(h.loud_v) << "\n";
    std::cout << "  fithar_u = " << format_full(h.fithar_u) << "\n";
    std::cout << "  fithar_v = " << format_full(h.fithar_v) << "\n";
    std::cout << "  haraux_u = " << format_full(h.haraux_u) << "\n";

    const DecayEnvelope env = decay_envelope(p);
    std::cout << "decay envelope: ||S(t)|| <= " << format_full(env.constant) << " * exp(-"
              << format_full(env.rate) << " t)\n";
    return 0;
}

int cmd_sweep(const std::string& axis, const Range& range, double b, double c, double oracle_tol,
              const std::string& out_path) {
    auto out = open_output(out_path);
    const auto xs = range.points();

    if (axis == "b" || axis == "c") {
        out << axis << ",k_closed,k_oracle,loud_u,loud_v,fithar_u,fithar_v,haraux_u,"
               "lower_4_over_pi_c,upper_2_over_c\n";
        std::vector<std::string> rows(xs.size());
        parallel_for(xs.size(), [&](std::size_t i) {
            const double bv = axis == "b" ? xs[i] : b;
            const double cv = axis == "c" ? xs[i] : c;
            const ScalarParams p(bv, cv);
            const HistoricalBounds h = historical_bounds(p);
            std::ostringstream row;
            row << format_full(xs[i]) << ',' << format_full(optimal_velocity_bound(p).value) << ','
                << format_full(quadrature_bound_oracle(p, oracle_tol).value) << ','
                << format_full(h.loud_u) << ',' << format_full(h.loud_v) << ','
                << format_full(h.fithar_u) << ',' << format_full(h.fithar_v) << ','
                << format_full(h.haraux_u) << ','
                << format_full(4.0 / (std::numbers::pi * cv)) << ',' << format_full(2.0 / cv);
            rows[i] = row.str();
        });
        for (const auto& row : rows) out << row << '\n';
    } else if (axis == "dimension") {
        out << "dimension,upper_2_sqrt_d_over_c\n";
        for (double x : xs) {
            const auto d = static_cast<std::size_t>(x);
            out << d << ',' << format_full(upper_bound_finite_dim(d == 0 ? 1 : d, c).value) << '\n';
        }
    } else if (axis == "period") {
        out << "period,ob_p,ob_g0,predicted_gap\n";
        const ScalarParams p(b, c);
        const RegimeData r = classify_regime(p);
        const DecayEnvelope env = decay_envelope(p);
        const double ob_g0 = quadrature_bound_oracle(p, oracle_tol).value;
        std::vector<std::string> rows(xs.size());
        parallel_for(xs.size(), [&](std::size_t i) {
            const double T = xs[i];
            const auto sol = periodic_solution({b}, c, periodize(extremal_scalar_forcing(r, T), T));
            std::ostringstream row;
            row << format_full(T) << ',' << format_full(std::abs(sol.at_zero.v[0])) << ','
                << format_full(ob_g0) << ','
                << format_full(2.0 * env.constant * std::exp(-env.rate * T) / env.rate);
            rows[i] = row.str();
        });
        for (const auto& row : rows) out << row << '\n';
    } else {
        throw std::invalid_argument("axis must be b, c, dimension or period");
    }
    if (!out.flush()) throw std::runtime_error("write failed: " + out_path);
    return 0;
}

int cmd_construct(double epsilon, double big_l, const std::string& modes_spec, double c,
                  const std::string& out_path) {
    const std::vector<double> modes = parse_modes(modes_spec);
    auto build = build_construction(epsilon, big_l, modes, c);
    const ExtremalConstruction& con = build.construction;

    std::cout << "construction: n = " << con.modes.size() << ", epsilon = " << format_full(epsilon)
              << ", L = " << format_full(big_l) << ", c = " << format_full(c) << "\n";
    std::cout << "  damping threshold = " << format_full(con.c_threshold) << "\n";
    std::cout << "  switch times T_i  =";
    for (double t : con.switch_times) std::cout << ' ' << format_full(t);
    std::cout << "\n";

    print_bound(std::cout, "guaranteed lower bound", guaranteed_lower_bound(con, c));
    const ConstructionValue value = evaluate_construction(con, c);
    std::cout << "  exact per-mode u_i'(0) =";
    for (double v : value.per_mode_v0) std::cout << ' ' << format_full(v);
    std::cout << "\n  exact norm ||u'(0)||  = " << format_full(value.norm_v0) << "\n";

    const auto spec = SpectrumModel::finite(modes);
    print_bound(std::cout, "upper bound 2*sqrt(d)/c", upper_bound_finite_dim(modes.size(), c));
    print_bound(std::cout, "upper bound (general)  ", upper_bound_general(spec, c));
    const bool sandwich = guaranteed_lower_bound(con, c).value <= value.norm_v0 &&
                          value.norm_v0 <= upper_bound_finite_dim(modes.size(), c).value &&
                          value.norm_v0 <= upper_bound_general(spec, c).value;
    std::cout << "  sandwich lower <= exact <= upper: " << (sandwich ? "holds" : "VIOLATED") << "\n";

    if (!out_path.empty()) {
        build.forcing.write_file(out_path);
        std::cout << "forcing signal written to " << out_path << "\n";
    }
    return 0;
}

int cmd_equivalence(double b, double c, std::vector<double> periods, std::vector<double> horizons,
                    const std::string& functional, const std::string& out_path) {
    const auto report = run_equivalence(ScalarParams(b, c), periods, horizons,
                                        parse_functional(functional));
    print_equivalence(report, std::cout);
    if (!out_path.empty()) {
        auto out = open_output(out_path);
        write_equivalence_csv(report, out);
        if (!out.flush()) throw std::runtime_error("write failed: " + out_path);
    }
    return report.verdict ? 0 : 1;
}

int cmd_laplacian_demo(int dimension, double gamma_w, std::size_t mode_count, const Range& range,
                       const std::string& out_path) {
    const SpectrumModel spec = weyl_spectrum(dimension, gamma_w, mode_count);
    const double eps0 = 0.2, L0 = 2.0;
    const double r0 = 2.0 * L0 / eps0;
    const double r_cap = r0 * r0;
    const auto chain = ratio_subsequence(spec, r0, r_cap);
    std::vector<double> chain_modes;
    for (std::size_t idx : chain) chain_modes.push_back(spec.eigenvalues[idx]);

    const LogRegimeParams params(eps0, L0, r_cap, chain_modes.front());
    const double c_min_formula = params.sigma(params.n0());

    auto out = open_output(out_path);
    out << "# weyl spectrum: d = " << dimension << ", gamma = " << format_full(gamma_w)
        << ", modes = " << mode_count << "\n";
    out << "# ratio chain (R0 = " << format_full(r0) << ", R = " << format_full(r_cap) << "):";
    for (double lam : chain_modes) out << ' ' << format_full(lam);
    out << "\n";
    out << "c,log_regime_lower,c_times_construction,upper_general,modes_used\n";

    for (double c : range.points()) {
        // longest admissible chain prefix at this damping
        std::size_t n_used = 0;
        while (n_used < chain_modes.size() &&
               c >= std::sqrt(4.0 * L0 * chain_modes[n_used] / eps0))
            ++n_used;
        if (n_used == 0 || c < c_min_formula) continue;
        std::vector<double> prefix(chain_modes.begin(), chain_modes.begin() + n_used);
        const auto build = build_construction(eps0, L0, prefix, c);
        const double exact = evaluate_construction(build.construction, c).norm_v0;
        out << format_full(c) << ',' << format_full(log_regime_bound(params, c).bound.value) << ','
            << format_full(c * exact) << ',' << format_full(upper_bound_general(spec, c).value)
            << ',' << n_used << '\n';
    }
    if (!out.flush()) throw std::runtime_error("write failed: " + out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal ultimate-bound laboratory for u'' + c u' + A u = f"};
    app.require_subcommand(1);

    unsigned long long seed = 0;
    app.add_option("--seed", seed,
                   "seed for randomized stress tooling (current commands are deterministic)");

    double b = 1.0, c = 1.0, epsilon = 1.0, big_l = 2.0, gamma_w = 1.0, oracle_tol = 1e-9;
    int dimension = 1;
    std::size_t mode_count = 100;
    std::string axis = "b", range_text, modes_spec, out_path, functional = "velocity";
    std::vector<double> periods, horizons;

    auto* constants = app.add_subcommand("constants", "optimal and historical scalar constants");
    constants->add_option("--b", b, "stiffness b > 0")->required();
    constants->add_option("--c", c, "damping c > 0")->required();
    constants->add_option("--oracle-tol", oracle_tol, "oracle tolerance");

    auto* sweep = app.add_subcommand("sweep", "CSV sweep of constants along one axis");
    sweep->add_option("--axis", axis, "b | c | dimension | period");
    sweep->add_option("--range", range_text, "lo:hi:n[:log]")->required();
    sweep->add_option("--b", b, "fixed b (for c/period sweeps)");
    sweep->add_option("--c", c, "fixed c (for b/dimension/period sweeps)");
    sweep->add_option("--oracle-tol", oracle_tol, "oracle tolerance");
    sweep->add_option("--out", out_path, "output CSV path")->required();

    auto* construct = app.add_subcommand("construct", "n-mode worst-case construction report");
    construct->add_option("--epsilon", epsilon, "epsilon > 0")->required();
    construct->add_option("--length-l", big_l, "L > epsilon")->required();
    construct
        ->add_option("--modes", modes_spec,
                     "list | geom:l1:ratio:n | weyl:d:gamma:n | matrix:file | spectrum file")
        ->required();
    construct->add_option("--c", c, "damping c")->required();
    construct->add_option("--out", out_path, "forcing signal output path");

    auto* equivalence = app.add_subcommand("equivalence", "equivalence-of-bounds experiment");
    equivalence->add_option("--b", b, "stiffness b > 0")->required();
    equivalence->add_option("--c", c, "damping c > 0")->required();
    equivalence->add_option("--period", periods, "periods T (repeatable)")->required();
    equivalence->add_option("--horizon", horizons, "horizons h (repeatable)")->required();
    equivalence->add_option("--functional", functional, "velocity | position");
    equivalence->add_option("--out", out_path, "CSV summary path");

    auto* demo = app.add_subcommand("laplacian-demo", "synthetic spectrum (log c)^{1/2} regime");
    demo->add_option("--dimension", dimension, "spatial dimension d >= 1")->required();
    demo->add_option("--gamma", gamma_w, "counting-law constant")->required();
    demo->add_option("--modes", mode_count, "number of synthetic eigenvalues")->required();
    demo->add_option("--range", range_text, "damping range lo:hi:n[:log]")->required();
    demo->add_option("--out", out_path, "output CSV path")->required();

    try {
        app.parse(argc, argv);
        if (constants->parsed()) return cmd_constants(b, c, oracle_tol);
        if (sweep->parsed()) return cmd_sweep(axis, parse_range(range_text), b, c, oracle_tol, out_path);
        if (construct->parsed()) return cmd_construct(epsilon, big_l, modes_spec, c, out_path);
        if (equivalence->parsed())
            return cmd_equivalence(b, c, periods, horizons, functional, out_path);
        if (demo->parsed())
            return cmd_laplacian_demo(dimension, gamma_w, mode_count, parse_range(range_text),
                                      out_path);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "i/o or numerical error: " << e.what() << "\n";
        return 3;
    }
}
