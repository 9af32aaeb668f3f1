#include "ubound/signal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ubound/text.hpp"

namespace ubound {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ForcingSignal ForcingSignal::aperiodic(std::vector<double> breakpoints,
                                       std::vector<std::vector<double>> segment_values) {
    ForcingSignal f;
    if (segment_values.empty()) throw std::invalid_argument("ForcingSignal: empty channel list");
    if (segment_values.size() != breakpoints.size() + 1)
        throw std::invalid_argument("ForcingSignal: segment count must equal breakpoint count + 1");
    f.channels_ = segment_values.front().size();
    f.breakpoints_ = std::move(breakpoints);
    for (const auto& row : segment_values) {
        if (row.size() != f.channels_)
            throw std::invalid_argument("ForcingSignal: inconsistent channel counts");
        f.values_.insert(f.values_.end(), row.begin(), row.end());
    }
    f.validate();
    return f;
}

ForcingSignal ForcingSignal::periodic(std::vector<double> breakpoints,
                                      std::vector<std::vector<double>> segment_values,
                                      double period) {
    ForcingSignal f;
    if (segment_values.empty()) throw std::invalid_argument("ForcingSignal: empty channel list");
    if (breakpoints.empty())
        throw std::invalid_argument("ForcingSignal: periodic signal needs at least one breakpoint");
    if (segment_values.size() != breakpoints.size())
        throw std::invalid_argument("ForcingSignal: periodic segment count must equal breakpoint count");
    if (!(period > 0.0) || !std::isfinite(period))
        throw std::invalid_argument("ForcingSignal: period > 0 violated");
    f.channels_ = segment_values.front().size();
    f.breakpoints_ = std::move(breakpoints);
    f.period_ = period;
    for (const auto& row : segment_values) {
        if (row.size() != f.channels_)
            throw std::invalid_argument("ForcingSignal: inconsistent channel counts");
        f.values_.insert(f.values_.end(), row.begin(), row.end());
    }
    f.validate();
    return f;
}

void ForcingSignal::validate() const {
    if (channels_ == 0) throw std::invalid_argument("ForcingSignal: empty channel list");
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (!std::isfinite(breakpoints_[i]))
            throw std::invalid_argument("ForcingSignal: breakpoints must be finite");
        if (i > 0 && !(breakpoints_[i - 1] < breakpoints_[i]))
            throw std::invalid_argument("ForcingSignal: breakpoints must be strictly increasing");
    }
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("ForcingSignal: values must be finite");
    if (period_) {
        if (!(breakpoints_.back() - breakpoints_.front() < *period_))
            throw std::invalid_argument("ForcingSignal: breakpoints must span at most one period");
    }
}

std::size_t ForcingSignal::segment_index(double t) const {
    if (period_) {
        const double end = breakpoints_.back();
        const double T = *period_;
        double tp = t - T * std::ceil((t - end) / T);
        if (tp > end) tp -= T;
        if (tp <= end - T) tp += T;
        const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), tp);
        return static_cast<std::size_t>(std::min<std::ptrdiff_t>(
            it - breakpoints_.begin(), static_cast<std::ptrdiff_t>(breakpoints_.size()) - 1));
    }
    const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t);
    return static_cast<std::size_t>(it - breakpoints_.begin());
}

double ForcingSignal::value(double t, std::size_t channel) const {
    return values_[segment_index(t) * channels_ + channel];
}

void ForcingSignal::values(double t, std::span<double> out) const {
    const std::size_t seg = segment_index(t);
    for (std::size_t ch = 0; ch < channels_; ++ch) out[ch] = values_[seg * channels_ + ch];
}

std::span<const double> ForcingSignal::segment(std::size_t seg) const {
    return {values_.data() + seg * channels_, channels_};
}

double ForcingSignal::sup_norm() const {
    double best = 0.0;
    for (std::size_t seg = 0; seg < segment_count(); ++seg) {
        double sq = 0.0;
        for (std::size_t ch = 0; ch < channels_; ++ch) {
            const double v = values_[seg * channels_ + ch];
            sq += v * v;
        }
        best = std::max(best, sq);
    }
    return std::sqrt(best);
}

ForcingSignal ForcingSignal::shifted(double dt) const {
    ForcingSignal f = *this;
    for (double& bp : f.breakpoints_) bp += dt;
    return f;
}

std::vector<double> ForcingSignal::breakpoints_in(double t0, double t1) const {
    std::vector<double> out;
    if (!(t0 < t1)) return out;
    if (!period_) {
        for (double bp : breakpoints_)
            if (bp > t0 && bp < t1) out.push_back(bp);
        return out;
    }
    const double T = *period_;
    for (double bp : breakpoints_) {
        // bp + kT in (t0, t1)
        const auto k_lo = static_cast<long long>(std::floor((t0 - bp) / T)) - 1;
        const auto k_hi = static_cast<long long>(std::ceil((t1 - bp) / T)) + 1;
        for (long long k = k_lo; k <= k_hi; ++k) {
            const double t = bp + static_cast<double>(k) * T;
            if (t > t0 && t < t1) out.push_back(t);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void ForcingSignal::write(std::ostream& out) const {
    out << "# ubound-signal\n";
    out << "# channels," << channels_ << "\n";
    if (period_) out << "# period," << format_full(*period_) << "\n";
    const std::size_t segs = segment_count();
    for (std::size_t seg = 0; seg < segs; ++seg) {
        if (seg < breakpoints_.size())
            out << format_full(breakpoints_[seg]);
        else
            out << "inf";
        for (std::size_t ch = 0; ch < channels_; ++ch)
            out << ',' << format_full(values_[seg * channels_ + ch]);
        out << '\n';
    }
}

void ForcingSignal::write_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write(out);
    if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

ForcingSignal ForcingSignal::read(std::istream& in) {
    std::size_t channels = 0;
    bool have_channels = false;
    std::optional<double> period;
    std::vector<double> breakpoints;
    std::vector<std::vector<double>> rows;
    bool saw_inf_row = false;

    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            auto fields = split_csv(line.substr(1));
            if (fields.size() == 2 && fields[0] == "channels") {
                channels = static_cast<std::size_t>(parse_double(fields[1]));
                have_channels = true;
            } else if (fields.size() == 2 && fields[0] == "period") {
                period = parse_double(fields[1]);
            }
            continue;
        }
        if (!have_channels) throw std::runtime_error("signal file: missing '# channels' header");
        auto fields = split_csv(line);
        if (fields.size() != channels + 1)
            throw std::runtime_error("signal file: expected " + std::to_string(channels + 1) +
                                     " fields, got " + std::to_string(fields.size()));
        if (saw_inf_row) throw std::runtime_error("signal file: rows after the trailing segment");
        const double endpoint = parse_double(fields[0]);
        if (std::isinf(endpoint))
            saw_inf_row = true;
        else
            breakpoints.push_back(endpoint);
        std::vector<double> row(channels);
        for (std::size_t ch = 0; ch < channels; ++ch) row[ch] = parse_double(fields[ch + 1]);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("signal file: no segment rows");
    if (period) {
        if (saw_inf_row) throw std::runtime_error("signal file: periodic signal with 'inf' row");
        return periodic(std::move(breakpoints), std::move(rows), *period);
    }
    if (!saw_inf_row) throw std::runtime_error("signal file: aperiodic signal missing 'inf' row");
    return aperiodic(std::move(breakpoints), std::move(rows));
}

ForcingSignal ForcingSignal::read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return read(in);
}

namespace {

// Shared body for the two extremal signals: switches at the negated kernel
// zeros, alternating back from +1 on the last segment before zero.
ForcingSignal sign_tracking_forcing(const std::vector<double>& zeros_in, double horizon) {
    std::vector<double> zeros;
    for (double z : zeros_in)
        if (z < horizon) zeros.push_back(z);

    std::vector<double> breakpoints;
    std::vector<std::vector<double>> segments;
    breakpoints.push_back(-horizon);
    for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) breakpoints.push_back(-*it);
    breakpoints.push_back(0.0);

    segments.push_back({0.0});  // (-inf, -horizon]
    const std::size_t m = zeros.size();
    for (std::size_t j = 0; j <= m; ++j) {
        // segment covering s in [z_{m-j}, next), kernel sign (-1)^{m-j}
        const double sign = ((m - j) % 2 == 0) ? 1.0 : -1.0;
        segments.push_back({sign});
    }
    segments.push_back({0.0});  // (0, inf)
    return ForcingSignal::aperiodic(std::move(breakpoints), std::move(segments));
}

}  // namespace

ForcingSignal extremal_scalar_forcing(const RegimeData& r, double horizon) {
    if (!(horizon > 0.0))
        throw std::invalid_argument("extremal_scalar_forcing: horizon > 0 violated");
    return sign_tracking_forcing(kernel_sign_changes(r, horizon), horizon);
}

ForcingSignal extremal_position_forcing(const RegimeData& r, double horizon) {
    if (!(horizon > 0.0))
        throw std::invalid_argument("extremal_position_forcing: horizon > 0 violated");
    return sign_tracking_forcing(position_kernel_sign_changes(r, horizon), horizon);
}

std::vector<double> construction_switch_times(const ExtremalConstruction& con, double c) {
    if (!(c >= con.c_threshold))
        throw std::invalid_argument(
            "construction: c >= sqrt(4*L*lambda_n/epsilon) violated (threshold " +
            format_full(con.c_threshold) + ")");
    std::vector<double> times(con.modes.size());
    for (std::size_t i = 0; i < con.modes.size(); ++i) {
        const double beta = 2.0 * con.modes[i] / (c + std::sqrt(c * c - 4.0 * con.modes[i]));
        times[i] = con.epsilon / beta;
    }
    return times;
}

ConstructionBuild build_construction(double epsilon, double big_l, std::vector<double> modes,
                                     double c) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("build_construction: epsilon > 0 violated");
    if (!(big_l > epsilon))
        throw std::invalid_argument("build_construction: L > epsilon violated");
    const double margin = std::exp(-epsilon) - 2.0 * std::exp(-big_l);
    if (!(margin > 0.0))
        throw std::invalid_argument("build_construction: exp(-epsilon) - 2*exp(-L) > 0 violated");
    if (modes.empty()) throw std::invalid_argument("build_construction: empty mode list");
    for (double lam : modes)
        if (!(lam > 0.0) || !std::isfinite(lam))
            throw std::invalid_argument("build_construction: eigenvalues must be positive");
    const double ratio = 2.0 * big_l / epsilon;
    for (std::size_t i = 0; i + 1 < modes.size(); ++i) {
        if (!(modes[i + 1] >= ratio * modes[i]))
            throw std::invalid_argument(
                "build_construction: lambda[i+1] >= (2L/epsilon)*lambda[i] violated at i=" +
                std::to_string(i + 1) + " (ratio " + format_full(modes[i + 1] / modes[i]) +
                " < " + format_full(ratio) + ")");
    }

    ExtremalConstruction con;
    con.epsilon = epsilon;
    con.big_l = big_l;
    con.modes = std::move(modes);
    con.c_threshold = std::sqrt(4.0 * big_l * con.modes.back() / epsilon);
    const auto n = static_cast<double>(con.modes.size());
    con.guaranteed_gain = margin * std::sqrt(n + 3.0);
    con.damping = c;
    con.switch_times = construction_switch_times(con, c);

    // Channel i is -1 on (-T_{i-1}, -T_i]; channel n-1 flips to +1 on (-T_n, 0].
    const std::size_t nmodes = con.modes.size();
    std::vector<double> breakpoints;
    for (std::size_t i = 0; i < nmodes; ++i) breakpoints.push_back(-con.switch_times[i]);
    breakpoints.push_back(0.0);

    std::vector<std::vector<double>> segments(nmodes + 2, std::vector<double>(nmodes, 0.0));
    for (std::size_t j = 0; j < nmodes; ++j) segments[j][j] = -1.0;  // (-T_j, -T_{j+1}]
    segments[nmodes][nmodes - 1] = 1.0;                              // (-T_n, 0]
    ForcingSignal forcing = ForcingSignal::aperiodic(std::move(breakpoints), std::move(segments));
    return {std::move(con), std::move(forcing)};
}

ForcingSignal periodize(const ForcingSignal& f, double period) {
    if (f.period()) throw std::invalid_argument("periodize: signal is already periodic");
    if (!(period > 0.0) || !std::isfinite(period))
        throw std::invalid_argument("periodize: period > 0 violated");

    std::vector<double> breakpoints;
    for (double bp : f.breakpoints())
        if (bp > -period && bp < 0.0) breakpoints.push_back(bp);
    breakpoints.push_back(0.0);

    std::vector<std::vector<double>> segments;
    for (double bp : breakpoints) {
        std::vector<double> row(f.channels());
        f.values(bp, row);
        segments.push_back(std::move(row));
    }
    return ForcingSignal::periodic(std::move(breakpoints), std::move(segments), period);
}

}  // namespace ubound
