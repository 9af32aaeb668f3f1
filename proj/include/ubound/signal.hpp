#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ubound/scalar.hpp"

namespace ubound {

/// Multichannel piecewise-constant forcing term.
///
/// An aperiodic signal with breakpoints t1 < ... < tk has k+1 segments: the
/// leading (-inf, t1], the interior (t_{i-1}, t_i], and the trailing (tk, inf).
/// A periodic signal with period T stores its breakpoints inside one window
/// (tk - T, tk] and has exactly k segments. Segments are left-open and
/// right-closed throughout.
class ForcingSignal {
public:
    static ForcingSignal aperiodic(std::vector<double> breakpoints,
                                   std::vector<std::vector<double>> segment_values);
    static ForcingSignal periodic(std::vector<double> breakpoints,
                                  std::vector<std::vector<double>> segment_values, double period);

    std::size_t channels() const { return channels_; }
    std::size_t segment_count() const { return values_.size() / channels_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    std::optional<double> period() const { return period_; }

    /// Value of one channel at time t.
    double value(double t, std::size_t channel) const;
    /// Values of all channels at time t, written to `out` (size = channels).
    void values(double t, std::span<double> out) const;
    /// Per-channel values of segment `seg` (0 = leading segment).
    std::span<const double> segment(std::size_t seg) const;

    /// Max over segments of the Euclidean norm across channels.
    double sup_norm() const;

    /// Same signal translated by dt (breakpoints shifted, values unchanged).
    ForcingSignal shifted(double dt) const;

    /// All discontinuity times in the open interval (t0, t1), sorted. Periodic
    /// signals tile their window.
    std::vector<double> breakpoints_in(double t0, double t1) const;

    // Text serialization: '#'-prefixed header lines (channels, period), then
    // one row per segment as "right-endpoint,v1,...,vn" with 17 significant
    // digits; the trailing aperiodic segment uses "inf".
    void write(std::ostream& out) const;
    void write_file(const std::string& path) const;
    static ForcingSignal read(std::istream& in);
    static ForcingSignal read_file(const std::string& path);

private:
    ForcingSignal() = default;
    void validate() const;
    std::size_t segment_index(double t) const;

    std::size_t channels_ = 0;
    std::vector<double> breakpoints_;
    std::vector<double> values_;  // segment-major, channels per segment
    std::optional<double> period_;
};

/// Unit bang-bang forcing on [-horizon, 0] whose sign tracks the velocity
/// kernel: f(-s) = sign(g(s)). Drives the globally bounded solution to
/// |u'(0)| = integral of |g| over [0, horizon].
ForcingSignal extremal_scalar_forcing(const RegimeData& r, double horizon);

/// Position-kernel variant: f(-s) = sign(G(s)) (constant +1 unless oscillatory).
ForcingSignal extremal_position_forcing(const RegimeData& r, double horizon);

/// The n-mode worst-case construction: parameters, switch times and the
/// damping threshold above which the lower-bound guarantee holds.
struct ExtremalConstruction {
    double epsilon = 0.0;              ///< small exponent, e^{-eps} term
    double big_l = 0.0;                ///< large exponent, 2 e^{-L} term
    std::vector<double> modes;         ///< eigenvalues lambda_1 <= ... <= lambda_n
    double damping = 0.0;              ///< the c the switch times below were built at
    std::vector<double> switch_times;  ///< T_1 > ... > T_n (T_0 = +inf implied)
    double c_threshold = 0.0;          ///< sqrt(4 L lambda_n / eps)
    double guaranteed_gain = 0.0;      ///< (e^{-eps} - 2 e^{-L}) sqrt(n+3)
};

struct ConstructionBuild {
    ExtremalConstruction construction;
    ForcingSignal forcing;
};

/// Build the n-channel construction forcing: channel i is -1 on
/// (-T_{i-1}, -T_i] and channel n flips to +1 on (-T_n, 0]. Rejects parameter
/// triples that violate the lemma hypotheses, naming the failed inequality.
ConstructionBuild build_construction(double epsilon, double big_l, std::vector<double> modes,
                                     double c);

/// Switch times T_i = eps / beta_i(c) for an admissible damping c.
std::vector<double> construction_switch_times(const ExtremalConstruction& con, double c);

/// T-periodic signal agreeing with `f` on the window (-T, 0].
ForcingSignal periodize(const ForcingSignal& f, double period);

}  // namespace ubound
