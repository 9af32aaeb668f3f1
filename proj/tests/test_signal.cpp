#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "ubound/signal.hpp"

using namespace ubound;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("signal construction and segment lookup") {
    auto f = ForcingSignal::aperiodic({-1.0, 2.0}, {{0.5}, {-1.0}, {3.0}});
    CHECK(f.channels() == 1);
    CHECK(f.segment_count() == 3);
    CHECK(f.value(-5.0, 0) == 0.5);
    CHECK(f.value(-1.0, 0) == 0.5);   // right-closed
    CHECK(f.value(-0.999, 0) == -1.0);
    CHECK(f.value(2.0, 0) == -1.0);
    CHECK(f.value(2.0001, 0) == 3.0);
    CHECK(f.sup_norm() == 3.0);

    CHECK_THROWS_AS(ForcingSignal::aperiodic({2.0, -1.0}, {{1.0}, {1.0}, {1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ForcingSignal::aperiodic({0.0}, {{}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(ForcingSignal::aperiodic({0.0}, {{1.0}}), std::invalid_argument);
}

TEST_CASE("periodic signal wraps its window") {
    // window (-2, 0], segments (-2, -1] -> 1, (-1, 0] -> -1
    auto f = ForcingSignal::periodic({-1.0, 0.0}, {{1.0}, {-1.0}}, 2.0);
    CHECK(f.segment_count() == 2);
    CHECK(f.value(-0.5, 0) == -1.0);
    CHECK(f.value(-1.5, 0) == 1.0);
    CHECK(f.value(0.5, 0) == 1.0);    // wraps to (-2, -1]
    CHECK(f.value(2.0, 0) == -1.0);   // exactly one period later
    CHECK(f.value(-3.7, 0) == f.value(-3.7 + 2.0, 0));
    CHECK(f.value(-3.7, 0) == f.value(-3.7 + 20.0, 0));

    // breakpoints must fit in one period
    CHECK_THROWS_AS(ForcingSignal::periodic({-3.0, 0.0}, {{1.0}, {2.0}}, 2.0),
                    std::invalid_argument);
}

TEST_CASE("extremal scalar forcing switches at the kernel zeros") {
    const RegimeData non_osc = classify_regime(ScalarParams(2.0, 3.0));
    auto f = extremal_scalar_forcing(non_osc, 10.0);
    CHECK(f.channels() == 1);
    CHECK(f.value(-0.1, 0) == 1.0);
    CHECK(f.value(0.0, 0) == 1.0);
    CHECK(f.value(-std::log(2.0) + 1e-9, 0) == 1.0);
    CHECK(f.value(-std::log(2.0) - 1e-9, 0) == -1.0);
    CHECK(f.value(-9.9, 0) == -1.0);
    CHECK(f.value(-10.0, 0) == 0.0);
    CHECK(f.value(0.1, 0) == 0.0);
    CHECK(f.sup_norm() == 1.0);

    // critical zero at s = 2/c = 1 for (b, c) = (1, 2)
    const RegimeData critical = classify_regime(ScalarParams(1.0, 2.0));
    auto g = extremal_scalar_forcing(critical, 10.0);
    CHECK(g.value(-0.5, 0) == 1.0);
    CHECK(g.value(-1.5, 0) == -1.0);

    const RegimeData osc = classify_regime(ScalarParams(2.0, 2.0));
    auto h = extremal_scalar_forcing(osc, 10.0);
    CHECK(h.value(-kPi / 4.0 + 1e-9, 0) == 1.0);
    CHECK(h.value(-kPi / 4.0 - 1e-9, 0) == -1.0);
    CHECK(h.value(-kPi / 4.0 - kPi - 1e-9, 0) == 1.0);
    CHECK(h.value(-kPi / 4.0 - 2.0 * kPi - 1e-9, 0) == -1.0);
    CHECK(h.sup_norm() == 1.0);
}

TEST_CASE("extremal position forcing") {
    // G > 0 for non-oscillatory parameters: constant +1 on the support
    const RegimeData non_osc = classify_regime(ScalarParams(2.0, 3.0));
    auto f = extremal_position_forcing(non_osc, 5.0);
    CHECK(f.value(-4.9, 0) == 1.0);
    CHECK(f.value(-0.1, 0) == 1.0);

    const RegimeData osc = classify_regime(ScalarParams(2.0, 2.0));
    auto g = extremal_position_forcing(osc, 10.0);
    CHECK(g.value(-kPi + 1e-9, 0) == 1.0);
    CHECK(g.value(-kPi - 1e-9, 0) == -1.0);
}

TEST_CASE("construction build and validation") {
    auto build = build_construction(1.0, 2.0, {4.0, 16.0, 64.0}, 23.0);
    const ExtremalConstruction& con = build.construction;
    CHECK(con.c_threshold == doctest::Approx(std::sqrt(512.0)).epsilon(1e-14));
    CHECK(con.guaranteed_gain == doctest::Approx(0.23811214148077759).epsilon(1e-12));
    REQUIRE(con.switch_times.size() == 3);
    CHECK(con.switch_times[0] == doctest::Approx(5.7061879132265311).epsilon(1e-12));
    CHECK(con.switch_times[1] == doctest::Approx(1.3926205829014945).epsilon(1e-12));
    CHECK(con.switch_times[2] == doctest::Approx(0.30877118470201802).epsilon(1e-12));
    CHECK(con.switch_times[0] > con.switch_times[1]);
    CHECK(con.switch_times[1] > con.switch_times[2]);

    const ForcingSignal& f = build.forcing;
    CHECK(f.channels() == 3);
    // one active unit channel per support segment
    CHECK(f.value(-6.0, 0) == -1.0);
    CHECK(f.value(-6.0, 1) == 0.0);
    CHECK(f.value(-3.0, 1) == -1.0);
    CHECK(f.value(-1.0, 2) == -1.0);
    CHECK(f.value(-0.1, 2) == 1.0);
    CHECK(f.value(0.5, 2) == 0.0);
    CHECK(f.sup_norm() == 1.0);

    // rejections name the violated inequality
    CHECK_THROWS_WITH_AS(build_construction(2.0, 1.0, {4.0}, 23.0),
                         doctest::Contains("L > epsilon"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(build_construction(1.0, 2.0, {4.0, 8.0, 32.0}, 23.0),
                         doctest::Contains("(2L/epsilon)"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(build_construction(1.0, 2.0, {4.0, 16.0, 64.0}, 22.6),
                         doctest::Contains("sqrt(4*L*lambda_n/epsilon)"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(build_construction(0.1, 0.2, {4.0}, 100.0),
                         doctest::Contains("exp(-epsilon) - 2*exp(-L)"), std::invalid_argument);
    CHECK_THROWS_AS(build_construction(1.0, 2.0, {}, 23.0), std::invalid_argument);
    CHECK_THROWS_AS(build_construction(1.0, 2.0, {-4.0}, 23.0), std::invalid_argument);
}

TEST_CASE("single-mode construction degenerates to one switch") {
    auto build = build_construction(1.0, 2.0, {4.0}, 10.0);
    const ForcingSignal& f = build.forcing;
    CHECK(f.channels() == 1);
    const double t1 = build.construction.switch_times[0];
    CHECK(f.value(-t1 - 0.01, 0) == -1.0);
    CHECK(f.value(-t1 + 0.01, 0) == 1.0);
    CHECK(f.value(0.0, 0) == 1.0);
    CHECK(f.value(0.01, 0) == 0.0);
}

TEST_CASE("periodize") {
    // constant signal stays constant
    auto constant = ForcingSignal::aperiodic({}, {{3.0}});
    auto tiled = periodize(constant, 5.0);
    CHECK(tiled.period().has_value());
    CHECK(*tiled.period() == 5.0);
    CHECK(tiled.value(-100.0, 0) == 3.0);
    CHECK(tiled.value(17.3, 0) == 3.0);
    CHECK(tiled.sup_norm() <= constant.sup_norm());

    // extremal window repeats
    const RegimeData r = classify_regime(ScalarParams(2.0, 3.0));
    auto extremal = extremal_scalar_forcing(r, 10.0);
    auto periodic = periodize(extremal, 10.0);
    for (double t : {-0.1, -0.7, -5.0, -9.99}) {
        CHECK(periodic.value(t, 0) == extremal.value(t, 0));
        CHECK(periodic.value(t - 10.0, 0) == extremal.value(t, 0));
        CHECK(periodic.value(t + 30.0, 0) == extremal.value(t, 0));
    }
    CHECK(periodic.sup_norm() <= extremal.sup_norm());

    // breakpoints outside the window are dropped
    auto wide = ForcingSignal::aperiodic({-15.0, -3.0}, {{1.0}, {2.0}, {4.0}});
    auto clipped = periodize(wide, 10.0);
    CHECK(clipped.breakpoints().size() == 2);  // {-3, 0}
    CHECK(clipped.value(-5.0, 0) == 2.0);
    CHECK(clipped.value(-1.0, 0) == 4.0);
    CHECK(clipped.sup_norm() <= wide.sup_norm());

    CHECK_THROWS_AS(periodize(periodic, 10.0), std::invalid_argument);
}

TEST_CASE("shift and breakpoint enumeration") {
    const RegimeData r = classify_regime(ScalarParams(2.0, 3.0));
    auto f = extremal_scalar_forcing(r, 10.0);
    auto g = f.shifted(10.0);
    CHECK(g.value(10.0, 0) == f.value(0.0, 0));
    CHECK(g.value(4.0, 0) == f.value(-6.0, 0));

    // shifted breakpoints are {0, 10 - ln2, 10}; only the switch is interior
    auto bps = g.breakpoints_in(0.0, 10.0);
    CHECK(bps.size() == 1);

    auto periodic = periodize(f, 10.0);
    auto tiledbps = periodic.breakpoints_in(0.0, 25.0);
    for (std::size_t i = 1; i < tiledbps.size(); ++i) CHECK(tiledbps[i] > tiledbps[i - 1]);
    CHECK(tiledbps.size() == 4);  // switch and period edge, twice each
}

TEST_CASE("signal io round-trips exactly") {
    std::mt19937 rng(987321);
    std::uniform_int_distribution<int> nch(1, 4), nbp(0, 6);
    std::uniform_real_distribution<double> val(-3.0, 3.0), step(1e-6, 2.0);
    for (int iter = 0; iter < 40; ++iter) {
        const int channels = nch(rng);
        const int k = nbp(rng);
        std::vector<double> bps;
        double t = val(rng);
        for (int i = 0; i < k; ++i) {
            bps.push_back(t);
            t += step(rng);
        }
        const bool make_periodic = (iter % 3 == 0) && k > 0;
        std::vector<std::vector<double>> rows;
        const int segments = make_periodic ? k : k + 1;
        for (int s = 0; s < segments; ++s) {
            std::vector<double> row(channels);
            for (auto& x : row) x = val(rng);
            rows.push_back(row);
        }
        ForcingSignal f = make_periodic
                              ? ForcingSignal::periodic(bps, rows, bps.back() - bps.front() + step(rng))
                              : ForcingSignal::aperiodic(bps, rows);

        std::stringstream buffer;
        f.write(buffer);
        ForcingSignal g = ForcingSignal::read(buffer);
        REQUIRE(g.channels() == f.channels());
        REQUIRE(g.breakpoints().size() == f.breakpoints().size());
        for (std::size_t i = 0; i < f.breakpoints().size(); ++i)
            CHECK(g.breakpoints()[i] == f.breakpoints()[i]);  // bitwise round-trip
        REQUIRE(g.segment_count() == f.segment_count());
        for (std::size_t s = 0; s < f.segment_count(); ++s)
            for (int ch = 0; ch < channels; ++ch) CHECK(g.segment(s)[ch] == f.segment(s)[ch]);
        CHECK(g.period().has_value() == f.period().has_value());
        if (f.period()) CHECK(*g.period() == *f.period());
    }
}

TEST_CASE("signal io rejects malformed input") {
    auto parse = [](const char* text) {
        std::stringstream in(text);
        return ForcingSignal::read(in);
    };
    // decreasing breakpoints
    CHECK_THROWS_AS(parse("# channels,1\n1,1\n0.5,2\ninf,0\n"), std::invalid_argument);
    // missing channels header
    CHECK_THROWS_AS(parse("0,1\ninf,0\n"), std::runtime_error);
    // wrong field count
    CHECK_THROWS_AS(parse("# channels,2\n0,1\ninf,0,0\n"), std::runtime_error);
    // no trailing segment for aperiodic data
    CHECK_THROWS_AS(parse("# channels,1\n0,1\n1,2\n"), std::runtime_error);
    // no rows at all
    CHECK_THROWS_AS(parse("# channels,1\n"), std::runtime_error);
    // garbage number
    CHECK_THROWS_AS(parse("# channels,1\n0,xyz\ninf,0\n"), std::runtime_error);
}

TEST_CASE("periodization never increases the sup norm") {
    std::mt19937 rng(2468);
    std::uniform_int_distribution<int> nch(1, 3), nbp(1, 8);
    std::uniform_real_distribution<double> val(-5.0, 5.0), step(0.1, 3.0), period(0.5, 12.0);
    for (int iter = 0; iter < 50; ++iter) {
        const int channels = nch(rng);
        const int k = nbp(rng);
        std::vector<double> bps;
        double t = -10.0 * step(rng);
        for (int i = 0; i < k; ++i) {
            bps.push_back(t);
            t += step(rng);
        }
        std::vector<std::vector<double>> rows;
        for (int s = 0; s <= k; ++s) {
            std::vector<double> row(channels);
            for (auto& x : row) x = val(rng);
            rows.push_back(row);
        }
        auto f = ForcingSignal::aperiodic(bps, rows);
        auto g = periodize(f, period(rng));
        CHECK(g.sup_norm() <= f.sup_norm() + 1e-15);
    }
}

TEST_CASE("generated signals have unit sup norm") {
    std::mt19937 rng(555);
    std::uniform_real_distribution<double> logb(-3.0, 6.0), logc(-2.0, 4.0);
    for (int i = 0; i < 30; ++i) {
        const double b = std::exp2(logb(rng)), c = std::exp2(logc(rng));
        const RegimeData r = classify_regime(ScalarParams(b, c));
        auto f = extremal_scalar_forcing(r, 20.0 / std::min(1.0, c));
        CHECK(f.sup_norm() <= 1.0 + 1e-15);
        CHECK(f.sup_norm() == 1.0);
    }
}
