#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ubound/equivalence.hpp"
#include "ubound/signal.hpp"

using namespace ubound;

TEST_CASE("equivalence experiment converges for (b, c) = (2, 3)") {
    const auto report =
        run_equivalence(ScalarParams(2.0, 3.0), {5.0, 10.0, 20.0}, {5.0, 10.0, 20.0});
    CHECK(report.verdict);
    CHECK(std::abs(report.ob_g0 - 0.5) <= 1e-9);
    CHECK(report.tail_model.rate == doctest::Approx(1.0));

    REQUIRE(report.periodic.size() == 3);
    for (const auto& cell : report.periodic) {
        CHECK(cell.pass);
        CHECK(cell.achieved_gap <= cell.predicted_gap + report.oracle_tolerance);
    }
    // gaps shrink at the exponential rate of the tail model
    CHECK(report.periodic[1].achieved_gap <
          report.periodic[0].achieved_gap * std::exp(-5.0) * 1.01);
    CHECK(report.periodic[2].achieved_gap <
          report.periodic[1].achieved_gap * std::exp(-5.0) * 1.01);

    REQUIRE(report.ultimate.size() == 3);
    double prev = -1.0;
    for (const auto& cell : report.ultimate) {
        CHECK(cell.pass);
        CHECK(cell.estimate <= report.ob_g0 + report.oracle_tolerance);
        CHECK(cell.estimate >= prev);
        prev = cell.estimate;
    }
    CHECK(std::abs(report.ultimate.back().estimate - report.ob_g0) <= 1e-6);
}

TEST_CASE("periodic estimate at T = 40 hits the critical constant to 1e-8") {
    const auto report = run_equivalence(ScalarParams(1.0, 2.0), {40.0}, {40.0});
    CHECK(report.verdict);
    CHECK(std::abs(report.periodic[0].estimate - 2.0 / std::exp(1.0)) <= 1e-8);
    CHECK(std::abs(report.ultimate[0].estimate - 2.0 / std::exp(1.0)) <= 1e-6);
}

TEST_CASE("oscillatory problem converges once T exceeds 40 / decay rate") {
    // (2, 2): rate = 1, so T = h = 40 is the 40/delta mark
    const auto report = run_equivalence(ScalarParams(2.0, 2.0), {40.0}, {40.0});
    CHECK(report.verdict);
    CHECK(report.periodic[0].achieved_gap <= 1e-6);
    CHECK(report.ultimate[0].achieved_gap <= 1e-6);
}

TEST_CASE("position functional variant") {
    const auto report = run_equivalence(ScalarParams(1.0, 1.0), {20.0, 30.0}, {20.0, 30.0},
                                        StateFunctional::PositionNorm);
    CHECK(report.verdict);
    CHECK(std::abs(report.ob_g0 - 1.3895820002461531) <= 1e-9);
    for (const auto& cell : report.periodic) CHECK(cell.pass);
}

TEST_CASE("zero-forcing control run") {
    // all estimates vanish when the forcing is identically zero
    auto zero = ForcingSignal::aperiodic({}, {{0.0}});
    auto sol = periodic_solution({2.0}, 3.0, periodize(zero, 10.0));
    CHECK(std::abs(sol.at_zero.v[0]) <= 1e-14);
    auto traj = evolve_exact({2.0}, 3.0, zero, ModalState::zero(1), 10.0, 1.0);
    CHECK(ultimate_sup_estimator(traj, 0.0, StateFunctional::VelocityNorm) <= 1e-14);
    CHECK(ultimate_sup_estimator(traj, 0.0, StateFunctional::PositionNorm) <= 1e-14);
}

TEST_CASE("report export") {
    const auto report = run_equivalence(ScalarParams(2.0, 3.0), {5.0, 10.0}, {5.0});
    std::stringstream csv;
    write_equivalence_csv(report, csv);
    std::string text = csv.str();
    CHECK(text.find("kind,parameter,estimate,achieved_gap,predicted_gap,pass") != std::string::npos);
    CHECK(text.find("periodic,5") != std::string::npos);
    CHECK(text.find("ultimate,5") != std::string::npos);

    std::stringstream pretty;
    print_equivalence(report, pretty);
    CHECK(pretty.str().find("verdict: PASS") != std::string::npos);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(run_equivalence(ScalarParams(2.0, 3.0), {}, {5.0}), std::invalid_argument);
    CHECK_THROWS_AS(run_equivalence(ScalarParams(2.0, 3.0), {5.0}, {}), std::invalid_argument);
    CHECK_THROWS_AS(run_equivalence(ScalarParams(2.0, 3.0), {5.0, 5.0}, {5.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_equivalence(ScalarParams(2.0, 3.0), {10.0, 5.0}, {5.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        run_equivalence(ScalarParams(2.0, 3.0), {5.0}, {5.0}, StateFunctional::Energy),
        std::invalid_argument);
}
