#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "crnkit/ode.hpp"
#include "crnkit/parser.hpp"

using namespace crnkit;

TEST_CASE("blow-up of dz/dt = z^2 + z is located at ln 2") {
    MassActionSystem sys(parse_network("A <-> 2A : 1, 2\n2A <-> 3A : 3, 1\n3A -> 4A : 1\n"));
    auto res = ode_integrate(sys, {1.0}, 10.0);
    REQUIRE(res.blew_up);
    CHECK(res.blow_up_time == Catch::Approx(std::log(2.0)).margin(1e-3));
    CHECK(res.blow_up_bracket.lo <= res.blow_up_time);
    CHECK(res.blow_up_bracket.hi >= res.blow_up_time - 1e-12);
}

TEST_CASE("closed-form check on the logistic-type solution") {
    // z' = z^2 + z with z(0) = 1 solves to e^t / (2 - e^t); compare at t=0.5.
    auto res = ode_integrate_rhs(
        [](const Concentrations& z) { return Concentrations{z[0] * z[0] + z[0]}; }, {1.0}, 0.5);
    double expected = std::exp(0.5) / (2.0 - std::exp(0.5));
    CHECK(res.final_state[0] == Catch::Approx(expected).epsilon(1e-8));
}

TEST_CASE("three-species model settles at (1,1,1) with no blow-up flag") {
    MassActionSystem sys(parse_network(
        "0 <-> A : 1, 1\nA <-> B : 1, 1\n2C -> 3C : 1\n3C + A -> 2C + A : 1\n"));
    auto res = ode_integrate(sys, {2.0, 2.0, 2.0}, 50.0);
    REQUIRE_FALSE(res.blew_up);
    for (double v : res.final_state) CHECK(v == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("the zero state is a fixed point without inflow reactions") {
    MassActionSystem sys(parse_network("A + B -> 3B : 1\n3B -> A + B : 1\n"));
    auto res = ode_integrate(sys, {0.0, 0.0}, 25.0);
    CHECK_FALSE(res.blew_up);
    CHECK(res.final_state[0] == 0.0);
    CHECK(res.final_state[1] == 0.0);
}

TEST_CASE("step-size underflow without growth raises a stiffness error") {
    // A bounded but wildly oscillating right-hand side with an absurd h_min.
    OdeConfig cfg;
    cfg.h_min = 1e-2;
    cfg.rtol = 1e-12;
    cfg.atol = 1e-14;
    auto rhs = [](const Concentrations& z) {
        return Concentrations{std::sin(1e6 * z[0]) - 0.1 * z[0]};
    };
    CHECK_THROWS_AS(ode_integrate_rhs(rhs, {1.0}, 10.0, cfg), StiffnessError);
}

TEST_CASE("sampled output honours the sampling interval") {
    OdeConfig cfg;
    cfg.sample_interval = 0.25;
    auto res = ode_integrate_rhs(
        [](const Concentrations& z) { return Concentrations{-z[0]}; }, {1.0}, 1.0, cfg);
    CHECK_FALSE(res.blew_up);
    CHECK(res.final_state[0] == Catch::Approx(std::exp(-1.0)).epsilon(1e-8));
    CHECK(res.times.size() <= 6);  // t=0 plus at most one record per interval crossing
}

TEST_CASE("dimension and sign preconditions") {
    MassActionSystem sys(parse_network("0 -> A : 1\n"));
    CHECK_THROWS_AS(ode_integrate(sys, {1.0, 2.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ode_integrate(sys, {-1.0}, 1.0), std::invalid_argument);
}
