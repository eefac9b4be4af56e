#include <catch2/catch_amalgamated.hpp>

#include "crnkit/kinetics.hpp"
#include "crnkit/network.hpp"
#include "crnkit/parser.hpp"

using namespace crnkit;

namespace {

// Ordering (A, B): 0 <-> A, A+B <-> 3B, all rate constants 1.
ReactionNetwork acr_network() {
    return parse_network("0 <-> A : 1, 1\nA + B <-> 3B : 1, 1\n");
}

// Birth-death network with rates x^4 up, x^2 (x-1)^2 down.
ReactionNetwork quartic_bd_network() {
    return parse_network(
        "A <-> 2A : 1, 2\n"
        "2A <-> 3A : 7, 4\n"
        "3A <-> 4A : 6, 1\n"
        "4A -> 5A : 1\n");
}

}  // namespace

TEST_CASE("reaction vectors are product minus source") {
    // A + B -> 3B with ordering (A, B)
    Reaction r(Complex({1, 1}), Complex({0, 3}), 1.0);
    CHECK(reaction_vector(r) == std::vector<std::int64_t>{-1, 2});

    Reaction rev(Complex({0, 3}), Complex({1, 1}), 1.0);
    CHECK(reaction_vector(rev) == std::vector<std::int64_t>{1, -2});
}

TEST_CASE("reversal negates the reaction vector") {
    Reaction r(Complex({2, 0, 1}), Complex({0, 1, 3}), 0.5);
    auto zeta = reaction_vector(r);
    auto back = reaction_vector(reverse(r, 1.0));
    for (std::size_t i = 0; i < zeta.size(); ++i) CHECK(back[i] == -zeta[i]);
}

TEST_CASE("self-loop reactions cannot be constructed") {
    CHECK_THROWS_AS(Reaction(Complex({1, 0}), Complex({1, 0}), 1.0), std::invalid_argument);
}

TEST_CASE("non-positive rate constants are rejected") {
    CHECK_THROWS_AS(Reaction(Complex({1}), Complex({2}), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Reaction(Complex({1}), Complex({2}), -1.0), std::invalid_argument);
}

TEST_CASE("network invariants") {
    CHECK_THROWS_AS(ReactionNetwork({}, {Reaction(Complex({1}), Complex({2}), 1.0)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ReactionNetwork({"A"}, {}), std::invalid_argument);
    CHECK_THROWS_AS(ReactionNetwork({"A", "A"}, {Reaction(Complex({1, 0}), Complex({2, 0}), 1.0)}),
                    std::invalid_argument);
    // Duplicate (source, product) pairs are rejected; merge constants upstream.
    CHECK_THROWS_AS(ReactionNetwork({"A"}, {Reaction(Complex({1}), Complex({2}), 1.0),
                                            Reaction(Complex({1}), Complex({2}), 2.0)}),
                    std::invalid_argument);
}

TEST_CASE("birth-death network aggregates to x^4 up and x^2(x-1)^2 down") {
    auto spec = as_ctmc(quartic_bd_network());
    auto ts = spec.neighbors(State{3});
    REQUIRE(ts.size() == 2);
    std::map<std::int64_t, double> by_target;
    for (const auto& t : ts) by_target[t.target[0]] = t.rate;
    CHECK(by_target[4] == 81.0);   // 3^4
    CHECK(by_target[2] == 36.0);   // 9 * 4
}

TEST_CASE("mass-action chain at the origin") {
    auto spec = as_ctmc(acr_network());
    auto ts = spec.neighbors(State{0, 0});
    REQUIRE(ts.size() == 1);  // only 0 -> A can fire
    CHECK(ts[0].target == State{1, 0});
    CHECK(ts[0].rate == 1.0);
}

TEST_CASE("states with no active reaction are absorbing") {
    // A + B -> 3B alone: nothing fires at (1, 0).
    auto net = parse_network("A + B -> 3B : 1\n");
    auto spec = as_ctmc(net);
    CHECK(spec.neighbors(State{1, 0}).empty());
    CHECK(total_rate(spec, State{1, 0}) == 0.0);
}

TEST_CASE("neighbor rates sum to the total intensity") {
    MassActionSystem sys(acr_network());
    auto spec = as_ctmc(sys);
    for (std::int64_t a = 0; a <= 6; ++a) {
        for (std::int64_t b = 0; b <= 6; ++b) {
            State x{a, b};
            CHECK(total_rate(spec, x) == Catch::Approx(total_intensity(sys, x)).margin(1e-12));
        }
    }
}

TEST_CASE("mass-action targets never go negative") {
    for (const auto& net : {acr_network(), quartic_bd_network()}) {
        auto spec = as_ctmc(net);
        const std::size_t d = net.species_count();
        std::vector<State> probes;
        if (d == 1)
            for (std::int64_t v = 0; v <= 12; ++v) probes.push_back(State{v});
        else
            for (std::int64_t a = 0; a <= 8; ++a)
                for (std::int64_t b = 0; b <= 8; ++b) probes.push_back(State{a, b});
        for (const auto& x : probes)
            for (const auto& t : spec.neighbors(x))
                for (auto v : t.target) CHECK(v >= 0);
    }
}

TEST_CASE("complex list derives distinct complexes in first-appearance order") {
    auto net = acr_network();
    auto cs = net.complexes();
    REQUIRE(cs.size() == 4);
    CHECK(cs[0] == Complex({0, 0}));
    CHECK(cs[1] == Complex({1, 0}));
    CHECK(cs[2] == Complex({1, 1}));
    CHECK(cs[3] == Complex({0, 3}));
}

TEST_CASE("generic chains and reaction networks share the oracle type") {
    // Absorbing single-state chain built by hand.
    CtmcSpec spec = make_ctmc(1, [](const State&) { return std::vector<Transition>{}; }, 0);
    CHECK(total_rate(spec, State{7}) == 0.0);
    CHECK(spec.neighbors(State{7}).empty());
}
