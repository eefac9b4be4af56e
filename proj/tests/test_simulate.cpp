#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <sstream>

#include "crnkit/chains.hpp"
#include "crnkit/parser.hpp"
#include "crnkit/simulate.hpp"

using namespace crnkit;

namespace {

CtmcSpec exchange_chain() {  // 0 <-> A with unit rates
    return as_ctmc(parse_network("0 <-> A : 1, 1\n"));
}

}  // namespace

TEST_CASE("identical configuration reproduces the trajectory byte for byte") {
    auto spec = exchange_chain();
    SimConfig cfg;
    cfg.seed = 123;
    cfg.time_horizon = 50.0;
    auto a = ssa_run(spec, State{0}, cfg);
    auto b = ssa_run(spec, State{0}, cfg);
    CHECK(a == b);
    cfg.stream = 1;
    auto c = ssa_run(spec, State{0}, cfg);
    CHECK_FALSE(a == c);
}

TEST_CASE("pure birth with quadratic rates escapes every budget quickly") {
    auto spec = make_pure_birth_chain([](std::int64_t x) { return double(x) * double(x); }, 1);
    SimConfig cfg;
    cfg.seed = 7;
    cfg.time_horizon = 1e6;
    cfg.max_jumps = 1'000'000;
    cfg.state_norm_cap = 1e5;
    cfg.record = RecordMode::Summary;
    auto traj = ssa_run(spec, State{1}, cfg);
    CHECK(traj.outcome != SimOutcome::HorizonReached);
    CHECK(traj.elapsed < 10.0);  // sum of 1/x^2 holding times
}

TEST_CASE("absorbing states hold to the horizon") {
    auto absorbing = make_ctmc(1, [](const State&) { return std::vector<Transition>{}; }, 0);
    SimConfig cfg;
    cfg.time_horizon = 5.0;
    auto traj = ssa_run(absorbing, State{3}, cfg);
    CHECK(traj.outcome == SimOutcome::HorizonReached);
    CHECK(traj.jump_count == 0);
    CHECK(traj.elapsed == 5.0);
    auto occ = empirical_occupancy(traj);
    CHECK(occ.at(State{3}) == 1.0);
}

TEST_CASE("jump times increase strictly and counts match") {
    auto spec = exchange_chain();
    SimConfig cfg;
    cfg.seed = 99;
    cfg.time_horizon = 100.0;
    auto traj = ssa_run(spec, State{0}, cfg);
    REQUIRE(traj.times.size() == traj.states.size());
    CHECK(traj.jump_count == traj.times.size() - 1);
    for (std::size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
}

TEST_CASE("no trajectory of a network-derived chain goes negative") {
    auto spec = as_ctmc(parse_network("0 <-> A : 1, 1\nA + B <-> 3B : 1, 1\n"));
    SimConfig cfg;
    cfg.seed = 11;
    cfg.time_horizon = 200.0;
    auto traj = ssa_run(spec, State{0, 0}, cfg);
    for (const auto& s : traj.states)
        for (auto v : s) CHECK(v >= 0);
}

TEST_CASE("empirical transition frequencies match the jump chain on a 3-state truncation") {
    // 0 <-> A truncated at A <= 2: p(1,0) = p(1,2) = 1/2 exactly.
    auto spec = make_ctmc(
        1,
        [](const State& x) {
            std::vector<Transition> ts;
            if (x[0] < 2) ts.push_back({State{x[0] + 1}, 1.0});
            if (x[0] > 0) ts.push_back({State{x[0] - 1}, double(x[0])});
            return ts;
        },
        1);
    SimConfig cfg;
    cfg.seed = 2024;
    cfg.time_horizon = 1e9;
    cfg.max_jumps = 100'000;
    cfg.record = RecordMode::Full;
    auto traj = ssa_run(spec, State{0}, cfg);
    REQUIRE(traj.outcome == SimOutcome::JumpBudgetExhausted);

    std::map<std::pair<std::int64_t, std::int64_t>, double> counts;
    std::map<std::int64_t, double> visits;
    for (std::size_t i = 1; i < traj.states.size(); ++i) {
        counts[{traj.states[i - 1][0], traj.states[i][0]}] += 1.0;
        visits[traj.states[i - 1][0]] += 1.0;
    }
    auto check_freq = [&](std::int64_t from, std::int64_t to, double p) {
        double n = visits[from];
        double freq = counts[{from, to}] / n;
        double se = std::sqrt(p * (1 - p) / n);
        CHECK(std::abs(freq - p) <= 3.0 * se);
    };
    check_freq(1, 0, 0.5);
    check_freq(1, 2, 0.5);
    check_freq(0, 1, 1.0 - 1e-12);
    check_freq(2, 1, 1.0 - 1e-12);
}

TEST_CASE("occupancy of the exchange chain approaches Poisson(1)") {
    auto spec = exchange_chain();
    SimConfig cfg;
    cfg.seed = 5;
    cfg.time_horizon = 1e4;
    cfg.burn_in_fraction = 0.1;
    cfg.record = RecordMode::Occupancy;
    auto traj = ssa_run(spec, State{0}, cfg);
    REQUIRE(traj.outcome == SimOutcome::HorizonReached);
    auto occ = empirical_occupancy(traj);
    auto pi = product_form_poisson({1.0});
    Window w = make_box_window(State{0}, State{12}, [](const State& x) { return x[0] >= 0; });
    CHECK(tv_distance_on_window(occ, pi, w) <= 0.02);
}

TEST_CASE("monte carlo jump rate of the exchange chain is 2") {
    auto spec = exchange_chain();
    SimConfig cfg;
    cfg.seed = 31;
    // Stationary start: truncated Poisson(1) inverse-cdf sample.
    auto pi = product_form_poisson({1.0});
    auto sampler = [pi](Philox4x32& rng) {
        double u = rng.uniform(), acc = 0.0;
        for (std::int64_t x = 0; x <= 30; ++x) {
            acc += pi.mass(State{x});
            if (u < acc) return State{x};
        }
        return State{0};
    };
    auto est = monte_carlo_jump_rate(spec, sampler, 100.0, 64, cfg);
    CHECK(est.runs_used == 64);
    CHECK(est.runs_guarded == 0);
    CHECK(std::abs(est.mean - 2.0) <= 3.0 * est.standard_error);
}

TEST_CASE("monte carlo jump rate of the two-species network is 4") {
    auto spec = as_ctmc(parse_network("0 <-> A : 1, 1\nA + B <-> 3B : 1, 1\n"));
    auto pi = product_form_poisson({1.0, 1.0});
    auto marginal = [&pi](Philox4x32& rng) {
        State x{0, 0};
        for (std::size_t i = 0; i < 2; ++i) {
            double u = rng.uniform(), acc = 0.0;
            auto p1 = product_form_poisson({1.0});
            for (std::int64_t v = 0; v <= 30; ++v) {
                acc += p1.mass(State{v});
                if (u < acc) {
                    x[i] = v;
                    break;
                }
            }
        }
        return x;
    };
    SimConfig cfg;
    cfg.seed = 271828;
    auto est = monte_carlo_jump_rate(spec, marginal, 100.0, 64, cfg);
    CHECK(est.runs_used == 64);
    CHECK(std::abs(est.mean - 4.0) <= 3.0 * est.standard_error);
}

TEST_CASE("occupancy honours the burn-in window") {
    // Start far from stationarity; burn-in must drop the transient.
    auto spec = make_birth_death_chain([](std::int64_t) { return 1.0; },
                                       [](std::int64_t x) { return double(x); }, 0);
    SimConfig cfg;
    cfg.seed = 17;
    cfg.time_horizon = 2000.0;
    cfg.burn_in_fraction = 0.1;
    cfg.record = RecordMode::Occupancy;
    auto traj = ssa_run(spec, State{40}, cfg);
    auto occ = empirical_occupancy(traj);
    auto pi = product_form_poisson({1.0});
    Window w = make_box_window(State{0}, State{12}, [](const State& x) { return x[0] >= 0; });
    CHECK(tv_distance_on_window(occ, pi, w) <= 0.05);
}

TEST_CASE("batch occupancy averages across streams") {
    auto spec = exchange_chain();
    std::vector<Trajectory> batch;
    for (std::uint64_t s = 0; s < 8; ++s) {
        SimConfig cfg;
        cfg.seed = 77;
        cfg.stream = s;
        cfg.time_horizon = 500.0;
        cfg.burn_in_fraction = 0.1;
        cfg.record = RecordMode::Occupancy;
        batch.push_back(ssa_run(spec, State{0}, cfg));
    }
    auto occ = empirical_occupancy(batch);
    double total = 0.0;
    for (const auto& [s, w] : occ) total += w;
    CHECK(total == Catch::Approx(1.0).epsilon(1e-9));
    auto pi = product_form_poisson({1.0});
    Window w = make_box_window(State{0}, State{10}, [](const State& x) { return x[0] >= 0; });
    CHECK(tv_distance_on_window(occ, pi, w) <= 0.05);
}

TEST_CASE("trajectory and occupancy exports use the documented text schema") {
    auto spec = exchange_chain();
    SimConfig cfg;
    cfg.seed = 1;
    cfg.time_horizon = 1.0;
    auto traj = ssa_run(spec, State{0}, cfg);
    std::ostringstream ts;
    write_trajectory(ts, traj);
    std::string first_line = ts.str().substr(0, ts.str().find('\n'));
    CHECK(first_line == "0 0");

    std::ostringstream os;
    write_occupancy(os, empirical_occupancy(traj));
    CHECK(os.str().find(' ') != std::string::npos);
}

TEST_CASE("two queues reach a long horizon without guards") {
    auto spec = as_ctmc(parse_network("0 <-> A : 1, 1\nA <-> B : 1, 1\n"));
    SimConfig cfg;
    cfg.seed = 8;
    cfg.time_horizon = 1e3;
    cfg.record = RecordMode::Summary;
    auto traj = ssa_run(spec, State{0, 0}, cfg);
    CHECK(traj.outcome == SimOutcome::HorizonReached);
}

TEST_CASE("batch runs match sequential execution stream for stream") {
    auto spec = exchange_chain();
    SimConfig cfg;
    cfg.seed = 55;
    cfg.time_horizon = 20.0;
    auto batch = run_batch(spec, State{0}, cfg, 12);
    REQUIRE(batch.size() == 12);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        SimConfig one = cfg;
        one.stream = i;
        CHECK(batch[i] == ssa_run(spec, State{0}, one));
    }
}

TEST_CASE("summary trajectories have no occupancy to report") {
    auto spec = exchange_chain();
    SimConfig cfg;
    cfg.seed = 4;
    cfg.time_horizon = 5.0;
    cfg.record = RecordMode::Summary;
    auto traj = ssa_run(spec, State{0}, cfg);
    CHECK_THROWS_AS(empirical_occupancy(traj), std::invalid_argument);
}

TEST_CASE("jump rate of an absorbing chain is zero") {
    auto absorbing = make_ctmc(1, [](const State&) { return std::vector<Transition>{}; }, 0);
    SimConfig cfg;
    cfg.seed = 9;
    auto est = monte_carlo_jump_rate(
        absorbing, [](Philox4x32&) { return State{0}; }, 10.0, 16, cfg);
    CHECK(est.runs_used == 16);
    CHECK(est.mean == 0.0);
}

TEST_CASE("invalid configurations are rejected") {
    auto spec = exchange_chain();
    SimConfig cfg;
    cfg.time_horizon = 0.0;
    CHECK_THROWS_AS(ssa_run(spec, State{0}, cfg), std::invalid_argument);
    cfg.time_horizon = 1.0;
    CHECK_THROWS_AS(ssa_run(spec, State{0, 0}, cfg), std::invalid_argument);
}
