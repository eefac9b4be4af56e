#pragma once

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "crnkit/ctmc.hpp"
#include "crnkit/rng.hpp"
#include "crnkit/stationary.hpp"

namespace crnkit {

enum class RecordMode { Full, Occupancy, Summary };

enum class SimOutcome { HorizonReached, JumpBudgetExhausted, StateCapExceeded };

inline const char* to_string(SimOutcome o) {
    switch (o) {
        case SimOutcome::HorizonReached: return "horizon-reached";
        case SimOutcome::JumpBudgetExhausted: return "jump-budget-exhausted";
        default: return "state-cap-exceeded";
    }
}

struct SimConfig {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;       // per-trajectory stream index within a batch
    double time_horizon = 1.0;
    std::uint64_t max_jumps = 10'000'000;
    double state_norm_cap = 1e6;    // euclidean norm guard on |X_t|
    RecordMode record = RecordMode::Full;
    double burn_in_fraction = 0.0;  // occupancy accumulation starts at this fraction of T

    void validate() const {
        if (!(time_horizon > 0.0)) throw std::invalid_argument("time horizon must be positive");
        if (max_jumps < 1) throw std::invalid_argument("max_jumps must be at least 1");
        if (burn_in_fraction < 0.0 || burn_in_fraction >= 1.0)
            throw std::invalid_argument("burn-in fraction must lie in [0, 1)");
    }
};

/// One simulated path.  Guard triggers are outcomes, not errors: they are
/// symptoms of explosion, never proof, and the path is truncated exactly at
/// the trigger.
struct Trajectory {
    std::vector<double> times;   // jump times; times[0] = 0 (Full mode only)
    std::vector<State> states;   // states[i] entered at times[i]
    std::map<State, double> occupancy;  // time spent per state (Full/Occupancy)
    std::uint64_t jump_count = 0;
    double elapsed = 0.0;        // simulated time at termination
    SimOutcome outcome = SimOutcome::HorizonReached;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

inline double euclidean_norm(const State& x) {
    double s = 0.0;
    for (auto v : x) s += double(v) * double(v);
    return std::sqrt(s);
}

/// Exact jump-process simulation by the direct method: holding times are
/// Exponential(q(x)), the next state is chosen with probability q(x,y)/q(x).
/// This realizes the same law as driving every (x,y) pair with its own unit
/// Poisson process, which is not directly simulable when the pair family is
/// infinite.  Identical (seed, stream, spec, config) gives a byte-identical
/// trajectory.
inline Trajectory ssa_run(const CtmcSpec& spec, const State& x0, const SimConfig& cfg) {
    cfg.validate();
    if (x0.size() != spec.state_dimension)
        throw std::invalid_argument("initial state dimension mismatch");
    if (euclidean_norm(x0) > cfg.state_norm_cap)
        throw std::invalid_argument("initial state already beyond the norm cap");

    Philox4x32 rng(cfg.seed, cfg.stream);
    Trajectory traj;
    const double T = cfg.time_horizon;
    const double burn_until = cfg.burn_in_fraction * T;

    State x = x0;
    double t = 0.0;
    if (cfg.record == RecordMode::Full) {
        traj.times.push_back(0.0);
        traj.states.push_back(x);
    }

    auto occupy = [&](const State& s, double from, double to) {
        if (cfg.record == RecordMode::Summary) return;
        double lo = std::max(from, burn_until);
        if (to > lo) traj.occupancy[s] += to - lo;
    };

    std::vector<Transition> buf;
    while (true) {
        spec.neighbors_into(x, buf);
        double q = 0.0;
        for (const auto& tr : buf) q += tr.rate;

        if (q <= 0.0) {  // absorbing: hold to the horizon
            occupy(x, t, T);
            traj.elapsed = T;
            traj.outcome = SimOutcome::HorizonReached;
            return traj;
        }

        double hold = rng.exponential(q);
        if (t + hold >= T) {
            occupy(x, t, T);
            traj.elapsed = T;
            traj.outcome = SimOutcome::HorizonReached;
            return traj;
        }

        double u = rng.uniform() * q;
        std::size_t pick = buf.size() - 1;
        double cum = 0.0;
        for (std::size_t i = 0; i < buf.size(); ++i) {
            cum += buf[i].rate;
            if (u < cum) {
                pick = i;
                break;
            }
        }

        occupy(x, t, t + hold);
        t += hold;
        x = buf[pick].target;
        ++traj.jump_count;
        if (cfg.record == RecordMode::Full) {
            traj.times.push_back(t);
            traj.states.push_back(x);
        }

        if (traj.jump_count >= cfg.max_jumps) {
            traj.elapsed = t;
            traj.outcome = SimOutcome::JumpBudgetExhausted;
            return traj;
        }
        if (euclidean_norm(x) > cfg.state_norm_cap) {
            traj.elapsed = t;
            traj.outcome = SimOutcome::StateCapExceeded;
            return traj;
        }
    }
}

namespace detail {

/// Work-stealing loop over [0, count); rethrows the first worker exception.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                         unsigned threads = 0) {
    if (count == 0) return;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            try {
                body(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                break;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Batch of independent trajectories on streams 0..count-1, fanned out
/// across threads.  Results are indexed by stream, so aggregation does not
/// depend on scheduling; the neighbour oracle must be a pure function of the
/// state.
inline std::vector<Trajectory> run_batch(const CtmcSpec& spec, const State& x0, SimConfig cfg,
                                         std::size_t count, unsigned threads = 0) {
    cfg.validate();
    std::vector<Trajectory> out(count);
    detail::parallel_for(
        count,
        [&](std::size_t i) {
            SimConfig run = cfg;
            run.stream = static_cast<std::uint64_t>(i);
            out[i] = ssa_run(spec, x0, run);
        },
        threads);
    return out;
}

/// Time-weighted state distribution of one trajectory (mass sums to 1 over
/// the post-burn-in span).
inline std::map<State, double> empirical_occupancy(const Trajectory& traj) {
    if (traj.occupancy.empty()) throw std::invalid_argument("trajectory has no occupancy record");
    double total = 0.0;
    for (const auto& [s, w] : traj.occupancy) total += w;
    if (total <= 0.0) throw std::invalid_argument("empty observation window");
    std::map<State, double> out;
    for (const auto& [s, w] : traj.occupancy) out[s] = w / total;
    return out;
}

/// Batch average across trajectories (uniform weight per run).
inline std::map<State, double> empirical_occupancy(const std::vector<Trajectory>& batch) {
    std::map<State, double> out;
    std::size_t used = 0;
    for (const auto& traj : batch) {
        if (traj.occupancy.empty()) continue;
        auto one = empirical_occupancy(traj);
        for (const auto& [s, w] : one) out[s] += w;
        ++used;
    }
    if (used == 0) throw std::invalid_argument("no trajectories with occupancy records");
    for (auto& [s, w] : out) w /= double(used);
    return out;
}

/// Total-variation distance between an empirical distribution and a measure,
/// restricted to a window: (1/2) sum over window |p(x) - q(x)|.
inline double tv_distance_on_window(const std::map<State, double>& emp,
                                    const StationaryMeasure& pi, const Window& window) {
    double tv = 0.0;
    for (const auto& x : window.states) {
        auto it = emp.find(x);
        double p = it == emp.end() ? 0.0 : it->second;
        tv += std::abs(p - pi.mass(x));
    }
    return 0.5 * tv;
}

/// Monte Carlo estimate of the stationary expected jumps per unit time.
/// Runs are independent streams; guard-triggered runs are excluded from the
/// estimate and counted separately.
struct JumpRateEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t runs_used = 0;
    std::size_t runs_guarded = 0;
};

/// `draw_x0(stream rng)` supplies the initial state, e.g. a stationary
/// sample; with a fixed x0 pass cfg.burn_in_fraction > 0 and jumps are
/// counted after the burn-in only.
inline JumpRateEstimate monte_carlo_jump_rate(
    const CtmcSpec& spec, const std::function<State(Philox4x32&)>& draw_x0, double T,
    std::size_t batch, SimConfig cfg) {
    cfg.time_horizon = T;
    const double burn = cfg.burn_in_fraction * T;
    cfg.record = burn > 0.0 ? RecordMode::Full : RecordMode::Summary;

    // Initial states drawn up front so the batch stays deterministic.
    std::vector<State> starts(batch);
    for (std::size_t b = 0; b < batch; ++b) {
        Philox4x32 init_rng(cfg.seed ^ 0x9e3779b97f4a7c15ull, b);
        starts[b] = draw_x0(init_rng);
    }

    std::vector<std::optional<double>> rates(batch);
    detail::parallel_for(batch, [&](std::size_t b) {
        SimConfig run = cfg;
        run.stream = static_cast<std::uint64_t>(b);
        Trajectory traj = ssa_run(spec, starts[b], run);
        if (traj.outcome != SimOutcome::HorizonReached) return;
        if (burn > 0.0) {
            std::uint64_t post = 0;
            for (std::size_t i = 1; i < traj.times.size(); ++i)
                if (traj.times[i] > burn) ++post;
            rates[b] = double(post) / (T - burn);
        } else {
            rates[b] = double(traj.jump_count) / T;
        }
    });

    JumpRateEstimate est;
    std::vector<double> used;
    used.reserve(batch);
    for (const auto& r : rates) {
        if (r)
            used.push_back(*r);
        else
            ++est.runs_guarded;
    }
    est.runs_used = used.size();
    if (used.empty()) return est;
    double mean = 0.0;
    for (double r : used) mean += r;
    mean /= double(used.size());
    double var = 0.0;
    for (double r : used) var += (r - mean) * (r - mean);
    if (used.size() > 1) var /= double(used.size() - 1);
    est.mean = mean;
    est.standard_error = used.size() > 1 ? std::sqrt(var / double(used.size())) : 0.0;
    return est;
}

namespace detail {

inline std::string round_trip(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

/// Newline-delimited trajectory export: `t x_1 ... x_d` per record, times in
/// shortest round-trip decimal form.
inline void write_trajectory(std::ostream& out, const Trajectory& traj) {
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out << detail::round_trip(traj.times[i]);
        for (auto v : traj.states[i]) out << ' ' << v;
        out << '\n';
    }
}

/// Occupancy export: `x_1 ... x_d weight` per state.
inline void write_occupancy(std::ostream& out, const std::map<State, double>& occ) {
    for (const auto& [s, w] : occ) {
        for (auto v : s) out << v << ' ';
        out << detail::round_trip(w) << '\n';
    }
}

}  // namespace crnkit
