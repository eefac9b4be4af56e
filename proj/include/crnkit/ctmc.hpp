#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "crnkit/network.hpp"

namespace crnkit {

struct Transition {
    State target;
    double rate = 0.0;
};

/// A countable-state Markov chain given as a rate oracle: for each state, the
/// finite list of (target, rate) pairs with distinct targets and rates > 0.
/// States with no outgoing transitions are absorbing.
///
/// `max_jump_radius` bounds |target - x| in the max norm over all transitions;
/// window-based verification uses it to close windows under in-neighbours.
struct CtmcSpec {
    std::size_t state_dimension = 0;
    std::function<std::vector<Transition>(const State&)> neighbors;
    /// In-place variant for hot loops; reuses the buffer's capacity.
    std::function<void(const State&, std::vector<Transition>&)> neighbors_into;
    std::int64_t max_jump_radius = 0;

    std::vector<Transition> operator()(const State& x) const { return neighbors(x); }
};

/// Wraps a plain oracle, deriving the in-place variant from it.
inline CtmcSpec make_ctmc(std::size_t dim,
                          std::function<std::vector<Transition>(const State&)> fn,
                          std::int64_t jump_radius) {
    CtmcSpec spec;
    spec.state_dimension = dim;
    spec.neighbors = fn;
    spec.neighbors_into = [fn](const State& x, std::vector<Transition>& buf) { buf = fn(x); };
    spec.max_jump_radius = jump_radius;
    return spec;
}

/// q(x) = sum of all outgoing rates; 0 for absorbing states.
inline double total_rate(const CtmcSpec& spec, const State& x) {
    double q = 0.0;
    for (const auto& t : spec.neighbors(x)) q += t.rate;
    return q;
}

/// Jump-chain transition probability p(x,y) = q(x,y)/q(x).
inline double embedded_transition(const CtmcSpec& spec, const State& x, const State& y) {
    auto ts = spec.neighbors(x);
    double q = 0.0, qxy = 0.0;
    for (const auto& t : ts) {
        q += t.rate;
        if (t.target == y) qxy = t.rate;
    }
    if (q <= 0.0) throw std::domain_error("embedded_transition: state is absorbing");
    return qxy / q;
}

/// A real function on states with finite support; zero elsewhere and at the
/// cemetery state.
class FiniteSupportFunction {
  public:
    FiniteSupportFunction() = default;
    explicit FiniteSupportFunction(std::map<State, double> values) : values_(std::move(values)) {}

    double operator()(const State& x) const {
        auto it = values_.find(x);
        return it == values_.end() ? 0.0 : it->second;
    }
    void set(const State& x, double v) { values_[x] = v; }
    const std::map<State, double>& support() const { return values_; }

    double max_abs() const {
        double m = 0.0;
        for (const auto& [x, v] : values_) m = std::max(m, std::abs(v));
        return m;
    }

    static FiniteSupportFunction indicator(const State& x) {
        return FiniteSupportFunction({{x, 1.0}});
    }

  private:
    std::map<State, double> values_;
};

/// Generator applied to a finite-support f at x:
///   Af(x) = sum_y q(x,y) (f(y) - f(x)) = sum_y q(x,y) f(y) - q(x) f(x).
/// The sum runs over neighbors(x) only; f vanishes everywhere else, so the
/// truncation is exact.
inline double apply_generator(const CtmcSpec& spec, const FiniteSupportFunction& f,
                              const State& x) {
    double acc = 0.0, q = 0.0;
    for (const auto& t : spec.neighbors(x)) {
        q += t.rate;
        acc += t.rate * f(t.target);
    }
    return acc - q * f(x);
}

}  // namespace crnkit
