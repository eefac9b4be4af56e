#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crnkit/ctmc.hpp"
#include "crnkit/kinetics.hpp"
#include "crnkit/series.hpp"

namespace crnkit {

enum class Normalizable { Yes, No, Unknown };

inline const char* to_string(Normalizable n) {
    switch (n) {
        case Normalizable::Yes: return "yes";
        case Normalizable::No: return "no";
        default: return "unknown";
    }
}

/// An evaluable candidate stationary measure.  `mass` returns probability
/// mass when the measure is normalized; for a measure flagged
/// `normalizable == No` it returns the unnormalized weights instead.
struct StationaryMeasure {
    std::function<double(const State&)> mass;
    std::string closed_form;       // "product-poisson" | "birth-death-ratio" | "table" | custom
    std::string support;           // human-readable support description
    Normalizable normalizable = Normalizable::Yes;
    std::optional<Interval> normalization;  // bracket on the constant, when computed
    std::vector<double> parameters;         // e.g. the Poisson mean vector

    bool in_support(const State& x) const { return mass(x) > 0.0; }
};

/// Product-form Poisson measure: pi(x) = prod_i c_i^{x_i} e^{-c_i} / x_i!.
inline StationaryMeasure product_form_poisson(const Concentrations& c) {
    for (double ci : c)
        if (!(ci > 0.0)) throw std::invalid_argument("product_form_poisson needs c > 0");
    StationaryMeasure m;
    m.closed_form = "product-poisson";
    m.support = "non-negative orthant";
    m.normalizable = Normalizable::Yes;
    m.normalization = Interval{1.0, 1.0};
    m.parameters = c;
    m.mass = [c](const State& x) {
        if (x.size() != c.size()) return 0.0;
        double logp = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (x[i] < 0) return 0.0;
            logp += double(x[i]) * std::log(c[i]) - c[i] - std::lgamma(double(x[i]) + 1.0);
        }
        return std::exp(logp);
    };
    return m;
}

/// A finite verification window: an explicit box of states plus the domain
/// predicate of the ambient state space.  Interior states are those whose
/// whole in-neighbourhood (every domain state within the chain's jump
/// radius) lies inside the box, so truncation cannot fabricate residuals.
struct Window {
    std::vector<State> states;
    State lo, hi;
    std::function<bool(const State&)> domain;

    std::size_t size() const { return states.size(); }
};

inline Window make_box_window(State lo, State hi,
                              std::function<bool(const State&)> domain = nullptr) {
    if (lo.size() != hi.size()) throw std::invalid_argument("window bound dimension mismatch");
    Window w;
    w.lo = lo;
    w.hi = hi;
    w.domain = domain ? std::move(domain) : [](const State&) { return true; };
    State cur = lo;
    const std::size_t d = lo.size();
    while (true) {
        if (w.domain(cur)) w.states.push_back(cur);
        std::size_t i = 0;
        for (; i < d; ++i) {
            if (cur[i] < hi[i]) {
                ++cur[i];
                break;
            }
            cur[i] = lo[i];
        }
        if (i == d) break;
    }
    return w;
}

/// Box [0, hi]^d over the non-negative orthant (reaction-network windows).
inline Window make_orthant_window(std::size_t dim, std::int64_t hi) {
    return make_box_window(State(dim, 0), State(dim, hi), [](const State& x) {
        return std::all_of(x.begin(), x.end(), [](std::int64_t v) { return v >= 0; });
    });
}

/// Interval [lo, hi] on Z (one-dimensional chains).
inline Window make_interval_window(std::int64_t lo, std::int64_t hi) {
    return make_box_window(State{lo}, State{hi});
}

inline std::vector<State> interior_states(const Window& w, std::int64_t jump_radius) {
    std::vector<State> interior;
    const std::size_t d = w.lo.size();
    for (const auto& x : w.states) {
        bool ok = true;
        State z(d);
        std::vector<std::int64_t> delta(d, -jump_radius);
        while (ok) {
            for (std::size_t i = 0; i < d; ++i) z[i] = x[i] + delta[i];
            bool in_domain = w.domain(z);
            if (in_domain) {
                for (std::size_t i = 0; i < d; ++i)
                    if (z[i] < w.lo[i] || z[i] > w.hi[i]) {
                        ok = false;
                        break;
                    }
            }
            std::size_t i = 0;
            for (; i < d; ++i) {
                if (delta[i] < jump_radius) {
                    ++delta[i];
                    break;
                }
                delta[i] = -jump_radius;
            }
            if (i == d) break;
        }
        if (ok) interior.push_back(x);
    }
    return interior;
}

/// Net probability-flux imbalance of a candidate measure at each interior
/// window state: |sum_y pi(y) q(y,x) - pi(x) q(x)|.  Boundary states are
/// excluded from the verdict; the in-neighbour closure guarantees the inflow
/// sum is complete for interior states.
struct BalanceResidualReport {
    double max_residual = 0.0;
    double flux_scale = 0.0;  // max total flux through an interior state
    std::size_t interior_count = 0;
    std::size_t window_size = 0;
    std::vector<std::pair<State, double>> residuals;  // interior states only

    bool passes(double tol) const { return max_residual <= tol * flux_scale; }
};

inline BalanceResidualReport balance_residual(const CtmcSpec& spec, const StationaryMeasure& pi,
                                              const Window& window) {
    auto interior = interior_states(window, spec.max_jump_radius);
    if (interior.empty())
        throw std::invalid_argument("balance_residual: window has no interior states");

    std::map<State, double> inflow;
    std::map<State, double> outflow;
    for (const auto& y : window.states) {
        double mass_y = pi.mass(y);
        double q_y = 0.0;
        for (const auto& t : spec.neighbors(y)) {
            q_y += t.rate;
            inflow[t.target] += mass_y * t.rate;
        }
        outflow[y] = mass_y * q_y;
    }

    BalanceResidualReport rep;
    rep.window_size = window.size();
    rep.interior_count = interior.size();
    for (const auto& x : interior) {
        double in = inflow.count(x) ? inflow[x] : 0.0;
        double out = outflow[x];
        double resid = std::abs(in - out);
        rep.max_residual = std::max(rep.max_residual, resid);
        rep.flux_scale = std::max(rep.flux_scale, in + out);
        rep.residuals.emplace_back(x, resid);
    }
    return rep;
}

/// Detailed-balance measure of a birth-death chain: unnormalized weights
/// w(x0) = 1, w(x+1) = w(x) b(x) / d(x+1), normalized over the summation
/// range with a two-sided tail bracket from the series analyzer.  A
/// divergent weight sum comes back flagged non-normalizable (weights
/// returned raw) rather than as an error.
struct BirthDeathStationary {
    StationaryMeasure measure;
    SeriesAnalysis normalization_series;
    std::int64_t base = 0;
};

inline BirthDeathStationary birth_death_stationary(
    const std::function<double(std::int64_t)>& birth,
    const std::function<double(std::int64_t)>& death, std::int64_t x0,
    SeriesOptions opts = {}) {
    opts.zero_is_absorbing = true;

    auto weights = std::make_shared<std::vector<double>>();
    weights->reserve(static_cast<std::size_t>(std::min<long long>(opts.max_terms, 1 << 21)));
    auto term = [weights, birth, death, x0](long long x) {
        if (x == x0) {
            weights->push_back(1.0);
            return 1.0;
        }
        double prev = weights->back();
        double b = birth(x - 1);
        double d = death(x);
        double w = (d > 0.0) ? prev * b / d : std::numeric_limits<double>::infinity();
        weights->push_back(w);
        return w;
    };
    SeriesAnalysis series = analyze_series(term, x0, opts);

    BirthDeathStationary out;
    out.base = x0;
    out.normalization_series = series;
    out.measure.closed_form = "birth-death-ratio";
    out.measure.support = "{" + std::to_string(x0) + ", " + std::to_string(x0 + 1) + ", ...}";

    if (series.finite()) {
        double z = series.value->mid();
        out.measure.normalizable = Normalizable::Yes;
        out.measure.normalization = Interval{series.value->lo, series.value->hi};
        out.measure.mass = [weights, x0, z](const State& x) {
            if (x.size() != 1 || x[0] < x0) return 0.0;
            auto idx = static_cast<std::size_t>(x[0] - x0);
            return idx < weights->size() ? (*weights)[idx] / z : 0.0;
        };
    } else {
        out.measure.normalizable =
            series.divergent() ? Normalizable::No : Normalizable::Unknown;
        out.measure.mass = [weights, x0](const State& x) {
            if (x.size() != 1 || x[0] < x0) return 0.0;
            auto idx = static_cast<std::size_t>(x[0] - x0);
            return idx < weights->size() ? (*weights)[idx] : 0.0;
        };
    }
    return out;
}

/// pi_Z(x) = pi(x) q(x): the (unnormalized) stationary candidate of the
/// embedded jump chain; its summability verdict is the jump-rate series.
struct EmbeddedMeasure {
    std::function<double(const State&)> mass;
    Normalizable normalizable = Normalizable::Unknown;
    SeriesAnalysis evidence;
};

/// Expected jumps per unit time of the stationary process: sum pi(x) q(x).
struct JumpRateResult {
    SeriesVerdict verdict = SeriesVerdict::Inconclusive;
    std::optional<double> closed_form;
    std::optional<Interval> value;
    SeriesAnalysis series;
};

/// Closed form for a product-Poisson measure under mass-action kinetics:
/// E[lambda_k(X)] = kappa_k c^{y_k} by the Poisson falling-factorial moment
/// identity, so the stationary jump rate is sum_k kappa_k c^{y_k}.
inline double poisson_jump_rate(const MassActionSystem& sys, const Concentrations& c) {
    double total = 0.0;
    for (std::size_t k = 0; k < sys.reaction_count(); ++k)
        total += deterministic_rate(sys, k, c);
    return total;
}

/// Brute-force truncated sum of pi(x) q(x) over the box [0, hi]^d
/// (cross-check oracle for the closed form).
inline double windowed_jump_rate(const CtmcSpec& spec, const StationaryMeasure& pi,
                                 std::int64_t hi) {
    Window w = make_orthant_window(spec.state_dimension, hi);
    detail::KahanSum s;
    for (const auto& x : w.states) s.add(pi.mass(x) * total_rate(spec, x));
    return s.sum;
}

/// Jump-rate series for a one-dimensional chain, from the left edge of the
/// measure's support.
inline JumpRateResult jump_rate_series_1d(const CtmcSpec& spec, const StationaryMeasure& pi,
                                          std::int64_t from, SeriesOptions opts = {}) {
    opts.zero_is_absorbing = true;
    JumpRateResult out;
    out.series = analyze_series(
        [&](long long x) {
            State s{x};
            return pi.mass(s) * total_rate(spec, s);
        },
        from, opts);
    out.verdict = out.series.verdict;
    if (out.series.finite()) out.value = out.series.value;
    return out;
}

/// Jump-rate series for multi-dimensional chains: terms are L1-shell sums
/// over the non-negative orthant.
inline JumpRateResult jump_rate_series_shells(const CtmcSpec& spec, const StationaryMeasure& pi,
                                              SeriesOptions opts = {}) {
    opts.zero_is_absorbing = true;
    if (opts.max_terms > 400) opts.max_terms = 400;  // shell enumeration cost grows with radius
    const std::size_t d = spec.state_dimension;

    // Enumerate compositions of r into d non-negative parts.
    auto shell_sum = [&](long long r) {
        double total = 0.0;
        State x(d, 0);
        std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i,
                                                                 std::int64_t rest) {
            if (i + 1 == d) {
                x[i] = rest;
                total += pi.mass(x) * total_rate(spec, x);
                return;
            }
            for (std::int64_t v = 0; v <= rest; ++v) {
                x[i] = v;
                rec(i + 1, rest - v);
            }
        };
        rec(0, r);
        return total;
    };

    JumpRateResult out;
    out.series = analyze_series(shell_sum, 0, opts);
    out.verdict = out.series.verdict;
    if (out.series.finite()) out.value = out.series.value;
    return out;
}

inline JumpRateResult expected_jump_rate(const CtmcSpec& spec, const StationaryMeasure& pi,
                                         std::int64_t support_from = 0,
                                         SeriesOptions opts = {}) {
    if (spec.state_dimension == 1) return jump_rate_series_1d(spec, pi, support_from, opts);
    return jump_rate_series_shells(spec, pi, opts);
}

/// Closed-form route for complex balanced mass-action systems, cross-checked
/// numerically by callers/tests via windowed_jump_rate.
inline JumpRateResult expected_jump_rate(const MassActionSystem& sys, const Concentrations& c) {
    JumpRateResult out;
    out.verdict = SeriesVerdict::Finite;
    out.closed_form = poisson_jump_rate(sys, c);
    out.value = Interval{*out.closed_form, *out.closed_form};
    out.series.verdict = SeriesVerdict::Finite;
    out.series.method = "poisson moment identity";
    return out;
}

inline EmbeddedMeasure embedded_measure(const CtmcSpec& spec, const StationaryMeasure& pi,
                                        std::int64_t support_from = 0, SeriesOptions opts = {}) {
    EmbeddedMeasure out;
    out.mass = [spec, pi](const State& x) { return pi.mass(x) * total_rate(spec, x); };
    auto rate = expected_jump_rate(spec, pi, support_from, opts);
    out.evidence = rate.series;
    switch (rate.verdict) {
        case SeriesVerdict::Finite: out.normalizable = Normalizable::Yes; break;
        case SeriesVerdict::Divergent: out.normalizable = Normalizable::No; break;
        default: out.normalizable = Normalizable::Unknown; break;
    }
    return out;
}

/// Truncated Poisson falling-factorial moment (test oracle for the identity
/// E[x!/(x-y)!] = c^y under a product-Poisson measure).
inline double truncated_poisson_factorial_moment(const Concentrations& c,
                                                 const std::vector<std::int64_t>& y,
                                                 std::int64_t hi) {
    StationaryMeasure pi = product_form_poisson(c);
    Window w = make_orthant_window(c.size(), hi);
    detail::KahanSum s;
    for (const auto& x : w.states) {
        double ff = 1.0;
        for (std::size_t i = 0; i < y.size(); ++i) ff *= falling_factorial(x[i], y[i]);
        if (ff != 0.0) s.add(pi.mass(x) * ff);
    }
    return s.sum;
}

}  // namespace crnkit
