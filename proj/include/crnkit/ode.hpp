#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crnkit/kinetics.hpp"
#include "crnkit/series.hpp"

namespace crnkit {

struct OdeConfig {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_min = 1e-12;
    double h_init = 1e-4;
    double blow_up_threshold = 1e8;
    double sample_interval = 0.0;  // 0 = record accepted steps only
    std::size_t max_steps = 50'000'000;
};

/// Step-size underflow while the solution norm stays tame: the problem is
/// stiff (or the tolerances hopeless), not blowing up.
class StiffnessError : public std::runtime_error {
  public:
    explicit StiffnessError(double t)
        : std::runtime_error("step size underflow without norm growth at t = " +
                             std::to_string(t)) {}
};

struct OdeResult {
    std::vector<double> times;
    std::vector<Concentrations> values;
    Concentrations final_state;
    double final_time = 0.0;
    bool blew_up = false;
    double blow_up_time = 0.0;
    Interval blow_up_bracket;  // [last accepted step, divergence point]
};

namespace detail {

inline double inf_norm(const Concentrations& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace detail

/// Dormand-Prince 5(4) with the usual PI-free step controller.  Blow-up is
/// declared when the norm crosses the threshold; the asymptote location is
/// bracketed by the last accepted time and the divergence point.
inline OdeResult ode_integrate_rhs(const std::function<Concentrations(const Concentrations&)>& rhs,
                                   Concentrations z0, double T, const OdeConfig& cfg = {}) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200, e6 = 11.0 / 84 - 187.0 / 2100,
                            e7 = -1.0 / 40;

    const std::size_t d = z0.size();
    OdeResult res;
    res.times.push_back(0.0);
    res.values.push_back(z0);

    Concentrations y = std::move(z0);
    Concentrations k1(d), k2(d), k3(d), k4(d), k5(d), k6(d), k7(d), ytmp(d), ynew(d), err(d);
    double t = 0.0;
    double h = std::min(cfg.h_init, T);
    double next_sample = cfg.sample_interval > 0.0 ? cfg.sample_interval : -1.0;
    double last_accepted_t = 0.0;
    double norm_start = detail::inf_norm(y);

    k1 = rhs(y);
    for (std::size_t step = 0; step < cfg.max_steps; ++step) {
        if (t >= T) break;
        h = std::min(h, T - t);

        auto stage = [&](Concentrations& out, std::initializer_list<std::pair<double, const Concentrations*>> terms) {
            for (std::size_t i = 0; i < d; ++i) {
                double acc = y[i];
                for (const auto& [c, k] : terms) acc += h * c * (*k)[i];
                out[i] = acc;
            }
        };

        stage(ytmp, {{a21, &k1}});
        k2 = rhs(ytmp);
        stage(ytmp, {{a31, &k1}, {a32, &k2}});
        k3 = rhs(ytmp);
        stage(ytmp, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
        k4 = rhs(ytmp);
        stage(ytmp, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
        k5 = rhs(ytmp);
        stage(ytmp, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
        k6 = rhs(ytmp);
        stage(ynew, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        k7 = rhs(ynew);

        double err_norm = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < d; ++i) {
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);
            double sc = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err_norm += (err[i] / sc) * (err[i] / sc);
            if (!std::isfinite(ynew[i])) finite = false;
        }
        err_norm = std::sqrt(err_norm / double(d));

        if (finite && err_norm <= 1.0) {
            double t_before = t;
            t += h;
            y = ynew;
            k1 = k7;  // first-same-as-last
            last_accepted_t = t;

            if (cfg.sample_interval > 0.0) {
                if (t >= next_sample) {
                    res.times.push_back(t);
                    res.values.push_back(y);
                    while (next_sample <= t) next_sample += cfg.sample_interval;
                }
            } else {
                res.times.push_back(t);
                res.values.push_back(y);
            }

            double norm = detail::inf_norm(y);
            if (norm > cfg.blow_up_threshold) {
                res.blew_up = true;
                res.blow_up_time = t;
                res.blow_up_bracket = Interval{t_before, t};
                res.final_state = y;
                res.final_time = t;
                return res;
            }
        } else if (!finite) {
            // Norm ran away inside one attempted step.
            res.blew_up = true;
            res.blow_up_time = t;
            res.blow_up_bracket = Interval{last_accepted_t, t + h};
            res.final_state = y;
            res.final_time = t;
            return res;
        }

        double shrink = finite ? 0.9 * std::pow(std::max(err_norm, 1e-10), -0.2) : 0.1;
        h *= std::clamp(shrink, 0.2, 5.0);

        if (h < cfg.h_min) {
            double norm = detail::inf_norm(y);
            if (norm > std::max(100.0 * std::max(norm_start, 1.0), 1e4)) {
                // The controller stalled against a steep asymptote below the
                // configured threshold.
                res.blew_up = true;
                res.blow_up_time = t;
                res.blow_up_bracket = Interval{last_accepted_t, t + cfg.h_min};
                res.final_state = y;
                res.final_time = t;
                return res;
            }
            throw StiffnessError(t);
        }
    }

    res.final_state = y;
    res.final_time = t;
    return res;
}

/// Deterministic mass-action model of a network, integrated to time T.
inline OdeResult ode_integrate(const MassActionSystem& sys, const Concentrations& z0, double T,
                               const OdeConfig& cfg = {}) {
    if (z0.size() != sys.dimension())
        throw std::invalid_argument("initial concentration dimension mismatch");
    for (double v : z0)
        if (v < 0.0) throw std::invalid_argument("concentrations must be non-negative");
    return ode_integrate_rhs([&sys](const Concentrations& z) { return ode_rhs(sys, z); }, z0, T,
                             cfg);
}

}  // namespace crnkit
