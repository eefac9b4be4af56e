#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crnkit/ctmc.hpp"
#include "crnkit/stationary.hpp"

namespace crnkit {

/// Hand-built chains that are not reaction networks, addressable by name
/// from the command line.
struct RegisteredChain {
    std::string name;
    std::string description;
    CtmcSpec spec;
    std::vector<StationaryMeasure> measures;
    std::int64_t default_lo = 0;
    std::int64_t default_hi = 30;
};

/// Nearest-neighbour chain on Z with geometrically exploding rates.  Two
/// distinct probability distributions solve the constant forward equation on
/// the single irreducible set, which forces explosiveness.
inline RegisteredChain make_z_two_stationary_chain() {
    RegisteredChain rc;
    rc.name = "z-two-stationary";
    rc.description = "chain on Z with rates 4^n up / 4^n/2 down (n >= 0), mirrored for n < 0; "
                     "carries two distinct stationary distributions";
    rc.default_lo = -30;
    rc.default_hi = 30;

    auto fn = [](const State& x) {
        std::int64_t n = x[0];
        double up, down;
        if (n >= 0)
            up = std::ldexp(1.0, int(2 * n));  // 4^n
        else
            up = 0.5 * std::ldexp(1.0, int(-2 * n));  // 4^-n / 2
        if (n >= 1)
            down = 0.5 * std::ldexp(1.0, int(2 * n));  // 4^n / 2
        else
            down = std::ldexp(1.0, int(-2 * n));  // 4^-n
        return std::vector<Transition>{{State{n + 1}, up}, {State{n - 1}, down}};
    };
    rc.spec = make_ctmc(1, fn, 1);

    StationaryMeasure pi1;
    pi1.closed_form = "two-sided-geometric";
    pi1.support = "Z";
    pi1.normalizable = Normalizable::Yes;
    pi1.normalization = Interval{1.0, 1.0};
    pi1.mass = [](const State& x) {
        return std::ldexp(1.0 / 3.0, -int(std::llabs(x[0])));  // (1/3) 2^-|n|
    };

    StationaryMeasure pi2;
    pi2.closed_form = "table";
    pi2.support = "Z";
    pi2.normalizable = Normalizable::Yes;
    pi2.normalization = Interval{1.0, 1.0};
    pi2.mass = [](const State& x) {
        std::int64_t n = x[0];
        if (n >= 0) return std::ldexp(1.0 / 3.0, -int(2 * n));  // (1/3) 4^-n
        // (1/3) (2^{-n+1} - 1) 4^n
        return (std::ldexp(2.0, int(-n)) - 1.0) * std::ldexp(1.0 / 3.0, int(2 * n));
    };

    rc.measures = {pi1, pi2};
    return rc;
}

/// Birth-death chain as a CtmcSpec on {base, base+1, ...}.
inline CtmcSpec make_birth_death_chain(std::function<double(std::int64_t)> birth,
                                       std::function<double(std::int64_t)> death,
                                       std::int64_t base) {
    auto fn = [birth, death, base](const State& x) {
        std::vector<Transition> ts;
        if (x[0] < base) return ts;
        double b = birth(x[0]);
        double d = x[0] > base ? death(x[0]) : 0.0;
        if (b > 0.0) ts.push_back({State{x[0] + 1}, b});
        if (d > 0.0) ts.push_back({State{x[0] - 1}, d});
        return ts;
    };
    return make_ctmc(1, fn, 1);
}

/// Pure-birth chain q(x, x+1) = b(x) on {base, base+1, ...}.
inline CtmcSpec make_pure_birth_chain(std::function<double(std::int64_t)> birth,
                                      std::int64_t base) {
    auto fn = [birth, base](const State& x) {
        std::vector<Transition> ts;
        if (x[0] < base) return ts;
        double b = birth(x[0]);
        if (b > 0.0) ts.push_back({State{x[0] + 1}, b});
        return ts;
    };
    return make_ctmc(1, fn, 1);
}

inline StationaryMeasure inverse_square_measure(std::int64_t base) {
    const double pi_sq = std::acos(-1.0) * std::acos(-1.0);
    StationaryMeasure m;
    m.closed_form = "inverse-square";
    m.support = "{" + std::to_string(base) + ", ...}";
    m.normalizable = Normalizable::Yes;
    m.normalization = Interval{1.0, 1.0};
    m.mass = [base, pi_sq](const State& x) {
        if (x[0] < base) return 0.0;
        double n = double(x[0]);
        return 6.0 / (pi_sq * n * n);
    };
    return m;
}

inline std::vector<RegisteredChain> chain_registry() {
    std::vector<RegisteredChain> out;
    out.push_back(make_z_two_stationary_chain());

    {
        RegisteredChain rc;
        rc.name = "mm-infinity";
        rc.description = "M/M/infinity queue: constant birth rate 1, death rate x; "
                         "stationary distribution Poisson(1)";
        rc.spec = make_birth_death_chain([](std::int64_t) { return 1.0; },
                                         [](std::int64_t x) { return double(x); }, 0);
        rc.measures = {product_form_poisson({1.0})};
        rc.default_lo = 0;
        rc.default_hi = 30;
        out.push_back(rc);
    }
    {
        RegisteredChain rc;
        rc.name = "bd-quartic";
        rc.description = "birth-death on {1,2,...} with b(x) = x^4, d(x) = x^2 (x-1)^2; "
                         "detailed balanced with mass proportional to 1/x^2";
        rc.spec = make_birth_death_chain(
            [](std::int64_t x) { return double(x) * double(x) * double(x) * double(x); },
            [](std::int64_t x) {
                double v = double(x) * double(x - 1);
                return v * v;
            },
            1);
        rc.measures = {inverse_square_measure(1)};
        rc.default_lo = 1;
        rc.default_hi = 40;
        out.push_back(rc);
    }
    {
        RegisteredChain rc;
        rc.name = "bd-cubic";
        rc.description = "birth-death on {1,2,...} with b(x) = x^3, d(x) = x^2 (x-1); "
                         "same 1/x^2 stationary distribution, recurrent";
        rc.spec = make_birth_death_chain(
            [](std::int64_t x) { return double(x) * double(x) * double(x); },
            [](std::int64_t x) { return double(x) * double(x) * double(x - 1); }, 1);
        rc.measures = {inverse_square_measure(1)};
        rc.default_lo = 1;
        rc.default_hi = 40;
        out.push_back(rc);
    }
    return out;
}

inline std::optional<RegisteredChain> find_chain(const std::string& name) {
    for (auto& rc : chain_registry())
        if (rc.name == name) return rc;
    return std::nullopt;
}

}  // namespace crnkit
