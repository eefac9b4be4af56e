#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "crnkit/ctmc.hpp"
#include "crnkit/network.hpp"

namespace crnkit {

/// Falling factorial x(x-1)...(x-y+1), the number of ordered ways to pick y
/// molecules out of x.  Computed in 64-bit integers; on overflow the product
/// is redone in doubles (exact up to 2^53, ~1 ulp per factor beyond).
inline double falling_factorial(std::int64_t x, std::int64_t y) {
    if (y == 0) return 1.0;
    if (x < y) return 0.0;
    std::uint64_t acc = 1;
    bool overflow = false;
    for (std::int64_t j = 0; j < y; ++j) {
        if (__builtin_mul_overflow(acc, static_cast<std::uint64_t>(x - j), &acc)) {
            overflow = true;
            break;
        }
    }
    if (!overflow) return static_cast<double>(acc);
    double d = 1.0;
    for (std::int64_t j = 0; j < y; ++j) d *= static_cast<double>(x - j);
    return d;
}

/// A reaction network read with mass-action kinetics; the rate constants live
/// on the reactions themselves.
struct MassActionSystem {
    ReactionNetwork network;

    explicit MassActionSystem(ReactionNetwork net) : network(std::move(net)) {}

    std::size_t dimension() const { return network.species_count(); }
    std::size_t reaction_count() const { return network.reaction_count(); }
};

/// Stochastic mass-action intensity of reaction k at counts x:
///   kappa_k * prod_i x_i! / (x_i - y_i)!   when x >= y entrywise, else 0.
inline double stochastic_intensity(const MassActionSystem& sys, std::size_t k, const State& x) {
    const Reaction& r = sys.network.reaction(k);
    double acc = r.rate_constant;
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::int64_t need = r.source[i];
        if (need == 0) continue;
        if (x[i] < need) return 0.0;
        acc *= falling_factorial(x[i], need);
    }
    return acc;
}

/// Deterministic mass-action rate kappa_k * z^{y_k}, with 0^0 = 1.
inline double deterministic_rate(const MassActionSystem& sys, std::size_t k,
                                 const Concentrations& z) {
    const Reaction& r = sys.network.reaction(k);
    double acc = r.rate_constant;
    for (std::size_t i = 0; i < z.size(); ++i) {
        std::int64_t e = r.source[i];
        for (std::int64_t j = 0; j < e; ++j) acc *= z[i];
    }
    return acc;
}

/// Right-hand side of the deterministic model: sum_k zeta_k * lambda_k(z).
inline Concentrations ode_rhs(const MassActionSystem& sys, const Concentrations& z) {
    Concentrations out(z.size(), 0.0);
    for (std::size_t k = 0; k < sys.reaction_count(); ++k) {
        double rate = deterministic_rate(sys, k, z);
        if (rate == 0.0) continue;
        const Reaction& r = sys.network.reaction(k);
        for (std::size_t i = 0; i < z.size(); ++i)
            out[i] += rate * static_cast<double>(r.product[i] - r.source[i]);
    }
    return out;
}

/// The chain induced by stochastic mass-action kinetics: reactions sharing a
/// reaction vector are aggregated, q(x,y) = sum over {k : zeta_k = y - x} of
/// lambda_k(x).  Zero-rate targets are omitted, so states where nothing can
/// fire are absorbing.
inline CtmcSpec as_ctmc(const MassActionSystem& sys) {
    const std::size_t d = sys.dimension();

    // Group reactions by reaction vector once.
    std::map<std::vector<std::int64_t>, std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < sys.reaction_count(); ++k)
        groups[reaction_vector(sys.network.reaction(k))].push_back(k);
    std::vector<std::pair<std::vector<std::int64_t>, std::vector<std::size_t>>> grouped(
        groups.begin(), groups.end());

    std::int64_t radius = 0;
    for (const auto& [zeta, ks] : grouped)
        for (auto c : zeta) radius = std::max<std::int64_t>(radius, c < 0 ? -c : c);

    CtmcSpec spec;
    spec.state_dimension = d;
    spec.max_jump_radius = radius;
    spec.neighbors_into = [sys, grouped](const State& x, std::vector<Transition>& buf) {
        std::size_t n = 0;
        for (const auto& [zeta, ks] : grouped) {
            double rate = 0.0;
            for (auto k : ks) rate += stochastic_intensity(sys, k, x);
            if (rate <= 0.0) continue;
            if (n == buf.size()) buf.emplace_back();
            Transition& t = buf[n];
            t.target.resize(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) t.target[i] = x[i] + zeta[i];
            t.rate = rate;
            ++n;
        }
        buf.resize(n);
    };
    spec.neighbors = [into = spec.neighbors_into](const State& x) {
        std::vector<Transition> buf;
        into(x, buf);
        return buf;
    };
    return spec;
}

inline CtmcSpec as_ctmc(const ReactionNetwork& net) { return as_ctmc(MassActionSystem(net)); }

/// Total stochastic intensity sum_k lambda_k(x); equals q(x) of as_ctmc.
inline double total_intensity(const MassActionSystem& sys, const State& x) {
    double q = 0.0;
    for (std::size_t k = 0; k < sys.reaction_count(); ++k) q += stochastic_intensity(sys, k, x);
    return q;
}

}  // namespace crnkit
