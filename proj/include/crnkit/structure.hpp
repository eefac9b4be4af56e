#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "crnkit/kinetics.hpp"
#include "crnkit/linalg.hpp"
#include "crnkit/network.hpp"
#include "crnkit/rng.hpp"

namespace crnkit {

/// Graph and linear-algebra summary of a network: n complexes, l linkage
/// classes, stoichiometric dimension s, deficiency n - l - s.
struct StructureReport {
    std::size_t complex_count = 0;
    std::size_t linkage_class_count = 0;
    std::size_t stoichiometric_dimension = 0;
    std::size_t deficiency = 0;
    bool weakly_reversible = false;
    std::vector<std::vector<Complex>> linkage_classes;

    friend bool operator==(const StructureReport&, const StructureReport&) = default;
};

namespace detail {

// Complex indices and directed edges of the reaction graph.
struct ComplexGraph {
    std::vector<Complex> complexes;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // (source idx, product idx)

    explicit ComplexGraph(const ReactionNetwork& net) : complexes(net.complexes()) {
        auto index_of = [this](const Complex& c) {
            return static_cast<std::size_t>(
                std::find(complexes.begin(), complexes.end(), c) - complexes.begin());
        };
        for (const auto& r : net.reactions())
            edges.emplace_back(index_of(r.source), index_of(r.product));
    }
};

// Connected components of the undirected reaction graph (union-find).
inline std::vector<std::size_t> undirected_components(const ComplexGraph& g) {
    std::vector<std::size_t> parent(g.complexes.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (auto [a, b] : g.edges) parent[find(a)] = find(b);
    std::vector<std::size_t> root(g.complexes.size());
    for (std::size_t v = 0; v < root.size(); ++v) root[v] = find(v);
    return root;
}

// Strongly connected components, iterative Tarjan.
inline std::vector<std::size_t> strong_components(const ComplexGraph& g) {
    const std::size_t n = g.complexes.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (auto [a, b] : g.edges) adj[a].push_back(b);

    std::vector<std::size_t> comp(n, n), index(n, n), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t next_index = 0, comp_count = 0;

    struct Frame {
        std::size_t v, child;
    };
    for (std::size_t start = 0; start < n; ++start) {
        if (index[start] != n) continue;
        std::vector<Frame> frames{{start, 0}};
        index[start] = low[start] = next_index++;
        stack.push_back(start);
        on_stack[start] = true;
        while (!frames.empty()) {
            auto& [v, child] = frames.back();
            if (child < adj[v].size()) {
                std::size_t w = adj[v][child++];
                if (index[w] == n) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            } else {
                if (low[v] == index[v]) {
                    while (true) {
                        std::size_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if (w == v) break;
                    }
                    ++comp_count;
                }
                std::size_t v_done = v;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().v] = std::min(low[frames.back().v], low[v_done]);
            }
        }
    }
    return comp;
}

}  // namespace detail

/// Partition of the complexes into connected components of the undirected
/// reaction graph.
inline std::vector<std::vector<Complex>> linkage_classes(const ReactionNetwork& net) {
    detail::ComplexGraph g(net);
    auto root = detail::undirected_components(g);
    std::vector<std::vector<Complex>> classes;
    std::vector<std::size_t> root_order;
    for (std::size_t v = 0; v < root.size(); ++v) {
        auto it = std::find(root_order.begin(), root_order.end(), root[v]);
        std::size_t slot;
        if (it == root_order.end()) {
            root_order.push_back(root[v]);
            classes.emplace_back();
            slot = classes.size() - 1;
        } else {
            slot = static_cast<std::size_t>(it - root_order.begin());
        }
        classes[slot].push_back(g.complexes[v]);
    }
    return classes;
}

/// True iff every reaction lies on a directed cycle, i.e. each linkage class
/// is strongly connected.
inline bool is_weakly_reversible(const ReactionNetwork& net) {
    detail::ComplexGraph g(net);
    auto comp = detail::strong_components(g);
    return std::all_of(g.edges.begin(), g.edges.end(),
                       [&](const auto& e) { return comp[e.first] == comp[e.second]; });
}

/// Dimension of the span of the reaction vectors, exact over the rationals.
inline std::size_t stoichiometric_dimension(const ReactionNetwork& net) {
    std::vector<std::vector<std::int64_t>> rows;
    rows.reserve(net.reaction_count());
    for (const auto& r : net.reactions()) rows.push_back(reaction_vector(r));
    return linalg::integer_rank(std::move(rows));
}

/// Deficiency n - l - s (non-negative by rank bounds).
inline std::size_t deficiency(const ReactionNetwork& net) {
    std::size_t n = net.complexes().size();
    std::size_t l = linkage_classes(net).size();
    std::size_t s = stoichiometric_dimension(net);
    return n - l - s;
}

inline StructureReport analyze_structure(const ReactionNetwork& net) {
    StructureReport rep;
    rep.linkage_classes = linkage_classes(net);
    rep.complex_count = net.complexes().size();
    rep.linkage_class_count = rep.linkage_classes.size();
    rep.stoichiometric_dimension = stoichiometric_dimension(net);
    rep.deficiency = rep.complex_count - rep.linkage_class_count - rep.stoichiometric_dimension;
    rep.weakly_reversible = is_weakly_reversible(net);
    return rep;
}

/// Per-complex net flux imbalance at concentrations c: |outflow - inflow|
/// against tol * max(1, outflow + inflow).
struct ComplexBalanceCheck {
    bool balanced = false;
    std::vector<double> residuals;        // per complex, in complexes() order
    std::vector<double> flux_scales;      // outflow + inflow per complex
    double max_relative_residual = 0.0;
};

inline ComplexBalanceCheck check_complex_balanced(const MassActionSystem& sys,
                                                  const Concentrations& c, double tol = 1e-10) {
    const auto complexes = sys.network.complexes();
    ComplexBalanceCheck out;
    out.residuals.assign(complexes.size(), 0.0);
    out.flux_scales.assign(complexes.size(), 0.0);
    out.balanced = true;
    for (std::size_t ci = 0; ci < complexes.size(); ++ci) {
        double outflow = 0.0, inflow = 0.0;
        for (std::size_t k = 0; k < sys.reaction_count(); ++k) {
            const Reaction& r = sys.network.reaction(k);
            double rate = deterministic_rate(sys, k, c);
            if (r.source == complexes[ci]) outflow += rate;
            if (r.product == complexes[ci]) inflow += rate;
        }
        double resid = std::abs(outflow - inflow);
        double scale = std::max(1.0, outflow + inflow);
        out.residuals[ci] = resid;
        out.flux_scales[ci] = outflow + inflow;
        out.max_relative_residual = std::max(out.max_relative_residual, resid / scale);
        if (resid > tol * scale) out.balanced = false;
    }
    return out;
}

/// Why an equilibrium search came back empty.
enum class EquilibriumStatus { Found, StructurallyImpossible, NotFound };

struct EquilibriumSearch {
    EquilibriumStatus status = EquilibriumStatus::NotFound;
    std::optional<Concentrations> equilibrium;
    double residual = 0.0;                 // max relative complex imbalance at the solution
    std::string obstruction;               // complex that can never balance, if any
};

/// A complex appearing only as a source (or only as a product) has positive
/// flux on one side and zero on the other at every positive c, so no positive
/// complex balanced equilibrium can exist.
inline std::optional<Complex> complex_balance_obstruction(const ReactionNetwork& net) {
    for (const auto& y : net.complexes()) {
        bool as_source = false, as_product = false;
        for (const auto& r : net.reactions()) {
            if (r.source == y) as_source = true;
            if (r.product == y) as_product = true;
        }
        if (as_source != as_product) return y;
    }
    return std::nullopt;
}

/// Damped Gauss-Newton on the per-complex imbalance in log-concentration
/// coordinates (keeps c positive; the balance equations are posynomial).
/// Multiple random starts, one deterministic RNG stream per start.
inline EquilibriumSearch find_complex_balanced_equilibrium(const MassActionSystem& sys,
                                                           int attempts = 20,
                                                           double tol = 1e-10) {
    EquilibriumSearch out;
    if (auto obstruction = complex_balance_obstruction(sys.network)) {
        out.status = EquilibriumStatus::StructurallyImpossible;
        out.obstruction = format_complex(*obstruction, sys.network.species_names());
        return out;
    }

    const std::size_t d = sys.dimension();
    const auto complexes = sys.network.complexes();
    const std::size_t n = complexes.size();

    // Imbalance vector and Jacobian in u = log c.
    auto imbalance = [&](const std::vector<double>& u, std::vector<double>& g,
                         std::vector<std::vector<double>>& jac) {
        g.assign(n, 0.0);
        for (auto& row : jac) row.assign(d, 0.0);
        for (std::size_t k = 0; k < sys.reaction_count(); ++k) {
            const Reaction& r = sys.network.reaction(k);
            double lograte = std::log(r.rate_constant);
            for (std::size_t i = 0; i < d; ++i) lograte += double(r.source[i]) * u[i];
            double rate = std::exp(lograte);
            std::size_t si = static_cast<std::size_t>(
                std::find(complexes.begin(), complexes.end(), r.source) - complexes.begin());
            std::size_t pi = static_cast<std::size_t>(
                std::find(complexes.begin(), complexes.end(), r.product) - complexes.begin());
            g[si] += rate;
            g[pi] -= rate;
            for (std::size_t i = 0; i < d; ++i) {
                double dk = rate * double(r.source[i]);
                jac[si][i] += dk;
                jac[pi][i] -= dk;
            }
        }
    };

    auto sq_norm = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return s;
    };

    std::vector<double> g(n);
    std::vector<std::vector<double>> jac(n, std::vector<double>(d));

    for (int attempt = 0; attempt < attempts; ++attempt) {
        Philox4x32 rng(0x6eb1a574u, static_cast<std::uint64_t>(attempt));
        std::vector<double> u(d);
        // First start at c = 1; the rest uniform in log space over [-2, 2].
        for (auto& ui : u) ui = (attempt == 0) ? 0.0 : rng.uniform() * 4.0 - 2.0;

        double mu = 1e-3;
        for (int iter = 0; iter < 100; ++iter) {
            imbalance(u, g, jac);
            double f0 = sq_norm(g);

            // Convergence in the relative sense used by the checker.
            Concentrations c(d);
            for (std::size_t i = 0; i < d; ++i) c[i] = std::exp(u[i]);
            auto check = check_complex_balanced(sys, c, tol);
            if (check.balanced) {
                out.status = EquilibriumStatus::Found;
                out.equilibrium = c;
                out.residual = check.max_relative_residual;
                return out;
            }

            // Normal equations (J^T J + mu I) step = -J^T g.
            std::vector<std::vector<double>> ata(d, std::vector<double>(d, 0.0));
            std::vector<double> atb(d, 0.0);
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t i = 0; i < d; ++i) {
                    atb[i] -= jac[r][i] * g[r];
                    for (std::size_t j = 0; j < d; ++j) ata[i][j] += jac[r][i] * jac[r][j];
                }
            for (std::size_t i = 0; i < d; ++i) ata[i][i] += mu * (1.0 + ata[i][i]);

            auto step = linalg::solve_dense(ata, atb);
            if (!step) break;

            // Damped acceptance with step-length cap.
            double step_norm = std::sqrt(sq_norm(*step));
            double cap = 4.0;
            double scale = step_norm > cap ? cap / step_norm : 1.0;
            std::vector<double> u_next(d);
            bool improved = false;
            for (double damp = scale; damp > 1e-6; damp *= 0.5) {
                for (std::size_t i = 0; i < d; ++i) u_next[i] = u[i] + damp * (*step)[i];
                imbalance(u_next, g, jac);
                if (sq_norm(g) < f0) {
                    improved = true;
                    break;
                }
            }
            if (!improved) {
                mu *= 10.0;
                if (mu > 1e8) break;
                continue;
            }
            mu = std::max(mu * 0.3, 1e-12);
            u = u_next;
        }
    }
    out.status = EquilibriumStatus::NotFound;
    return out;
}

}  // namespace crnkit
