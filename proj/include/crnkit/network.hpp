#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace crnkit {

/// Molecule counts of a stochastic state, or an integer lattice point for
/// generic chains (signed so that chains on all of Z^d are representable).
using State = std::vector<std::int64_t>;

/// Species concentrations for the deterministic model.
using Concentrations = std::vector<double>;

/// A complex: per-species molecule counts, indexed by the network's fixed
/// species ordering.
struct Complex {
    std::vector<std::int64_t> coefficients;

    Complex() = default;
    explicit Complex(std::vector<std::int64_t> coeffs) : coefficients(std::move(coeffs)) {
        for (auto c : coefficients)
            if (c < 0) throw std::invalid_argument("complex coefficients must be non-negative");
    }

    std::size_t size() const { return coefficients.size(); }
    std::int64_t operator[](std::size_t i) const { return coefficients[i]; }
    bool is_empty() const {
        return std::all_of(coefficients.begin(), coefficients.end(),
                           [](std::int64_t c) { return c == 0; });
    }

    friend bool operator==(const Complex& a, const Complex& b) = default;
    friend auto operator<=>(const Complex& a, const Complex& b) = default;
};

/// A single reaction source -> product with a positive rate constant.
/// Self-loops (source == product) are rejected at construction.
struct Reaction {
    Complex source;
    Complex product;
    double rate_constant = 0.0;

    Reaction() = default;
    Reaction(Complex src, Complex prod, double kappa)
        : source(std::move(src)), product(std::move(prod)), rate_constant(kappa) {
        if (source.size() != product.size())
            throw std::invalid_argument("reaction source/product dimension mismatch");
        if (source == product)
            throw std::invalid_argument("self-loop reaction (source equals product)");
        if (!(rate_constant > 0.0) || !std::isfinite(rate_constant))
            throw std::invalid_argument("rate constant must be positive and finite");
    }

    friend bool operator==(const Reaction& a, const Reaction& b) = default;
};

/// Net molecule gain when the reaction fires: product minus source.
inline std::vector<std::int64_t> reaction_vector(const Reaction& r) {
    std::vector<std::int64_t> zeta(r.source.size());
    for (std::size_t i = 0; i < zeta.size(); ++i)
        zeta[i] = r.product[i] - r.source[i];
    return zeta;
}

/// Formal reversal, used by the parser for "<->" arrows.
inline Reaction reverse(const Reaction& r, double kappa) {
    return Reaction(r.product, r.source, kappa);
}

/// A reaction network over a fixed, ordered species list.  The complex set
/// is derived (distinct sources/products in order of first appearance).
class ReactionNetwork {
  public:
    ReactionNetwork(std::vector<std::string> species_names, std::vector<Reaction> reactions)
        : species_(std::move(species_names)), reactions_(std::move(reactions)) {
        validate();
    }

    std::size_t species_count() const { return species_.size(); }
    std::size_t reaction_count() const { return reactions_.size(); }
    const std::vector<std::string>& species_names() const { return species_; }
    const std::vector<Reaction>& reactions() const { return reactions_; }
    const Reaction& reaction(std::size_t k) const { return reactions_.at(k); }

    /// Distinct complexes in order of first appearance (sources before
    /// products within each reaction).
    std::vector<Complex> complexes() const {
        std::vector<Complex> out;
        auto add = [&out](const Complex& c) {
            if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
        };
        for (const auto& r : reactions_) {
            add(r.source);
            add(r.product);
        }
        return out;
    }

    friend bool operator==(const ReactionNetwork& a, const ReactionNetwork& b) = default;

  private:
    void validate() const {
        if (species_.empty()) throw std::invalid_argument("network needs at least one species");
        if (reactions_.empty()) throw std::invalid_argument("network needs at least one reaction");
        for (std::size_t i = 0; i < species_.size(); ++i)
            for (std::size_t j = i + 1; j < species_.size(); ++j)
                if (species_[i] == species_[j])
                    throw std::invalid_argument("duplicate species name: " + species_[i]);
        for (const auto& r : reactions_)
            if (r.source.size() != species_.size())
                throw std::invalid_argument("reaction dimension does not match species count");
        // R is a set: merge duplicate (source, product) pairs upstream instead.
        for (std::size_t i = 0; i < reactions_.size(); ++i)
            for (std::size_t j = i + 1; j < reactions_.size(); ++j)
                if (reactions_[i].source == reactions_[j].source &&
                    reactions_[i].product == reactions_[j].product)
                    throw std::invalid_argument("duplicate reaction (same source and product)");
    }

    std::vector<std::string> species_;
    std::vector<Reaction> reactions_;
};

/// Renders a complex against the species ordering, e.g. "A + 3B"; the empty
/// complex prints as "0".
inline std::string format_complex(const Complex& c, const std::vector<std::string>& species) {
    if (c.is_empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < species.size(); ++i) {
        if (c[i] == 0) continue;
        if (!out.empty()) out += " + ";
        if (c[i] != 1) out += std::to_string(c[i]);
        out += species[i];
    }
    return out;
}

/// Networks compared as unordered reaction sets (species order still fixed).
inline bool same_network_modulo_order(const ReactionNetwork& a, const ReactionNetwork& b) {
    if (a.species_names() != b.species_names()) return false;
    if (a.reaction_count() != b.reaction_count()) return false;
    std::vector<bool> used(b.reaction_count(), false);
    for (const auto& ra : a.reactions()) {
        bool found = false;
        for (std::size_t j = 0; j < b.reaction_count(); ++j) {
            if (!used[j] && b.reaction(j) == ra) {
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace crnkit
