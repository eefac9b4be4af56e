#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "crnkit/chains.hpp"
#include "crnkit/classify.hpp"
#include "crnkit/parser.hpp"
#include "crnkit/stationary.hpp"
#include "crnkit/structure.hpp"

namespace crnkit {

/// Machine-readable analysis record, schema version 1.  Every numeric claim
/// carries its tolerance or tail bracket and the name of the criterion that
/// produced it.
struct StructureSummary {
    std::size_t complexes = 0;
    std::size_t linkage_classes = 0;
    std::size_t stoichiometric_dimension = 0;
    std::size_t deficiency = 0;
    bool weakly_reversible = false;
    std::vector<std::vector<std::string>> classes;

    friend bool operator==(const StructureSummary&, const StructureSummary&) = default;
};

struct EquilibriumSummary {
    std::string status;  // "found" | "structurally-impossible" | "not-found"
    std::optional<std::vector<double>> value;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string obstruction;

    friend bool operator==(const EquilibriumSummary&, const EquilibriumSummary&) = default;
};

struct BalanceSummary {
    double max_residual = 0.0;
    double flux_scale = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::size_t interior_states = 0;
    std::size_t window_states = 0;
    std::int64_t window_extent = 0;

    friend bool operator==(const BalanceSummary&, const BalanceSummary&) = default;
};

struct MeasureSummary {
    std::string form;
    std::vector<double> parameters;
    std::string normalizable;  // "yes" | "no" | "unknown"
    std::optional<std::array<double, 2>> normalization;
    std::optional<BalanceSummary> balance;

    friend bool operator==(const MeasureSummary&, const MeasureSummary&) = default;
};

struct EvidenceSummary {
    std::string criterion;
    double value = 0.0;
    std::optional<std::array<double, 2>> bracket;
    std::string note;

    friend bool operator==(const EvidenceSummary&, const EvidenceSummary&) = default;
};

struct ClassificationSummary {
    std::vector<std::string> tags;
    std::vector<EvidenceSummary> evidence;
    std::string initial_support_note;

    friend bool operator==(const ClassificationSummary&, const ClassificationSummary&) = default;
};

struct CertificateSummary {
    double jump_rate = 0.0;
    std::array<double, 2> rate_bracket{0.0, 0.0};
    std::string route;
    std::string support_note;
    std::optional<std::vector<double>> equilibrium;

    friend bool operator==(const CertificateSummary&, const CertificateSummary&) = default;
};

struct AnalysisReport {
    int schema = 1;
    std::string source;
    std::vector<std::string> species;
    std::size_t reaction_count = 0;
    std::string network_text;
    StructureSummary structure;
    EquilibriumSummary equilibrium;
    std::vector<MeasureSummary> measures;
    ClassificationSummary classification;
    std::optional<CertificateSummary> certificate;

    friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

// --- JSON bindings -------------------------------------------------------

namespace detail {

template <typename T>
void opt_to_json(nlohmann::json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

template <typename T>
void opt_from_json(const nlohmann::json& j, const char* key, std::optional<T>& v) {
    if (j.contains(key) && !j.at(key).is_null())
        v = j.at(key).get<T>();
    else
        v = std::nullopt;
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const StructureSummary& s) {
    j = {{"complexes", s.complexes},
         {"linkage_classes", s.linkage_classes},
         {"stoichiometric_dimension", s.stoichiometric_dimension},
         {"deficiency", s.deficiency},
         {"weakly_reversible", s.weakly_reversible},
         {"classes", s.classes}};
}
inline void from_json(const nlohmann::json& j, StructureSummary& s) {
    j.at("complexes").get_to(s.complexes);
    j.at("linkage_classes").get_to(s.linkage_classes);
    j.at("stoichiometric_dimension").get_to(s.stoichiometric_dimension);
    j.at("deficiency").get_to(s.deficiency);
    j.at("weakly_reversible").get_to(s.weakly_reversible);
    j.at("classes").get_to(s.classes);
}

inline void to_json(nlohmann::json& j, const EquilibriumSummary& s) {
    j = {{"status", s.status},
         {"residual", s.residual},
         {"tolerance", s.tolerance},
         {"obstruction", s.obstruction}};
    detail::opt_to_json(j, "value", s.value);
}
inline void from_json(const nlohmann::json& j, EquilibriumSummary& s) {
    j.at("status").get_to(s.status);
    j.at("residual").get_to(s.residual);
    j.at("tolerance").get_to(s.tolerance);
    j.at("obstruction").get_to(s.obstruction);
    detail::opt_from_json(j, "value", s.value);
}

inline void to_json(nlohmann::json& j, const BalanceSummary& s) {
    j = {{"max_residual", s.max_residual},
         {"flux_scale", s.flux_scale},
         {"tolerance", s.tolerance},
         {"passed", s.passed},
         {"interior_states", s.interior_states},
         {"window_states", s.window_states},
         {"window_extent", s.window_extent}};
}
inline void from_json(const nlohmann::json& j, BalanceSummary& s) {
    j.at("max_residual").get_to(s.max_residual);
    j.at("flux_scale").get_to(s.flux_scale);
    j.at("tolerance").get_to(s.tolerance);
    j.at("passed").get_to(s.passed);
    j.at("interior_states").get_to(s.interior_states);
    j.at("window_states").get_to(s.window_states);
    j.at("window_extent").get_to(s.window_extent);
}

inline void to_json(nlohmann::json& j, const MeasureSummary& s) {
    j = {{"form", s.form}, {"parameters", s.parameters}, {"normalizable", s.normalizable}};
    detail::opt_to_json(j, "normalization", s.normalization);
    detail::opt_to_json(j, "balance", s.balance);
}
inline void from_json(const nlohmann::json& j, MeasureSummary& s) {
    j.at("form").get_to(s.form);
    j.at("parameters").get_to(s.parameters);
    j.at("normalizable").get_to(s.normalizable);
    detail::opt_from_json(j, "normalization", s.normalization);
    detail::opt_from_json(j, "balance", s.balance);
}

inline void to_json(nlohmann::json& j, const EvidenceSummary& s) {
    j = {{"criterion", s.criterion}, {"value", s.value}, {"note", s.note}};
    detail::opt_to_json(j, "bracket", s.bracket);
}
inline void from_json(const nlohmann::json& j, EvidenceSummary& s) {
    j.at("criterion").get_to(s.criterion);
    j.at("value").get_to(s.value);
    j.at("note").get_to(s.note);
    detail::opt_from_json(j, "bracket", s.bracket);
}

inline void to_json(nlohmann::json& j, const ClassificationSummary& s) {
    j = {{"tags", s.tags},
         {"evidence", s.evidence},
         {"initial_support_note", s.initial_support_note}};
}
inline void from_json(const nlohmann::json& j, ClassificationSummary& s) {
    j.at("tags").get_to(s.tags);
    j.at("evidence").get_to(s.evidence);
    j.at("initial_support_note").get_to(s.initial_support_note);
}

inline void to_json(nlohmann::json& j, const CertificateSummary& s) {
    j = {{"jump_rate", s.jump_rate},
         {"rate_bracket", s.rate_bracket},
         {"route", s.route},
         {"support_note", s.support_note}};
    detail::opt_to_json(j, "equilibrium", s.equilibrium);
}
inline void from_json(const nlohmann::json& j, CertificateSummary& s) {
    j.at("jump_rate").get_to(s.jump_rate);
    j.at("rate_bracket").get_to(s.rate_bracket);
    j.at("route").get_to(s.route);
    j.at("support_note").get_to(s.support_note);
    detail::opt_from_json(j, "equilibrium", s.equilibrium);
}

inline void to_json(nlohmann::json& j, const AnalysisReport& r) {
    j = {{"schema", r.schema},
         {"source", r.source},
         {"species", r.species},
         {"reaction_count", r.reaction_count},
         {"network", r.network_text},
         {"structure", r.structure},
         {"equilibrium", r.equilibrium},
         {"measures", r.measures},
         {"classification", r.classification}};
    detail::opt_to_json(j, "certificate", r.certificate);
}
inline void from_json(const nlohmann::json& j, AnalysisReport& r) {
    j.at("schema").get_to(r.schema);
    j.at("source").get_to(r.source);
    j.at("species").get_to(r.species);
    j.at("reaction_count").get_to(r.reaction_count);
    j.at("network").get_to(r.network_text);
    j.at("structure").get_to(r.structure);
    j.at("equilibrium").get_to(r.equilibrium);
    j.at("measures").get_to(r.measures);
    j.at("classification").get_to(r.classification);
    detail::opt_from_json(j, "certificate", r.certificate);
}

// --- analysis pipeline ----------------------------------------------------

struct AnalyzeOptions {
    std::int64_t window = 30;
    double balance_tol = 1e-8;
    double equilibrium_tol = 1e-10;
    int attempts = 20;
    SeriesOptions series;
};

namespace detail {

inline std::optional<std::array<double, 2>> bracket_of(const std::optional<Interval>& iv) {
    if (!iv) return std::nullopt;
    return std::array<double, 2>{iv->lo, iv->hi};
}

inline EvidenceSummary summarize(const Evidence& ev) {
    return {ev.criterion, ev.value, bracket_of(ev.bracket), ev.note};
}

inline ClassificationSummary summarize(const ClassificationReport& rep) {
    ClassificationSummary out;
    for (Verdict v : rep.tags()) out.tags.push_back(to_string(v));
    for (const auto& ev : rep.evidence()) out.evidence.push_back(summarize(ev));
    out.initial_support_note = rep.initial_support_note;
    return out;
}

inline BalanceSummary summarize_balance(const BalanceResidualReport& rep, double tol,
                                        std::int64_t extent) {
    BalanceSummary b;
    b.max_residual = rep.max_residual;
    b.flux_scale = rep.flux_scale;
    b.tolerance = tol;
    b.passed = rep.passes(tol);
    b.interior_states = rep.interior_count;
    b.window_states = rep.window_size;
    b.window_extent = extent;
    return b;
}

/// Birth/death rate split of a one-dimensional chain whose reaction vectors
/// are all +-1, plus the floor of the climbing part of the state space.
struct BirthDeathView {
    std::function<double(std::int64_t)> birth, death;
    std::int64_t floor = 0;
};

inline std::optional<BirthDeathView> birth_death_view(const MassActionSystem& sys) {
    if (sys.dimension() != 1) return std::nullopt;
    for (std::size_t k = 0; k < sys.reaction_count(); ++k) {
        auto zeta = reaction_vector(sys.network.reaction(k));
        if (zeta[0] != 1 && zeta[0] != -1) return std::nullopt;
    }
    BirthDeathView view;
    view.birth = [sys](std::int64_t x) {
        double total = 0.0;
        for (std::size_t k = 0; k < sys.reaction_count(); ++k)
            if (reaction_vector(sys.network.reaction(k))[0] == 1)
                total += stochastic_intensity(sys, k, State{x});
        return total;
    };
    view.death = [sys](std::int64_t x) {
        double total = 0.0;
        for (std::size_t k = 0; k < sys.reaction_count(); ++k)
            if (reaction_vector(sys.network.reaction(k))[0] == -1)
                total += stochastic_intensity(sys, k, State{x});
        return total;
    };
    std::int64_t first_live = -1;
    for (std::int64_t x = 0; x < 4096; ++x)
        if (view.birth(x) > 0.0) {
            first_live = x;
            break;
        }
    if (first_live < 0) return std::nullopt;
    while (first_live > 0 && view.death(first_live) > 0.0) --first_live;
    view.floor = first_live;
    return view;
}

}  // namespace detail

/// Full analysis pipeline: structure, equilibrium search, stationary
/// measures with balance verification, and the classification verdicts.
/// Contradictory verdicts surface as VerdictContradiction.
inline AnalysisReport run_analysis(const ReactionNetwork& net, const AnalyzeOptions& opts = {},
                                   const std::string& source = "<memory>") {
    MassActionSystem sys(net);
    AnalysisReport rep;
    rep.source = source;
    rep.species = net.species_names();
    rep.reaction_count = net.reaction_count();
    rep.network_text = format_network(net);

    auto structure = analyze_structure(net);
    rep.structure.complexes = structure.complex_count;
    rep.structure.linkage_classes = structure.linkage_class_count;
    rep.structure.stoichiometric_dimension = structure.stoichiometric_dimension;
    rep.structure.deficiency = structure.deficiency;
    rep.structure.weakly_reversible = structure.weakly_reversible;
    for (const auto& cls : structure.linkage_classes) {
        std::vector<std::string> names;
        for (const auto& c : cls) names.push_back(format_complex(c, net.species_names()));
        rep.structure.classes.push_back(std::move(names));
    }

    ClassificationReport classification;

    auto cb = certify_complex_balanced_nonexplosive(sys, opts.attempts, opts.equilibrium_tol);
    rep.equilibrium.tolerance = opts.equilibrium_tol;
    switch (cb.status) {
        case EquilibriumStatus::Found: rep.equilibrium.status = "found"; break;
        case EquilibriumStatus::StructurallyImpossible:
            rep.equilibrium.status = "structurally-impossible";
            break;
        default: rep.equilibrium.status = "not-found"; break;
    }
    rep.equilibrium.obstruction = cb.obstruction;

    if (cb.status == EquilibriumStatus::Found) {
        const auto& cert = *cb.certificate;
        rep.equilibrium.value = *cert.equilibrium;
        rep.equilibrium.residual =
            check_complex_balanced(sys, *cert.equilibrium, opts.equilibrium_tol)
                .max_relative_residual;

        auto pi = product_form_poisson(*cert.equilibrium);
        auto spec = as_ctmc(sys);
        Window w = make_orthant_window(sys.dimension(), opts.window);
        auto balance = balance_residual(spec, pi, w);

        MeasureSummary ms;
        ms.form = pi.closed_form;
        ms.parameters = *cert.equilibrium;
        ms.normalizable = to_string(pi.normalizable);
        ms.normalization = std::array<double, 2>{1.0, 1.0};
        ms.balance = detail::summarize_balance(balance, opts.balance_tol, opts.window);
        rep.measures.push_back(ms);

        classification.add_tag(
            Verdict::NonExplosiveCertified,
            {"complex-balanced-jump-rate", cert.jump_rate,
             Interval{cert.rate_bracket.lo, cert.rate_bracket.hi}, cert.support_note});
        classification.add_evidence({"balance-residual", balance.max_residual, std::nullopt,
                                     "max interior residual, flux scale " +
                                         std::to_string(balance.flux_scale)});
        classification.initial_support_note = cert.support_note;

        CertificateSummary cs;
        cs.jump_rate = cert.jump_rate;
        cs.rate_bracket = {cert.rate_bracket.lo, cert.rate_bracket.hi};
        cs.route = cert.route;
        cs.support_note = cert.support_note;
        cs.equilibrium = cert.equilibrium;
        rep.certificate = cs;
    } else if (auto view = detail::birth_death_view(sys)) {
        auto cls = classify_birth_death(view->birth, view->death, view->floor,
                                        std::max<std::int64_t>(opts.window, 64), opts.series);
        classification = std::move(cls.report);

        MeasureSummary ms;
        ms.form = cls.stationary.measure.closed_form;
        ms.normalizable = to_string(cls.stationary.measure.normalizable);
        if (cls.stationary.measure.normalization)
            ms.normalization = std::array<double, 2>{cls.stationary.measure.normalization->lo,
                                                     cls.stationary.measure.normalization->hi};
        if (cls.stationary.measure.normalizable == Normalizable::Yes) {
            auto chain = make_birth_death_chain(view->birth, view->death, view->floor);
            Window w = make_box_window(State{view->floor},
                                       State{view->floor + opts.window},
                                       [lo = view->floor](const State& x) { return x[0] >= lo; });
            auto balance = balance_residual(chain, cls.stationary.measure, w);
            ms.balance = detail::summarize_balance(balance, opts.balance_tol, opts.window);
        }
        rep.measures.push_back(ms);
    } else {
        classification.add_tag(Verdict::Inconclusive,
                               {"no-criterion", 0.0, std::nullopt,
                                "no equilibrium found and no one-dimensional reduction applies"});
    }

    rep.classification = detail::summarize(classification);
    return rep;
}

}  // namespace crnkit
