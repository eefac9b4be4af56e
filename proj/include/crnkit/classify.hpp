#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "crnkit/ctmc.hpp"
#include "crnkit/series.hpp"
#include "crnkit/stationary.hpp"
#include "crnkit/structure.hpp"

namespace crnkit {

enum class Verdict {
    NonExplosiveCertified,
    Explosive,
    PositiveRecurrent,
    Recurrent,
    TransientEmbedded,
    Inconclusive,
};

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::NonExplosiveCertified: return "non-explosive-certified";
        case Verdict::Explosive: return "explosive";
        case Verdict::PositiveRecurrent: return "positive-recurrent";
        case Verdict::Recurrent: return "recurrent";
        case Verdict::TransientEmbedded: return "transient-embedded";
        default: return "inconclusive";
    }
}

inline std::optional<Verdict> verdict_from_string(const std::string& s) {
    for (Verdict v : {Verdict::NonExplosiveCertified, Verdict::Explosive,
                      Verdict::PositiveRecurrent, Verdict::Recurrent, Verdict::TransientEmbedded,
                      Verdict::Inconclusive})
        if (s == to_string(v)) return v;
    return std::nullopt;
}

/// One numeric fact supporting a verdict: which criterion produced it, its
/// value, and the tail bracket when one exists.
struct Evidence {
    std::string criterion;
    double value = 0.0;
    std::optional<Interval> bracket;
    std::string note;

    friend bool operator==(const Evidence&, const Evidence&) = default;
};

class VerdictContradiction : public std::logic_error {
  public:
    VerdictContradiction(Verdict a, Verdict b)
        : std::logic_error(std::string("contradictory verdicts: ") + to_string(a) + " vs " +
                           to_string(b)) {}
};

/// Verdict tags plus the evidence behind them.  Compatible tags may coexist
/// (explosive + transient-embedded, say); adding a tag that contradicts an
/// existing one fails loudly rather than producing a quietly wrong report.
class ClassificationReport {
  public:
    void add_tag(Verdict v, Evidence ev) {
        static const std::vector<std::pair<Verdict, Verdict>> conflicts = {
            {Verdict::NonExplosiveCertified, Verdict::Explosive},
            {Verdict::PositiveRecurrent, Verdict::Explosive},
            {Verdict::Recurrent, Verdict::Explosive},
            {Verdict::Recurrent, Verdict::TransientEmbedded},
            {Verdict::PositiveRecurrent, Verdict::TransientEmbedded},
        };
        for (auto [a, b] : conflicts) {
            if ((v == a && tags_.count(b)) || (v == b && tags_.count(a)))
                throw VerdictContradiction(v, v == a ? b : a);
        }
        tags_.insert(v);
        evidence_.push_back(std::move(ev));
    }

    void add_evidence(Evidence ev) { evidence_.push_back(std::move(ev)); }

    bool has(Verdict v) const { return tags_.count(v) > 0; }
    const std::set<Verdict>& tags() const { return tags_; }
    const std::vector<Evidence>& evidence() const { return evidence_; }

    std::optional<StationaryMeasure> stationary;
    /// Certificates apply only to initial distributions supported inside the
    /// support of the verifying measure.
    std::string initial_support_note;

  private:
    std::set<Verdict> tags_;
    std::vector<Evidence> evidence_;
};

/// Non-explosiveness certificate: a verified constant solution of the
/// forward equation whose stationary expected jump rate is finite.
struct NonExplosiveCertificate {
    double jump_rate = 0.0;
    Interval rate_bracket;
    std::string route;  // "stationary-jump-rate" | "complex-balanced"
    std::string support_note;
    std::optional<Concentrations> equilibrium;
    BalanceResidualReport balance;
};

struct CertifyOptions {
    double balance_tol = 1e-8;
    std::int64_t support_from = 0;
    SeriesOptions series;
};

inline std::optional<NonExplosiveCertificate> certify_nonexplosive(const CtmcSpec& spec,
                                                                   const StationaryMeasure& pi,
                                                                   const Window& window,
                                                                   CertifyOptions opts = {}) {
    auto balance = balance_residual(spec, pi, window);
    if (!balance.passes(opts.balance_tol)) return std::nullopt;
    auto rate = expected_jump_rate(spec, pi, opts.support_from, opts.series);
    if (rate.verdict != SeriesVerdict::Finite) return std::nullopt;

    NonExplosiveCertificate cert;
    cert.jump_rate = rate.value->mid();
    cert.rate_bracket = *rate.value;
    cert.route = "stationary-jump-rate";
    cert.support_note =
        "valid for initial distributions supported in the support of the verified measure";
    cert.balance = balance;
    return cert;
}

/// Certificate via complex balancing: find/verify an equilibrium c, take the
/// product-Poisson measure it induces, and read the jump rate off the closed
/// form sum_k kappa_k c^{y_k}.
struct ComplexBalancedCertification {
    EquilibriumStatus status = EquilibriumStatus::NotFound;
    std::optional<NonExplosiveCertificate> certificate;
    std::string obstruction;
};

inline ComplexBalancedCertification certify_complex_balanced_nonexplosive(
    const MassActionSystem& sys, int attempts = 20, double tol = 1e-10) {
    ComplexBalancedCertification out;
    auto search = find_complex_balanced_equilibrium(sys, attempts, tol);
    out.status = search.status;
    out.obstruction = search.obstruction;
    if (search.status != EquilibriumStatus::Found) return out;

    double rate = poisson_jump_rate(sys, *search.equilibrium);
    NonExplosiveCertificate cert;
    cert.jump_rate = rate;
    cert.rate_bracket = Interval{rate, rate};
    cert.route = "complex-balanced";
    cert.support_note =
        "complex balanced mass-action: non-explosive for every initial distribution";
    cert.equilibrium = search.equilibrium;
    out.certificate = cert;
    return out;
}

/// Embedded jump-chain series of a birth-death chain living on
/// {from-1, from, ...}: sum over n >= from of prod_{x=from}^{n} d(x)/b(x).
/// Convergent means the embedded chain is transient, divergent recurrent.
inline SeriesAnalysis bd_embedded_series(const std::function<double(std::int64_t)>& birth,
                                         const std::function<double(std::int64_t)>& death,
                                         std::int64_t from, SeriesOptions opts = {}) {
    opts.zero_is_absorbing = true;
    double running = 1.0;
    auto term = [&, running](long long n) mutable {
        double b = birth(n);
        if (b <= 0.0) return std::numeric_limits<double>::infinity();
        running *= death(n) / b;
        return running;
    };
    return analyze_series(term, from, opts);
}

struct PureBirthTest {
    enum class Outcome { Explosive, NonExplosive, Inconclusive } outcome;
    SeriesAnalysis series;  // sum of mean holding times 1/b(x)
};

/// A pure-birth chain explodes iff its mean holding times are summable.
inline PureBirthTest pure_birth_explosion_test(const std::function<double(std::int64_t)>& birth,
                                               std::int64_t from, SeriesOptions opts = {}) {
    opts.zero_is_absorbing = true;
    PureBirthTest out{PureBirthTest::Outcome::Inconclusive, {}};
    out.series = analyze_series(
        [&](long long x) {
            double b = birth(x);
            return b > 0.0 ? 1.0 / b : std::numeric_limits<double>::infinity();
        },
        from, opts);
    if (out.series.finite()) out.outcome = PureBirthTest::Outcome::Explosive;
    if (out.series.divergent()) out.outcome = PureBirthTest::Outcome::NonExplosive;
    return out;
}

/// Classifies a birth-death chain on {x_min, x_min+1, ...} by combining the
/// embedded-chain series with the detailed-balance measure:
///   convergent series + normalizable measure  -> explosive (with the
///     stationary distribution attached),
///   divergent series + normalizable measure   -> positive recurrent,
/// partial evidence otherwise.  The finite-jump-rate certificate is attempted
/// whenever the measure normalizes, and recorded either way.
struct BirthDeathClassification {
    ClassificationReport report;
    SeriesAnalysis embedded_series;
    BirthDeathStationary stationary;
    JumpRateResult jump_rate;
};

inline BirthDeathClassification classify_birth_death(
    const std::function<double(std::int64_t)>& birth,
    const std::function<double(std::int64_t)>& death, std::int64_t x_min,
    std::int64_t support_window = 256, SeriesOptions opts = {}) {
    BirthDeathClassification out;
    out.embedded_series = bd_embedded_series(birth, death, x_min + 1, opts);
    out.stationary = birth_death_stationary(birth, death, x_min, opts);

    const auto& series = out.embedded_series;
    const auto& measure = out.stationary.measure;
    auto& rep = out.report;

    Evidence series_ev{"embedded-chain-series",
                       series.finite() ? series.value->mid() : series.partial_sum,
                       series.finite() ? series.value : std::nullopt,
                       std::string("verdict ") + to_string(series.verdict) + "; " + series.method};

    bool support_covers_window = true;
    for (std::int64_t x = out.stationary.base;
         x < out.stationary.base + support_window && support_covers_window; ++x)
        if (!(measure.mass(State{x}) > 0.0)) support_covers_window = false;

    if (measure.normalizable == Normalizable::Yes) {
        rep.stationary = measure;
        rep.add_evidence({"detailed-balance-normalization",
                          measure.normalization->mid(),
                          measure.normalization,
                          "weight sum bracket"});
        // Jump-rate certificate attempt, recorded as evidence either way.
        CtmcSpec chain;
        chain.state_dimension = 1;
        chain.max_jump_radius = 1;
        std::int64_t base = out.stationary.base;
        chain.neighbors = [birth, death, base](const State& x) {
            std::vector<Transition> ts;
            if (x[0] < base) return ts;
            double b = birth(x[0]);
            double d = x[0] > base ? death(x[0]) : 0.0;
            if (b > 0.0) ts.push_back({State{x[0] + 1}, b});
            if (d > 0.0) ts.push_back({State{x[0] - 1}, d});
            return ts;
        };
        chain.neighbors_into = [fn = chain.neighbors](const State& x,
                                                      std::vector<Transition>& buf) {
            buf = fn(x);
        };
        out.jump_rate = jump_rate_series_1d(chain, measure, base, opts);
        // Finite: the rate itself.  Divergent: the comparator constant.
        double rate_value = out.jump_rate.value ? out.jump_rate.value->mid()
                            : out.jump_rate.verdict == SeriesVerdict::Divergent
                                ? out.jump_rate.series.comparator
                                : out.jump_rate.series.partial_sum;
        Evidence rate_ev{"stationary-jump-rate", rate_value, out.jump_rate.value,
                         std::string("verdict ") + to_string(out.jump_rate.verdict) + "; " +
                             out.jump_rate.series.method};

        if (series.finite()) {
            rep.add_tag(Verdict::TransientEmbedded, series_ev);
            if (support_covers_window) {
                rep.add_tag(Verdict::Explosive,
                            {"transient-embedded-plus-stationary", series.value->mid(),
                             series.value,
                             "transient embedded chain with a stationary distribution"});
                rep.initial_support_note = "stationary distribution attached; explosion verdict";
            }
            rep.add_evidence(rate_ev);
        } else if (series.divergent()) {
            rep.add_tag(Verdict::Recurrent, series_ev);
            rep.add_tag(Verdict::PositiveRecurrent,
                        {"recurrent-plus-stationary", measure.normalization->mid(),
                         measure.normalization,
                         "recurrent embedded chain with a normalizable stationary measure"});
            if (out.jump_rate.verdict == SeriesVerdict::Finite)
                rep.add_tag(Verdict::NonExplosiveCertified, rate_ev);
            else
                rep.add_evidence(rate_ev);
        } else {
            rep.add_tag(Verdict::Inconclusive, series_ev);
            rep.add_evidence(rate_ev);
        }
    } else {
        rep.add_evidence({"detailed-balance-normalization", out.stationary.normalization_series.partial_sum,
                          std::nullopt,
                          std::string("weight sum ") +
                              to_string(out.stationary.normalization_series.verdict)});
        if (series.finite())
            rep.add_tag(Verdict::TransientEmbedded, series_ev);
        else if (series.divergent())
            rep.add_tag(Verdict::Recurrent, series_ev);
        else
            rep.add_tag(Verdict::Inconclusive, series_ev);
    }
    return out;
}

/// Two verified, genuinely different constant solutions of the forward
/// equation supported on one irreducible window force an explosive verdict.
struct MultipleStationaryOptions {
    double balance_tol = 1e-8;
    double distinct_tol = 1e-6;
};

inline std::optional<ClassificationReport> multiple_stationary_rule(
    const CtmcSpec& spec, const std::vector<StationaryMeasure>& measures, const Window& window,
    MultipleStationaryOptions opts = {}) {
    if (measures.size() < 2) return std::nullopt;

    std::vector<BalanceResidualReport> balances;
    for (const auto& pi : measures) {
        auto rep = balance_residual(spec, pi, window);
        if (!rep.passes(opts.balance_tol)) return std::nullopt;
        balances.push_back(std::move(rep));
    }

    // Support must cover the window for every measure.
    for (const auto& pi : measures)
        for (const auto& x : window.states)
            if (!(pi.mass(x) > 0.0)) return std::nullopt;

    // Pairwise distinctness beyond tolerance on the window.
    double best_separation = 0.0;
    bool found_pair = false;
    for (std::size_t i = 0; i < measures.size() && !found_pair; ++i) {
        for (std::size_t j = i + 1; j < measures.size() && !found_pair; ++j) {
            double diff = 0.0, scale = 0.0;
            for (const auto& x : window.states) {
                double a = measures[i].mass(x), b = measures[j].mass(x);
                diff = std::max(diff, std::abs(a - b));
                scale = std::max({scale, a, b});
            }
            if (diff > opts.distinct_tol * scale) {
                best_separation = diff;
                found_pair = true;
            }
        }
    }
    if (!found_pair) return std::nullopt;

    // Directed reachability both ways among window states.
    std::map<State, std::size_t> index;
    for (std::size_t i = 0; i < window.states.size(); ++i) index[window.states[i]] = i;
    std::vector<std::vector<std::size_t>> fwd(window.states.size()), rev(window.states.size());
    for (std::size_t i = 0; i < window.states.size(); ++i)
        for (const auto& t : spec.neighbors(window.states[i]))
            if (auto it = index.find(t.target); it != index.end()) {
                fwd[i].push_back(it->second);
                rev[it->second].push_back(i);
            }
    auto reaches_all = [&](const std::vector<std::vector<std::size_t>>& adj) {
        std::vector<bool> seen(adj.size(), false);
        std::deque<std::size_t> queue{0};
        seen[0] = true;
        std::size_t count = 1;
        while (!queue.empty()) {
            auto v = queue.front();
            queue.pop_front();
            for (auto w : adj[v])
                if (!seen[w]) {
                    seen[w] = true;
                    ++count;
                    queue.push_back(w);
                }
        }
        return count == adj.size();
    };
    if (!reaches_all(fwd) || !reaches_all(rev)) return std::nullopt;

    ClassificationReport rep;
    for (std::size_t i = 0; i < balances.size(); ++i)
        rep.add_evidence({"balance-residual[" + std::to_string(i) + "]", balances[i].max_residual,
                          std::nullopt, "max residual over interior states"});
    rep.add_tag(Verdict::Explosive,
                {"multiple-stationary-distributions", best_separation, std::nullopt,
                 "distinct constant solutions on one irreducible window"});
    rep.initial_support_note = "irreducibility checked on the window only";
    return rep;
}

}  // namespace crnkit
