// Command-line front end: analyze / simulate / classify-bd / verify-stationary.
//
// Exit codes: 0 success, 2 malformed input (parse errors, bad dimensions,
// invalid configuration), 3 internal inconsistency (contradictory verdicts).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "crnkit/crnkit.hpp"
#include "crnkit/report.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitInconsistent = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

crnkit::State parse_state(const std::string& text) {
    crnkit::State x;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw std::runtime_error("empty component in state '" + text + "'");
        x.push_back(std::stoll(tok));
    }
    if (x.empty()) throw std::runtime_error("empty state");
    return x;
}

void print_classification(const crnkit::ClassificationSummary& cls) {
    std::cout << "verdicts:";
    for (const auto& tag : cls.tags) std::cout << ' ' << tag;
    std::cout << '\n';
    for (const auto& ev : cls.evidence) {
        std::cout << "  - " << ev.criterion << " = " << ev.value;
        if (ev.bracket) std::cout << " in [" << (*ev.bracket)[0] << ", " << (*ev.bracket)[1] << "]";
        if (!ev.note.empty()) std::cout << "  (" << ev.note << ")";
        std::cout << '\n';
    }
    if (!cls.initial_support_note.empty())
        std::cout << "  note: " << cls.initial_support_note << '\n';
}

int cmd_analyze(const std::string& path, std::int64_t window, double tol, int attempts,
                const std::string& json_out) {
    auto net = crnkit::parse_network(read_file(path));
    crnkit::AnalyzeOptions opts;
    opts.window = window;
    opts.balance_tol = tol;
    opts.attempts = attempts;
    auto rep = crnkit::run_analysis(net, opts, path);

    std::cout << "network: " << rep.reaction_count << " reactions over "
              << rep.species.size() << " species\n";
    std::cout << "structure: complexes " << rep.structure.complexes << ", linkage classes "
              << rep.structure.linkage_classes << ", stoichiometric dimension "
              << rep.structure.stoichiometric_dimension << ", deficiency "
              << rep.structure.deficiency
              << (rep.structure.weakly_reversible ? ", weakly reversible" : ", not weakly reversible")
              << '\n';
    std::cout << "equilibrium: " << rep.equilibrium.status;
    if (rep.equilibrium.value) {
        std::cout << " c = (";
        for (std::size_t i = 0; i < rep.equilibrium.value->size(); ++i)
            std::cout << (i ? ", " : "") << (*rep.equilibrium.value)[i];
        std::cout << "), max relative imbalance " << rep.equilibrium.residual;
    }
    if (!rep.equilibrium.obstruction.empty())
        std::cout << " (unbalanceable complex: " << rep.equilibrium.obstruction << ")";
    std::cout << '\n';
    for (const auto& m : rep.measures) {
        std::cout << "measure: " << m.form << ", normalizable " << m.normalizable;
        if (m.balance)
            std::cout << "; balance residual " << m.balance->max_residual << " vs tolerance "
                      << m.balance->tolerance << " * scale " << m.balance->flux_scale << " -> "
                      << (m.balance->passed ? "pass" : "FAIL") << " on " << m.balance->interior_states
                      << " interior states";
        std::cout << '\n';
    }
    if (rep.certificate)
        std::cout << "certificate: non-explosive via " << rep.certificate->route
                  << ", stationary jump rate " << rep.certificate->jump_rate << '\n';
    print_classification(rep.classification);

    if (!json_out.empty()) write_json(json_out, nlohmann::json(rep));
    return 0;
}

int cmd_simulate(const std::string& path, const std::string& x0_text, double T,
                 std::uint64_t seed, bool seed_given, int batch, std::uint64_t max_jumps,
                 double state_cap, double burn_in, const std::string& record_mode,
                 const std::string& traj_out, const std::string& occ_out,
                 const std::string& json_out) {
    auto net = crnkit::parse_network(read_file(path));
    crnkit::MassActionSystem sys(net);
    auto spec = crnkit::as_ctmc(sys);

    crnkit::State x0 = parse_state(x0_text);
    if (x0.size() != spec.state_dimension)
        throw std::runtime_error("initial state has " + std::to_string(x0.size()) +
                                 " components, network has " +
                                 std::to_string(spec.state_dimension) + " species");
    for (auto v : x0)
        if (v < 0) throw std::runtime_error("species counts must be non-negative");

    if (batch > 1 && !seed_given)
        throw std::runtime_error("--seed is mandatory in batch mode");

    crnkit::SimConfig cfg;
    cfg.seed = seed;
    cfg.time_horizon = T;
    cfg.max_jumps = max_jumps;
    cfg.state_norm_cap = state_cap;
    cfg.burn_in_fraction = burn_in;
    if (record_mode == "full")
        cfg.record = crnkit::RecordMode::Full;
    else if (record_mode == "occupancy")
        cfg.record = crnkit::RecordMode::Occupancy;
    else if (record_mode == "summary")
        cfg.record = crnkit::RecordMode::Summary;
    else
        throw std::runtime_error("unknown record mode '" + record_mode + "'");
    if (!traj_out.empty()) cfg.record = crnkit::RecordMode::Full;

    auto runs = crnkit::run_batch(spec, x0, cfg, static_cast<std::size_t>(batch));
    std::map<crnkit::SimOutcome, int> outcomes;
    for (const auto& traj : runs) ++outcomes[traj.outcome];

    nlohmann::json j;
    j["schema"] = 1;
    j["source"] = path;
    j["runs"] = batch;
    j["time_horizon"] = T;
    j["seed"] = seed;
    for (const auto& traj : runs) {
        nlohmann::json run;
        run["outcome"] = crnkit::to_string(traj.outcome);
        run["jumps"] = traj.jump_count;
        run["elapsed"] = traj.elapsed;
        j["outcomes"].push_back(run);
    }

    for (const auto& [outcome, count] : outcomes)
        std::cout << count << "/" << batch << " runs: " << crnkit::to_string(outcome) << '\n';
    for (const auto& traj : runs) {
        if (traj.outcome != crnkit::SimOutcome::HorizonReached) {
            std::cout << "explosion symptom: " << crnkit::to_string(traj.outcome)
                      << " at t = " << traj.elapsed << " after " << traj.jump_count
                      << " jumps (guard trigger, not proof)\n";
            break;
        }
    }

    if (!traj_out.empty()) {
        std::ofstream out(traj_out, std::ios::binary);
        crnkit::write_trajectory(out, runs.front());
        std::cout << "trajectory written to " << traj_out << '\n';
    }

    bool have_occupancy =
        cfg.record != crnkit::RecordMode::Summary && outcomes.count(crnkit::SimOutcome::HorizonReached);
    if (have_occupancy) {
        std::vector<crnkit::Trajectory> finished;
        for (auto& traj : runs)
            if (traj.outcome == crnkit::SimOutcome::HorizonReached)
                finished.push_back(std::move(traj));
        auto occ = crnkit::empirical_occupancy(finished);
        if (!occ_out.empty()) {
            std::ofstream out(occ_out, std::ios::binary);
            crnkit::write_occupancy(out, occ);
            std::cout << "occupancy written to " << occ_out << '\n';
        }
        // Distribution diagnostic whenever a product-form candidate exists.
        auto cb = crnkit::certify_complex_balanced_nonexplosive(sys, 10, 1e-10);
        if (cb.status == crnkit::EquilibriumStatus::Found) {
            auto pi = crnkit::product_form_poisson(*cb.certificate->equilibrium);
            auto w = crnkit::make_orthant_window(spec.state_dimension, 8);
            double tv = crnkit::tv_distance_on_window(occ, pi, w);
            std::cout << "TV distance to product-Poisson(";
            for (std::size_t i = 0; i < cb.certificate->equilibrium->size(); ++i)
                std::cout << (i ? ", " : "") << (*cb.certificate->equilibrium)[i];
            std::cout << ") on the window x_i <= 8: " << tv << '\n';
            j["tv_to_product_poisson"] = tv;
        }
    }

    if (!json_out.empty()) write_json(json_out, j);
    return 0;
}

int cmd_classify_bd(const std::string& birth_expr, const std::string& death_expr,
                    std::optional<std::int64_t> from, std::int64_t window,
                    const std::string& json_out) {
    auto bp = crnkit::parse_polynomial(birth_expr);
    auto dp = crnkit::parse_polynomial(death_expr);
    auto birth = [bp](std::int64_t x) { return bp(double(x)); };
    auto death = [dp](std::int64_t x) { return dp(double(x)); };

    std::int64_t x_min;
    if (from) {
        x_min = *from;
    } else {
        std::int64_t first_live = -1;
        for (std::int64_t x = 0; x < 4096; ++x)
            if (birth(x) > 0.0) {
                first_live = x;
                break;
            }
        if (first_live < 0) throw std::runtime_error("birth rate vanishes on [0, 4096)");
        while (first_live > 0 && death(first_live) > 0.0) --first_live;
        x_min = first_live;
    }
    for (std::int64_t x = x_min; x < x_min + 64; ++x)
        if (birth(x) < 0.0 || death(x) < 0.0)
            throw std::runtime_error("rate polynomial is negative at x = " + std::to_string(x));

    auto cls = crnkit::classify_birth_death(birth, death, x_min, std::max<std::int64_t>(window, 64));
    auto summary = crnkit::detail::summarize(cls.report);

    std::cout << "birth-death chain on {" << x_min << ", " << x_min + 1 << ", ...}\n";
    std::cout << "embedded-chain series: " << crnkit::to_string(cls.embedded_series.verdict)
              << " (" << cls.embedded_series.method << ")\n";
    std::cout << "stationary weights: "
              << crnkit::to_string(cls.stationary.measure.normalizable) << '\n';
    print_classification(summary);

    if (!json_out.empty()) {
        nlohmann::json j;
        j["schema"] = 1;
        j["birth"] = birth_expr;
        j["death"] = death_expr;
        j["from"] = x_min;
        j["classification"] = summary;
        write_json(json_out, j);
    }
    return 0;
}

int cmd_verify_stationary(const std::string& chain_name, std::optional<std::int64_t> lo,
                          std::optional<std::int64_t> hi, double tol, bool list,
                          const std::string& json_out) {
    if (list) {
        for (const auto& rc : crnkit::chain_registry())
            std::cout << rc.name << ": " << rc.description << '\n';
        return 0;
    }
    auto rc = crnkit::find_chain(chain_name);
    if (!rc) throw std::runtime_error("unknown chain '" + chain_name + "' (try --list)");

    std::int64_t wlo = lo.value_or(rc->default_lo), whi = hi.value_or(rc->default_hi);
    auto window = crnkit::make_interval_window(wlo, whi);

    nlohmann::json j;
    j["schema"] = 1;
    j["chain"] = rc->name;
    j["window"] = {wlo, whi};

    crnkit::ClassificationReport classification;
    std::cout << "chain " << rc->name << ", window [" << wlo << ", " << whi << "]\n";
    bool all_pass = true;
    for (std::size_t i = 0; i < rc->measures.size(); ++i) {
        auto rep = crnkit::balance_residual(rc->spec, rc->measures[i], window);
        bool ok = rep.passes(tol);
        all_pass = all_pass && ok;
        std::cout << "measure " << i << " (" << rc->measures[i].closed_form
                  << "): max residual " << rep.max_residual << " vs " << tol << " * scale "
                  << rep.flux_scale << " over " << rep.interior_count << " interior states -> "
                  << (ok ? "pass" : "FAIL") << '\n';
        nlohmann::json m;
        m["form"] = rc->measures[i].closed_form;
        m["max_residual"] = rep.max_residual;
        m["flux_scale"] = rep.flux_scale;
        m["interior_states"] = rep.interior_count;
        m["passed"] = ok;
        j["measures"].push_back(m);
    }

    if (rc->measures.size() >= 2) {
        auto verdict = crnkit::multiple_stationary_rule(rc->spec, rc->measures, window,
                                                        {.balance_tol = tol});
        if (verdict) classification = std::move(*verdict);
    } else if (rc->measures.size() == 1 && all_pass) {
        crnkit::CertifyOptions copts;
        copts.balance_tol = tol;
        copts.support_from = wlo;
        auto cert = crnkit::certify_nonexplosive(rc->spec, rc->measures[0], window, copts);
        if (cert)
            classification.add_tag(crnkit::Verdict::NonExplosiveCertified,
                                   {"stationary-jump-rate", cert->jump_rate,
                                    cert->rate_bracket, cert->support_note});
    }

    auto summary = crnkit::detail::summarize(classification);
    print_classification(summary);
    j["classification"] = summary;
    if (!json_out.empty()) write_json(json_out, j);
    return all_pass ? 0 : kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic reaction network analysis toolkit"};
    app.require_subcommand(1);

    // analyze
    std::string an_path, an_json;
    std::int64_t an_window = 30;
    double an_tol = 1e-8;
    int an_attempts = 20;
    auto* analyze = app.add_subcommand("analyze", "structural and stationary analysis of a .crn file");
    analyze->add_option("file", an_path, "reaction network file")->required();
    analyze->add_option("--window", an_window, "verification window extent per species");
    analyze->add_option("--tol", an_tol, "balance residual tolerance (relative to flux scale)");
    analyze->add_option("--attempts", an_attempts, "equilibrium search restarts");
    analyze->add_option("--json", an_json, "write the JSON report here");

    // simulate
    std::string sim_path, sim_x0, sim_record = "full", sim_traj, sim_occ, sim_json;
    double sim_T = 100.0, sim_cap = 1e6, sim_burn = 0.0;
    std::uint64_t sim_seed = 0, sim_jumps = 10'000'000;
    int sim_batch = 1;
    auto* simulate = app.add_subcommand("simulate", "exact jump-process simulation of a .crn file");
    simulate->add_option("file", sim_path, "reaction network file")->required();
    simulate->add_option("--x0", sim_x0, "initial counts, comma separated")->required();
    simulate->add_option("--T", sim_T, "time horizon");
    auto* seed_opt = simulate->add_option("--seed", sim_seed, "RNG seed");
    simulate->add_option("--batch", sim_batch, "number of independent runs (streams 0..B-1)");
    simulate->add_option("--max-jumps", sim_jumps, "jump budget guard");
    simulate->add_option("--state-cap", sim_cap, "euclidean norm guard");
    simulate->add_option("--burn-in", sim_burn, "burn-in fraction for occupancy");
    simulate->add_option("--record", sim_record, "full | occupancy | summary");
    simulate->add_option("--traj", sim_traj, "write the first trajectory here");
    simulate->add_option("--occupancy", sim_occ, "write time-weighted occupancy here");
    simulate->add_option("--json", sim_json, "write the JSON summary here");

    // classify-bd
    std::string bd_birth, bd_death, bd_json;
    std::int64_t bd_window = 256;
    std::int64_t bd_from_value = 0;
    auto* classify = app.add_subcommand(
        "classify-bd", "classify a birth-death chain given polynomial rates");
    classify->add_option("--birth,-b", bd_birth, "birth rate polynomial in x")->required();
    classify->add_option("--death,-d", bd_death, "death rate polynomial in x")->required();
    auto* bd_from_opt = classify->add_option("--from", bd_from_value, "left end of the state space");
    classify->add_option("--window", bd_window, "support check extent");
    classify->add_option("--json", bd_json, "write the JSON report here");

    // verify-stationary
    std::string vs_chain, vs_json;
    std::int64_t vs_lo_value = 0, vs_hi_value = 0;
    double vs_tol = 1e-10;
    bool vs_list = false;
    auto* verify = app.add_subcommand(
        "verify-stationary", "check registered stationary measures of built-in chains");
    verify->add_option("--chain", vs_chain, "registered chain name");
    auto* vs_lo_opt = verify->add_option("--lo", vs_lo_value, "window lower end");
    auto* vs_hi_opt = verify->add_option("--hi", vs_hi_value, "window upper end");
    verify->add_option("--tol", vs_tol, "balance residual tolerance");
    verify->add_flag("--list", vs_list, "list registered chains");

    verify->add_option("--json", vs_json, "write the JSON report here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze) return cmd_analyze(an_path, an_window, an_tol, an_attempts, an_json);
        if (*simulate)
            return cmd_simulate(sim_path, sim_x0, sim_T, sim_seed, seed_opt->count() > 0,
                                sim_batch, sim_jumps, sim_cap, sim_burn, sim_record, sim_traj,
                                sim_occ, sim_json);
        if (*classify)
            return cmd_classify_bd(
                bd_birth, bd_death,
                bd_from_opt->count() ? std::optional<std::int64_t>(bd_from_value) : std::nullopt,
                bd_window, bd_json);
        if (*verify)
            return cmd_verify_stationary(
                vs_chain, vs_lo_opt->count() ? std::optional<std::int64_t>(vs_lo_value) : std::nullopt,
                vs_hi_opt->count() ? std::optional<std::int64_t>(vs_hi_value) : std::nullopt,
                vs_tol, vs_list, vs_json);
    } catch (const crnkit::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitInput;
    } catch (const crnkit::VerdictContradiction& e) {
        std::cerr << "internal inconsistency: " << e.what() << '\n';
        return kExitInconsistent;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return 0;
}
