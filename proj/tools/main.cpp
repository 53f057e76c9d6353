// Command-line front end: seeded simulation runs, closed-form checks, the
// exact-enumeration cross-check, and the referendum sweep. Every command
// is deterministic given (config, seed); --threads changes wall time only.
//
// Exit codes: 0 success, 2 invalid input, 3 runtime diagnostic.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "surprise/brexit.hpp"
#include "surprise/core.hpp"
#include "surprise/engine.hpp"
#include "surprise/io.hpp"
#include "surprise/theory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitDiagnostic = 3;

json load_json_file(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw surprise::validation_error("cannot open " + file.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw surprise::validation_error(file.string() + ": " + e.what());
    }
    return j;
}

void ensure_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw surprise::validation_error("cannot create output dir " + dir.string());
}

void write_json(const fs::path& file, const json& j) {
    surprise::write_text_file(file, j.dump(2) + "\n");
}

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const std::string tok = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw surprise::validation_error("bad grid value '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

surprise::TieBreak tiebreak_from(const std::vector<int>& priority, int m) {
    if (priority.empty()) return surprise::TieBreak::ascending(m);
    if (static_cast<int>(priority.size()) != m)
        throw surprise::validation_error("tiebreak must list all " + std::to_string(m) +
                                         " candidates");
    return surprise::TieBreak{priority};
}

json seed_json(surprise::RngSeed seed) {
    return json{{"master", seed.master}, {"stream", seed.stream}};
}

json estimate_json(const surprise::EstimateCI& e) {
    return json{{"estimate", e.estimate},
                {"ci_halfwidth", e.ci_halfwidth},
                {"successes", e.successes},
                {"samples", e.samples}};
}

// --- simulate ----------------------------------------------------------------

struct SimulateArgs {
    std::string config_file;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int threads = 1;
    // flag overrides; config file fills the rest
    std::optional<long long> n, trials;
    std::optional<int> panel, conditioning;
    std::optional<std::string> rule, eps_csv;
    bool dump_sample = false;
};

int cmd_simulate(const SimulateArgs& a) {
    json cfg = a.config_file.empty() ? json::object() : load_json_file(a.config_file);
    if (a.n) cfg["n"] = *a.n;
    if (a.trials) cfg["trials"] = *a.trials;
    if (a.panel) cfg["panel_size"] = *a.panel;
    if (a.rule) cfg["rule"] = *a.rule;
    if (a.conditioning) cfg["conditioning"] = *a.conditioning;
    if (a.eps_csv) cfg["eps"] = parse_grid(*a.eps_csv);

    for (const char* field : {"n", "eps", "p", "phat", "rule", "trials"})
        if (!cfg.contains(field))
            throw surprise::validation_error(std::string(field) +
                                             ": missing (set it in --config or by flag)");

    const std::string rule_name = cfg.at("rule").get<std::string>();
    auto eps = surprise::class_distribution_from_json(cfg, "eps");
    auto p = surprise::connection_matrix_from_json(cfg, "p");
    auto phat = surprise::connection_matrix_from_json(cfg, "phat");
    int m = 2;
    while (m <= 6 && surprise::ClassSystem::build(m).num_classes() < eps.num_classes()) ++m;
    auto rule = surprise::preset_rule(rule_name, m);

    std::vector<int> priority;
    if (cfg.contains("tiebreak")) priority = cfg.at("tiebreak").get<std::vector<int>>();

    surprise::TrialConfig tc{cfg.at("n").get<long long>(),
                             std::move(eps),
                             std::move(p),
                             std::move(phat),
                             std::move(rule),
                             cfg.at("trials").get<long long>(),
                             cfg.value("panel_size", 8),
                             tiebreak_from(priority, m),
                             std::nullopt,
                             a.threads};
    if (cfg.contains("conditioning") && !cfg.at("conditioning").is_null())
        tc.conditioning = cfg.at("conditioning").get<int>();

    const surprise::RngSeed seed{a.seed, 0};
    const auto report = surprise::run_trials(tc, seed);

    ensure_out_dir(a.out_dir);
    write_json(fs::path(a.out_dir) / "report.json", report.to_json());
    surprise::write_text_file(fs::path(a.out_dir) / "report.csv", report.to_csv());

    json manifest;
    manifest["command"] = "simulate";
    cfg.erase("threads");
    manifest["config"] = cfg;
    manifest["seed"] = seed_json(seed);
    manifest["version"] = SURPRISE_VERSION;
    write_json(fs::path(a.out_dir) / "manifest.json", manifest);

    if (a.dump_sample) {
        const auto sample = surprise::make_election_sample(
            tc.n, tc.dist, tc.p, substream(seed, surprise::streams::trial, 0));
        surprise::dump_election_sample(sample, fs::path(a.out_dir) / "sample_edges.txt",
                                       fs::path(a.out_dir) / "sample.json");
    }
    std::cout << "wrote " << (fs::path(a.out_dir) / "report.json").string() << "\n";
    return kExitOk;
}

// --- theory-check -------------------------------------------------------------

struct TheoryArgs {
    double eps = 0.05;
    double p11 = 0.4, p12 = 0.2, p22 = 0.4;
    double phat11 = 0.4, phat12 = 0.2, phat22 = 0.4;
    long long n = 4000;
    int which_class = 0;  // 0 = both
    bool compare = false;
    bool mpfb = false;  // three-candidate mode: analytic rule ordering
    long long compare_trials = 300;
    int panel = 8;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_dir;
};

json verdict_json(const surprise::TwoCandidateVerdict& v) {
    json j;
    j["class"] = v.class_index;
    j["verdict"] = v.knife_edge ? "knife-edge"
                                : (v.surprised_whp ? "surprised" : "not-surprised");
    j["lhs"] = v.ratio_lhs;
    j["rhs"] = v.ratio_rhs;
    j["exponent"] = v.rate_exponent_coeff;
    j["bounds"] = {{"surprised_lower", v.surprised_lower_bound},
                   {"not_surprised_upper", v.not_surprised_upper_bound},
                   {"winner", v.winner_bound.value},
                   {"winner_in_force", v.winner_bound.in_force}};
    return j;
}

int cmd_theory_check(const TheoryArgs& a) {
    if (a.which_class < 0 || a.which_class > 2)
        throw surprise::validation_error("--class must be 1, 2, or 0 for both");
    const surprise::ConnectionMatrix p({{a.p11, a.p12}, {a.p12, a.p22}});
    const surprise::ConnectionMatrix phat({{a.phat11, a.phat12}, {a.phat12, a.phat22}});

    json out;
    out["command"] = "theory-check";
    out["n"] = a.n;
    out["eps"] = a.eps;
    json verdicts = json::array();
    std::vector<surprise::TwoCandidateVerdict> vs;
    for (int c : {1, 2}) {
        if (a.which_class != 0 && a.which_class != c) continue;
        vs.push_back(surprise::classify_two_candidate(a.eps, p, phat, c, a.n));
        verdicts.push_back(verdict_json(vs.back()));
    }
    out["verdicts"] = verdicts;

    if (a.compare) {
        surprise::TrialConfig tc{a.n,
                                 surprise::ClassDistribution({0.5 + a.eps, 0.5 - a.eps}),
                                 p,
                                 phat,
                                 surprise::preset_rule("plurality", 2),
                                 a.compare_trials,
                                 a.panel,
                                 surprise::TieBreak::ascending(2),
                                 0,  // condition on the majority candidate winning
                                 a.threads};
        const auto report = surprise::run_trials(tc, surprise::RngSeed{a.seed, 0});
        json cmp = json::array();
        for (const auto& v : vs) {
            const auto& est = report.per_class_surprise[v.class_index - 1];
            json c;
            c["class"] = v.class_index;
            c["measured_surprise"] = est.estimate;
            c["samples"] = est.samples;
            if (v.knife_edge)
                c["agreement"] = nullptr;
            else
                c["agreement"] = v.surprised_whp ? est.estimate >= 0.9 : est.estimate <= 0.1;
            cmp.push_back(c);
        }
        out["compare"] = cmp;
        out["compare_trials"] = a.compare_trials;
    }

    std::cout << out.dump(2) << "\n";
    if (!a.out_dir.empty()) {
        ensure_out_dir(a.out_dir);
        out["seed"] = seed_json({a.seed, 0});
        out["version"] = SURPRISE_VERSION;
        write_json(fs::path(a.out_dir) / "theory_check.json", out);
    }
    return kExitOk;
}

// --- mpfb-compare --------------------------------------------------------------

struct MpfbArgs {
    double p11 = 0.4, p12 = 0.2;
    double phat11 = 0.32, phat12 = 0.2;
    long long n = 3000;
    bool empirical = false;
    long long trials = 1000;
    int panel = 4;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_dir;
};

int cmd_mpfb_compare(const MpfbArgs& a) {
    const auto cs = surprise::ClassSystem::build(3);
    auto fill = [&](double same, double cross) {
        std::vector<std::vector<double>> rows(cs.num_classes(),
                                              std::vector<double>(cs.num_classes(), cross));
        for (int j = 0; j < cs.num_classes(); ++j) rows[j][j] = same;
        return surprise::ConnectionMatrix(rows);
    };
    const auto p = fill(a.p11, a.p12);
    const auto phat = fill(a.phat11, a.phat12);

    json out;
    out["command"] = "mpfb-compare";
    out["n"] = a.n;
    json classes = json::array();

    std::vector<surprise::SurpriseReport> reports;
    if (a.empirical) {
        const surprise::ClassDistribution uniform(std::vector<double>(6, 1.0 / 6.0));
        // ties go to the designated winner, candidate 1
        const surprise::TieBreak tb{{1, 0, 2}};
        for (const char* rule : {"plurality", "borda", "veto"}) {
            surprise::TrialConfig tc{a.n,     uniform, p,  phat, surprise::preset_rule(rule, 3),
                                     a.trials, a.panel, tb, 1,    a.threads};
            reports.push_back(surprise::run_trials(tc, surprise::RngSeed{a.seed, 0}));
        }
    }

    for (int k = 0; k < cs.num_classes(); ++k) {
        const auto ord = surprise::analytic_mpfb_ordering(k, p, phat, cs, a.n);
        json c;
        c["class"] = k;
        c["winner_rank"] = surprise::winner_rank_name(ord.category);
        c["analytic"] = {{"plurality", ord.plurality},
                         {"borda", ord.borda},
                         {"veto", ord.veto},
                         {"matches_claim", ord.matches_claim}};
        if (a.empirical) {
            const auto emp = surprise::mpfb_empirical_ordering(reports[0], reports[1],
                                                               reports[2], k);
            c["empirical"] = {{"order", emp.order},
                              {"values", emp.values},
                              {"ci_halfwidths", emp.ci_halfwidths},
                              {"conclusive", emp.conclusive}};
        }
        classes.push_back(c);
    }
    out["classes"] = classes;

    std::cout << out.dump(2) << "\n";
    if (!a.out_dir.empty()) {
        ensure_out_dir(a.out_dir);
        out["seed"] = seed_json({a.seed, 0});
        out["version"] = SURPRISE_VERSION;
        write_json(fs::path(a.out_dir) / "mpfb_compare.json", out);
        if (a.empirical) {
            const char* names[3] = {"plurality", "borda", "veto"};
            for (int i = 0; i < 3; ++i) {
                write_json(fs::path(a.out_dir) / ("report_" + std::string(names[i]) + ".json"),
                           reports[i].to_json());
                surprise::write_text_file(
                    fs::path(a.out_dir) / ("report_" + std::string(names[i]) + ".csv"),
                    reports[i].to_csv());
            }
        }
    }
    return kExitOk;
}

// --- oracle-check ----------------------------------------------------------------

struct OracleArgs {
    long long trials = 20000;
    double tolerance = 3.0;  // in combined CI half-widths
    std::optional<int> n_override;
    std::uint64_t seed = 0;
    int threads = 1;
};

struct OracleConfig {
    int n;
    double eps0;
    std::vector<std::vector<double>> p, phat;
};

int cmd_oracle_check(const OracleArgs& a) {
    const std::vector<OracleConfig> base = {
        {4, 0.5, {{0.6, 0.3}, {0.3, 0.6}}, {{0.3, 0.6}, {0.6, 0.3}}},
        {4, 0.7, {{0.5, 0.25}, {0.25, 0.5}}, {{0.35, 0.35}, {0.35, 0.35}}},
        {6, 0.6, {{0.9, 0.1}, {0.1, 0.9}}, {{0.1, 0.9}, {0.9, 0.1}}},
        {6, 0.5, {{0.4, 0.2}, {0.2, 0.4}}, {{0.4, 0.2}, {0.2, 0.4}}},
        {8, 0.55, {{0.4, 0.2}, {0.2, 0.4}}, {{0.3, 0.3}, {0.3, 0.3}}},
        {8, 0.65, {{0.7, 0.2}, {0.2, 0.7}}, {{0.5, 0.4}, {0.4, 0.5}}},
    };

    const auto rule = surprise::preset_rule("plurality", 2);
    const auto tiebreak = surprise::TieBreak::ascending(2);
    bool all_ok = true;
    std::cout << "n    class  exact      estimate   delta      limit      result\n";
    int idx = 0;
    for (const auto& c : base) {
        const int n = a.n_override.value_or(c.n);
        const surprise::ClassDistribution dist({c.eps0, 1.0 - c.eps0});
        const surprise::ConnectionMatrix p(c.p), phat(c.phat);
        surprise::TrialConfig tc{n,       dist,     p,
                                 phat,    rule,     a.trials,
                                 1,       tiebreak, std::nullopt,
                                 a.threads};
        const auto report =
            surprise::run_trials(tc, surprise::RngSeed{a.seed, static_cast<std::uint64_t>(idx)});
        for (int focus = 0; focus < 2; ++focus) {
            const double exact =
                surprise::brute_force_surprise(n, dist, p, phat, rule, focus, tiebreak);
            const auto& est = report.per_class_surprise[focus];
            const double delta = std::abs(est.estimate - exact);
            const double limit = a.tolerance * est.ci_halfwidth;
            const bool ok = delta <= limit;
            all_ok = all_ok && ok;
            char line[160];
            std::snprintf(line, sizeof(line), "%-4d %-6d %-10.6f %-10.6f %-10.6f %-10.6f %s\n",
                          n, focus, exact, est.estimate, delta, limit, ok ? "pass" : "FAIL");
            std::cout << line;
        }
        ++idx;
    }
    if (!all_ok)
        throw surprise::diagnostic_error("oracle check failed: see per-config deltas above");
    std::cout << "all " << 2 * base.size() << " checks passed\n";
    return kExitOk;
}

// --- brexit --------------------------------------------------------------------

struct BrexitArgs {
    std::string votes, locations;
    long long sample = 2000;
    int attempts = 100;
    double p = 0.6, q = 0.2;
    std::string bias_grid = "0,0.05,0.1";
    std::string wg_grid = "0,0.25,0.5,0.75,1";
    int trials = 20;
    double p1max = 0.3;
    double lambda_km = 100.0;
    bool full_scale = false;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_dir = "out";
};

int cmd_brexit(const BrexitArgs& a) {
    const auto ingest = surprise::brexit::ingest(a.votes, a.locations);
    std::cout << "regions: " << ingest.report.regions << ", located: " << ingest.report.located
              << " (missing fraction " << ingest.report.missing_fraction << ")\n";
    for (const auto& e : ingest.report.row_errors) std::cerr << "row error: " << e << "\n";

    surprise::brexit::SweepConfig cfg;
    cfg.p = a.p;
    cfg.q = a.q;
    cfg.bias_grid = parse_grid(a.bias_grid);
    cfg.wg_grid = parse_grid(a.wg_grid);
    cfg.sample_size = a.full_scale ? 10000 : a.sample;
    cfg.attempts_per_voter = a.full_scale ? 500 : a.attempts;
    cfg.trials = a.trials;
    cfg.decay = surprise::GeoDecayParams{a.p1max, a.lambda_km};
    cfg.threads = a.threads;

    const surprise::RngSeed seed{a.seed, 0};
    const auto points = surprise::brexit::run_sweep(ingest.records, cfg, seed);

    ensure_out_dir(a.out_dir);
    surprise::write_text_file(fs::path(a.out_dir) / "curve.csv",
                              surprise::brexit::curve_csv(points));
    json manifest = surprise::brexit::sweep_manifest(cfg, seed, SURPRISE_VERSION);
    manifest["votes"] = a.votes;
    manifest["locations"] = a.locations;
    manifest["ingest"] = {{"regions", ingest.report.regions},
                          {"located", ingest.report.located},
                          {"missing_fraction", ingest.report.missing_fraction}};
    write_json(fs::path(a.out_dir) / "manifest.json", manifest);
    std::cout << "wrote " << (fs::path(a.out_dir) / "curve.csv").string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Election surprise simulator: block-model populations, biased perception, "
                 "and surprise statistics under plurality, Borda and veto"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo surprise report");
    simulate->add_option("--config", sim.config_file, "JSON config file");
    simulate->add_option("--out", sim.out_dir, "output directory");
    simulate->add_option("--seed", sim.seed, "master seed");
    simulate->add_option("--threads", sim.threads, "worker threads (results unchanged)");
    long long sim_n = 0, sim_trials = 0;
    int sim_panel = 0, sim_cond = 0;
    std::string sim_rule, sim_eps;
    simulate->add_option("--n", sim_n, "voters")->each([&](const std::string&) { sim.n = sim_n; });
    simulate->add_option("--trials", sim_trials, "Monte Carlo trials")->each([&](const std::string&) {
        sim.trials = sim_trials;
    });
    simulate->add_option("--panel", sim_panel, "panel voters per class per trial")
        ->each([&](const std::string&) { sim.panel = sim_panel; });
    simulate->add_option("--rule", sim_rule, "plurality|borda|veto")->each([&](const std::string&) {
        sim.rule = sim_rule;
    });
    simulate->add_option("--conditioning", sim_cond, "keep trials won by this candidate")
        ->each([&](const std::string&) { sim.conditioning = sim_cond; });
    simulate->add_option("--eps", sim_eps, "class probabilities, comma separated")
        ->each([&](const std::string&) { sim.eps_csv = sim_eps; });
    simulate->add_flag("--dump-sample", sim.dump_sample, "write one sampled graph + sidecar");

    TheoryArgs th;
    auto* theory = app.add_subcommand("theory-check",
                                      "two-candidate threshold classification and bounds");
    theory->add_option("--eps", th.eps, "majority margin, class split is (1/2+eps, 1/2-eps)");
    theory->add_option("--n", th.n, "voters");
    theory->add_option("--p11", th.p11, "true same-class probability, class 1");
    theory->add_option("--p12", th.p12, "true cross-class probability");
    theory->add_option("--p22", th.p22, "true same-class probability, class 2");
    theory->add_option("--phat11", th.phat11, "estimated same-class probability, class 1");
    theory->add_option("--phat12", th.phat12, "estimated cross-class probability");
    theory->add_option("--phat22", th.phat22, "estimated same-class probability, class 2");
    theory->add_option("--class", th.which_class, "1 or 2 (default both)");
    theory->add_flag("--mpfb", th.mpfb,
                     "three-candidate mode: analytic rule ordering from p11/p12/phat11/phat12");
    theory->add_flag("--compare", th.compare, "also run a matching Monte Carlo");
    theory->add_option("--compare-trials", th.compare_trials, "trials for --compare");
    theory->add_option("--panel", th.panel, "panel size for --compare");
    theory->add_option("--seed", th.seed, "master seed");
    theory->add_option("--threads", th.threads, "worker threads");
    theory->add_option("--out", th.out_dir, "also write theory_check.json here");

    MpfbArgs mp;
    auto* mpfb = app.add_subcommand("mpfb-compare",
                                    "three-candidate rule comparison, analytic vs Monte Carlo");
    mpfb->add_option("--p11", mp.p11, "true same-class probability");
    mpfb->add_option("--p12", mp.p12, "true cross-class probability");
    mpfb->add_option("--phat11", mp.phat11, "estimated same-class probability");
    mpfb->add_option("--phat12", mp.phat12, "estimated cross-class probability");
    mpfb->add_option("--n", mp.n, "voters");
    mpfb->add_flag("--empirical", mp.empirical, "run Monte Carlo alongside the analysis");
    mpfb->add_option("--trials", mp.trials, "Monte Carlo trials per rule");
    mpfb->add_option("--panel", mp.panel, "panel voters per class per trial");
    mpfb->add_option("--seed", mp.seed, "master seed");
    mpfb->add_option("--threads", mp.threads, "worker threads");
    mpfb->add_option("--out", mp.out_dir, "write JSON and per-rule reports here");

    OracleArgs oc;
    auto* oracle = app.add_subcommand("oracle-check",
                                      "Monte Carlo vs exact enumeration on small elections");
    oracle->add_option("--trials", oc.trials, "Monte Carlo trials per config");
    oracle->add_option("--tolerance", oc.tolerance, "allowed delta in CI half-widths");
    int oc_n = 0;
    oracle->add_option("--n", oc_n, "override n for every config")
        ->each([&](const std::string&) { oc.n_override = oc_n; });
    oracle->add_option("--seed", oc.seed, "master seed");
    oracle->add_option("--threads", oc.threads, "worker threads");

    BrexitArgs bx;
    auto* brexit = app.add_subcommand("brexit", "referendum sub-election surprise sweep");
    brexit->add_option("--votes", bx.votes, "votes CSV: region,leave,remain")->required();
    brexit->add_option("--locations", bx.locations, "locations CSV: town,region,lat,lon")
        ->required();
    brexit->add_option("--sample", bx.sample, "sub-election size");
    brexit->add_option("--attempts", bx.attempts, "connection attempts per voter");
    brexit->add_option("--p", bx.p, "same-class connection probability");
    brexit->add_option("--q", bx.q, "cross-class connection probability");
    brexit->add_option("--bias-grid", bx.bias_grid, "comma-separated bias values");
    brexit->add_option("--wg-grid", bx.wg_grid, "comma-separated global weights");
    brexit->add_option("--trials", bx.trials, "trials per grid point");
    brexit->add_option("--p1max", bx.p1max, "proximity probability at distance 0");
    brexit->add_option("--lambda", bx.lambda_km, "proximity decay length, km");
    brexit->add_flag("--full-scale", bx.full_scale, "sample 10000, attempts 500");
    brexit->add_option("--seed", bx.seed, "master seed");
    brexit->add_option("--threads", bx.threads, "worker threads");
    brexit->add_option("--out", bx.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (theory->parsed()) {
            if (th.mpfb) {
                MpfbArgs from_theory;
                from_theory.p11 = th.p11;
                from_theory.p12 = th.p12;
                from_theory.phat11 = th.phat11;
                from_theory.phat12 = th.phat12;
                from_theory.n = th.n;
                from_theory.empirical = th.compare;
                from_theory.trials = th.compare_trials;
                from_theory.panel = th.panel;
                from_theory.seed = th.seed;
                from_theory.threads = th.threads;
                from_theory.out_dir = th.out_dir;
                return cmd_mpfb_compare(from_theory);
            }
            return cmd_theory_check(th);
        }
        if (mpfb->parsed()) return cmd_mpfb_compare(mp);
        if (oracle->parsed()) return cmd_oracle_check(oc);
        if (brexit->parsed()) return cmd_brexit(bx);
    } catch (const surprise::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const surprise::diagnostic_error& e) {
        std::cerr << "diagnostic: " << e.what() << "\n";
        return kExitDiagnostic;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitOk;
}
