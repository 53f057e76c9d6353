#include "surprise/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <thread>

namespace surprise {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct Tally {
    // indexed [class] and [class][candidate]
    std::vector<long long> samples;
    std::vector<long long> surprised;
    std::vector<std::vector<long long>> beat_num;
    std::vector<std::vector<long long>> beat_den;
    std::vector<long long> true_winner;
    long long discarded = 0;
    long long accepted = 0;

    Tally(int num_classes, int m)
        : samples(num_classes, 0),
          surprised(num_classes, 0),
          beat_num(num_classes, std::vector<long long>(m, 0)),
          beat_den(num_classes, std::vector<long long>(m, 0)),
          true_winner(m, 0) {}

    void merge(const Tally& o) {
        for (std::size_t k = 0; k < samples.size(); ++k) {
            samples[k] += o.samples[k];
            surprised[k] += o.surprised[k];
            for (std::size_t b = 0; b < beat_num[k].size(); ++b) {
                beat_num[k][b] += o.beat_num[k][b];
                beat_den[k][b] += o.beat_den[k][b];
            }
        }
        for (std::size_t a = 0; a < true_winner.size(); ++a) true_winner[a] += o.true_winner[a];
        discarded += o.discarded;
        accepted += o.accepted;
    }
};

void validate_config(const TrialConfig& c, const ClassSystem& cs) {
    if (c.n < 1) throw validation_error("run_trials: n must be >= 1");
    if (c.trials < 1) throw validation_error("run_trials: trials must be >= 1");
    if (c.panel_size < 1) throw validation_error("run_trials: panel_size must be >= 1");
    if (c.dist.num_classes() != cs.num_classes())
        throw validation_error("run_trials: eps has " + std::to_string(c.dist.num_classes()) +
                               " entries, expected " + std::to_string(cs.num_classes()));
    if (c.p.size() != cs.num_classes() || c.phat.size() != cs.num_classes())
        throw validation_error("run_trials: p/phat size does not match class count");
    if (static_cast<int>(c.tiebreak.priority.size()) != cs.m())
        throw validation_error("run_trials: tiebreak priority must cover all candidates");
    if (c.conditioning && (*c.conditioning < 0 || *c.conditioning >= cs.m()))
        throw validation_error("run_trials: conditioning candidate out of range");
    if (c.threads < 1) throw validation_error("run_trials: threads must be >= 1");
}

// distinct voter indices, order irrelevant
void draw_panel(SequentialRng& rng, int n, int want, std::vector<int>& out) {
    out.clear();
    if (want >= n) {
        for (int i = 0; i < n; ++i) out.push_back(i);
        return;
    }
    std::vector<bool> taken(n, false);
    while (static_cast<int>(out.size()) < want) {
        const int v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        if (!taken[v]) {
            taken[v] = true;
            out.push_back(v);
        }
    }
}

void run_trial_range(const TrialConfig& c, const ClassSystem& cs, RngSeed seed,
                     long long begin, long long end, Tally& tally) {
    const int m = cs.m();
    const int num_classes = cs.num_classes();
    const int panel_total =
        static_cast<int>(std::min<long long>(c.n, static_cast<long long>(c.panel_size) *
                                                      num_classes));
    std::vector<int> panel;
    panel.reserve(panel_total);

    for (long long t = begin; t < end; ++t) {
        const RngSeed trial_seed = substream(seed, streams::trial, static_cast<std::uint64_t>(t));
        const auto assignment = sample_assignment(c.n, c.dist, trial_seed);
        const auto truth = true_scores(assignment.counts, c.rule, cs);
        const int w_true = winner(truth, c.tiebreak);
        ++tally.true_winner[w_true];
        if (c.conditioning && w_true != *c.conditioning) {
            ++tally.discarded;
            continue;
        }
        ++tally.accepted;

        SequentialRng panel_rng(substream(trial_seed, streams::panel));
        draw_panel(panel_rng, static_cast<int>(c.n), panel_total, panel);

        const KeyedRng graph_rng(substream(trial_seed, streams::graph));
        for (int v : panel) {
            const auto nbr = sbm_neighbor_class_counts(graph_rng, assignment.sigma, c.p, v);
            const auto est = estimates_from_neighbor_counts(nbr, assignment.sigma[v], c.phat);
            const auto ps = perceived_scores(PerceivedCounts{v, est}, c.rule, cs);
            const int w_perc = winner(ps, c.tiebreak);
            const int k = assignment.sigma[v];
            ++tally.samples[k];
            if (w_perc != w_true) ++tally.surprised[k];
            for (int b = 0; b < m; ++b) {
                if (b == w_true) continue;
                ++tally.beat_den[k][b];
                if (beats(b, w_true, ps, c.tiebreak)) ++tally.beat_num[k][b];
            }
        }
    }
}

}  // namespace

EstimateCI make_estimate(long long successes, long long samples) {
    EstimateCI e;
    e.successes = successes;
    e.samples = samples;
    if (samples == 0) {
        e.estimate = 0.0;
        e.ci_halfwidth = 1.0;  // no information
        return e;
    }
    const double ns = static_cast<double>(samples);
    const double phat = static_cast<double>(successes) / ns;
    e.estimate = phat;
    const double z = 1.959963984540054;
    const double boundary = 2.0 / ns;
    if (phat < boundary || phat > 1.0 - boundary) {
        // Wilson half-width: stable at the boundaries
        const double z2 = z * z;
        e.ci_halfwidth =
            (z / (1.0 + z2 / ns)) * std::sqrt(phat * (1.0 - phat) / ns + z2 / (4.0 * ns * ns));
    } else {
        e.ci_halfwidth = z * std::sqrt(phat * (1.0 - phat) / ns);
    }
    return e;
}

SurpriseReport run_trials(const TrialConfig& config, RngSeed seed) {
    const auto cs = ClassSystem::build(config.rule.m());
    validate_config(config, cs);
    const int m = cs.m();
    const int num_classes = cs.num_classes();

    const int threads = static_cast<int>(
        std::min<long long>(config.threads, std::max<long long>(1, config.trials)));
    std::vector<Tally> tallies(threads, Tally(num_classes, m));
    if (threads == 1) {
        run_trial_range(config, cs, seed, 0, config.trials, tallies[0]);
    } else {
        std::vector<std::thread> pool;
        const long long chunk = (config.trials + threads - 1) / threads;
        for (int i = 0; i < threads; ++i) {
            const long long begin = i * chunk;
            const long long end = std::min(config.trials, begin + chunk);
            pool.emplace_back([&, i, begin, end] {
                run_trial_range(config, cs, seed, begin, end, tallies[i]);
            });
        }
        for (auto& th : pool) th.join();
    }
    Tally total(num_classes, m);
    for (const auto& t : tallies) total.merge(t);

    if (config.conditioning && total.accepted == 0)
        throw diagnostic_error("run_trials: conditioning on candidate " +
                               std::to_string(*config.conditioning) + " was never satisfied in " +
                               std::to_string(config.trials) + " trials");

    SurpriseReport r;
    r.rule = config.rule.name;
    r.n = config.n;
    r.trials = config.trials;
    r.accepted_trials = total.accepted;
    r.discarded_trials = total.discarded;
    r.discard_rate = static_cast<double>(total.discarded) / static_cast<double>(config.trials);
    r.panel_size = config.panel_size;
    r.conditioning = config.conditioning;
    r.true_winner_counts = total.true_winner;
    r.per_class_surprise.reserve(num_classes);
    for (int k = 0; k < num_classes; ++k) {
        r.per_class_surprise.push_back(make_estimate(total.surprised[k], total.samples[k]));
        std::vector<EstimateCI> row;
        row.reserve(m);
        int best = -1;
        for (int b = 0; b < m; ++b) {
            row.push_back(make_estimate(total.beat_num[k][b], total.beat_den[k][b]));
            if (row[b].samples > 0 && (best < 0 || row[b].estimate > row[best].estimate))
                best = b;
        }
        r.mpfb.push_back(best >= 0 ? row[best].estimate : 0.0);
        r.mpfb_ci.push_back(best >= 0 ? row[best].ci_halfwidth : 1.0);
        r.mpfb_challenger.push_back(best);
        r.beat_probs.push_back(std::move(row));
    }
    return r;
}

nlohmann::json SurpriseReport::to_json() const {
    nlohmann::json j;
    j["rule"] = rule;
    j["n"] = n;
    j["trials"] = trials;
    j["accepted_trials"] = accepted_trials;
    j["discarded_trials"] = discarded_trials;
    j["discard_rate"] = discard_rate;
    j["panel_size"] = panel_size;
    if (conditioning)
        j["conditioning"] = *conditioning;
    else
        j["conditioning"] = nullptr;
    j["true_winner_counts"] = true_winner_counts;
    auto estimate_json = [](const EstimateCI& e) {
        return nlohmann::json{{"estimate", e.estimate},
                              {"ci_halfwidth", e.ci_halfwidth},
                              {"successes", e.successes},
                              {"samples", e.samples}};
    };
    nlohmann::json classes = nlohmann::json::array();
    for (std::size_t k = 0; k < per_class_surprise.size(); ++k) {
        nlohmann::json c;
        c["class"] = k;
        c["surprise"] = estimate_json(per_class_surprise[k]);
        nlohmann::json beats = nlohmann::json::array();
        for (std::size_t b = 0; b < beat_probs[k].size(); ++b) {
            nlohmann::json e = estimate_json(beat_probs[k][b]);
            e["candidate"] = b;
            beats.push_back(std::move(e));
        }
        c["beats"] = std::move(beats);
        c["mpfb"] = mpfb[k];
        c["mpfb_ci"] = mpfb_ci[k];
        c["mpfb_challenger"] = mpfb_challenger[k];
        classes.push_back(std::move(c));
    }
    j["per_class"] = std::move(classes);
    return j;
}

std::string SurpriseReport::to_csv() const {
    std::string out =
        "rule,class,challenger,beat_estimate,beat_ci,beat_successes,beat_samples,"
        "surprise_estimate,surprise_ci,mpfb,samples,trials\n";
    for (std::size_t k = 0; k < beat_probs.size(); ++k) {
        for (std::size_t b = 0; b < beat_probs[k].size(); ++b) {
            if (beat_probs[k][b].samples == 0) continue;
            out += rule;
            out += ',';
            out += std::to_string(k);
            out += ',';
            out += std::to_string(b);
            out += ',';
            out += format_double(beat_probs[k][b].estimate);
            out += ',';
            out += format_double(beat_probs[k][b].ci_halfwidth);
            out += ',';
            out += std::to_string(beat_probs[k][b].successes);
            out += ',';
            out += std::to_string(beat_probs[k][b].samples);
            out += ',';
            out += format_double(per_class_surprise[k].estimate);
            out += ',';
            out += format_double(per_class_surprise[k].ci_halfwidth);
            out += ',';
            out += format_double(mpfb[k]);
            out += ',';
            out += std::to_string(per_class_surprise[k].samples);
            out += ',';
            out += std::to_string(trials);
            out += '\n';
        }
    }
    return out;
}

double brute_force_surprise(int n, const ClassDistribution& dist, const ConnectionMatrix& p,
                            const ConnectionMatrix& phat, const ScoringRule& rule,
                            int focus_class, const TieBreak& tiebreak) {
    if (n < 2 || n > 8) throw validation_error("brute_force_surprise: n must be in [2, 8]");
    if (dist.num_classes() != 2 || p.size() != 2 || phat.size() != 2 || rule.m() != 2)
        throw validation_error("brute_force_surprise: two-class case only");
    if (focus_class != 0 && focus_class != 1)
        throw validation_error("brute_force_surprise: focus_class must be 0 or 1");

    // Positional scores for two candidates: class 0 ranks candidate 0
    // first, class 1 ranks candidate 1 first.
    const double s_top = rule.scores[0], s_bot = rule.scores[1];
    auto pick_winner = [&](double score0, double score1) {
        if (score0 > score1) return 0;
        if (score1 > score0) return 1;
        return tiebreak.prefers(0, 1) ? 0 : 1;
    };

    const int others = n - 1;
    const int patterns = 1 << others;
    double surprise = 0.0;
    std::vector<int> sigma(others);
    for (int amask = 0; amask < patterns; ++amask) {
        double p_assign = 1.0;
        long long c0 = 0, c1 = 0;
        for (int u = 0; u < others; ++u) {
            sigma[u] = (amask >> u) & 1;
            p_assign *= dist.eps[sigma[u]];
            (sigma[u] == 0 ? c0 : c1) += 1;
        }
        (focus_class == 0 ? c0 : c1) += 1;
        if (p_assign == 0.0) continue;

        const double t0 = static_cast<double>(c0) * s_top + static_cast<double>(c1) * s_bot;
        const double t1 = static_cast<double>(c0) * s_bot + static_cast<double>(c1) * s_top;
        const int w_true = pick_winner(t0, t1);

        for (int emask = 0; emask < patterns; ++emask) {
            double p_edges = 1.0;
            long long nbr0 = 0, nbr1 = 0;
            for (int u = 0; u < others; ++u) {
                const double pe = p.at(focus_class, sigma[u]);
                if ((emask >> u) & 1) {
                    p_edges *= pe;
                    (sigma[u] == 0 ? nbr0 : nbr1) += 1;
                } else {
                    p_edges *= 1.0 - pe;
                }
            }
            if (p_edges == 0.0) continue;
            double est0 = static_cast<double>(nbr0) / phat.at(focus_class, 0);
            double est1 = static_cast<double>(nbr1) / phat.at(focus_class, 1);
            (focus_class == 0 ? est0 : est1) += 1.0;
            const double q0 = est0 * s_top + est1 * s_bot;
            const double q1 = est0 * s_bot + est1 * s_top;
            if (pick_winner(q0, q1) != w_true) surprise += p_assign * p_edges;
        }
    }
    return surprise;
}

double Example1Report::surprised_fraction(int declared_winner) const {
    long long surprised = 0;
    for (int w : perceived)
        if (w != declared_winner) ++surprised;
    return static_cast<double>(surprised) / static_cast<double>(perceived.size());
}

Example1Report example1_fixture(int n) {
    if (n < 2 || n % 2 != 0)
        throw validation_error("example1_fixture: n must be even and >= 2");
    const int half = n / 2;
    Example1Report rep;
    rep.sample.n = n;
    rep.sample.num_classes = 2;
    rep.sample.sigma.resize(n);
    for (int i = 0; i < n; ++i) rep.sample.sigma[i] = i < half ? 0 : 1;
    rep.sample.counts = {half, half};
    rep.sample.neighbors.assign(n, {});
    for (int i = 0; i < half; ++i) {
        for (int j = i + 1; j < half; ++j) {
            rep.sample.neighbors[i].push_back(j);
            rep.sample.neighbors[j].push_back(i);
        }
        for (int j = 0; j < half; ++j) {
            if (j == i) continue;  // drop the matching partner
            rep.sample.neighbors[i].push_back(half + j);
            rep.sample.neighbors[half + j].push_back(i);
        }
    }
    for (int i = half; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            rep.sample.neighbors[i].push_back(j);
            rep.sample.neighbors[j].push_back(i);
        }
    }
    for (auto& row : rep.sample.neighbors) std::sort(row.begin(), row.end());

    const auto cs = ClassSystem::build(2);
    const auto rule = preset_rule("plurality", 2);
    const ConnectionMatrix ones({{1.0, 1.0}, {1.0, 1.0}});
    const auto tiebreak = TieBreak::ascending(2);
    rep.perceived.resize(n);
    rep.every_voter_sees_own_win = true;
    for (int v = 0; v < n; ++v) {
        const auto pc = perceive_counts(rep.sample, v, ones);
        rep.perceived[v] = winner(perceived_scores(pc, rule, cs), tiebreak);
        if (rep.perceived[v] != rep.sample.sigma[v]) rep.every_voter_sees_own_win = false;
    }
    return rep;
}

OrderingResult mpfb_empirical_ordering(const SurpriseReport& plurality,
                                       const SurpriseReport& borda, const SurpriseReport& veto,
                                       int class_index) {
    const SurpriseReport* reports[3] = {&plurality, &borda, &veto};
    const char* expected[3] = {"plurality", "borda", "veto"};
    for (int i = 0; i < 3; ++i) {
        if (reports[i]->rule != expected[i])
            throw validation_error("mpfb_empirical_ordering: report " + std::to_string(i) +
                                   " is for rule '" + reports[i]->rule + "', expected '" +
                                   expected[i] + "'");
        if (reports[i]->n != plurality.n || reports[i]->trials != plurality.trials ||
            reports[i]->panel_size != plurality.panel_size ||
            reports[i]->conditioning != plurality.conditioning)
            throw validation_error("mpfb_empirical_ordering: reports come from different configs");
        if (class_index < 0 ||
            class_index >= static_cast<int>(reports[i]->per_class_surprise.size()))
            throw validation_error("mpfb_empirical_ordering: class index out of range");
    }

    struct Entry {
        std::string name;
        double value;
        double ci;
    };
    std::vector<Entry> entries;
    for (int i = 0; i < 3; ++i)
        entries.push_back({reports[i]->rule, reports[i]->mpfb[class_index],
                           reports[i]->mpfb_ci[class_index]});
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.value < b.value; });

    OrderingResult res;
    res.conclusive = true;
    for (const auto& e : entries) {
        res.order.push_back(e.name);
        res.values.push_back(e.value);
        res.ci_halfwidths.push_back(e.ci);
    }
    for (int i = 0; i + 1 < 3; ++i) {
        // adjacent intervals overlap -> cannot call the order
        if (res.values[i] + res.ci_halfwidths[i] >=
            res.values[i + 1] - res.ci_halfwidths[i + 1])
            res.conclusive = false;
    }
    return res;
}

}  // namespace surprise
