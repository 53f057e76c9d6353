#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "surprise/core.hpp"
#include "surprise/genesis.hpp"
#include "surprise/perception.hpp"

namespace surprise {

// Monte Carlo estimation of surprise and false-beating probabilities.
//
// Determinism contract: every random draw inside a trial is keyed by
// (master seed, trial index, purpose, entity), and all aggregation is
// integer counting, so a report is bit-identical for any thread count.

struct TrialConfig {
    long long n = 0;
    ClassDistribution dist;
    ConnectionMatrix p;
    ConnectionMatrix phat;
    ScoringRule rule;
    long long trials = 0;
    // Panel voters per trial are drawn class-blind as panel_size *
    // num_classes distinct indices (all voters when that exceeds n) and
    // attributed to their realized class. Drawing indices independently
    // of the assignment keeps each per-class frequency an unbiased
    // estimate of the surprise probability conditioned on the voter's
    // class, which matters at small n.
    int panel_size = 8;
    TieBreak tiebreak;
    // When set: keep only trials whose true winner is this candidate,
    // and report the discard rate.
    std::optional<int> conditioning;
    int threads = 1;
};

struct EstimateCI {
    double estimate = 0.0;
    double ci_halfwidth = 0.0;  // 95%, normal approximation; Wilson near 0/1
    long long successes = 0;
    long long samples = 0;
};

EstimateCI make_estimate(long long successes, long long samples);

struct SurpriseReport {
    std::string rule;
    long long n = 0;
    long long trials = 0;
    long long accepted_trials = 0;
    long long discarded_trials = 0;
    double discard_rate = 0.0;
    int panel_size = 0;
    std::optional<int> conditioning;
    std::vector<EstimateCI> per_class_surprise;
    // [class][candidate]: perceived score of the candidate reaches the
    // true winner's, among samples where the candidate is not the true
    // winner of the trial.
    std::vector<std::vector<EstimateCI>> beat_probs;
    std::vector<double> mpfb;            // per class: max beat estimate
    std::vector<double> mpfb_ci;         // CI half-width of that estimate
    std::vector<int> mpfb_challenger;    // argmax candidate, -1 if none
    std::vector<long long> true_winner_counts;  // per candidate, all trials

    nlohmann::json to_json() const;
    std::string to_csv() const;  // one row per class x challenger
};

SurpriseReport run_trials(const TrialConfig& config, RngSeed seed);

// Exact surprise probability for a two-class election with n <= 8 voters:
// full enumeration over the other voters' class assignments and the focal
// voter's incident edge patterns, each weighted by its probability. The
// perception arithmetic is spelled out inline so this path stays
// independent of the Monte Carlo implementation it validates.
double brute_force_surprise(int n, const ClassDistribution& dist, const ConnectionMatrix& p,
                            const ConnectionMatrix& phat, const ScoringRule& rule,
                            int focus_class, const TieBreak& tiebreak);

// Deterministic two-class construction: equal halves, every voter linked
// to all of her own class and to exactly n/2 - 1 of the other class
// (complete bipartite minus a perfect matching). Under plurality with
// all-ones estimated probabilities, every voter perceives her own
// candidate as the winner, so half the population is surprised whichever
// candidate is declared.
struct Example1Report {
    ElectionSample sample;
    std::vector<int> perceived;           // per voter
    bool every_voter_sees_own_win = false;

    double surprised_fraction(int declared_winner) const;
};

Example1Report example1_fixture(int n);

// Sorted MPFB estimates for one class across the three rule reports;
// inconclusive when adjacent confidence intervals overlap. The three
// reports must come from identical configurations up to the rule.
struct OrderingResult {
    std::vector<std::string> order;  // rule names, smallest MPFB first
    std::vector<double> values;
    std::vector<double> ci_halfwidths;
    bool conclusive = false;
};

OrderingResult mpfb_empirical_ordering(const SurpriseReport& plurality,
                                       const SurpriseReport& borda,
                                       const SurpriseReport& veto, int class_index);

}  // namespace surprise
