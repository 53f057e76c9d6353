#pragma once

#include <array>
#include <string>

#include "surprise/core.hpp"

namespace surprise {

// Closed-form companions to the Monte Carlo engine: threshold
// classification for the two-candidate case, the winner-concentration
// bound, and the normal-approximation machinery that orders the
// three-candidate rules by their worst false-beating probability.

// --- two candidates ---------------------------------------------------------

// Population is split (1/2+eps, 1/2-eps) between the two classes; the
// majority candidate wins with probability >= 1 - e^(-sqrt(n)/2) once
// n >= 1/(16 eps^4).
struct BoundResult {
    double value = 0.0;       // e^(-sqrt(n)/2)
    bool in_force = false;    // n above the validity threshold
    double n_threshold = 0.0; // 1/(16 eps^4)
};

BoundResult winner_concentration_bound(long long n, double eps);

// Asymptotic verdict for a voter of the given class (1 = majority,
// 2 = minority): she is surprised w.h.p. iff her estimated same/cross
// connection ratio falls on the wrong side of the population-odds
// threshold. Also evaluates the finite-n exponential bounds with
// coefficient 2*(ph_jj*ph_jk/(ph_jj+ph_jk))^2.
struct TwoCandidateVerdict {
    int class_index = 1;             // 1 or 2
    double ratio_lhs = 0.0;          // ph_jj / ph_jk
    double ratio_rhs = 0.0;          // threshold
    bool knife_edge = false;         // lhs == rhs exactly; no verdict
    bool surprised_whp = false;      // meaningful unless knife_edge
    double rate_exponent_coeff = 0.0;
    double surprised_lower_bound = 0.0;      // 1 - 2 e^(-coeff sqrt(n))
    double not_surprised_upper_bound = 0.0;  // e^(-coeff sqrt(n))
    BoundResult winner_bound;
};

TwoCandidateVerdict classify_two_candidate(double eps, const ConnectionMatrix& p,
                                           const ConnectionMatrix& phat, int class_index,
                                           long long n);

// --- three candidates -------------------------------------------------------

// The rule-comparison analysis assumes the two-parameter block form:
// all same-class entries equal ("near") and all cross-class entries
// equal ("far").
struct ReducedBlockProbs {
    double p11 = 0.0;    // true, same class
    double p12 = 0.0;    // true, cross class
    double phat11 = 0.0; // estimated, same class
    double phat12 = 0.0; // estimated, cross class
};

ReducedBlockProbs reduce_block_probs(const ConnectionMatrix& p, const ConnectionMatrix& phat,
                                     const ClassSystem& cs);

// Moments of one other voter's contribution to the perceived score gap
// between a challenger and the designated winner (candidate index 1),
// for a voter of `voter_class`, under a uniform population over the six
// classes. mu_normalized = sqrt(n) * mean / sqrt(variance).
struct ScoreDiffMoments {
    std::string rule;
    int voter_class = 0;
    int challenger = 0;
    double mean = 0.0;
    double second_moment = 0.0;
    double variance = 0.0;
    double mu_normalized = 0.0;
};

ScoreDiffMoments score_diff_moments(const ScoringRule& rule, int voter_class, int challenger,
                                    const ReducedBlockProbs& probs, const ClassSystem& cs,
                                    long long n);

// P(G >= 0) for G ~ Normal(mu, 1), i.e. the standard normal CDF at mu.
// Rational approximation, |abs error| < 7.5e-8.
double normal_tail(double mu);

enum class WinnerRank { First, Second, Last };

// Predicted ordering of the claims, by where the voter's class ranks the
// designated winner:
//   first:  Plu <= Bor <= Vet
//   second: Vet <= Bor <= Plu
//   last:   Vet <= Bor and Plu <= Bor
struct MpfbOrdering {
    WinnerRank category = WinnerRank::First;
    double plurality = 0.0;
    double borda = 0.0;
    double veto = 0.0;
    std::array<ScoreDiffMoments, 2> plurality_moments;  // challengers 0 and 2
    std::array<ScoreDiffMoments, 2> borda_moments;
    std::array<ScoreDiffMoments, 2> veto_moments;
    bool matches_claim = false;
};

// Requires m = 3 and the monotone-estimation-error condition; the
// analysis further assumes a uniform population, which the caller's
// Monte Carlo config must match for comparisons to be meaningful.
MpfbOrdering analytic_mpfb_ordering(int voter_class, const ConnectionMatrix& p,
                                    const ConnectionMatrix& phat, const ClassSystem& cs,
                                    long long n);

const char* winner_rank_name(WinnerRank r);

}  // namespace surprise
