#include "surprise/theory.hpp"

#include <cmath>

namespace surprise {

BoundResult winner_concentration_bound(long long n, double eps) {
    if (!(eps > 0.0 && eps <= 0.5))
        throw validation_error("winner_concentration_bound: eps must be in (0, 1/2]");
    if (n < 1) throw validation_error("winner_concentration_bound: n must be >= 1");
    BoundResult r;
    r.n_threshold = 1.0 / (16.0 * eps * eps * eps * eps);
    r.in_force = static_cast<double>(n) >= r.n_threshold;
    r.value = std::exp(-std::sqrt(static_cast<double>(n)) / 2.0);
    return r;
}

TwoCandidateVerdict classify_two_candidate(double eps, const ConnectionMatrix& p,
                                           const ConnectionMatrix& phat, int class_index,
                                           long long n) {
    if (!(eps > 0.0 && eps < 0.5))
        throw validation_error("classify_two_candidate: eps must be in (0, 1/2)");
    if (p.size() != 2 || phat.size() != 2)
        throw validation_error("classify_two_candidate: needs 2x2 matrices");
    if (class_index != 1 && class_index != 2)
        throw validation_error("classify_two_candidate: class_index must be 1 or 2");

    const int j = class_index - 1;
    const int k = 1 - j;
    const double odds = (0.5 + eps) / (0.5 - eps);

    TwoCandidateVerdict v;
    v.class_index = class_index;
    v.ratio_lhs = phat.at(j, j) / phat.at(j, k);
    // majority class: surprised when the own-class ratio is over-estimated
    // past the population odds; minority class: when under-estimated.
    v.ratio_rhs = (p.at(j, j) / p.at(j, k)) * (class_index == 1 ? odds : 1.0 / odds);
    if (v.ratio_lhs == v.ratio_rhs) {
        v.knife_edge = true;
    } else {
        v.surprised_whp = (class_index == 1) ? (v.ratio_lhs > v.ratio_rhs)
                                             : (v.ratio_lhs < v.ratio_rhs);
    }

    const double num = phat.at(j, j) * phat.at(j, k);
    const double den = phat.at(j, j) + phat.at(j, k);
    v.rate_exponent_coeff = 2.0 * (num / den) * (num / den);
    const double decay = std::exp(-v.rate_exponent_coeff * std::sqrt(static_cast<double>(n)));
    v.not_surprised_upper_bound = decay;
    v.surprised_lower_bound = 1.0 - 2.0 * decay;
    v.winner_bound = winner_concentration_bound(n, eps);
    return v;
}

ReducedBlockProbs reduce_block_probs(const ConnectionMatrix& p, const ConnectionMatrix& phat,
                                     const ClassSystem& cs) {
    const int c = cs.num_classes();
    if (p.size() != c || phat.size() != c)
        throw validation_error("reduce_block_probs: matrix size does not match class count");
    ReducedBlockProbs r{p.at(0, 0), 0.0, phat.at(0, 0), 0.0};
    bool have_cross = false;
    for (int j = 0; j < c; ++j) {
        for (int k = 0; k < c; ++k) {
            if (j == k) {
                if (p.at(j, j) != r.p11 || phat.at(j, j) != r.phat11)
                    throw validation_error(
                        "reduce_block_probs: same-class entries are not all equal");
            } else if (!have_cross) {
                r.p12 = p.at(j, k);
                r.phat12 = phat.at(j, k);
                have_cross = true;
            } else if (p.at(j, k) != r.p12 || phat.at(j, k) != r.phat12) {
                throw validation_error(
                    "reduce_block_probs: cross-class entries are not all equal");
            }
        }
    }
    return r;
}

ScoreDiffMoments score_diff_moments(const ScoringRule& rule, int voter_class, int challenger,
                                    const ReducedBlockProbs& probs, const ClassSystem& cs,
                                    long long n) {
    if (cs.m() != 3 || rule.m() != 3)
        throw validation_error("score_diff_moments: derived for m = 3 only");
    if (voter_class < 0 || voter_class >= cs.num_classes())
        throw validation_error("score_diff_moments: voter_class out of range");
    constexpr int kWinner = 1;
    if (challenger == kWinner || challenger < 0 || challenger >= 3)
        throw validation_error("score_diff_moments: challenger must be candidate 0 or 2");
    if (n < 1) throw validation_error("score_diff_moments: n must be >= 1");

    // One random other voter u: with probability 1/6 she is in class l and
    // contributes (s_pos_l(challenger) - s_pos_l(winner)) / phat, counted
    // only when the edge to v exists (probability p for the matching
    // block). Mutually exclusive class indicators make the second moment
    // the same sum with squared contributions.
    ScoreDiffMoments out;
    out.rule = rule.name;
    out.voter_class = voter_class;
    out.challenger = challenger;
    const int c = cs.num_classes();
    const double w = 1.0 / static_cast<double>(c);
    for (int l = 0; l < c; ++l) {
        const double diff =
            rule.scores[cs.position(l, challenger)] - rule.scores[cs.position(l, kWinner)];
        const bool same = (l == voter_class);
        const double p_edge = same ? probs.p11 : probs.p12;
        const double ph = same ? probs.phat11 : probs.phat12;
        out.mean += w * p_edge * diff / ph;
        out.second_moment += w * p_edge * (diff / ph) * (diff / ph);
    }
    out.variance = out.second_moment - out.mean * out.mean;
    if (!(out.variance > 0.0))
        throw diagnostic_error("score_diff_moments: degenerate config, variance <= 0");
    out.mu_normalized = std::sqrt(static_cast<double>(n)) * out.mean / std::sqrt(out.variance);
    return out;
}

double normal_tail(double mu) {
    // Phi(mu) via the 5-term rational approximation of the standard
    // normal CDF (Zelen & Severo form), max abs error 7.5e-8. Kept
    // self-contained so results are bit-stable across platforms.
    const double x = mu;
    const double ax = std::fabs(x);
    const double t = 1.0 / (1.0 + 0.2316419 * ax);
    const double poly =
        t * (0.319381530 +
             t * (-0.356563782 + t * (1.781477937 + t * (-1.821255978 + t * 1.330274429))));
    const double pdf = 0.3989422804014326779 * std::exp(-0.5 * ax * ax);
    const double upper = pdf * poly;  // P(N(0,1) > ax)
    return x >= 0.0 ? 1.0 - upper : upper;
}

const char* winner_rank_name(WinnerRank r) {
    switch (r) {
        case WinnerRank::First: return "first";
        case WinnerRank::Second: return "second";
        case WinnerRank::Last: return "last";
    }
    return "?";
}

MpfbOrdering analytic_mpfb_ordering(int voter_class, const ConnectionMatrix& p,
                                    const ConnectionMatrix& phat, const ClassSystem& cs,
                                    long long n) {
    if (cs.m() != 3) throw validation_error("analytic_mpfb_ordering: m must be 3");
    if (!satisfies_mee(p, phat, cs))
        throw validation_error("analytic_mpfb_ordering: monotone estimation error is violated");
    const auto probs = reduce_block_probs(p, phat, cs);

    MpfbOrdering out;
    constexpr int kWinner = 1;
    switch (cs.position(voter_class, kWinner)) {
        case 0: out.category = WinnerRank::First; break;
        case 1: out.category = WinnerRank::Second; break;
        default: out.category = WinnerRank::Last; break;
    }

    auto eval = [&](const ScoringRule& rule, std::array<ScoreDiffMoments, 2>& moments) {
        moments[0] = score_diff_moments(rule, voter_class, 0, probs, cs, n);
        moments[1] = score_diff_moments(rule, voter_class, 2, probs, cs, n);
        return std::max(normal_tail(moments[0].mu_normalized),
                        normal_tail(moments[1].mu_normalized));
    };
    out.plurality = eval(preset_rule("plurality", 3), out.plurality_moments);
    out.borda = eval(preset_rule("borda", 3), out.borda_moments);
    out.veto = eval(preset_rule("veto", 3), out.veto_moments);

    const double tol = 1e-12;
    switch (out.category) {
        case WinnerRank::First:
            out.matches_claim =
                out.plurality <= out.borda + tol && out.borda <= out.veto + tol;
            break;
        case WinnerRank::Second:
            out.matches_claim =
                out.veto <= out.borda + tol && out.borda <= out.plurality + tol;
            break;
        case WinnerRank::Last:
            out.matches_claim =
                out.veto <= out.borda + tol && out.plurality <= out.borda + tol;
            break;
    }
    return out;
}

}  // namespace surprise
