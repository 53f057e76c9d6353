#include "surprise/perception.hpp"

#include <numeric>

namespace surprise {

std::vector<double> estimates_from_neighbor_counts(const std::vector<long long>& nbr,
                                                   int own_class,
                                                   const ConnectionMatrix& phat) {
    const int c = phat.size();
    if (static_cast<int>(nbr.size()) != c)
        throw validation_error("perceive: neighbor counts and phat disagree on class count");
    std::vector<double> est(c);
    for (int k = 0; k < c; ++k)
        est[k] = static_cast<double>(nbr[k]) / phat.at(own_class, k);
    est[own_class] += 1.0;  // the voter counts herself
    return est;
}

PerceivedCounts perceive_counts(const ElectionSample& sample, int v,
                                const ConnectionMatrix& phat) {
    const auto nbr = neighbor_class_counts(sample, v);
    return PerceivedCounts{v, estimates_from_neighbor_counts(nbr, sample.sigma[v], phat)};
}

TieBreak TieBreak::ascending(int m) {
    TieBreak tb;
    tb.priority.resize(m);
    std::iota(tb.priority.begin(), tb.priority.end(), 0);
    return tb;
}

int TieBreak::rank_of(int candidate) const {
    for (int i = 0; i < static_cast<int>(priority.size()); ++i)
        if (priority[i] == candidate) return i;
    throw validation_error("tiebreak: candidate " + std::to_string(candidate) +
                           " not in priority order");
}

namespace {

template <typename Count>
ScoreVector scores_from(const std::vector<Count>& counts, const ScoringRule& rule,
                        const ClassSystem& cs) {
    if (static_cast<int>(counts.size()) != cs.num_classes())
        throw validation_error("scores: counts length does not match class count");
    if (rule.m() != cs.m())
        throw validation_error("scores: rule and class system disagree on m");
    ScoreVector sv;
    sv.scores.assign(cs.m(), 0.0);
    for (int k = 0; k < cs.num_classes(); ++k) {
        const double w = static_cast<double>(counts[k]);
        if (w == 0.0) continue;
        for (int a = 0; a < cs.m(); ++a)
            sv.scores[a] += w * rule.scores[cs.position(k, a)];
    }
    return sv;
}

}  // namespace

ScoreVector true_scores(const std::vector<long long>& counts, const ScoringRule& rule,
                        const ClassSystem& cs) {
    return scores_from(counts, rule, cs);
}

ScoreVector perceived_scores(const PerceivedCounts& pc, const ScoringRule& rule,
                             const ClassSystem& cs) {
    return scores_from(pc.estimates, rule, cs);
}

int winner(const ScoreVector& scores, const TieBreak& tiebreak) {
    const int m = static_cast<int>(scores.scores.size());
    int best = 0;
    for (int a = 1; a < m; ++a) {
        const double s = scores.scores[a];
        if (s > scores.scores[best] ||
            (s == scores.scores[best] && tiebreak.prefers(a, best)))
            best = a;
    }
    return best;
}

bool beats(int challenger, int incumbent, const ScoreVector& scores, const TieBreak& tiebreak) {
    const double sc = scores.scores[challenger], si = scores.scores[incumbent];
    return sc > si || (sc == si && tiebreak.prefers(challenger, incumbent));
}

}  // namespace surprise
