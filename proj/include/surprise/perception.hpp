#pragma once

#include <vector>

#include "surprise/core.hpp"
#include "surprise/genesis.hpp"

namespace surprise {

// A voter's estimate of the population per class: each observed block
// count divided by the assumed connection probability for that block,
// plus one for the voter herself in her own class. Estimates stay
// fractional; all downstream use is score comparison.
struct PerceivedCounts {
    int voter = 0;
    std::vector<double> estimates;
};

std::vector<double> estimates_from_neighbor_counts(const std::vector<long long>& nbr,
                                                   int own_class,
                                                   const ConnectionMatrix& phat);

PerceivedCounts perceive_counts(const ElectionSample& sample, int v,
                                const ConnectionMatrix& phat);

struct ScoreVector {
    std::vector<double> scores;  // one per candidate
};

// Fixed priority order used to resolve exact score ties; priority[0] wins
// against everything at equal score.
struct TieBreak {
    std::vector<int> priority;

    static TieBreak ascending(int m);

    // true if a is preferred over b at equal score
    bool prefers(int a, int b) const { return rank_of(a) < rank_of(b); }
    int rank_of(int candidate) const;
};

ScoreVector true_scores(const std::vector<long long>& counts, const ScoringRule& rule,
                        const ClassSystem& cs);
ScoreVector perceived_scores(const PerceivedCounts& pc, const ScoringRule& rule,
                             const ClassSystem& cs);

// argmax of scores with ties resolved by the priority order
int winner(const ScoreVector& scores, const TieBreak& tiebreak);

// true iff the challenger would be selected over the incumbent in a
// two-way comparison of these scores (ties go to the priority order)
bool beats(int challenger, int incumbent, const ScoreVector& scores, const TieBreak& tiebreak);

}  // namespace surprise
