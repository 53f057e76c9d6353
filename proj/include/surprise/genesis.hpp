#pragma once

#include <cstdint>
#include <vector>

#include "surprise/core.hpp"
#include "surprise/rng.hpp"

namespace surprise {

struct Assignment {
    std::vector<int> sigma;            // class index per voter
    std::vector<long long> counts;     // voters per class
};

// One realized election: class assignment plus the social graph.
// Immutable after creation; safe to share across threads.
struct ElectionSample {
    int n = 0;
    int num_classes = 0;
    std::vector<int> sigma;
    std::vector<long long> counts;
    std::vector<std::vector<int>> neighbors;  // sorted adjacency lists
};

// i.i.d. categorical draws, one per voter. Voter i's draw is keyed by i,
// so the result does not depend on evaluation order.
Assignment sample_assignment(long long n, const ClassDistribution& dist, RngSeed seed);

// Block-model graph: each unordered pair (u,v) is an edge independently
// with probability p[sigma[u]][sigma[v]]. The draw for a pair is keyed by
// (min,max), so sparse queries (sbm_edge / sbm_neighbor_class_counts) see
// exactly the same edge set as the materialized graph for the same seed.
std::vector<std::vector<int>> sample_sbm_graph(const std::vector<int>& sigma,
                                               const ConnectionMatrix& p, RngSeed seed);

bool sbm_edge(const KeyedRng& graph_rng, const std::vector<int>& sigma,
              const ConnectionMatrix& p, int u, int v);

// Class counts of v's neighbors without materializing the graph.
std::vector<long long> sbm_neighbor_class_counts(const KeyedRng& graph_rng,
                                                 const std::vector<int>& sigma,
                                                 const ConnectionMatrix& p, int v);

ElectionSample make_election_sample(long long n, const ClassDistribution& dist,
                                    const ConnectionMatrix& p, RngSeed seed);

// Entry k = number of v's neighbors in class k; sums to deg(v).
std::vector<long long> neighbor_class_counts(const ElectionSample& sample, int v);

// --- geography-aware variant ------------------------------------------------

struct GeoVoter {
    int class_index = 0;
    double lat = 0.0;  // degrees, [-90, 90]
    double lon = 0.0;  // degrees, [-180, 180]
};

struct GeoDecayParams {
    double p1_max = 0.5;      // proximity probability at distance 0
    double lambda_km = 100.0; // e-folding distance
};

// great-circle distance on the mean-radius sphere (6371.0 km)
double haversine_km(double lat1, double lon1, double lat2, double lon2);

// (p1(d) + p2)/2 with p1(d) = p1_max * exp(-d/lambda) and p2 = p for a
// same-class pair, q otherwise.
double geo_edge_probability(const GeoVoter& u, const GeoVoter& v, double p, double q,
                            const GeoDecayParams& decay);

std::vector<std::vector<int>> sample_geo_graph(const std::vector<GeoVoter>& voters, double p,
                                               double q, const GeoDecayParams& decay,
                                               RngSeed seed);

// Sparse builder: every voter attempts `attempts_per_voter` distinct
// partners chosen uniformly at random; each attempted undirected pair is
// deduplicated and then kept with geo_edge_probability. Acceptance draws
// are keyed per pair, so edge sets are nested when the probabilities only
// grow (used for matched-seed comparisons across parameter grids).
std::vector<std::vector<int>> sample_attempt_geo_graph(const std::vector<GeoVoter>& voters,
                                                       double p, double q,
                                                       const GeoDecayParams& decay,
                                                       int attempts_per_voter, RngSeed seed);

}  // namespace surprise
