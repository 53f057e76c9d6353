#include "surprise/genesis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace surprise {

Assignment sample_assignment(long long n, const ClassDistribution& dist, RngSeed seed) {
    if (n < 1) throw validation_error("sample_assignment: n must be >= 1");
    const int c = dist.num_classes();
    std::vector<double> cdf(c);
    double acc = 0.0;
    for (int k = 0; k < c; ++k) {
        acc += dist.eps[k];
        cdf[k] = acc;
    }
    cdf[c - 1] = 1.0;  // guard against rounding at the top end

    Assignment a;
    a.sigma.resize(n);
    a.counts.assign(c, 0);
    const KeyedRng rng(substream(seed, streams::assignment));
    for (long long i = 0; i < n; ++i) {
        const double u = rng.uniform01(static_cast<std::uint64_t>(i));
        int k = 0;
        while (u >= cdf[k]) ++k;
        a.sigma[i] = k;
        ++a.counts[k];
    }
    return a;
}

bool sbm_edge(const KeyedRng& graph_rng, const std::vector<int>& sigma,
              const ConnectionMatrix& p, int u, int v) {
    return graph_rng.uniform01(pair_key(static_cast<std::uint64_t>(u),
                                        static_cast<std::uint64_t>(v))) <
           p.at(sigma[u], sigma[v]);
}

std::vector<std::vector<int>> sample_sbm_graph(const std::vector<int>& sigma,
                                               const ConnectionMatrix& p, RngSeed seed) {
    const int n = static_cast<int>(sigma.size());
    for (int s : sigma)
        if (s < 0 || s >= p.size())
            throw validation_error("sample_sbm_graph: class index out of range");
    const KeyedRng rng(substream(seed, streams::graph));
    std::vector<std::vector<int>> adj(n);
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (sbm_edge(rng, sigma, p, u, v)) {
                adj[u].push_back(v);
                adj[v].push_back(u);
            }
        }
    }
    return adj;  // rows already sorted by construction order
}

std::vector<long long> sbm_neighbor_class_counts(const KeyedRng& graph_rng,
                                                 const std::vector<int>& sigma,
                                                 const ConnectionMatrix& p, int v) {
    std::vector<long long> counts(p.size(), 0);
    const int n = static_cast<int>(sigma.size());
    for (int u = 0; u < n; ++u) {
        if (u == v) continue;
        if (sbm_edge(graph_rng, sigma, p, u, v)) ++counts[sigma[u]];
    }
    return counts;
}

ElectionSample make_election_sample(long long n, const ClassDistribution& dist,
                                    const ConnectionMatrix& p, RngSeed seed) {
    if (dist.num_classes() != p.size())
        throw validation_error("make_election_sample: eps and p disagree on class count");
    ElectionSample s;
    auto a = sample_assignment(n, dist, seed);
    s.n = static_cast<int>(n);
    s.num_classes = dist.num_classes();
    s.sigma = std::move(a.sigma);
    s.counts = std::move(a.counts);
    s.neighbors = sample_sbm_graph(s.sigma, p, seed);
    return s;
}

std::vector<long long> neighbor_class_counts(const ElectionSample& sample, int v) {
    if (v < 0 || v >= sample.n)
        throw validation_error("neighbor_class_counts: voter index out of range");
    std::vector<long long> counts(sample.num_classes, 0);
    for (int u : sample.neighbors[v]) ++counts[sample.sigma[u]];
    return counts;
}

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
    constexpr double kEarthRadiusKm = 6371.0;
    constexpr double kDeg = 0.017453292519943295;  // pi/180
    const double phi1 = lat1 * kDeg, phi2 = lat2 * kDeg;
    const double dphi = (lat2 - lat1) * kDeg;
    const double dlam = (lon2 - lon1) * kDeg;
    const double s1 = std::sin(dphi / 2.0), s2 = std::sin(dlam / 2.0);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

double geo_edge_probability(const GeoVoter& u, const GeoVoter& v, double p, double q,
                            const GeoDecayParams& decay) {
    const double d = haversine_km(u.lat, u.lon, v.lat, v.lon);
    const double p1 = decay.p1_max * std::exp(-d / decay.lambda_km);
    const double p2 = (u.class_index == v.class_index) ? p : q;
    return 0.5 * (p1 + p2);
}

namespace {

void check_geo_params(double p, double q, const GeoDecayParams& decay) {
    if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
        throw validation_error("geo graph: p and q must be probabilities");
    if (p < q) throw validation_error("geo graph: requires p >= q");
    if (!(decay.p1_max >= 0.0 && decay.p1_max <= 1.0))
        throw validation_error("geo graph: p1_max must be a probability");
    if (!(decay.lambda_km > 0.0)) throw validation_error("geo graph: lambda_km must be positive");
}

}  // namespace

std::vector<std::vector<int>> sample_geo_graph(const std::vector<GeoVoter>& voters, double p,
                                               double q, const GeoDecayParams& decay,
                                               RngSeed seed) {
    check_geo_params(p, q, decay);
    const int n = static_cast<int>(voters.size());
    const KeyedRng rng(substream(seed, streams::graph));
    std::vector<std::vector<int>> adj(n);
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            const double prob = geo_edge_probability(voters[u], voters[v], p, q, decay);
            if (rng.uniform01(pair_key(u, v)) < prob) {
                adj[u].push_back(v);
                adj[v].push_back(u);
            }
        }
    }
    return adj;
}

std::vector<std::vector<int>> sample_attempt_geo_graph(const std::vector<GeoVoter>& voters,
                                                       double p, double q,
                                                       const GeoDecayParams& decay,
                                                       int attempts_per_voter, RngSeed seed) {
    check_geo_params(p, q, decay);
    const int n = static_cast<int>(voters.size());
    if (n < 2) throw validation_error("geo graph: need at least 2 voters");
    if (attempts_per_voter < 0 || attempts_per_voter > n - 1)
        throw validation_error("geo graph: attempts_per_voter must be in [0, n-1]");

    // Candidate pairs: per-voter partner draws without replacement,
    // deduplicated across the two endpoints.
    std::unordered_set<std::uint64_t> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * attempts_per_voter);
    for (int u = 0; u < n; ++u) {
        SequentialRng draw(substream(seed, streams::attempts, static_cast<std::uint64_t>(u)));
        std::unordered_set<int> mine;
        mine.reserve(attempts_per_voter * 2);
        while (static_cast<int>(mine.size()) < attempts_per_voter) {
            // uniform over [0, n-1] \ {u}
            int v = static_cast<int>(draw.next_below(static_cast<std::uint64_t>(n - 1)));
            if (v >= u) ++v;
            if (mine.insert(v).second) pairs.insert(pair_key(u, v));
        }
    }

    const KeyedRng accept(substream(seed, streams::graph));
    std::vector<std::vector<int>> adj(n);
    for (std::uint64_t key : pairs) {
        const int u = static_cast<int>(key >> 32);
        const int v = static_cast<int>(key & 0xffffffffULL);
        const double prob = geo_edge_probability(voters[u], voters[v], p, q, decay);
        if (accept.uniform01(key) < prob) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
}

}  // namespace surprise
