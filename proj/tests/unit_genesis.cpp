#include <filesystem>

#include "doctest.h"
#include "support.hpp"
#include "surprise/genesis.hpp"
#include "surprise/io.hpp"

using namespace surprise;

namespace {

long long edge_count(const std::vector<std::vector<int>>& adj) {
    long long twice = 0;
    for (const auto& row : adj) twice += static_cast<long long>(row.size());
    return twice / 2;
}

}  // namespace

TEST_CASE("assignment sampling") {
    const ClassDistribution degenerate({1.0, 0.0});
    const auto a = sample_assignment(5, degenerate, RngSeed{1, 0});
    CHECK(a.counts == std::vector<long long>{5, 0});
    for (int s : a.sigma) CHECK(s == 0);

    CHECK_THROWS_AS(sample_assignment(0, degenerate, RngSeed{1, 0}), validation_error);

    const ClassDistribution half({0.5, 0.5});
    const auto b1 = sample_assignment(1000, half, RngSeed{7, 1});
    const auto b2 = sample_assignment(1000, half, RngSeed{7, 1});
    CHECK(b1.sigma == b2.sigma);
    const auto b3 = sample_assignment(1000, half, RngSeed{8, 1});
    CHECK(b1.sigma != b3.sigma);
}

TEST_CASE("assignment frequencies stay in the binomial window") {
    // the window [0.485, 0.515] holds with probability >= 0.99; verify the
    // probability with the exact binomial CDF before asserting the draw
    const long long n = 10000;
    const double window =
        testsupport::binomial_cdf(5150, n, 0.5) - testsupport::binomial_cdf(4849, n, 0.5);
    REQUIRE(window >= 0.99);

    const auto a = sample_assignment(n, ClassDistribution({0.5, 0.5}), RngSeed{21, 0});
    const double freq = static_cast<double>(a.counts[0]) / static_cast<double>(n);
    CHECK(freq >= 0.485);
    CHECK(freq <= 0.515);
}

TEST_CASE("block model graph sampling") {
    const ClassDistribution half({0.5, 0.5});

    SUBCASE("all-ones matrix gives the complete graph") {
        const ConnectionMatrix ones({{1.0, 1.0}, {1.0, 1.0}});
        const auto s = make_election_sample(30, half, ones, RngSeed{3, 0});
        CHECK(edge_count(s.neighbors) == 30 * 29 / 2);
    }

    SUBCASE("edge count within 3 sigma of the binomial mean") {
        const int n = 2000;
        const double p = 0.2;
        const ConnectionMatrix flat({{p, p}, {p, p}});
        const auto sigma = sample_assignment(n, half, RngSeed{5, 0}).sigma;
        const auto adj = sample_sbm_graph(sigma, flat, RngSeed{5, 0});
        const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
        const double mean = pairs * p;
        const double sd = std::sqrt(pairs * p * (1.0 - p));
        CHECK(std::abs(static_cast<double>(edge_count(adj)) - mean) <= 3.0 * sd);
    }

    SUBCASE("deterministic per seed") {
        const ConnectionMatrix pm({{0.5, 0.1}, {0.1, 0.5}});
        const auto sigma = sample_assignment(200, half, RngSeed{11, 0}).sigma;
        CHECK(sample_sbm_graph(sigma, pm, RngSeed{11, 0}) ==
              sample_sbm_graph(sigma, pm, RngSeed{11, 0}));
        CHECK(sample_sbm_graph(sigma, pm, RngSeed{11, 0}) !=
              sample_sbm_graph(sigma, pm, RngSeed{12, 0}));
    }
}

TEST_CASE("sparse edge queries agree with the materialized graph") {
    const ClassDistribution dist({0.3, 0.3, 0.4});
    const ConnectionMatrix p({{0.6, 0.2, 0.2}, {0.2, 0.6, 0.2}, {0.2, 0.2, 0.6}});
    const RngSeed seed{77, 5};
    const auto sigma = sample_assignment(150, dist, seed).sigma;
    const auto adj = sample_sbm_graph(sigma, p, seed);
    const KeyedRng graph_rng(substream(seed, streams::graph));
    for (int v = 0; v < 150; v += 13) {
        const auto lazy = sbm_neighbor_class_counts(graph_rng, sigma, p, v);
        std::vector<long long> from_adj(3, 0);
        for (int u : adj[v]) ++from_adj[sigma[u]];
        CHECK(lazy == from_adj);
    }
}

TEST_CASE("neighbor class counts") {
    ElectionSample s;
    s.n = 4;
    s.num_classes = 2;
    s.sigma = {0, 0, 1, 1};
    s.counts = {2, 2};
    s.neighbors = {{}, {2, 3}, {1}, {1}};  // voter 0 isolated, voter 1 a star center

    CHECK(neighbor_class_counts(s, 0) == std::vector<long long>{0, 0});
    CHECK(neighbor_class_counts(s, 1) == std::vector<long long>{0, 2});
    CHECK_THROWS_AS(neighbor_class_counts(s, 4), validation_error);

    const ConnectionMatrix ones({{1.0, 1.0}, {1.0, 1.0}});
    const auto complete =
        make_election_sample(20, ClassDistribution({0.5, 0.5}), ones, RngSeed{9, 0});
    for (int v = 0; v < complete.n; ++v) {
        auto expected = complete.counts;
        expected[complete.sigma[v]] -= 1;
        CHECK(neighbor_class_counts(complete, v) == expected);
    }
}

TEST_CASE("mean degree matches the uniform random graph over 100 trials") {
    const int n = 400;
    const double p = 0.1;
    const int trials = 100;
    const ClassDistribution half({0.5, 0.5});
    const ConnectionMatrix flat({{p, p}, {p, p}});
    long long edges = 0;
    for (int t = 0; t < trials; ++t) {
        const auto s = make_election_sample(n, half, flat, RngSeed{123, static_cast<std::uint64_t>(t)});
        edges += edge_count(s.neighbors);
    }
    const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
    const double mean_degree = 2.0 * static_cast<double>(edges) / (n * static_cast<double>(trials));
    const double expected = (n - 1) * p;
    const double sd_total = std::sqrt(trials * pairs * p * (1.0 - p));
    const double sd_mean_degree = 2.0 * sd_total / (n * static_cast<double>(trials));
    CHECK(std::abs(mean_degree - expected) <= 3.0 * sd_mean_degree);
}

TEST_CASE("per-block neighbor sums match the edge counts twice over") {
    const ClassDistribution dist({0.6, 0.4});
    const ConnectionMatrix p({{0.3, 0.1}, {0.1, 0.3}});
    const auto s = make_election_sample(300, dist, p, RngSeed{31, 0});

    // count block edges directly from the adjacency
    long long block[2][2] = {{0, 0}, {0, 0}};
    for (int u = 0; u < s.n; ++u)
        for (int v : s.neighbors[u])
            if (u < v) ++block[s.sigma[u]][s.sigma[v]];
    // and via per-voter neighbor counts
    long long nbr_sum[2][2] = {{0, 0}, {0, 0}};
    for (int v = 0; v < s.n; ++v) {
        const auto counts = neighbor_class_counts(s, v);
        for (int k = 0; k < 2; ++k) nbr_sum[s.sigma[v]][k] += counts[k];
    }
    CHECK(nbr_sum[0][0] == 2 * block[0][0]);
    CHECK(nbr_sum[1][1] == 2 * block[1][1]);
    CHECK(nbr_sum[0][1] == block[0][1] + block[1][0]);
    CHECK(nbr_sum[0][1] == nbr_sum[1][0]);
}

TEST_CASE("haversine distance") {
    CHECK(haversine_km(51.5, -0.12, 51.5, -0.12) == 0.0);
    CHECK(haversine_km(10, 20, 30, 40) == doctest::Approx(haversine_km(30, 40, 10, 20)));
    // one degree of longitude on the equator: pi * 6371 / 180
    CHECK(haversine_km(0, 0, 0, 1) == doctest::Approx(111.19492664455873));
    // antipodal points: half the circumference
    CHECK(haversine_km(0, 0, 0, 180) == doctest::Approx(3.141592653589793 * 6371.0));
}

TEST_CASE("geo edge probability") {
    const GeoVoter a{0, 51.5, -0.12};
    const GeoVoter co_located{0, 51.5, -0.12};
    CHECK(geo_edge_probability(a, co_located, 1.0, 0.2, GeoDecayParams{1.0, 100.0}) ==
          doctest::Approx(1.0));

    // distance lambda away, cross class: (p1_max/e + q)/2
    const double lat_for_lambda = 51.5 + 100.0 / 111.19492664455873;
    const GeoVoter far{1, lat_for_lambda, -0.12};
    CHECK(geo_edge_probability(a, far, 0.9, 0.2, GeoDecayParams{0.6, 100.0}) ==
          doctest::Approx(0.5 * (0.6 * std::exp(-1.0) + 0.2)).epsilon(1e-6));

    // proximity term vanishes far away; same class tends to p/2
    const GeoVoter antipode{0, -51.5, 179.88};
    CHECK(geo_edge_probability(a, antipode, 0.8, 0.2, GeoDecayParams{0.6, 100.0}) ==
          doctest::Approx(0.4).epsilon(1e-6));
}

TEST_CASE("geo graphs") {
    std::vector<GeoVoter> voters;
    for (int i = 0; i < 24; ++i) voters.push_back(GeoVoter{i % 2, 51.5, -0.12});

    SUBCASE("co-located voters with certain probabilities form the complete graph") {
        const auto adj =
            sample_geo_graph(voters, 1.0, 1.0, GeoDecayParams{1.0, 100.0}, RngSeed{4, 0});
        CHECK(edge_count(adj) == 24 * 23 / 2);
        const auto sparse = sample_attempt_geo_graph(voters, 1.0, 1.0, GeoDecayParams{1.0, 100.0},
                                                     23, RngSeed{4, 0});
        CHECK(edge_count(sparse) == 24 * 23 / 2);
    }

    SUBCASE("deterministic and symmetric") {
        const auto a =
            sample_attempt_geo_graph(voters, 0.6, 0.2, GeoDecayParams{0.3, 100.0}, 8, RngSeed{6, 0});
        const auto b =
            sample_attempt_geo_graph(voters, 0.6, 0.2, GeoDecayParams{0.3, 100.0}, 8, RngSeed{6, 0});
        CHECK(a == b);
        for (int u = 0; u < 24; ++u)
            for (int v : a[u]) {
                CHECK(v != u);
                CHECK(std::find(a[v].begin(), a[v].end(), u) != a[v].end());
            }
    }

    SUBCASE("edge sets nest when probabilities grow, holding the seed fixed") {
        const GeoDecayParams decay{0.3, 100.0};
        const auto low =
            sample_attempt_geo_graph(voters, 0.4, 0.2, decay, 8, RngSeed{12, 0});
        const auto high =
            sample_attempt_geo_graph(voters, 0.8, 0.2, decay, 8, RngSeed{12, 0});
        for (int u = 0; u < 24; ++u)
            for (int v : low[u])
                if (voters[u].class_index == voters[v].class_index)
                    CHECK(std::find(high[u].begin(), high[u].end(), v) != high[u].end());
    }

    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(
            sample_geo_graph(voters, 0.2, 0.6, GeoDecayParams{0.3, 100.0}, RngSeed{1, 0}),
            validation_error);
        CHECK_THROWS_AS(sample_attempt_geo_graph(voters, 0.6, 0.2, GeoDecayParams{0.3, -1.0}, 8,
                                                 RngSeed{1, 0}),
                        validation_error);
        CHECK_THROWS_AS(sample_attempt_geo_graph(voters, 0.6, 0.2, GeoDecayParams{0.3, 100.0}, 24,
                                                 RngSeed{1, 0}),
                        validation_error);
    }
}

TEST_CASE("sample dump round trip") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "surprise_genesis_test";
    fs::create_directories(dir);
    const auto s = make_election_sample(60, ClassDistribution({0.5, 0.5}),
                                        ConnectionMatrix({{0.4, 0.1}, {0.1, 0.4}}), RngSeed{17, 0});
    dump_election_sample(s, dir / "edges.txt", dir / "sidecar.json");
    const auto loaded = load_election_sample(dir / "edges.txt", dir / "sidecar.json");
    CHECK(loaded.n == s.n);
    CHECK(loaded.sigma == s.sigma);
    CHECK(loaded.counts == s.counts);
    CHECK(loaded.neighbors == s.neighbors);
}
