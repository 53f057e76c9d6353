#include "doctest.h"
#include "support.hpp"
#include "surprise/engine.hpp"
#include "surprise/theory.hpp"

using namespace surprise;

namespace {

TrialConfig two_class_config(long long n, double eps0, const ConnectionMatrix& p,
                             const ConnectionMatrix& phat, long long trials, int panel) {
    return TrialConfig{n,
                       ClassDistribution({eps0, 1.0 - eps0}),
                       p,
                       phat,
                       preset_rule("plurality", 2),
                       trials,
                       panel,
                       TieBreak::ascending(2),
                       std::nullopt,
                       1};
}

// max beat <= surprise <= (m-1) * max beat, allowing CI slack
void check_sandwich(const SurpriseReport& r, int m, double ci_mult = 3.0) {
    for (std::size_t k = 0; k < r.per_class_surprise.size(); ++k) {
        const auto& s = r.per_class_surprise[k];
        if (s.samples == 0) continue;
        const double slack = ci_mult * (s.ci_halfwidth + r.mpfb_ci[k]);
        CHECK(r.mpfb[k] <= s.estimate + slack);
        CHECK(s.estimate <= (m - 1) * r.mpfb[k] + slack);
    }
}

}  // namespace

TEST_CASE("single trial on a forced complete graph has no surprise") {
    const ConnectionMatrix ones({{1.0, 1.0}, {1.0, 1.0}});
    auto cfg = two_class_config(4, 0.5, ones, ones, 1, 8);
    const auto r = run_trials(cfg, RngSeed{1, 0});
    CHECK(r.accepted_trials == 1);
    for (const auto& s : r.per_class_surprise)
        if (s.samples > 0) CHECK(s.estimate == 0.0);
}

TEST_CASE("perfect estimates keep surprise low away from a tie") {
    const ConnectionMatrix p({{0.4, 0.2}, {0.2, 0.4}});
    auto cfg = two_class_config(2000, 0.7, p, p, 200, 6);
    // the threshold classification predicts "not surprised" for both classes
    for (int cls : {1, 2})
        CHECK_FALSE(classify_two_candidate(0.2, p, p, cls, 2000).surprised_whp);
    const auto r = run_trials(cfg, RngSeed{2, 0});
    for (const auto& s : r.per_class_surprise) {
        REQUIRE(s.samples > 0);
        CHECK(s.estimate <= 0.05);
    }
    check_sandwich(r, 2);
}

TEST_CASE("a majority voter with an inflated own-class estimate is surprised") {
    const ConnectionMatrix p({{0.4, 0.2}, {0.2, 0.4}});
    // own/cross estimate ratio at 1.5x the class-1 threshold
    const double ratio = (0.4 / 0.2) * (0.55 / 0.45) * 1.5;
    const ConnectionMatrix phat({{ratio * 0.2, 0.2}, {0.2, 0.4}});
    const auto verdict = classify_two_candidate(0.05, p, phat, 1, 2000);
    REQUIRE(verdict.surprised_whp);

    auto cfg = two_class_config(2000, 0.55, p, phat, 200, 6);
    cfg.conditioning = 0;
    const auto r = run_trials(cfg, RngSeed{3, 0});
    CHECK(r.per_class_surprise[0].estimate >= 0.95);
    check_sandwich(r, 2);
}

TEST_CASE("exact enumeration oracle") {
    const auto rule = preset_rule("plurality", 2);
    const auto tiebreak = TieBreak::ascending(2);

    SUBCASE("degenerate distribution cannot be surprised") {
        const ConnectionMatrix flat({{0.3, 0.3}, {0.3, 0.3}});
        CHECK(brute_force_surprise(6, ClassDistribution({1.0, 0.0}), flat, flat, rule, 0,
                                   tiebreak) == 0.0);
    }

    SUBCASE("symmetric configurations surprise both classes equally") {
        // odd n: no true-winner ties, so the tie-break cannot skew one side
        const ClassDistribution half({0.5, 0.5});
        const ConnectionMatrix p({{0.8, 0.3}, {0.3, 0.8}});
        const ConnectionMatrix phat({{0.4, 0.6}, {0.6, 0.4}});
        const double s0 = brute_force_surprise(7, half, p, phat, rule, 0, tiebreak);
        const double s1 = brute_force_surprise(7, half, p, phat, rule, 1, tiebreak);
        CHECK(s0 == doctest::Approx(s1));
        CHECK(s0 > 0.0);
        CHECK(s0 < 1.0);
    }

    SUBCASE("monte carlo agrees within three half-widths") {
        const ClassDistribution dist({0.6, 0.4});
        const ConnectionMatrix p({{0.9, 0.1}, {0.1, 0.9}});
        const ConnectionMatrix phat({{0.1, 0.9}, {0.9, 0.1}});
        auto cfg = TrialConfig{6,     dist,     p,
                               phat,  preset_rule("plurality", 2), 20000,
                               1,     TieBreak::ascending(2),      std::nullopt,
                               2};
        const auto r = run_trials(cfg, RngSeed{4, 0});
        for (int focus = 0; focus < 2; ++focus) {
            const double exact = brute_force_surprise(6, dist, p, phat, rule, focus, tiebreak);
            const auto& est = r.per_class_surprise[focus];
            CHECK(std::abs(est.estimate - exact) <= 3.0 * est.ci_halfwidth);
        }
    }

    CHECK_THROWS_AS(brute_force_surprise(10, ClassDistribution({0.5, 0.5}),
                                         ConnectionMatrix({{0.3, 0.3}, {0.3, 0.3}}),
                                         ConnectionMatrix({{0.3, 0.3}, {0.3, 0.3}}), rule, 0,
                                         tiebreak),
                    validation_error);
}

TEST_CASE("deterministic half-and-half fixture") {
    for (int n : {4, 8, 16}) {
        const auto rep = example1_fixture(n);
        CHECK(rep.every_voter_sees_own_win);
        CHECK(rep.surprised_fraction(0) == 0.5);
        CHECK(rep.surprised_fraction(1) == 0.5);
        // cross-class degree is exactly n/2 - 1
        for (int v = 0; v < n; ++v) {
            int cross = 0;
            for (int u : rep.sample.neighbors[v])
                if (rep.sample.sigma[u] != rep.sample.sigma[v]) ++cross;
            CHECK(cross == n / 2 - 1);
        }
    }
    CHECK_THROWS_AS(example1_fixture(7), validation_error);
    CHECK_THROWS_AS(example1_fixture(0), validation_error);
}

TEST_CASE("reports are bit-identical across seeds and thread counts") {
    const ConnectionMatrix p({{0.4, 0.2}, {0.2, 0.4}});
    const ConnectionMatrix phat({{0.3, 0.3}, {0.3, 0.3}});
    auto cfg = two_class_config(500, 0.55, p, phat, 60, 4);
    const auto a = run_trials(cfg, RngSeed{10, 0});
    cfg.threads = 3;
    const auto b = run_trials(cfg, RngSeed{10, 0});
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(a.to_csv() == b.to_csv());
    const auto c = run_trials(cfg, RngSeed{11, 0});
    CHECK(a.to_json().dump() != c.to_json().dump());
}

TEST_CASE("surprise grows as the estimation error crosses the threshold") {
    // shared seed across the grid: the perceived comparison is pathwise
    // monotone in the own-class estimate, so the measured curve must be
    const ConnectionMatrix p({{0.4, 0.2}, {0.2, 0.4}});
    double prev = -1.0;
    for (const double phat22 : {0.55, 0.475, 0.41, 0.34, 0.275}) {
        const ConnectionMatrix phat({{0.4, 0.25}, {0.25, phat22}});
        auto cfg = two_class_config(2000, 0.55, p, phat, 120, 4);
        cfg.conditioning = 0;
        const auto r = run_trials(cfg, RngSeed{12, 0});
        CHECK(r.per_class_surprise[1].estimate >= prev);
        prev = r.per_class_surprise[1].estimate;
    }
    CHECK(prev > 0.9);  // deep past the threshold the class is surprised
}

TEST_CASE("threshold verdicts agree with measured surprise on a grid") {
    const ConnectionMatrix p({{0.4, 0.2}, {0.2, 0.4}});
    for (const double eps : {0.05, 0.08, 0.12}) {
        for (const double mult : {0.6, 0.8, 1.4}) {
            const double threshold = 2.0 * (0.5 - eps) / (0.5 + eps);
            const double phat22 = 0.3 * threshold * mult;
            const ConnectionMatrix phat({{0.4, 0.3}, {0.3, phat22}});
            const auto verdict = classify_two_candidate(eps, p, phat, 2, 4000);
            REQUIRE_FALSE(verdict.knife_edge);
            CHECK(verdict.surprised_whp == (mult < 1.0));

            auto cfg = two_class_config(4000, 0.5 + eps, p, phat, 150, 4);
            cfg.conditioning = 0;
            cfg.threads = 4;
            const auto r = run_trials(cfg, RngSeed{13, static_cast<std::uint64_t>(
                                                           eps * 1000 + mult * 10)});
            const double measured = r.per_class_surprise[1].estimate;
            if (verdict.surprised_whp)
                CHECK(measured >= 0.9);
            else
                CHECK(measured <= 0.1);
        }
    }
}

TEST_CASE("conditioning that can never hold raises a diagnostic") {
    const ConnectionMatrix flat({{0.3, 0.3}, {0.3, 0.3}});
    auto cfg = two_class_config(50, 1.0, flat, flat, 20, 4);
    cfg.conditioning = 1;  // candidate 1 has no voters
    CHECK_THROWS_AS(run_trials(cfg, RngSeed{14, 0}), diagnostic_error);
}

TEST_CASE("config validation") {
    const ConnectionMatrix flat({{0.3, 0.3}, {0.3, 0.3}});
    auto cfg = two_class_config(100, 0.5, flat, flat, 10, 4);
    SUBCASE("zero trials") {
        cfg.trials = 0;
        CHECK_THROWS_AS(run_trials(cfg, RngSeed{0, 0}), validation_error);
    }
    SUBCASE("zero panel") {
        cfg.panel_size = 0;
        CHECK_THROWS_AS(run_trials(cfg, RngSeed{0, 0}), validation_error);
    }
    SUBCASE("conditioning candidate out of range") {
        cfg.conditioning = 2;
        CHECK_THROWS_AS(run_trials(cfg, RngSeed{0, 0}), validation_error);
    }
    SUBCASE("eps length mismatch") {
        cfg.dist = ClassDistribution({0.5, 0.3, 0.2});
        CHECK_THROWS_AS(run_trials(cfg, RngSeed{0, 0}), validation_error);
    }
}

TEST_CASE("three-rule reports and their empirical ordering") {
    const auto cs = ClassSystem::build(3);
    std::vector<std::vector<double>> p_rows(6, std::vector<double>(6, 0.2));
    std::vector<std::vector<double>> phat_rows(6, std::vector<double>(6, 0.2));
    for (int j = 0; j < 6; ++j) {
        p_rows[j][j] = 0.4;
        phat_rows[j][j] = 0.32;
    }
    const ConnectionMatrix p(p_rows), phat(phat_rows);
    const ClassDistribution uniform(std::vector<double>(6, 1.0 / 6.0));
    const TieBreak tb{{1, 0, 2}};

    std::vector<SurpriseReport> reports;
    for (const char* rule : {"plurality", "borda", "veto"}) {
        TrialConfig cfg{3000, uniform, p,    phat, preset_rule(rule, 3), 300,
                        4,    tb,      1,    4};
        reports.push_back(run_trials(cfg, RngSeed{15, 0}));
        check_sandwich(reports.back(), 3);
    }

    // class 2 ranks the designated winner first: plurality lowest, veto highest
    const auto ord = mpfb_empirical_ordering(reports[0], reports[1], reports[2], 2);
    CHECK(ord.order == std::vector<std::string>{"plurality", "borda", "veto"});
    CHECK(ord.conclusive);

    // conditioned runs make the decomposition exact, not just within CI slack
    for (const auto& r : reports) {
        for (std::size_t k = 0; k < r.per_class_surprise.size(); ++k) {
            const auto& s = r.per_class_surprise[k];
            if (s.samples == 0) continue;
            CHECK(r.mpfb[k] <= s.estimate + 1e-12);
            CHECK(s.estimate <= 2.0 * r.mpfb[k] + 1e-12);
        }
    }

    SUBCASE("mismatched configs are rejected") {
        TrialConfig other{3000, uniform, p,    phat, preset_rule("veto", 3), 301,
                          4,    tb,      1,    4};
        const auto odd = run_trials(other, RngSeed{15, 0});
        CHECK_THROWS_AS(mpfb_empirical_ordering(reports[0], reports[1], odd, 2),
                        validation_error);
        CHECK_THROWS_AS(mpfb_empirical_ordering(reports[1], reports[0], reports[2], 2),
                        validation_error);
    }
}

TEST_CASE("report serialization") {
    const ConnectionMatrix p({{0.4, 0.2}, {0.2, 0.4}});
    auto cfg = two_class_config(200, 0.6, p, p, 40, 4);
    const auto r = run_trials(cfg, RngSeed{16, 0});

    const auto j = r.to_json();
    CHECK(j.at("rule") == "plurality");
    CHECK(j.at("trials") == 40);
    CHECK(j.at("per_class").size() == 2);
    CHECK(j.at("per_class")[0].contains("mpfb"));

    const auto csv = r.to_csv();
    CHECK(csv.find("rule,class,challenger") == 0);
    CHECK(csv.find("plurality,0,") != std::string::npos);
}
