#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "surprise/genesis.hpp"
#include "surprise/perception.hpp"

namespace surprise::brexit {

// Region-level referendum ingestion and the two-source perception model:
// each voter mixes her noise-free neighborhood tally with a noisy copy of
// the global vote distribution and picks the heavier side.

struct RegionRecord {
    std::string region_id;
    long long leave = 0;
    long long remain = 0;
    double lat = 0.0;
    double lon = 0.0;
    bool location_filled = false;  // true when the global centroid was substituted
};

struct IngestReport {
    std::size_t regions = 0;
    std::size_t located = 0;
    double missing_fraction = 0.0;
    std::vector<std::string> row_errors;
};

struct IngestResult {
    std::vector<RegionRecord> records;
    IngestReport report;
};

// votes CSV:     region,leave,remain
// locations CSV: town,region,lat,lon
// A region's centroid is the mean of its towns' coordinates; regions with
// no located town get the centroid of all located regions. Aborts when
// more than 5% of data rows are malformed.
IngestResult ingest(const std::filesystem::path& votes_csv,
                    const std::filesystem::path& locations_csv);

// Candidate 0 = leave, candidate 1 = remain.
inline constexpr int kLeave = 0;
inline constexpr int kRemain = 1;

// Uniform sample without replacement from the national vote multiset;
// each sampled vote becomes a voter at its region's centroid.
std::vector<GeoVoter> sample_subelection(const std::vector<RegionRecord>& records,
                                         long long sample_size, RngSeed seed);

// Adds zero-mean Gaussian noise (sd = bias) to the first component and
// removes it from the second, redrawing until both components stay in
// [0,1]; bias 0 returns the input unchanged.
std::array<double, 2> noisy_global(const std::array<double, 2>& dist, double bias, RngSeed seed);

struct ObservationMix {
    double w_individual = 0.0;
    double w_global = 0.0;
    double bias = 0.0;

    ObservationMix(double wi, double wg, double b);
};

// w_I * neighborhood + w_G * noisy global; winner is the heavier side,
// exact ties resolved by the priority order.
int perceive_mixed(const std::array<double, 2>& neighbor_dist,
                   const std::array<double, 2>& global_dist, const ObservationMix& mix,
                   const TieBreak& tiebreak);

struct SweepConfig {
    double p = 0.6;  // same-class connection probability
    double q = 0.2;  // cross-class connection probability
    std::vector<double> bias_grid;
    std::vector<double> wg_grid;
    long long sample_size = 2000;
    int attempts_per_voter = 100;
    int trials = 20;
    GeoDecayParams decay;
    int threads = 1;
};

struct CurvePoint {
    double p = 0.0;
    double q = 0.0;
    double bias = 0.0;
    double w_g = 0.0;
    double surprised_fraction = 0.0;  // of the sub-election's minority class
    double ci_halfwidth = 0.0;        // 95% over trials
    int trials = 0;
};

// One grid point per (bias, w_G). Per trial: draw a sub-election, build
// the attempt graph, and evaluate every minority-class voter's perceived
// winner against the sample's true winner. Sub-election, attempt and
// noise draws are keyed by trial index only, so runs that differ in p, q,
// bias or w_G share their randomness; graphs are rebuilt only per trial.
std::vector<CurvePoint> run_sweep(const std::vector<RegionRecord>& records,
                                  const SweepConfig& config, RngSeed seed);

std::string curve_csv(const std::vector<CurvePoint>& points);
nlohmann::json sweep_manifest(const SweepConfig& config, RngSeed seed,
                              const std::string& version);

}  // namespace surprise::brexit
