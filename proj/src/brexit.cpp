#include "surprise/brexit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <thread>
#include <unordered_set>

namespace surprise::brexit {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// One CSV record; supports quoted fields with embedded commas and
// doubled quotes.
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

bool parse_ll(const std::string& s, long long& out) {
    const auto* b = s.data();
    const auto* e = s.data() + s.size();
    auto res = std::from_chars(b, e, out);
    return res.ec == std::errc() && res.ptr == e && !s.empty();
}

bool parse_d(const std::string& s, double& out) {
    const auto* b = s.data();
    const auto* e = s.data() + s.size();
    auto res = std::from_chars(b, e, out);
    return res.ec == std::errc() && res.ptr == e && !s.empty();
}

std::vector<std::string> read_lines(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw validation_error("cannot open " + file.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

}  // namespace

IngestResult ingest(const std::filesystem::path& votes_csv,
                    const std::filesystem::path& locations_csv) {
    IngestResult out;
    auto& errors = out.report.row_errors;

    const auto vote_lines = read_lines(votes_csv);
    if (vote_lines.empty() || split_csv(vote_lines[0]) !=
                                  std::vector<std::string>{"region", "leave", "remain"})
        throw validation_error(votes_csv.string() + ": expected header 'region,leave,remain'");

    std::map<std::string, std::size_t> index_of;
    std::size_t vote_rows = 0;
    for (std::size_t i = 1; i < vote_lines.size(); ++i) {
        if (trim(vote_lines[i]).empty()) continue;
        ++vote_rows;
        const auto f = split_csv(vote_lines[i]);
        auto bad = [&](const std::string& why) {
            errors.push_back(votes_csv.filename().string() + ":" + std::to_string(i + 1) + ": " +
                             why);
        };
        if (f.size() != 3) {
            bad("expected 3 fields, got " + std::to_string(f.size()));
            continue;
        }
        long long leave = 0, remain = 0;
        if (f[0].empty()) {
            bad("empty region id");
            continue;
        }
        if (!parse_ll(f[1], leave) || leave < 0 || !parse_ll(f[2], remain) || remain < 0) {
            bad("counts must be non-negative integers");
            continue;
        }
        if (leave == 0 && remain == 0) {
            bad("region has no votes");
            continue;
        }
        if (index_of.count(f[0])) {
            bad("duplicate region '" + f[0] + "'");
            continue;
        }
        index_of[f[0]] = out.records.size();
        out.records.push_back(RegionRecord{f[0], leave, remain, 0.0, 0.0, false});
    }
    if (out.records.empty()) throw validation_error(votes_csv.string() + ": no usable vote rows");

    const auto loc_lines = read_lines(locations_csv);
    if (loc_lines.empty() || split_csv(loc_lines[0]) !=
                                 std::vector<std::string>{"town", "region", "lat", "lon"})
        throw validation_error(locations_csv.string() +
                               ": expected header 'town,region,lat,lon'");

    std::vector<double> lat_sum(out.records.size(), 0.0), lon_sum(out.records.size(), 0.0);
    std::vector<long long> town_count(out.records.size(), 0);
    std::size_t loc_rows = 0;
    for (std::size_t i = 1; i < loc_lines.size(); ++i) {
        if (trim(loc_lines[i]).empty()) continue;
        ++loc_rows;
        const auto f = split_csv(loc_lines[i]);
        auto bad = [&](const std::string& why) {
            errors.push_back(locations_csv.filename().string() + ":" + std::to_string(i + 1) +
                             ": " + why);
        };
        if (f.size() != 4) {
            bad("expected 4 fields, got " + std::to_string(f.size()));
            continue;
        }
        double lat = 0.0, lon = 0.0;
        if (!parse_d(f[2], lat) || !parse_d(f[3], lon) || lat < -90.0 || lat > 90.0 ||
            lon < -180.0 || lon > 180.0) {
            bad("invalid coordinates");
            continue;
        }
        const auto it = index_of.find(f[1]);
        if (it == index_of.end()) continue;  // town of a region outside the vote file
        lat_sum[it->second] += lat;
        lon_sum[it->second] += lon;
        ++town_count[it->second];
    }

    const std::size_t total_rows = vote_rows + loc_rows;
    if (total_rows > 0 &&
        static_cast<double>(errors.size()) > 0.05 * static_cast<double>(total_rows)) {
        std::string msg = "too many malformed rows (" + std::to_string(errors.size()) + " of " +
                          std::to_string(total_rows) + "):";
        for (std::size_t i = 0; i < errors.size() && i < 5; ++i) msg += "\n  " + errors[i];
        throw validation_error(msg);
    }

    double global_lat = 0.0, global_lon = 0.0;
    std::size_t located = 0;
    for (std::size_t r = 0; r < out.records.size(); ++r) {
        if (town_count[r] > 0) {
            out.records[r].lat = lat_sum[r] / static_cast<double>(town_count[r]);
            out.records[r].lon = lon_sum[r] / static_cast<double>(town_count[r]);
            global_lat += out.records[r].lat;
            global_lon += out.records[r].lon;
            ++located;
        }
    }
    if (located == 0) throw validation_error(locations_csv.string() + ": no region could be located");
    global_lat /= static_cast<double>(located);
    global_lon /= static_cast<double>(located);
    for (std::size_t r = 0; r < out.records.size(); ++r) {
        if (town_count[r] == 0) {
            // fall back to the centroid of the located regions
            out.records[r].lat = global_lat;
            out.records[r].lon = global_lon;
            out.records[r].location_filled = true;
        }
    }

    out.report.regions = out.records.size();
    out.report.located = located;
    out.report.missing_fraction =
        1.0 - static_cast<double>(located) / static_cast<double>(out.records.size());
    return out;
}

std::vector<GeoVoter> sample_subelection(const std::vector<RegionRecord>& records,
                                         long long sample_size, RngSeed seed) {
    if (records.empty()) throw validation_error("sample_subelection: no regions");
    // bucket 2r = region r's leave votes, 2r+1 = remain votes
    std::vector<long long> cum;
    cum.reserve(records.size() * 2 + 1);
    cum.push_back(0);
    for (const auto& rec : records) {
        cum.push_back(cum.back() + rec.leave);
        cum.push_back(cum.back() + rec.remain);
    }
    const long long total = cum.back();
    if (sample_size < 1 || sample_size > total)
        throw validation_error("sample_subelection: sample_size must be in [1, " +
                               std::to_string(total) + "]");

    std::vector<long long> chosen;
    chosen.reserve(sample_size);
    if (sample_size == total) {
        for (long long i = 0; i < total; ++i) chosen.push_back(i);
    } else {
        SequentialRng rng(substream(seed, streams::subelection));
        std::unordered_set<long long> seen;
        seen.reserve(static_cast<std::size_t>(sample_size) * 2);
        while (static_cast<long long>(chosen.size()) < sample_size) {
            const long long idx =
                static_cast<long long>(rng.next_below(static_cast<std::uint64_t>(total)));
            if (seen.insert(idx).second) chosen.push_back(idx);
        }
        std::sort(chosen.begin(), chosen.end());
    }

    std::vector<GeoVoter> voters;
    voters.reserve(chosen.size());
    for (long long idx : chosen) {
        const auto it = std::upper_bound(cum.begin(), cum.end(), idx);
        const std::size_t bucket = static_cast<std::size_t>(it - cum.begin()) - 1;
        const auto& rec = records[bucket / 2];
        voters.push_back(GeoVoter{bucket % 2 == 0 ? kLeave : kRemain, rec.lat, rec.lon});
    }
    return voters;
}

std::array<double, 2> noisy_global(const std::array<double, 2>& dist, double bias, RngSeed seed) {
    if (dist[0] < 0.0 || dist[1] < 0.0 || std::abs(dist[0] + dist[1] - 1.0) > 1e-9)
        throw validation_error("noisy_global: input is not a distribution");
    if (bias < 0.0) throw validation_error("noisy_global: bias must be >= 0");
    if (bias == 0.0) return dist;

    SequentialRng rng(substream(seed, streams::noise));
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        const double delta = bias * rng.next_normal();
        const double a = dist[0] + delta;
        const double b = dist[1] - delta;
        if (a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0) {
            const double sum = a + b;
            return {a / sum, b / sum};
        }
    }
    throw diagnostic_error("noisy_global: rejection sampling failed to produce a distribution");
}

ObservationMix::ObservationMix(double wi, double wg, double b)
    : w_individual(wi), w_global(wg), bias(b) {
    if (wi < 0.0 || wi > 1.0 || wg < 0.0 || wg > 1.0)
        throw validation_error("observation mix: weights must be in [0,1]");
    if (std::abs(wi + wg - 1.0) > 1e-12)
        throw validation_error("observation mix: weights must sum to 1");
    if (b < 0.0) throw validation_error("observation mix: bias must be >= 0");
}

int perceive_mixed(const std::array<double, 2>& neighbor_dist,
                   const std::array<double, 2>& global_dist, const ObservationMix& mix,
                   const TieBreak& tiebreak) {
    for (const auto& d : {neighbor_dist, global_dist})
        if (d[0] < 0.0 || d[1] < 0.0 || std::abs(d[0] + d[1] - 1.0) > 1e-9)
            throw validation_error("perceive_mixed: input is not a distribution");
    const double mass0 = mix.w_individual * neighbor_dist[0] + mix.w_global * global_dist[0];
    const double mass1 = mix.w_individual * neighbor_dist[1] + mix.w_global * global_dist[1];
    if (mass0 > mass1) return kLeave;
    if (mass1 > mass0) return kRemain;
    return tiebreak.prefers(kLeave, kRemain) ? kLeave : kRemain;
}

namespace {

void validate_sweep(const SweepConfig& c, long long total_votes) {
    if (c.bias_grid.empty() || c.wg_grid.empty())
        throw validation_error("run_sweep: bias and w_G grids must be non-empty");
    for (double b : c.bias_grid)
        if (b < 0.0) throw validation_error("run_sweep: bias values must be >= 0");
    for (double w : c.wg_grid)
        if (w < 0.0 || w > 1.0) throw validation_error("run_sweep: w_G values must be in [0,1]");
    if (c.p < c.q) throw validation_error("run_sweep: requires p >= q");
    if (c.trials < 1) throw validation_error("run_sweep: trials must be >= 1");
    if (c.sample_size < 2) throw validation_error("run_sweep: sample_size must be >= 2");
    if (c.sample_size > total_votes)
        throw validation_error("run_sweep: sample_size exceeds the " +
                               std::to_string(total_votes) + " available votes");
    if (c.attempts_per_voter < 1 || c.attempts_per_voter >= c.sample_size)
        throw validation_error("run_sweep: attempts_per_voter must be in [1, sample_size-1]");
    const double pair_budget = static_cast<double>(c.sample_size) * c.attempts_per_voter;
    if (pair_budget > 2e8) {
        const long long suggested = static_cast<long long>(2e8 / c.attempts_per_voter);
        throw validation_error("run_sweep: sample_size * attempts_per_voter = " +
                               std::to_string(static_cast<long long>(pair_budget)) +
                               " exceeds the memory budget; try --sample " +
                               std::to_string(suggested) + " or fewer attempts");
    }
    if (c.threads < 1) throw validation_error("run_sweep: threads must be >= 1");
}

}  // namespace

std::vector<CurvePoint> run_sweep(const std::vector<RegionRecord>& records,
                                  const SweepConfig& config, RngSeed seed) {
    long long total_votes = 0;
    for (const auto& r : records) total_votes += r.leave + r.remain;
    validate_sweep(config, total_votes);

    const auto tiebreak = TieBreak::ascending(2);
    const std::size_t grid = config.bias_grid.size() * config.wg_grid.size();
    // fraction of surprised minority voters, [grid point][trial]
    std::vector<std::vector<double>> fractions(grid,
                                               std::vector<double>(config.trials, 0.0));

    auto run_range = [&](int t_begin, int t_end) {
        for (int t = t_begin; t < t_end; ++t) {
            const RngSeed trial_seed =
                substream(seed, streams::trial, static_cast<std::uint64_t>(t));
            const auto voters =
                sample_subelection(records, config.sample_size, trial_seed);
            const auto adj = sample_attempt_geo_graph(voters, config.p, config.q, config.decay,
                                                      config.attempts_per_voter, trial_seed);
            const int n = static_cast<int>(voters.size());
            long long n_leave = 0;
            for (const auto& v : voters)
                if (v.class_index == kLeave) ++n_leave;
            const long long n_remain = n - n_leave;
            int w_true;
            if (n_leave > n_remain)
                w_true = kLeave;
            else if (n_remain > n_leave)
                w_true = kRemain;
            else
                w_true = tiebreak.prefers(kLeave, kRemain) ? kLeave : kRemain;
            const int minority = 1 - w_true;

            // neighborhood distribution (self included) of each minority voter
            std::vector<std::array<double, 2>> nbr_dists;
            for (int v = 0; v < n; ++v) {
                if (voters[v].class_index != minority) continue;
                double c[2] = {0.0, 0.0};
                c[voters[v].class_index] += 1.0;
                for (int u : adj[v]) c[voters[u].class_index] += 1.0;
                const double s = c[0] + c[1];
                nbr_dists.push_back({c[0] / s, c[1] / s});
            }

            const std::array<double, 2> true_dist = {
                static_cast<double>(n_leave) / static_cast<double>(n),
                static_cast<double>(n_remain) / static_cast<double>(n)};

            std::size_t g = 0;
            for (double bias : config.bias_grid) {
                // noise keyed by trial only: shared across bias/w_G/p/q
                const auto global = noisy_global(true_dist, bias, trial_seed);
                for (double wg : config.wg_grid) {
                    const ObservationMix mix(1.0 - wg, wg, bias);
                    long long surprised = 0;
                    for (const auto& nd : nbr_dists)
                        if (perceive_mixed(nd, global, mix, tiebreak) != w_true) ++surprised;
                    fractions[g][t] =
                        nbr_dists.empty()
                            ? 0.0
                            : static_cast<double>(surprised) /
                                  static_cast<double>(nbr_dists.size());
                    ++g;
                }
            }
        }
    };

    const int threads = std::min<int>(config.threads, config.trials);
    if (threads <= 1) {
        run_range(0, config.trials);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (config.trials + threads - 1) / threads;
        for (int i = 0; i < threads; ++i) {
            const int begin = i * chunk;
            const int end = std::min(config.trials, begin + chunk);
            if (begin < end) pool.emplace_back([&, begin, end] { run_range(begin, end); });
        }
        for (auto& th : pool) th.join();
    }

    std::vector<CurvePoint> points;
    points.reserve(grid);
    std::size_t g = 0;
    for (double bias : config.bias_grid) {
        for (double wg : config.wg_grid) {
            const auto& f = fractions[g];
            double mean = 0.0;
            for (double x : f) mean += x;
            mean /= static_cast<double>(f.size());
            double hw = 1.0;
            if (f.size() >= 2) {
                double ss = 0.0;
                for (double x : f) ss += (x - mean) * (x - mean);
                const double sd = std::sqrt(ss / static_cast<double>(f.size() - 1));
                hw = 1.959963984540054 * sd / std::sqrt(static_cast<double>(f.size()));
            }
            points.push_back(
                CurvePoint{config.p, config.q, bias, wg, mean, hw, config.trials});
            ++g;
        }
    }
    return points;
}

std::string curve_csv(const std::vector<CurvePoint>& points) {
    std::string out = "p,q,bias,w_G,surprised_fraction,ci,trials\n";
    for (const auto& pt : points) {
        out += format_double(pt.p);
        out += ',';
        out += format_double(pt.q);
        out += ',';
        out += format_double(pt.bias);
        out += ',';
        out += format_double(pt.w_g);
        out += ',';
        out += format_double(pt.surprised_fraction);
        out += ',';
        out += format_double(pt.ci_halfwidth);
        out += ',';
        out += std::to_string(pt.trials);
        out += '\n';
    }
    return out;
}

nlohmann::json sweep_manifest(const SweepConfig& config, RngSeed seed,
                              const std::string& version) {
    nlohmann::json j;
    j["command"] = "brexit";
    j["p"] = config.p;
    j["q"] = config.q;
    j["bias_grid"] = config.bias_grid;
    j["wg_grid"] = config.wg_grid;
    j["sample_size"] = config.sample_size;
    j["attempts_per_voter"] = config.attempts_per_voter;
    j["trials"] = config.trials;
    j["decay"] = {{"p1_max", config.decay.p1_max}, {"lambda_km", config.decay.lambda_km}};
    j["seed"] = {{"master", seed.master}, {"stream", seed.stream}};
    j["version"] = version;
    return j;
}

}  // namespace surprise::brexit
