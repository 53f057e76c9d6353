#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "surprise/core.hpp"
#include "surprise/rng.hpp"

namespace testsupport {

// Independent inversion-count oracle: swaps a bubble sort needs to turn
// one ranking into the other.
inline int bubble_sort_swaps(const std::vector<int>& from, const std::vector<int>& to) {
    std::vector<int> pos(to.size());
    for (std::size_t i = 0; i < to.size(); ++i) pos[to[i]] = static_cast<int>(i);
    std::vector<int> seq;
    seq.reserve(from.size());
    for (int c : from) seq.push_back(pos[c]);
    int swaps = 0;
    for (std::size_t pass = 0; pass + 1 < seq.size(); ++pass) {
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
            if (seq[i] > seq[i + 1]) {
                std::swap(seq[i], seq[i + 1]);
                ++swaps;
            }
        }
    }
    return swaps;
}

inline std::vector<int> random_permutation(int m, surprise::SequentialRng& rng) {
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = m - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

// log C(n, k)
inline double log_choose(long long n, long long k) {
    return std::lgamma(static_cast<double>(n + 1)) - std::lgamma(static_cast<double>(k + 1)) -
           std::lgamma(static_cast<double>(n - k + 1));
}

// P(X <= k) for X ~ Binomial(n, p), exact summation in log space
inline double binomial_cdf(long long k, long long n, double p) {
    if (k < 0) return 0.0;
    if (k >= n) return 1.0;
    double sum = 0.0;
    for (long long i = 0; i <= k; ++i) {
        const double lg = log_choose(n, i) + static_cast<double>(i) * std::log(p) +
                          static_cast<double>(n - i) * std::log1p(-p);
        sum += std::exp(lg);
    }
    return std::min(1.0, sum);
}

// reference normal CDF, independent of the library's approximation
inline double phi_reference(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Deterministic region fixture: `regions` regions whose counts sum to
// `total` votes with an exact `leave_thousandths`/1000 national leave
// share; locations cover all but roughly `missing_fraction` of regions.
struct RegionFixture {
    std::filesystem::path votes_csv;
    std::filesystem::path locations_csv;
    long long total = 0;
    long long leave_total = 0;
};

inline RegionFixture write_region_fixture(const std::filesystem::path& dir, int regions,
                                          long long total, int leave_thousandths,
                                          double missing_fraction, std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    RegionFixture fx;
    fx.votes_csv = dir / "votes.csv";
    fx.locations_csv = dir / "locations.csv";
    fx.total = total;
    fx.leave_total = total * leave_thousandths / 1000;

    surprise::SequentialRng rng(surprise::RngSeed{seed, 0xF1C});
    // split totals across regions, biased so regions differ politically
    std::vector<long long> size(regions, 0);
    long long assigned = 0;
    for (int r = 0; r < regions; ++r) {
        size[r] = total / regions / 2 + 1 +
                  static_cast<long long>(rng.next_below(
                      static_cast<std::uint64_t>(std::max<long long>(1, total / regions))));
        assigned += size[r];
    }
    // rescale to the exact total
    long long running = 0;
    for (int r = 0; r < regions; ++r) {
        long long s = size[r] * total / assigned;
        if (s < 2) s = 2;
        size[r] = s;
        running += s;
    }
    size[0] += total - running;

    std::vector<long long> leave(regions, 0);
    long long leave_running = 0;
    for (int r = 0; r < regions; ++r) {
        // region leave share scattered around the national one
        const double share =
            static_cast<double>(leave_thousandths) / 1000.0 +
            (static_cast<double>(rng.next_below(400)) - 200.0) / 1000.0;
        leave[r] = std::min<long long>(
            size[r], std::max<long long>(0, std::llround(share * static_cast<double>(size[r]))));
        leave_running += leave[r];
    }
    // repair the national leave total exactly
    long long diff = fx.leave_total - leave_running;
    for (int r = 0; r < regions && diff != 0; ++r) {
        const long long room = diff > 0 ? size[r] - leave[r] : leave[r];
        const long long step = std::min(std::abs(diff), room);
        leave[r] += diff > 0 ? step : -step;
        diff -= diff > 0 ? step : -step;
    }

    std::ofstream votes(fx.votes_csv);
    votes << "region,leave,remain\n";
    for (int r = 0; r < regions; ++r)
        votes << "R" << r << "," << leave[r] << "," << (size[r] - leave[r]) << "\n";

    std::ofstream locs(fx.locations_csv);
    locs << "town,region,lat,lon\n";
    const int missing = static_cast<int>(missing_fraction * regions);
    for (int r = 0; r < regions - missing; ++r) {
        const int towns = 1 + static_cast<int>(rng.next_below(3));
        for (int t = 0; t < towns; ++t) {
            const double lat = 50.0 + 8.0 * rng.next_uniform01();
            const double lon = -6.0 + 8.0 * rng.next_uniform01();
            locs << "T" << r << "_" << t << ",R" << r << "," << lat << "," << lon << "\n";
        }
    }
    return fx;
}

}  // namespace testsupport
