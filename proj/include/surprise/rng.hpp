#pragma once

#include <cmath>
#include <cstdint>

namespace surprise {

// Counter-based random streams. Every draw is a pure function of
// (master seed, stream id, counter/key), so sampling is order-independent:
// the same logical draw yields the same value no matter which thread, or in
// which order, it is evaluated. Reports aggregated from such draws are
// bit-identical for any worker count.

struct RngSeed {
    std::uint64_t master = 0;
    std::uint64_t stream = 0;
};

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ mix64(b));
}

// Derive a child stream, e.g. one per purpose tag or per trial index.
inline RngSeed substream(RngSeed s, std::uint64_t tag) {
    return {s.master, hash_combine(s.stream, tag)};
}

inline RngSeed substream(RngSeed s, std::uint64_t tag, std::uint64_t index) {
    return {s.master, hash_combine(hash_combine(s.stream, tag), index)};
}

inline double u64_to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Stateless keyed generator: one independent uniform per key.
class KeyedRng {
  public:
    explicit KeyedRng(RngSeed seed)
        : base_(hash_combine(mix64(seed.master), seed.stream)) {}

    std::uint64_t at(std::uint64_t key) const { return mix64(base_ ^ mix64(key)); }

    double uniform01(std::uint64_t key) const { return u64_to_unit(at(key)); }

  private:
    std::uint64_t base_;
};

// Sequential view over a keyed stream for draw sites that consume a
// variable number of values (rejection loops, Box-Muller pairs).
class SequentialRng {
  public:
    explicit SequentialRng(RngSeed seed) : keyed_(seed) {}

    std::uint64_t next_u64() { return keyed_.at(counter_++); }

    double next_uniform01() { return u64_to_unit(next_u64()); }

    // uniform on (0,1], safe as a log argument
    double next_uniform_open() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform_open();
        const double u2 = next_uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925287 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    // unbiased integer in [0, bound)
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

  private:
    KeyedRng keyed_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Undirected pair key; requires u != v and both < 2^32.
inline std::uint64_t pair_key(std::uint64_t u, std::uint64_t v) {
    if (u > v) {
        const std::uint64_t t = u;
        u = v;
        v = t;
    }
    return (u << 32) | v;
}

// Stream purpose tags. Keeping them distinct decorrelates the draw sites
// that share one master seed.
namespace streams {
inline constexpr std::uint64_t assignment = 0xA551;
inline constexpr std::uint64_t graph = 0x6EA4;
inline constexpr std::uint64_t panel = 0x9A7E;
inline constexpr std::uint64_t trial = 0x7514;
inline constexpr std::uint64_t subelection = 0x5AB5;
inline constexpr std::uint64_t attempts = 0xA77E;
inline constexpr std::uint64_t noise = 0x015E;
}  // namespace streams

}  // namespace surprise
