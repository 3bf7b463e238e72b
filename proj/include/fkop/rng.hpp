#pragma once

#include <cstdint>

namespace fkop {

// Counter-based stream RNG: draw n of stream (seed, id) is a pure function of
// (seed, id, n), so per-path streams reproduce identically regardless of how
// paths are scheduled across threads.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : base_(mix(seed ^ (0x9E3779B97F4A7C15ULL * (stream_id + 1)))) {}

    std::uint64_t next_u64() {
        return mix(base_ ^ (0xBF58476D1CE4E5B9ULL * (++ctr_)));
    }

    // Uniform on the open interval (0,1); never returns 0 or 1.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential();  // rate 1
    double normal();       // standard normal, Box-Muller with cached pair

    void reset_cache() { has_cached_ = false; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 33;
        z *= 0xFF51AFD7ED558CCDULL;
        z ^= z >> 33;
        z *= 0xC4CEB9FE1A85EC53ULL;
        z ^= z >> 33;
        return z;
    }

    std::uint64_t base_;
    std::uint64_t ctr_ = 0;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace fkop
