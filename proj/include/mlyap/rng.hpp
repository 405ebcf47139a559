#pragma once

#include <cmath>
#include <cstdint>

namespace mlyap {

/// Counter-derived random stream: xoshiro256++ state filled by splitmix64
/// from (master_seed, stream_id).  Stream i is the same no matter how paths
/// are partitioned across workers, which is what makes batch results
/// independent of the thread count.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id) {
        std::uint64_t x = master_seed ^ (0x9E3779B97F4A7C15ULL * (stream_id + 1));
        for (auto& word : s_) word = splitmix64(x);
        has_spare_ = false;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on (0, 1]; never returns 0 so logs stay finite.
    double next_uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via the Marsaglia polar method (spare cached).
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_uniform() - 1.0;
            v = 2.0 * next_uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t splitmix64(std::uint64_t& state) {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Master seed plus the per-path stream derivation rule.
struct RngPolicy {
    std::uint64_t master_seed = 0;

    RngPolicy() = default;
    explicit RngPolicy(std::uint64_t seed) : master_seed(seed) {}

    RngStream stream_for(std::uint64_t path_index) const {
        return RngStream(master_seed, path_index);
    }
};

}  // namespace mlyap
