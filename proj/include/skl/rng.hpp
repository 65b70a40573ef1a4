#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "skl/linalg.hpp"

namespace skl {

/// Philox-4x32-10 counter-based generator (Salmon et al., "Parallel random
/// numbers: as easy as 1, 2, 3"). Every draw is addressed by
/// (key = seed, counter = 128 bits), so sample i of a batch is computable
/// without generating samples 0..i-1 and results do not depend on worker
/// scheduling.
struct Philox {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            const std::array<std::uint32_t, 4> next = {
                static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                static_cast<std::uint32_t>(p1),
                static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                static_cast<std::uint32_t>(p0)};
            ctr = next;
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

/// 128-bit addressed block: (seed; stream, index) -> 4x32 bits.
inline std::array<std::uint32_t, 4> philox_block(std::uint64_t seed, std::uint64_t stream,
                                                 std::uint64_t index) {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    return Philox::block(ctr, key);
}

/// Uniform in (0,1), never exactly 0 or 1.
inline double u01(std::uint64_t hi, std::uint64_t lo) {
    const std::uint64_t bits = (hi << 32) | lo;
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// One uniform draw at an explicit address.
inline double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const auto b = philox_block(seed, stream, index);
    return u01(b[0], b[1]);
}

/// One standard normal draw at an explicit address (Box-Muller, cosine branch).
inline double normal_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const auto b = philox_block(seed, stream, index);
    const double u1 = u01(b[0], b[1]);
    const double u2 = u01(b[2], b[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Sequential convenience wrapper over one (seed, stream) pair.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    double uniform() { return uniform_at(seed_, stream_, next_++); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal() { return normal_at(seed_, stream_, next_++); }

    /// Log-uniform on [lo, hi], lo > 0.
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    std::uint64_t integer(std::uint64_t n) {  // uniform in [0, n)
        const auto b = philox_block(seed_, stream_, next_++);
        const std::uint64_t bits = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
        return bits % n;
    }

    Vec gaussian_vector(int d) {
        Vec v(static_cast<std::size_t>(d));
        for (auto& x : v) x = normal();
        return v;
    }

    /// Uniform direction on the unit sphere S^{d-1}.
    Vec sphere_direction(int d) {
        for (;;) {
            Vec v = gaussian_vector(d);
            const double n = norm(v);
            if (n > 1e-12) return (1.0 / n) * v;
        }
    }

    /// Uniform point in the unit ball of R^d.
    Vec ball_point(int d) {
        Vec v = sphere_direction(d);
        const double r = std::pow(uniform(), 1.0 / d);
        return r * v;
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t next_ = 0;
};

/// Stream ids used across the library. Streams separate independent purposes
/// under one experiment seed; the high bits carry the batch/path index.
enum class StreamKind : std::uint64_t {
    brownian = 1,       // base Brownian increments (level in bits 8..15)
    bridge = 2,         // bridge midpoint refinements
    boundary = 3,       // boundary point sampling
    probe = 4,          // normal-cone / inequality probes
    sample = 5,         // generic per-sample checker draws
    scale = 6,          // scale selection in stratified samplers
};

inline std::uint64_t stream_id(StreamKind kind, std::uint64_t index = 0,
                               std::uint64_t sub = 0) {
    return (index << 24) | (sub << 8) | static_cast<std::uint64_t>(kind);
}

}  // namespace skl
