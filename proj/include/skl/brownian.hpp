#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "skl/linalg.hpp"
#include "skl/path.hpp"

namespace skl {

/// Counter-addressed Brownian path on a uniform grid, stored as values
/// W(t_k) with W(0) = 0. Path i of a batch is derivable without generating
/// paths < i (Philox streams keyed by (seed; path_index, level, coordinate)).
/// Bridge refinement copies coarse-grid values verbatim, so refined drivers
/// agree with their parent at coarse grid points bitwise.
class BrownianDriver {
public:
    static BrownianDriver make(std::uint64_t seed, std::uint32_t path_index, int dimension,
                               double T, double dt);

    /// Midpoint-conditioned refinement halving dt.
    BrownianDriver refined() const;

    int dimension() const { return dim_; }
    double dt() const { return dt_; }
    double T() const { return T_; }
    std::size_t steps() const { return steps_; }
    std::uint64_t seed() const { return seed_; }
    std::uint32_t path_index() const { return path_; }
    int level() const { return level_; }

    std::span<const double> value(std::size_t k) const {
        return {values_.data() + k * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }

    /// Increment W(t_{k+1}) - W(t_k) written into `out` (size d).
    void increment(std::size_t k, std::span<double> out) const {
        const auto a = value(k);
        const auto b = value(k + 1);
        for (std::size_t c = 0; c < a.size(); ++c) out[c] = b[c] - a[c];
    }

    /// Cumulative path W with origin added (zeros by default).
    SampledPath cumulative(const Vec& origin = {}) const;

private:
    BrownianDriver() = default;
    std::uint64_t seed_ = 0;
    std::uint32_t path_ = 0;
    int dim_ = 1;
    int level_ = 0;
    double T_ = 0.0;
    double dt_ = 0.0;
    std::size_t steps_ = 0;
    std::vector<double> values_;  // (steps + 1) * dim, row-major, W(0) = 0
};

}  // namespace skl
