#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skl/linalg.hpp"

namespace skl {

/// Grid path: strictly increasing times starting at 0 and d-dimensional
/// values stored row-major. Carrier for drivers W, solutions X, and
/// reflection terms Phi.
struct SampledPath {
    std::vector<double> t;
    std::vector<double> values;  // points() * dimension, row-major
    int dim = 0;

    SampledPath() = default;
    SampledPath(std::vector<double> times, std::vector<double> vals, int d);

    /// Uniform grid 0, dt, ..., N*dt with zero values.
    static SampledPath uniform(double dt, std::size_t steps, int d);

    std::size_t points() const { return t.size(); }
    int dimension() const { return dim; }

    std::span<const double> at(std::size_t i) const {
        return {values.data() + i * static_cast<std::size_t>(dim),
                static_cast<std::size_t>(dim)};
    }
    std::span<double> at(std::size_t i) {
        return {values.data() + i * static_cast<std::size_t>(dim),
                static_cast<std::size_t>(dim)};
    }
    Vec point(std::size_t i) const {
        const auto s = at(i);
        return Vec(s.begin(), s.end());
    }
    void set(std::size_t i, std::span<const double> v) {
        for (int c = 0; c < dim; ++c)
            values[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(c)] =
                v[static_cast<std::size_t>(c)];
    }

    /// Recorded uniform step; throws when the grid is not uniform.
    double dt() const;
    bool is_uniform(double rel_tol = 1e-9) const;

    void validate() const;  // strictly increasing grid, finite values
};

struct StopInfo {
    std::size_t index = 0;
    std::string reason;  // "radius_hit" | "end_of_grid"
};

struct RadiusHit {
    double radius = 0.0;
    double time = 0.0;
    std::size_t index = 0;
};

/// Paired solution and reflection term with running total variation and
/// stopping metadata.
struct ReflectedSolution {
    SampledPath X;
    SampledPath Phi;
    std::vector<double> total_variation;  // running |Phi| on the grid
    std::optional<StopInfo> stopped_at;
    std::vector<RadiusHit> radius_hits;

    void validate() const;
};

// CSV interface: header `t,x1,...,xd`, one row per grid point, 17 significant
// digits, '.' decimal point regardless of locale.
void write_csv(std::ostream& os, const SampledPath& path);
SampledPath read_csv(std::istream& is);
void write_csv_file(const std::string& filename, const SampledPath& path);
SampledPath read_csv_file(const std::string& filename);

}  // namespace skl
