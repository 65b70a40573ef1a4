#include "skl/brownian.hpp"

#include <cmath>
#include <stdexcept>

#include "skl/rng.hpp"

namespace skl {

namespace {
std::uint64_t driver_stream(std::uint32_t path, int level, int coord) {
    return stream_id(StreamKind::brownian,
                     (static_cast<std::uint64_t>(path) << 16) |
                         (static_cast<std::uint64_t>(level) << 8) |
                         static_cast<std::uint64_t>(coord));
}
}  // namespace

BrownianDriver BrownianDriver::make(std::uint64_t seed, std::uint32_t path_index, int dimension,
                                    double T, double dt) {
    if (dimension < 1) throw std::invalid_argument("brownian: dimension must be >= 1");
    if (!(dt > 0.0 && T > 0.0)) throw std::invalid_argument("brownian: T, dt must be positive");
    const double ratio = T / dt;
    const auto steps = static_cast<std::size_t>(std::llround(ratio));
    if (steps == 0 || std::fabs(ratio - static_cast<double>(steps)) > 1e-9 * ratio)
        throw std::invalid_argument("brownian: dt must divide T");
    BrownianDriver b;
    b.seed_ = seed;
    b.path_ = path_index;
    b.dim_ = dimension;
    b.level_ = 0;
    b.T_ = T;
    b.dt_ = dt;
    b.steps_ = steps;
    b.values_.assign((steps + 1) * static_cast<std::size_t>(dimension), 0.0);
    const double sd = std::sqrt(dt);
    for (int c = 0; c < dimension; ++c) {
        const std::uint64_t stream = driver_stream(path_index, 0, c);
        double w = 0.0;
        for (std::size_t k = 0; k < steps; ++k) {
            w += sd * normal_at(seed, stream, k);
            b.values_[(k + 1) * static_cast<std::size_t>(dimension) +
                      static_cast<std::size_t>(c)] = w;
        }
    }
    return b;
}

BrownianDriver BrownianDriver::refined() const {
    BrownianDriver f;
    f.seed_ = seed_;
    f.path_ = path_;
    f.dim_ = dim_;
    f.level_ = level_ + 1;
    f.T_ = T_;
    f.dt_ = 0.5 * dt_;
    f.steps_ = 2 * steps_;
    f.values_.resize((f.steps_ + 1) * static_cast<std::size_t>(dim_));
    const double half_sd = 0.5 * std::sqrt(dt_);
    for (int c = 0; c < dim_; ++c) {
        const std::uint64_t stream = driver_stream(path_, f.level_, c);
        for (std::size_t k = 0; k <= steps_; ++k)  // coarse values copied bitwise
            f.values_[(2 * k) * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(c)] =
                values_[k * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(c)];
        for (std::size_t k = 0; k < steps_; ++k) {
            const double lo =
                values_[k * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(c)];
            const double hi =
                values_[(k + 1) * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(c)];
            const double z = normal_at(seed_, stream, k);
            f.values_[(2 * k + 1) * static_cast<std::size_t>(dim_) +
                      static_cast<std::size_t>(c)] = 0.5 * (lo + hi) + half_sd * z;
        }
    }
    return f;
}

SampledPath BrownianDriver::cumulative(const Vec& origin) const {
    Vec x = origin.empty() ? zeros(dim_) : origin;
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("brownian: origin dimension mismatch");
    SampledPath p = SampledPath::uniform(dt_, steps_, dim_);
    for (std::size_t k = 0; k <= steps_; ++k) {
        const auto w = value(k);
        auto row = p.at(k);
        for (int c = 0; c < dim_; ++c)
            row[static_cast<std::size_t>(c)] =
                x[static_cast<std::size_t>(c)] + w[static_cast<std::size_t>(c)];
    }
    return p;
}

}  // namespace skl
