#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "skl/brownian.hpp"
#include "skl/coefficients.hpp"
#include "skl/geometry.hpp"
#include "skl/parallel.hpp"
#include "skl/path.hpp"
#include "skl/skorohod.hpp"

namespace skl {

struct PathExplosion {
    double max_abs = 0.0;
    std::vector<std::optional<double>> hit_times;  // per ladder rung
    bool stopped = false;
};

struct SimResult {
    ReflectedSolution sol;
    SampledPath W;  // unreflected driver X(0) + stochastic + drift sums
    PathExplosion explosion;
};

/// Projected Euler step for the reflected SDE:
///   y = X_k + sigma(t_k, X_k) dB_k + b(t_k, X_k) dt,  X_{k+1} = project(y).
/// Stops at the first |X| >= max(R_ladder); records first hitting times per
/// rung. Throws on non-finite coefficient evaluations (with the (t, x)
/// witness in the message).
SimResult simulate(const Domain& domain, const CoefficientField& cf, const Vec& x0,
                   const BrownianDriver& driver, const std::vector<double>& R_ladder = {});

/// Penalization cross-check scheme for convex domains: the reflection term is
/// replaced by the pull -(x - project(x)) applied once per step (lambda = 1/dt).
SampledPath simulate_penalized(const Domain& domain, const CoefficientField& cf, const Vec& x0,
                               const BrownianDriver& driver);

struct UniquenessCell {
    double dt = 0.0;
    double delta0 = 0.0;
    double median_sup = 0.0;
    double p90_sup = 0.0;
};

struct RefinementCell {
    double dt = 0.0;
    double median_sup = 0.0;  // sup over coarse grid |X_dt - X_{dt/2}|
};

struct UniquenessReport {
    std::vector<UniquenessCell> cells;              // per (dt, delta0)
    std::vector<RefinementCell> refinement;         // per dt
    std::vector<double> refinement_ratios;          // successive medians
    bool regularity_warning = false;                // eq. regularity falsified pre-run
    long regularity_violations = 0;
    int seeds = 0;
};

/// Coupled-path probe of pathwise uniqueness: same driver from x0 and from
/// x0 + delta0 e1 (projected into the closure), plus a dt vs dt/2 coupling
/// with the refined driver. Medians/percentiles per cell over seeds.
UniquenessReport uniqueness_experiment(const Domain& domain, const CoefficientField& cf,
                                       const ModulusLambda& L, const Vec& x0, double T,
                                       const std::vector<double>& dt_ladder,
                                       const std::vector<double>& delta_ladder, int seeds,
                                       std::uint64_t seed, const WorkerPool& pool);

struct ExplosionRung {
    double R = 0.0;
    long hits = 0;
    double fraction = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
    std::vector<double> hit_times;  // per-path hit times, hits only
};

struct ExplosionReport {
    std::vector<ExplosionRung> rungs;
    std::vector<double> per_path_max_abs;
    long paths = 0;
    double T = 0.0, dt = 0.0;
    std::string interpretation;
};

/// Monte Carlo hitting fractions over a radius ladder; deterministic under
/// (seed, path_count) and independent of the worker count.
ExplosionReport explosion_experiment(const Domain& domain, const CoefficientField& cf,
                                     const Vec& x0, double T, double dt,
                                     const std::vector<double>& R_ladder, long path_count,
                                     std::uint64_t seed, const WorkerPool& pool);

}  // namespace skl
