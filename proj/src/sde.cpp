#include "skl/sde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace skl {

namespace {

[[noreturn]] void throw_nonfinite(double t, const Vec& x) {
    std::ostringstream os;
    os << "simulate: non-finite coefficient evaluation at t=" << t << ", x=(";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
    os << ")";
    throw std::runtime_error(os.str());
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double percentile_of(std::vector<double> v, double p) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double idx = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(idx);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double f = idx - static_cast<double>(lo);
    return (1.0 - f) * v[lo] + f * v[hi];
}

}  // namespace

SimResult simulate(const Domain& domain, const CoefficientField& cf, const Vec& x0,
                   const BrownianDriver& driver, const std::vector<double>& R_ladder) {
    domain.check_dimension(x0);
    if (cf.dim != domain.dimension())
        throw std::invalid_argument("simulate: coefficient/domain dimension mismatch");
    if (driver.dimension() != domain.dimension())
        throw std::invalid_argument("simulate: driver dimension mismatch");
    if (classify(domain, x0) == Region::exterior)
        throw std::invalid_argument("simulate: X(0) must lie in the closure of D");

    std::vector<double> ladder = R_ladder;
    std::sort(ladder.begin(), ladder.end());
    const double R_stop =
        ladder.empty() ? std::numeric_limits<double>::infinity() : ladder.back();

    const std::size_t steps = driver.steps();
    const int d = driver.dimension();
    const double dt = driver.dt();

    SimResult res;
    res.sol.X = SampledPath::uniform(dt, steps, d);
    res.sol.Phi = SampledPath::uniform(dt, steps, d);
    res.sol.total_variation.assign(steps + 1, 0.0);
    res.W = SampledPath::uniform(dt, steps, d);
    res.explosion.hit_times.assign(ladder.size(), std::nullopt);

    Vec x = domain.project(x0).point;
    res.sol.X.set(0, x);
    res.W.set(0, x);
    Vec w = x;
    res.explosion.max_abs = norm(x);
    for (std::size_t r = 0; r < ladder.size(); ++r)
        if (norm(x) >= ladder[r]) res.explosion.hit_times[r] = 0.0;

    std::size_t last = steps;
    Vec y(static_cast<std::size_t>(d)), dB(static_cast<std::size_t>(d));
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = res.sol.X.t[k];
        const Mat sig = cf.sigma_at(t, x);
        const Vec b = cf.b_at(t, x);
        if (!all_finite(sig.a) || !all_finite(b)) throw_nonfinite(t, x);
        driver.increment(k, dB);
        const Vec diff = sig.mul(dB);
        for (int c = 0; c < d; ++c) {
            const double step = diff[static_cast<std::size_t>(c)] +
                                b[static_cast<std::size_t>(c)] * dt;
            y[static_cast<std::size_t>(c)] = x[static_cast<std::size_t>(c)] + step;
            w[static_cast<std::size_t>(c)] += step;
        }
        if (!all_finite(y)) throw_nonfinite(t, x);
        Projection pr = domain.project(y);
        double dphi2 = 0.0;
        const auto phik = res.sol.Phi.at(k);
        auto phik1 = res.sol.Phi.at(k + 1);
        for (int c = 0; c < d; ++c) {
            const double dphi = pr.point[static_cast<std::size_t>(c)] - y[static_cast<std::size_t>(c)];
            dphi2 += dphi * dphi;
            phik1[static_cast<std::size_t>(c)] = phik[static_cast<std::size_t>(c)] + dphi;
        }
        res.sol.total_variation[k + 1] = res.sol.total_variation[k] + std::sqrt(dphi2);
        x = std::move(pr.point);
        res.sol.X.set(k + 1, x);
        res.W.set(k + 1, w);
        const double r_now = norm(x);
        res.explosion.max_abs = std::max(res.explosion.max_abs, r_now);
        for (std::size_t r = 0; r < ladder.size(); ++r)
            if (!res.explosion.hit_times[r] && r_now >= ladder[r])
                res.explosion.hit_times[r] = res.sol.X.t[k + 1];
        if (r_now >= R_stop) {
            last = k + 1;
            res.explosion.stopped = true;
            break;
        }
    }

    if (last < steps) {  // truncate at the stop index
        const auto cut = [&](SampledPath& p) {
            p.t.resize(last + 1);
            p.values.resize((last + 1) * static_cast<std::size_t>(d));
        };
        cut(res.sol.X);
        cut(res.sol.Phi);
        cut(res.W);
        res.sol.total_variation.resize(last + 1);
        res.sol.stopped_at = StopInfo{last, "radius_hit"};
    } else {
        res.sol.stopped_at = StopInfo{steps, "end_of_grid"};
    }
    return res;
}

SampledPath simulate_penalized(const Domain& domain, const CoefficientField& cf, const Vec& x0,
                               const BrownianDriver& driver) {
    if (!domain.convex())
        throw std::invalid_argument("simulate_penalized: convex domains only");
    domain.check_dimension(x0);
    const std::size_t steps = driver.steps();
    const int d = driver.dimension();
    const double dt = driver.dt();
    SampledPath X = SampledPath::uniform(dt, steps, d);
    Vec x = x0;
    Vec dB(static_cast<std::size_t>(d));
    X.set(0, x);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = X.t[k];
        const Mat sig = cf.sigma_at(t, x);
        const Vec b = cf.b_at(t, x);
        driver.increment(k, dB);
        const Vec diff = sig.mul(dB);
        // lambda = 1/dt: the penalty pulls all the way back to the projection
        const Projection pr = domain.project(x);
        for (int c = 0; c < d; ++c)
            x[static_cast<std::size_t>(c)] =
                x[static_cast<std::size_t>(c)] + diff[static_cast<std::size_t>(c)] +
                b[static_cast<std::size_t>(c)] * dt +
                (pr.point[static_cast<std::size_t>(c)] - x[static_cast<std::size_t>(c)]);
        X.set(k + 1, x);
    }
    return X;
}

UniquenessReport uniqueness_experiment(const Domain& domain, const CoefficientField& cf,
                                       const ModulusLambda& L, const Vec& x0, double T,
                                       const std::vector<double>& dt_ladder,
                                       const std::vector<double>& delta_ladder, int seeds,
                                       std::uint64_t seed, const WorkerPool& pool) {
    UniquenessReport rep;
    rep.seeds = seeds;
    {
        // Hypothesis probe; a failure warns but never aborts the experiment.
        const auto reg = check_regularity(cf, L, domain, 8.0, T, 4000, seed ^ 0xA5A5);
        rep.regularity_warning = !reg.pass;
        rep.regularity_violations = reg.violations;
    }
    for (double dt : dt_ladder) {
        for (double delta0 : delta_ladder) {
            auto sups = pool.map<double>(static_cast<std::size_t>(seeds), [&](std::size_t i) {
                const auto driver =
                    BrownianDriver::make(seed, static_cast<std::uint32_t>(i), cf.dim, T, dt);
                const auto base = simulate(domain, cf, x0, driver);
                Vec shifted = x0;
                shifted[0] += delta0;
                shifted = domain.project(shifted).point;
                const auto other = simulate(domain, cf, shifted, driver);
                double sup = 0.0;
                for (std::size_t k = 0; k < base.sol.X.points(); ++k)
                    sup = std::max(sup, dist(base.sol.X.at(k), other.sol.X.at(k)));
                return sup;
            });
            UniquenessCell cell;
            cell.dt = dt;
            cell.delta0 = delta0;
            cell.median_sup = median_of(sups);
            cell.p90_sup = percentile_of(sups, 0.9);
            rep.cells.push_back(cell);
        }
        auto sups = pool.map<double>(static_cast<std::size_t>(seeds), [&](std::size_t i) {
            const auto coarse =
                BrownianDriver::make(seed, static_cast<std::uint32_t>(i), cf.dim, T, dt);
            const auto fine = coarse.refined();
            const auto xc = simulate(domain, cf, x0, coarse);
            const auto xf = simulate(domain, cf, x0, fine);
            double sup = 0.0;
            for (std::size_t k = 0; k < xc.sol.X.points(); ++k)
                sup = std::max(sup, dist(xc.sol.X.at(k), xf.sol.X.at(2 * k)));
            return sup;
        });
        RefinementCell rc;
        rc.dt = dt;
        rc.median_sup = median_of(sups);
        rep.refinement.push_back(rc);
    }
    for (std::size_t i = 0; i + 1 < rep.refinement.size(); ++i) {
        const double hi = rep.refinement[i].median_sup;
        const double lo = rep.refinement[i + 1].median_sup;
        rep.refinement_ratios.push_back(lo > 0.0 ? hi / lo
                                                 : std::numeric_limits<double>::infinity());
    }
    return rep;
}

ExplosionReport explosion_experiment(const Domain& domain, const CoefficientField& cf,
                                     const Vec& x0, double T, double dt,
                                     const std::vector<double>& R_ladder, long path_count,
                                     std::uint64_t seed, const WorkerPool& pool) {
    if (R_ladder.empty()) throw std::invalid_argument("explosion_experiment: empty R ladder");
    ExplosionReport rep;
    rep.T = T;
    rep.dt = dt;
    rep.paths = path_count;
    rep.interpretation =
        "zero hitting fractions are evidence of non-explosion at this horizon and "
        "resolution, not a proof; hitting is data, not failure";
    std::vector<double> ladder = R_ladder;
    std::sort(ladder.begin(), ladder.end());
    auto results = pool.map<PathExplosion>(static_cast<std::size_t>(path_count),
                                           [&](std::size_t i) {
        const auto driver =
            BrownianDriver::make(seed, static_cast<std::uint32_t>(i), cf.dim, T, dt);
        return simulate(domain, cf, x0, driver, ladder).explosion;
    });
    rep.rungs.resize(ladder.size());
    rep.per_path_max_abs.reserve(results.size());
    for (const auto& r : results) rep.per_path_max_abs.push_back(r.max_abs);
    for (std::size_t j = 0; j < ladder.size(); ++j) {
        ExplosionRung& rung = rep.rungs[j];
        rung.R = ladder[j];
        for (const auto& r : results)
            if (r.hit_times[j]) {
                ++rung.hits;
                rung.hit_times.push_back(*r.hit_times[j]);
            }
        const double n = static_cast<double>(path_count);
        const double p = static_cast<double>(rung.hits) / n;
        rung.fraction = p;
        // Wilson 95% interval
        const double z = 1.959963984540054;
        const double z2 = z * z;
        const double denom = 1.0 + z2 / n;
        const double center = (p + z2 / (2.0 * n)) / denom;
        const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
        rung.wilson_lo = std::max(0.0, center - half);
        rung.wilson_hi = std::min(1.0, center + half);
    }
    return rep;
}

}  // namespace skl
