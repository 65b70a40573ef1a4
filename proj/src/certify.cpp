#include "skl/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "skl/rng.hpp"

namespace skl {

Vec LyapunovCertificate::grad(double t, const Vec& x) const {
    if (gradV) return gradV(t, x);
    const double h = fd_step * (1.0 + norm(x));
    Vec g(x.size());
    Vec xp = x, xm = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + h;
        xm[i] = x[i] - h;
        g[i] = (V(t, xp) - V(t, xm)) / (2.0 * h);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    return g;
}

double LyapunovCertificate::lap(double t, const Vec& x) const {
    if (lapV) return lapV(t, x);
    const double h = fd_step * (1.0 + norm(x));
    const double v0 = V(t, x);
    double acc = 0.0;
    Vec xp = x, xm = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + h;
        xm[i] = x[i] - h;
        acc += (V(t, xp) - 2.0 * v0 + V(t, xm)) / (h * h);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    return acc;
}

double LyapunovCertificate::ddt(double t, const Vec& x) const {
    if (dtV) return dtV(t, x);
    const double h = fd_step * (1.0 + std::fabs(t));
    const double tl = std::max(0.0, t - h);
    return (V(t + h, x) - V(tl, x)) / (t + h - tl);
}

V1Report check_V1(const LyapunovCertificate& cert, const Domain& domain, double T,
                  const std::vector<double>& R_ladder, long samples_per_shell,
                  std::uint64_t seed, double escape_threshold) {
    if (R_ladder.size() < 2) throw std::invalid_argument("check_V1: ladder needs >= 2 rungs");
    V1Report rep;
    rep.escape_threshold = escape_threshold;
    rep.interpretation =
        "necessary-condition check: sampled infima over a finite shell ladder stand in for "
        "the coercivity limit";
    const int d = domain.dimension();
    const double shell_factor = 4.0;
    for (double R : R_ladder) {
        V1Rung rung;
        rung.R = R;
        double inf = std::numeric_limits<double>::infinity();
        Vec arg;
        long used = 0;
        for (long i = 0; i < samples_per_shell; ++i) {
            Rng rng(seed, stream_id(StreamKind::sample, static_cast<std::uint64_t>(i),
                                    static_cast<std::uint64_t>(used % 251)));
            const Vec dir = rng.sphere_direction(d);
            // radial point exactly on |x| = R plus log-uniform shell fill
            for (int variant = 0; variant < 2; ++variant) {
                const double r =
                    variant == 0 ? R : R * std::exp(rng.uniform() * std::log(shell_factor));
                Vec x = r * dir;
                if (!domain.inside_closure(x)) continue;
                const double t = rng.uniform(0.0, T);
                const double v = std::min(cert.V(0.0, x), cert.V(t, x));
                ++used;
                if (v < inf) {
                    inf = v;
                    arg = x;
                }
            }
        }
        rung.samples = used;
        rung.infimum = inf;
        rung.argmin = arg;
        rep.rungs.push_back(std::move(rung));
    }
    rep.strictly_increasing = true;
    for (std::size_t i = 0; i + 1 < rep.rungs.size(); ++i)
        if (!(rep.rungs[i + 1].infimum > rep.rungs[i].infimum)) rep.strictly_increasing = false;
    rep.top_exceeds_threshold = rep.rungs.back().infimum >= escape_threshold;
    rep.pass = rep.strictly_increasing && rep.top_exceeds_threshold;
    return rep;
}

V2Report check_V2(const LyapunovCertificate& cert, const Domain& domain, long boundary_samples,
                  std::uint64_t seed, double tol, double T, int t_samples) {
    V2Report rep;
    rep.tol = tol;
    rep.max_inner_product = -std::numeric_limits<double>::infinity();
    const auto points = sample_boundary(domain, seed, static_cast<int>(boundary_samples));
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Vec& x = points[i];
        NormalCone cone;
        try {
            cone = domain.normal_cone(x, std::max(default_tol(x), 1e-9));
        } catch (const std::exception&) {
            continue;
        }
        std::vector<Vec> dirs = cone.rays;
        if (!cone.unique) {
            dirs.push_back(cone.representative);
            Rng rng(seed, stream_id(StreamKind::sample, i));
            for (int k = 0; k < 4; ++k) {
                Vec c = zeros(domain.dimension());
                for (const auto& ray : cone.rays) axpy(rng.uniform(), ray, c);
                if (norm(c) > 1e-12) dirs.push_back(normalized(c));
            }
        }
        for (int ti = 0; ti < t_samples; ++ti) {
            const double t = t_samples == 1 ? 0.0 : T * ti / (t_samples - 1);
            const Vec g = cert.grad(t, x);
            for (const auto& n : dirs) {
                ++rep.normals_checked;
                const double ip = dot(g, n);
                if (ip > rep.max_inner_product) {
                    rep.max_inner_product = ip;
                    rep.witness_point = x;
                    rep.witness_normal = n;
                }
            }
        }
    }
    rep.pass = rep.normals_checked > 0 && rep.max_inner_product <= tol;
    return rep;
}

V3Report check_V3(const LyapunovCertificate& cert, const CoefficientField& cf,
                  const GrowthGamma& G, const Domain& domain, double T, long sample_count,
                  std::uint64_t seed, double radius_window) {
    V3Report rep;
    rep.g_used = cf.g_at(0.0);
    rep.interpretation =
        "falsifier: pass means no violation found at the sampled resolution";
    rep.worst_residual = -std::numeric_limits<double>::infinity();
    const int d = domain.dimension();
    for (long i = 0; i < sample_count; ++i) {
        Rng rng(seed, stream_id(StreamKind::sample, static_cast<std::uint64_t>(i)));
        const double t = rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.0, T);
        const double r = rng.uniform() < 0.5 ? rng.log_uniform(1e-6, radius_window)
                                             : radius_window * rng.uniform();
        Vec x = r * rng.sphere_direction(d);
        if (!domain.inside_closure(x)) x = domain.project(x).point;
        ++rep.samples;
        const Mat sig = cf.sigma_at(t, x);
        const Vec b = cf.b_at(t, x);
        const double lhs = sig.hs_norm2() * cert.lap(t, x) + 2.0 * dot(b, cert.grad(t, x)) +
                           2.0 * cert.ddt(t, x);
        const double rhs = cf.g_at(t) * G(cert.V(t, x));
        const double residual = lhs - rhs;
        if (residual > rep.worst_residual) {
            rep.worst_residual = residual;
            rep.witness = x;
            rep.witness_t = t;
        }
        if (rhs > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, lhs / rhs);
        if (residual > 1e-9 * (1.0 + std::fabs(rhs))) ++rep.violations;
    }
    rep.pass = rep.violations == 0;
    return rep;
}

namespace {

CoefficientField example_growth_field(int d) {
    // ||sigma|| v |b| <= |x| sqrt(log(|x|+1)) + 1 with C = 1.
    CoefficientField cf;
    cf.dim = d;
    cf.sigma = [d](double, const Vec&) {
        return Mat::identity(d, 1.0 / std::sqrt(static_cast<double>(d)));
    };
    cf.b = [](double, const Vec& x) {
        const double f = std::sqrt(std::log(norm(x) + 1.0));
        return f * x;
    };
    cf.gamma_id = "loglinear";
    return cf;
}

}  // namespace

PresetBundle preset_example_2_1(ExamplePreset which) {
    PresetBundle out;
    out.gamma = GrowthGamma::loglinear();
    if (which == ExamplePreset::convex) {
        auto dom = std::make_shared<HalfSpaceDomain>(Vec{1.0, 0.0}, 0.0);
        dom->meta_r0 = 1.0;
        dom->meta_delta = 1.0;
        dom->meta_beta = 1.0;
        out.domain = dom;
        const Vec x0 = {1.0, 0.0};
        out.cert.label = "convex |x-x0|^2";
        out.cert.V = [x0](double, const Vec& x) { return dist2(x, x0); };
        out.cert.gradV = [x0](double, const Vec& x) { return 2.0 * (x - x0); };
        out.cert.lapV = [](double, const Vec& x) { return 2.0 * static_cast<double>(x.size()); };
        out.cert.dtV = [](double, const Vec&) { return 0.0; };
        out.cf = example_growth_field(2);
        out.g = 10.0;  // numerically maximized generator/growth ratio is ~7.5
        out.cf.g = [g = out.g](double) { return g; };
        out.cf.preset_id = "ex21_convex";
        out.notes = "half-space, V = |x - (1,0)|^2";
        return out;
    }
    // tube: H(s) = s+1, m = 4, M = 0, d = 2.
    const double m = 4.0;
    auto dom = std::make_shared<TubeDomain>([](double s) { return s + 1.0; },
                                            [](double) { return 1.0; }, 2, "tube");
    dom->meta_r0 = 1.0;
    dom->meta_delta = 1.0;
    dom->meta_beta = 2.0;
    out.domain = dom;
    out.cert.label = "tube int H + (m/2)|x~|^2";
    out.cert.V = [m](double, const Vec& x) {
        const double s = x[0] + 1.0;
        double rho2 = 0.0;
        for (std::size_t i = 1; i < x.size(); ++i) rho2 += x[i] * x[i];
        return 0.5 * s * s + 0.5 * m * rho2;
    };
    out.cert.gradV = [m](double, const Vec& x) {
        Vec g = m * x;
        g[0] = x[0] + 1.0;  // H(x1)
        return g;
    };
    out.cert.lapV = [m](double, const Vec& x) {
        return 1.0 + m * (static_cast<double>(x.size()) - 1.0);  // H'(x1) + m (d-1)
    };
    out.cert.dtV = [](double, const Vec&) { return 0.0; };
    out.cf = example_growth_field(2);
    out.g = 8.0;  // numerically maximized generator/growth ratio is 5.0
    out.cf.g = [g = out.g](double) { return g; };
    out.cf.preset_id = "ex21_tube";
    out.notes = "tube H(s) = s+1, m = 4, M = 0";
    return out;
}

// Covering ---------------------------------------------------------------------

void CoveringSpec::validate() const {
    if (centers.size() != radii.size() || centers.empty())
        throw std::invalid_argument("covering: centers/radii mismatch or empty");
    if (!(beta_hat > 0.0 && beta_hat < 1.0))
        throw std::invalid_argument("covering: beta_hat must be in (0,1)");
    if (!(nu >= 0.0 && nu < 1.0)) throw std::invalid_argument("covering: nu must be in [0,1)");
    if (!(C > 0.0)) throw std::invalid_argument("covering: C must be positive");
    if (!(delta_hat > 0.0)) throw std::invalid_argument("covering: delta_hat must be positive");
    for (double r : radii)
        if (r < delta_hat)
            throw std::invalid_argument("covering: every delta_n must be >= delta_hat");
}

CoveringReport check_covering(const CoveringSpec& spec, const CoefficientField& cf,
                              const Domain& domain, long samples_per_center,
                              long boundary_samples, std::uint64_t seed) {
    spec.validate();
    CoveringReport rep;
    rep.interpretation =
        "falsifier: M estimates are sampled maxima; coverage checked on sampled boundary "
        "points within the window";
    const int d = domain.dimension();
    for (std::size_t n = 0; n < spec.centers.size(); ++n) {
        CoveringCenterCheck cc;
        cc.n = n + 1;  // paper indexing: centers are x_1, x_2, ...
        const Vec& xn = spec.centers[n];
        const double dn = spec.radii[n];
        double M = 0.0;
        Vec wit;
        for (long i = 0; i < samples_per_center; ++i) {
            Rng rng(seed, stream_id(StreamKind::sample, static_cast<std::uint64_t>(i), n % 251));
            Vec z = xn;
            axpy(dn, rng.ball_point(d), z);
            if (!domain.inside_closure(z)) z = domain.project(z).point;
            if (dist(z, xn) > dn) continue;  // projection may leave the ball
            const double t = rng.uniform(0.0, spec.T);
            const Mat sig = cf.sigma_at(t, z);
            const Vec b = cf.b_at(t, z);
            const double v = std::max(sig.hs_norm2(), norm2(b));
            ++cc.samples;
            if (v > M) {
                M = v;
                wit = z;
            }
        }
        cc.M_estimate = M;
        cc.bound = spec.C * std::pow(dn, spec.nu);
        cc.witness = wit;
        cc.pass = M <= cc.bound + 1e-12 * (1.0 + cc.bound);
        rep.centers.push_back(std::move(cc));
    }
    const auto pts = sample_boundary(domain, seed ^ 0xC0FFEE, static_cast<int>(boundary_samples));
    for (const auto& p : pts) {
        if (norm(p) > spec.window) continue;  // outside the instantiation window
        ++rep.coverage_checked;
        bool covered = false;
        for (std::size_t n = 0; n < spec.centers.size() && !covered; ++n)
            if (dist(p, spec.centers[n]) < spec.beta_hat * spec.radii[n]) covered = true;
        if (!covered) rep.uncovered.push_back(p);
    }
    bool centers_ok = true;
    for (const auto& c : rep.centers) centers_ok = centers_ok && c.pass;
    rep.pass = centers_ok && rep.uncovered.empty() && rep.coverage_checked > 0;
    return rep;
}

CoveringSpec make_halfspace_covering(const Domain& domain, double delta_hat, double beta_hat,
                                     double nu, double C, double T, double window,
                                     bool growing_radii, std::uint64_t seed) {
    CoveringSpec spec;
    spec.delta_hat = delta_hat;
    spec.beta_hat = beta_hat;
    spec.nu = nu;
    spec.C = C;
    spec.T = T;
    spec.window = window;
    // Greedy net: sample candidate boundary points, keep those not yet
    // covered by beta_hat * delta / 2 of an accepted center.
    const auto pts = sample_boundary(domain, seed, 4096);
    std::vector<Vec> accepted;
    std::vector<double> radii;
    auto radius_of = [&](const Vec& x) {
        return growing_radii ? norm(x) + 1.0 : delta_hat;
    };
    for (const auto& p : pts) {
        if (norm(p) > window * 1.5) continue;
        bool covered = false;
        for (std::size_t i = 0; i < accepted.size() && !covered; ++i)
            if (dist(p, accepted[i]) < 0.5 * beta_hat * radii[i]) covered = true;
        if (!covered) {
            accepted.push_back(p);
            radii.push_back(radius_of(p));
        }
    }
    spec.centers = std::move(accepted);
    spec.radii = std::move(radii);
    return spec;
}

// Excursions -------------------------------------------------------------------

namespace {

bool in_away_set(const CoveringSpec& spec, const Vec& x, double divisor) {
    for (std::size_t n = 0; n < spec.centers.size(); ++n)
        if (dist(x, spec.centers[n]) <= spec.beta_hat * spec.radii[n] / divisor) return false;
    return true;
}

long assign_index(const CoveringSpec& spec, const Vec& x) {
    if (in_away_set(spec, x, 2.0)) return 0;  // U_0 first: smallest index wins
    for (std::size_t n = 0; n < spec.centers.size(); ++n)
        if (dist(x, spec.centers[n]) < spec.beta_hat * spec.radii[n])
            return static_cast<long>(n + 1);
    // Points outside U_0 are within beta_hat delta_n / 2 of some center, hence
    // inside that U_n; reaching here means numerical boundary grazing.
    return 0;
}

bool in_V(const CoveringSpec& spec, const Vec& x, long n) {
    if (n == 0) return in_away_set(spec, x, 3.0);
    return dist(x, spec.centers[static_cast<std::size_t>(n - 1)]) <
           spec.radii[static_cast<std::size_t>(n - 1)];
}

}  // namespace

ExcursionReport excursion_diagnostic(const ReflectedSolution& sol, const CoveringSpec& spec,
                                     const Domain& domain) {
    spec.validate();
    domain.check_dimension(sol.X.point(0));
    ExcursionReport rep;
    const std::size_t end = sol.stopped_at ? sol.stopped_at->index : sol.X.points() - 1;
    rep.end_index = end;
    std::size_t tau = 0;
    long n = assign_index(spec, sol.X.point(0));
    std::size_t k = 0;
    rep.events.push_back({k, tau, n});
    while (tau < end) {
        // tau_{k+1}: first grid time after tau_k with X outside V_{n_k},
        // capped at the horizon
        std::size_t next = tau + 1;
        while (next < end && in_V(spec, sol.X.point(next), n)) ++next;
        ++k;
        if (next >= end) {
            // tau_{k+1} = horizon: n_{k+1} = infinity, k is not in Sigma
            rep.events.push_back({k, end, -1});
            break;
        }
        if (n >= 1) ++rep.sigma_count;  // n_k in N and tau_{k+1} < horizon
        tau = next;
        n = assign_index(spec, sol.X.point(tau));
        rep.events.push_back({k, tau, n});
    }
    return rep;
}

}  // namespace skl
