#include "skl/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "skl/quadrature.hpp"
#include "skl/rng.hpp"

namespace skl {

ModulusLambda ModulusLambda::identity() {
    ModulusLambda L;
    L.builtin = Builtin::identity;
    L.eps0 = 0.99;
    L.eval = [](double s) { return s; };
    L.label = "identity";
    return L;
}

ModulusLambda ModulusLambda::s_log_inv() {
    ModulusLambda L;
    L.builtin = Builtin::slog;
    L.eps0 = 0.3;  // monotone below 1/e
    L.eval = [](double s) { return s <= 0.0 ? 0.0 : s * std::log(1.0 / s); };
    L.label = "slog";
    return L;
}

ModulusLambda ModulusLambda::s_log_inv_loglog_inv() {
    ModulusLambda L;
    L.builtin = Builtin::sloglog;
    L.eps0 = 0.05;  // monotone below e^-e
    L.eval = [](double s) {
        if (s <= 0.0) return 0.0;
        const double l = std::log(1.0 / s);
        return s * l * std::log(l);
    };
    L.label = "sloglog";
    return L;
}

ModulusLambda ModulusLambda::custom(std::function<double(double)> f, double eps0,
                                    std::string label) {
    if (!(eps0 > 0.0 && eps0 < 1.0))
        throw std::invalid_argument("ModulusLambda: eps0 must be in (0,1)");
    ModulusLambda L;
    L.builtin = Builtin::custom;
    L.eps0 = eps0;
    L.eval = std::move(f);
    L.label = std::move(label);
    return L;
}

GrowthGamma GrowthGamma::linear() {
    GrowthGamma G;
    G.builtin = Builtin::linear;
    G.eval = [](double s) { return s + 1.0; };
    G.label = "linear";
    return G;
}

GrowthGamma GrowthGamma::loglinear() {
    GrowthGamma G;
    G.builtin = Builtin::loglinear;
    G.eval = [](double s) { return s * std::log(s + 1.0) + 1.0; };
    G.label = "loglinear";
    return G;
}

GrowthGamma GrowthGamma::custom(std::function<double(double)> f, std::string label) {
    GrowthGamma G;
    G.builtin = Builtin::custom;
    G.eval = std::move(f);
    G.label = std::move(label);
    return G;
}

Mat CoefficientField::sigma_at(double t, const Vec& x) const {
    Mat m = sigma ? sigma(t, x) : Mat::identity(dim, 0.0);
    if (m.rows != dim || m.cols != dim)
        throw std::runtime_error("CoefficientField: sigma shape mismatch");
    return m;
}

Vec CoefficientField::b_at(double t, const Vec& x) const {
    Vec v = b ? b(t, x) : zeros(dim);
    if (static_cast<int>(v.size()) != dim)
        throw std::runtime_error("CoefficientField: drift shape mismatch");
    return v;
}

CoefficientField CoefficientField::constant(int d, double sigma_scale, Vec drift,
                                            double g_const) {
    CoefficientField cf;
    cf.dim = d;
    cf.sigma = [d, sigma_scale](double, const Vec&) { return Mat::identity(d, sigma_scale); };
    cf.b = [drift = std::move(drift)](double, const Vec&) { return drift; };
    cf.g = [g_const](double) { return g_const; };
    return cf;
}

// Transforms ------------------------------------------------------------------

namespace {

double lambda_antiderivative(ModulusLambda::Builtin b, double s) {
    // Antiderivative of 1/Lambda for the builtins (valid on the monotone range).
    switch (b) {
        case ModulusLambda::Builtin::identity: return std::log(s);
        case ModulusLambda::Builtin::slog: return -std::log(std::log(1.0 / s));
        case ModulusLambda::Builtin::sloglog: return -std::log(std::log(std::log(1.0 / s)));
        case ModulusLambda::Builtin::custom: break;
    }
    throw std::logic_error("lambda_antiderivative: custom modulus");
}

}  // namespace

OsgoodIntegral osgood_partial_integral(const ModulusLambda& L, double a, double eps) {
    if (!(a > 0.0 && a < eps && eps <= L.eps0))
        throw std::invalid_argument("osgood_partial_integral: need 0 < a < eps <= eps0");
    OsgoodIntegral out;
    if (L.builtin != ModulusLambda::Builtin::custom) {
        out.value = lambda_antiderivative(L.builtin, eps) - lambda_antiderivative(L.builtin, a);
        out.analytic = true;
        return out;
    }
    const auto f = [&](double s) {
        const double v = L(s);
        if (!(v > 0.0))
            throw std::runtime_error(
                "osgood_partial_integral: Lambda vanishes inside the integration range (s=" +
                std::to_string(s) + ")");
        return 1.0 / v;
    };
    const QuadResult q = adaptive_simpson(f, a, eps, 1e-10);
    out.value = q.value;
    out.error_estimate = q.error_estimate;
    out.converged = q.converged;
    return out;
}

OsgoodDiagnosis osgood_diagnose(const ModulusLambda& L, double eps, std::vector<double> ladder) {
    OsgoodDiagnosis d;
    d.eps = eps;
    d.interpretation =
        "heuristic: divergence_consistent means the partial integrals kept growing across "
        "the ladder (last increment >= threshold); this is evidence, not a proof of (L)";
    if (ladder.empty()) {
        double expo = 2.0;
        for (int k = 0; k < 6; ++k) {
            ladder.push_back(std::pow(10.0, -expo));
            expo *= 2.0;
        }
    }
    std::sort(ladder.begin(), ladder.end(), std::greater<>());
    const bool custom = L.builtin == ModulusLambda::Builtin::custom;
    for (double a : ladder) {
        if (!(a > 0.0 && a < eps)) continue;
        if (custom && a < 1e-12) {
            d.ladder_truncated = true;
            continue;  // quadrature cannot be trusted further down
        }
        d.ladder.push_back(a);
        d.partial_integrals.push_back(osgood_partial_integral(L, a, eps).value);
    }
    if (d.partial_integrals.size() < 2)
        throw std::invalid_argument("osgood_diagnose: ladder needs at least two usable rungs");
    const std::size_t n = d.partial_integrals.size();
    d.last_increment = d.partial_integrals[n - 1] - d.partial_integrals[n - 2];
    d.divergence_consistent = d.last_increment >= d.threshold;
    return d;
}

double phi_r(const ModulusLambda& L, double r, double s) {
    if (!(r > 0.0)) throw std::invalid_argument("phi_r: r must be positive");
    if (!(s >= 0.0 && s < 1.0)) throw std::invalid_argument("phi_r: s must be in [0,1)");
    if (s == 0.0) return 0.0;
    if (L.builtin == ModulusLambda::Builtin::identity)
        return std::log((s + r) / r);
    const auto f = [&](double u) { return 1.0 / (L(u) + r); };
    return adaptive_simpson(f, 0.0, s, 1e-10).value;
}

double psi(const GrowthGamma& G, double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("psi: s must be >= 0");
    if (s == 0.0) return 0.0;
    if (G.builtin == GrowthGamma::Builtin::linear) return std::log(s + 1.0);
    const auto f = [&](double u) {
        const double v = G(u);
        if (!(v >= 1.0))
            throw std::runtime_error("psi: gamma must be >= 1 (violated at u=" +
                                     std::to_string(u) + ")");
        return 1.0 / v;
    };
    return adaptive_simpson(f, 0.0, s, 1e-10).value;
}

ModulusLambda max_with_identity(const ModulusLambda& L) {
    ModulusLambda out = L;
    out.builtin = ModulusLambda::Builtin::custom;
    out.label = L.label + " v s";
    out.eval = [inner = L.eval](double s) { return std::max(inner(s), s); };
    // s v s == s: keep the analytic fast path in that case
    if (L.builtin == ModulusLambda::Builtin::identity) return L;
    return out;
}

GrowthGamma max_with_identity(const GrowthGamma& G) {
    GrowthGamma out = G;
    out.builtin = GrowthGamma::Builtin::custom;
    out.label = G.label + " v s";
    out.eval = [inner = G.eval](double s) { return std::max(inner(s), s); };
    return out;
}

// Checkers --------------------------------------------------------------------

namespace {
constexpr std::size_t kMaxWitnesses = 16;

double hs_diff2(const Mat& A, const Mat& B) {
    double s = 0.0;
    for (std::size_t i = 0; i < A.a.size(); ++i) {
        const double d = A.a[i] - B.a[i];
        s += d * d;
    }
    return s;
}
}  // namespace

RegularityReport check_regularity(const CoefficientField& cf, const ModulusLambda& L,
                                  const Domain& domain, double R, double T, long pair_count,
                                  std::uint64_t seed) {
    if (!(R > 0.0 && T > 0.0)) throw std::invalid_argument("check_regularity: R, T > 0");
    RegularityReport rep;
    rep.R = R;
    rep.T = T;
    rep.interpretation =
        "falsifier: pass means no violation found at the sampled resolution";
    const int d = domain.dimension();
    const double rho_max = std::min(1.0, std::sqrt(L.eps0)) * (1.0 - 1e-9);
    for (long i = 0; i < pair_count; ++i) {
        Rng rng(seed, stream_id(StreamKind::sample, static_cast<std::uint64_t>(i)));
        const double t = rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.0, T);
        // base point: log-uniform radius so near-origin singularities are hit
        const double xr = rng.uniform() < 0.5 ? rng.log_uniform(1e-10, R) : R * rng.uniform();
        Vec x = xr * rng.sphere_direction(d);
        if (!domain.inside_closure(x)) x = domain.project(x).point;
        if (norm(x) > R) continue;
        // separation: log-uniform scale, occasionally tied to |x|
        double rho = rng.log_uniform(1e-12, rho_max);
        if (rng.uniform() < 0.33) rho = std::min(rho_max, norm(x) * rng.uniform(0.25, 1.0) + 1e-14);
        Vec y = x;
        axpy(rho, rng.sphere_direction(d), y);
        if (!domain.inside_closure(y)) y = domain.project(y).point;
        if (norm(y) > R) continue;
        const double sep2 = dist2(x, y);
        if (!(sep2 > 0.0) || sep2 >= L.eps0) continue;
        ++rep.samples;
        const Mat sx = cf.sigma_at(t, x);
        const Mat sy = cf.sigma_at(t, y);
        const Vec bx = cf.b_at(t, x);
        const Vec by = cf.b_at(t, y);
        double inner = 0.0;
        for (int c = 0; c < d; ++c)
            inner += (x[static_cast<std::size_t>(c)] - y[static_cast<std::size_t>(c)]) *
                     (bx[static_cast<std::size_t>(c)] - by[static_cast<std::size_t>(c)]);
        const double lhs = hs_diff2(sx, sy) + 2.0 * inner;
        const double rhs = cf.g_at(t) * L(sep2);
        if (rhs > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, lhs / rhs);
        if (lhs > rhs + 1e-12 * (1.0 + std::fabs(rhs))) {
            ++rep.violations;
            if (rep.witnesses.size() < kMaxWitnesses)
                rep.witnesses.push_back({t, x, y, lhs, rhs});
        }
    }
    rep.pass = rep.violations == 0;
    return rep;
}

GrowthReport check_growth(const CoefficientField& cf, const GrowthGamma& G,
                          const Domain& domain, double radius, double T, long sample_count,
                          std::uint64_t seed) {
    if (!(radius > 0.0 && T > 0.0)) throw std::invalid_argument("check_growth: radius, T > 0");
    GrowthReport rep;
    rep.radius = radius;
    rep.T = T;
    rep.interpretation =
        "falsifier: pass means no violation found at the sampled resolution";
    const int d = domain.dimension();
    for (long i = 0; i < sample_count; ++i) {
        Rng rng(seed, stream_id(StreamKind::sample, static_cast<std::uint64_t>(i)));
        const double t = rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.0, T);
        const double xr = rng.log_uniform(1e-8, radius);
        Vec x = xr * rng.sphere_direction(d);
        if (!domain.inside_closure(x)) x = domain.project(x).point;
        ++rep.samples;
        const Mat sx = cf.sigma_at(t, x);
        const Vec bx = cf.b_at(t, x);
        const double lhs = std::max(sx.hs_norm2(), norm2(bx));
        const double rhs = cf.g_at(t) * G(norm2(x));
        if (rhs > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, lhs / rhs);
        if (lhs > rhs + 1e-12 * (1.0 + std::fabs(rhs))) {
            ++rep.violations;
            if (rep.witnesses.size() < kMaxWitnesses) rep.witnesses.push_back({t, x, {}, lhs, rhs});
        }
    }
    rep.pass = rep.violations == 0;
    return rep;
}

CoefficientField localize(const CoefficientField& cf, int n) {
    if (n < 1) throw std::invalid_argument("localize: n must be >= 1");
    CoefficientField out = cf;
    const double cap = static_cast<double>(n) + 1.0;
    auto u = [cap](const Vec& x) { return std::clamp(cap - norm(x), 0.0, 1.0); };
    auto v = [cap](double t) { return std::clamp(cap - t, 0.0, 1.0); };
    out.preset_id = cf.preset_id.empty() ? "" : cf.preset_id + "|localized";
    out.sigma = [inner = cf.sigma, u, v, d = cf.dim](double t, const Vec& x) {
        Mat m = inner ? inner(t, x) : Mat::identity(d, 0.0);
        const double f = u(x) * v(t);
        for (auto& e : m.a) e *= f;
        return m;
    };
    out.b = [inner = cf.b, u, v, d = cf.dim](double t, const Vec& x) {
        Vec w = inner ? inner(t, x) : zeros(d);
        const double f = u(x) * v(t);
        for (auto& e : w) e *= f;
        return w;
    };
    return out;
}

}  // namespace skl
