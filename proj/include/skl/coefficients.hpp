#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "skl/geometry.hpp"
#include "skl/linalg.hpp"

namespace skl {

/// Osgood modulus on [0, 1): continuous and non-decreasing on [0, eps0).
struct ModulusLambda {
    enum class Builtin { identity, slog, sloglog, custom };

    Builtin builtin = Builtin::custom;
    double eps0 = 0.5;
    std::function<double(double)> eval;
    std::string label;

    static ModulusLambda identity();               // s, eps0 = 0.99
    static ModulusLambda s_log_inv();              // s log(1/s), eps0 = 0.3
    static ModulusLambda s_log_inv_loglog_inv();   // s log(1/s) loglog(1/s), eps0 = 0.05
    static ModulusLambda custom(std::function<double(double)> f, double eps0,
                                std::string label = "custom");

    double operator()(double s) const { return eval(s); }
};

/// Growth function gamma: [0, inf) -> [1, inf), non-decreasing, -> inf.
struct GrowthGamma {
    enum class Builtin { linear, loglinear, custom };

    Builtin builtin = Builtin::custom;
    std::function<double(double)> eval;
    std::string label;

    static GrowthGamma linear();     // s + 1
    static GrowthGamma loglinear();  // s log(s+1) + 1
    static GrowthGamma custom(std::function<double(double)> f, std::string label = "custom");

    double operator()(double s) const { return eval(s); }
};

/// Coefficient field sigma(t,x) (d x d), b(t,x) (d-vector) with a
/// deterministic dominating function g(t). Evaluators are pure.
struct CoefficientField {
    int dim = 1;
    std::function<Mat(double, const Vec&)> sigma;
    std::function<Vec(double, const Vec&)> b;
    std::function<double(double)> g;  // deterministic g(t); constants allowed
    std::string preset_id;            // empty for ad-hoc fields
    std::string gamma_id;             // documented growth class, if any

    Mat sigma_at(double t, const Vec& x) const;
    Vec b_at(double t, const Vec& x) const;
    double g_at(double t) const { return g ? g(t) : 1.0; }

    static CoefficientField constant(int d, double sigma_scale, Vec drift, double g_const = 1.0);
};

// Integral transforms ---------------------------------------------------------

struct OsgoodIntegral {
    double value = 0.0;
    double error_estimate = 0.0;  // 0 for analytic builtin antiderivatives
    bool analytic = false;
    bool converged = true;
};

/// Partial Osgood integral int_a^eps ds / Lambda(s), 0 < a < eps <= eps0.
/// Builtins use the closed-form antiderivative; custom moduli use adaptive
/// quadrature with a reported error estimate. Throws when Lambda vanishes
/// (or goes negative) inside [a, eps].
OsgoodIntegral osgood_partial_integral(const ModulusLambda& L, double a, double eps);

struct OsgoodDiagnosis {
    bool divergence_consistent = false;
    double eps = 0.0;
    std::vector<double> ladder;           // decreasing a values actually used
    std::vector<double> partial_integrals;
    double last_increment = 0.0;
    double threshold = 0.5;
    bool ladder_truncated = false;  // custom moduli stop at a >= 1e-12
    std::string interpretation;     // explicitly a heuristic
};

/// Divergence heuristic across a ladder of lower limits decreasing to 0.
/// Default ladder: a_k = 10^(-2^k), k = 1..6 (custom moduli truncate at
/// 1e-12, where quadrature stays honest).
OsgoodDiagnosis osgood_diagnose(const ModulusLambda& L, double eps,
                                std::vector<double> ladder = {});

/// phi_r(s) = int_0^s du / (Lambda(u) + r), r > 0, s in [0, 1).
double phi_r(const ModulusLambda& L, double r, double s);

/// psi(s) = int_0^s du / gamma(u), s >= 0.
double psi(const GrowthGamma& G, double s);

/// Pointwise max with the identity: returns s -> Lambda(s) v s (resp.
/// gamma(s) v s), the normalization used by the uniqueness argument.
ModulusLambda max_with_identity(const ModulusLambda& L);
GrowthGamma max_with_identity(const GrowthGamma& G);

// Sampled hypothesis checkers -------------------------------------------------

struct CheckViolation {
    double t = 0.0;
    Vec x, y;
    double lhs = 0.0, rhs = 0.0;
};

struct RegularityReport {
    bool pass = false;
    long samples = 0;
    long violations = 0;
    double worst_ratio = 0.0;  // max lhs/rhs over samples with rhs > 0
    std::vector<CheckViolation> witnesses;  // capped
    double R = 0.0, T = 0.0;
    std::string interpretation;
};

/// Sampled falsifier of the square-modulus regularity inequality
///   ||sigma(t,x)-sigma(t,y)||^2 + 2 <x-y, b(t,x)-b(t,y)>
///     <= g(t) Lambda(|x-y|^2)
/// over x, y in closure(D) n B(R), |x-y|^2 < eps0, t in [0, T]. Pair
/// separations are stratified log-uniformly down to 1e-12.
RegularityReport check_regularity(const CoefficientField& cf, const ModulusLambda& L,
                                  const Domain& domain, double R, double T, long pair_count,
                                  std::uint64_t seed);

struct GrowthReport {
    bool pass = false;
    long samples = 0;
    long violations = 0;
    double worst_ratio = 0.0;
    std::vector<CheckViolation> witnesses;
    double radius = 0.0, T = 0.0;
    std::string interpretation;
};

/// Sampled falsifier of the growth inequality
///   ||sigma(t,x)||^2 v |b(t,x)|^2 <= g(t) gamma(|x|^2)
/// with |x| log-uniform up to `radius`.
GrowthReport check_growth(const CoefficientField& cf, const GrowthGamma& G,
                          const Domain& domain, double radius, double T, long sample_count,
                          std::uint64_t seed);

/// Cutoff localization: sigma_n = sigma u_n(x) v_n(t), b_n = b u_n(x) v_n(t)
/// with u_n(x) = 0 v (n+1-|x|) ^ 1 and v_n(t) = 0 v (n+1-t) ^ 1.
CoefficientField localize(const CoefficientField& cf, int n);

}  // namespace skl
