#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "skl/coefficients.hpp"
#include "skl/geometry.hpp"
#include "skl/path.hpp"

namespace skl {

/// Lyapunov data V in C^{1,2}. Analytic derivatives are optional; missing
/// ones fall back to central finite differences with a scale-aware step
/// fd_step * (1 + |x|) (Laplacian via d second differences).
struct LyapunovCertificate {
    std::function<double(double, const Vec&)> V;
    std::function<Vec(double, const Vec&)> gradV;    // optional
    std::function<double(double, const Vec&)> lapV;  // optional
    std::function<double(double, const Vec&)> dtV;   // optional
    double fd_step = 1e-5;
    std::string label;

    Vec grad(double t, const Vec& x) const;
    double lap(double t, const Vec& x) const;
    double ddt(double t, const Vec& x) const;
};

struct V1Rung {
    double R = 0.0;
    double infimum = 0.0;
    Vec argmin;
    long samples = 0;
};

struct V1Report {
    bool pass = false;
    std::vector<V1Rung> rungs;
    bool strictly_increasing = false;
    bool top_exceeds_threshold = false;
    double escape_threshold = 0.0;
    std::string interpretation;  // necessary-condition check only
};

/// Sampled infima of V over (closure(D) \ B(R)) x [0, T] per ladder rung;
/// passes when the infima strictly increase and the top rung clears the
/// escape threshold. A necessary-condition probe of the coercivity limit.
V1Report check_V1(const LyapunovCertificate& cert, const Domain& domain, double T,
                  const std::vector<double>& R_ladder, long samples_per_shell,
                  std::uint64_t seed, double escape_threshold = 50.0);

struct V2Report {
    bool pass = false;
    double max_inner_product = 0.0;
    Vec witness_point, witness_normal;
    long normals_checked = 0;
    double tol = 0.0;
};

/// max over sampled boundary points and cone directions of <gradV, n> <= tol.
V2Report check_V2(const LyapunovCertificate& cert, const Domain& domain, long boundary_samples,
                  std::uint64_t seed, double tol = 1e-9, double T = 1.0, int t_samples = 3);

struct V3Report {
    bool pass = false;
    long samples = 0;
    long violations = 0;
    double worst_residual = 0.0;  // max of lhs - g gamma(V)
    double worst_ratio = 0.0;
    double g_used = 0.0;
    Vec witness;
    double witness_t = 0.0;
    std::string interpretation;
};

/// Sampled falsifier of the generator inequality
///   ||sigma||^2 lapV + 2 <b, gradV> + 2 dtV <= g(t) gamma(V(t,x)).
V3Report check_V3(const LyapunovCertificate& cert, const CoefficientField& cf,
                  const GrowthGamma& G, const Domain& domain, double T, long sample_count,
                  std::uint64_t seed, double radius_window = 64.0);

/// Certified bundle reproducing the worked examples: domain, Lyapunov data,
/// growth class, dominating constant g, and matching coefficients.
struct PresetBundle {
    DomainPtr domain;
    LyapunovCertificate cert;
    GrowthGamma gamma;
    double g = 1.0;
    CoefficientField cf;
    std::string notes;
};

enum class ExamplePreset { convex, tube };

/// convex: half-space in R^2, V = |x - x0|^2, x0 = (1, 0), coefficients with
///         |b|, ||sigma|| <= |x| sqrt(log(|x|+1)) + 1, g = 10.
/// tube: H(s) = s + 1, m = 4, M = 0 in R^2, V = (x1+1)^2/2 + 2 x2^2, g = 8.
PresetBundle preset_example_2_1(ExamplePreset which);

// Covering condition ----------------------------------------------------------

/// Boundary covering data: centers on the boundary with radii >= delta_hat,
/// coverage factor beta_hat in (0,1), growth cap M(x_n, delta_n, T) <= C delta_n^nu.
struct CoveringSpec {
    std::vector<Vec> centers;
    std::vector<double> radii;
    double delta_hat = 1.0;
    double beta_hat = 0.5;
    double nu = 0.0;
    double C = 1.0;
    double T = 1.0;
    double window = 16.0;  // instantiation window (infinite families truncated)

    void validate() const;
};

struct CoveringCenterCheck {
    std::size_t n = 0;
    double M_estimate = 0.0;
    double bound = 0.0;  // C delta_n^nu
    bool pass = false;
    Vec witness;
    long samples = 0;
};

struct CoveringReport {
    bool pass = false;
    std::vector<CoveringCenterCheck> centers;
    long coverage_checked = 0;
    std::vector<Vec> uncovered;  // boundary points missed by all B(x_n, beta_hat delta_n)
    std::string interpretation;
};

/// (i) sampled M(x_n, delta_n, T) <= C delta_n^nu per center;
/// (ii) sampled boundary points within the window must lie in some
///      B(x_n, beta_hat delta_n).
CoveringReport check_covering(const CoveringSpec& spec, const CoefficientField& cf,
                              const Domain& domain, long samples_per_center,
                              long boundary_samples, std::uint64_t seed);

/// Greedy boundary net for the worked covering examples on a domain:
/// constant radii (delta_n = delta_hat) or growing radii (delta_n = |x_n|+1).
CoveringSpec make_halfspace_covering(const Domain& domain, double delta_hat, double beta_hat,
                                     double nu, double C, double T, double window,
                                     bool growing_radii, std::uint64_t seed);

// Excursion bookkeeping --------------------------------------------------------

struct ExcursionEvent {
    std::size_t k = 0;
    std::size_t tau_index = 0;  // grid index of tau_k
    long n_k = 0;               // 0 = away set, >= 1 = covering ball, -1 = infinity
};

struct ExcursionReport {
    std::vector<ExcursionEvent> events;
    long sigma_count = 0;  // #Sigma
    std::size_t end_index = 0;
};

/// Replays the (tau_k, n_k) bookkeeping on a grid path with
/// U_n = B(x_n, beta_hat delta_n), V_n = B(x_n, delta_n) and the away sets
/// U_0 / V_0 = complements of the beta_hat delta_n / 2 (resp. / 3) balls.
/// Sigma counts k with n_k in N and tau_{k+1} < end.
ExcursionReport excursion_diagnostic(const ReflectedSolution& sol, const CoveringSpec& spec,
                                     const Domain& domain);

}  // namespace skl
