#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "skl/geometry.hpp"
#include "skl/path.hpp"

namespace skl {

/// Exact solution of the 1D Skorohod problem on [0, inf) for a grid driver
/// with w(0) >= 0: xi(t) = w(t) - min(0, min_{s<=t} w(s)), phi = xi - w.
std::pair<SampledPath, SampledPath> solve_1d(const SampledPath& w);

/// Projected-increment discrete Skorohod map:
///   y = X_k + (w_{k+1} - w_k);  X_{k+1} = project(y);  dPhi_k = X_{k+1} - y.
/// On the half-line this reproduces solve_1d exactly.
ReflectedSolution solve_discrete(const Domain& domain, const SampledPath& w);

struct SolutionCheckReport {
    bool pass = false;
    bool phi0_zero = false;
    std::size_t reflection_steps = 0;
    // (eq. lt2 discrete) steps with |dPhi| > activity_tol must sit on the boundary
    std::size_t boundary_violations = 0;
    double worst_boundary_distance = 0.0;
    // (eq. lt0 discrete) dPhi direction must verify the normal inequality at r0
    std::size_t normal_violations = 0;
    double worst_normal_margin = 0.0;
    double r0_used = 1.0;
    double boundary_tol_scale = 0.0;
    double normal_tol = 0.0;
};

struct SolutionCheckOptions {
    double boundary_tol_scale = 1e-6;  // tolerance = scale * (1 + |x|)
    double normal_tol = 1e-8;
    double activity_tol_scale = 1e-12;  // |dPhi| > scale * (1 + |x|) counts as reflection
    int probe_samples = 128;            // per reflection step in verify_normal
    std::uint64_t seed = 0;
};

/// Discrete verification of the reflection-term identities: Phi(0) = 0,
/// reflection only on the boundary, reflection directions inside the normal
/// cone (via verify_normal at radius r0, default from domain metadata or 1).
SolutionCheckReport verify_solution(const ReflectedSolution& sol, const Domain& domain,
                                    const SolutionCheckOptions& opts = {});

// Path functionals of the partition calculus (pairwise scans are exact on
// grid paths). Index-based forms take half-open point ranges [i0, i1].
double oscillation(const SampledPath& w, std::size_t i0, std::size_t i1);
double holder_norm(const SampledPath& w, std::size_t i0, std::size_t i1, double theta);
double total_variation(const SampledPath& w, std::size_t i0, std::size_t i1);

struct WindowSnap {
    std::size_t i0 = 0, i1 = 0;
    double s = 0.0, t = 0.0;  // snapped window endpoints
    double value = 0.0;
};

/// Time-based forms snap [s, t] to the nearest grid points and report the
/// snapped window.
WindowSnap oscillation_snapped(const SampledPath& w, double s, double t);
WindowSnap holder_norm_snapped(const SampledPath& w, double s, double t, double theta);
WindowSnap total_variation_snapped(const SampledPath& w, double s, double t);

inline constexpr std::size_t kMaxWindowPoints = 4096;  // pairwise-scan cap

struct WindowCheck {
    std::size_t i0 = 0, i1 = 0;
    double s = 0.0, t = 0.0;
    double lhs = 0.0;  // |X|_s^t
    double rhs = 0.0;
    double slack = 0.0;  // rhs / lhs (inf when lhs == 0)
    bool pass = false;
};

struct VariationBoundReport {
    bool pass = false;
    double C1 = 0.0, C2 = 0.0, theta = 0.0;
    std::size_t windows_checked = 0;
    std::size_t failures = 0;
    double worst_slack = 0.0;
    std::vector<WindowCheck> windows;  // populated when keep_windows
};

/// Variation-bound check on each window [s, t]:
///   |X|_s^t <= C1 (1 + (t-s) ||W||_{H,[s,t],theta}^{1/theta}) e^{C2 D} D,
/// with D the oscillation of W over the window. W must share X's grid and be
/// the unreflected driver.
VariationBoundReport check_variation_bound(const ReflectedSolution& sol, const SampledPath& W,
                                           double theta, double C1, double C2,
                                           const std::vector<std::pair<std::size_t, std::size_t>>& windows,
                                           bool keep_windows = false);

/// Aligned non-overlapping dyadic windows of 2, 4, ..., max_points points.
std::vector<std::pair<std::size_t, std::size_t>> dyadic_windows(std::size_t n_points,
                                                                std::size_t max_points = kMaxWindowPoints);

}  // namespace skl
