#include "skl/skorohod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace skl {

std::pair<SampledPath, SampledPath> solve_1d(const SampledPath& w) {
    w.validate();
    if (w.dimension() != 1) throw std::invalid_argument("solve_1d: driver must be scalar");
    if (w.values[0] < 0.0) throw std::invalid_argument("solve_1d: w(0) must be >= 0");
    SampledPath xi = w;
    SampledPath phi = w;
    double run_min = 0.0;  // min(0, min_{s<=t} w(s))
    for (std::size_t k = 0; k < w.points(); ++k) {
        run_min = std::min(run_min, w.values[k]);
        xi.values[k] = w.values[k] - run_min;
        phi.values[k] = -run_min;
    }
    return {std::move(xi), std::move(phi)};
}

ReflectedSolution solve_discrete(const Domain& domain, const SampledPath& w) {
    w.validate();
    domain.check_dimension(w.point(0));
    const Vec x0 = w.point(0);
    if (classify(domain, x0) == Region::exterior)
        throw std::invalid_argument("solve_discrete: w(0) must lie in the closure of D");
    const std::size_t n = w.points();
    const int d = w.dimension();
    ReflectedSolution sol;
    sol.X = w;
    sol.Phi = w;
    std::fill(sol.Phi.values.begin(), sol.Phi.values.end(), 0.0);
    sol.total_variation.assign(n, 0.0);
    Vec x = domain.project(x0).point;  // snap boundary-tolerance starts into the closure
    sol.X.set(0, x);
    Vec y(static_cast<std::size_t>(d));
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const auto wk = w.at(k);
        const auto wk1 = w.at(k + 1);
        for (int c = 0; c < d; ++c)
            y[static_cast<std::size_t>(c)] = x[static_cast<std::size_t>(c)] +
                                             wk1[static_cast<std::size_t>(c)] -
                                             wk[static_cast<std::size_t>(c)];
        Projection pr = domain.project(y);
        double dphi2 = 0.0;
        const auto phik = sol.Phi.at(k);
        auto phik1 = sol.Phi.at(k + 1);
        for (int c = 0; c < d; ++c) {
            const double dphi = pr.point[static_cast<std::size_t>(c)] - y[static_cast<std::size_t>(c)];
            dphi2 += dphi * dphi;
            phik1[static_cast<std::size_t>(c)] = phik[static_cast<std::size_t>(c)] + dphi;
        }
        sol.total_variation[k + 1] = sol.total_variation[k] + std::sqrt(dphi2);
        x = std::move(pr.point);
        sol.X.set(k + 1, x);
    }
    sol.stopped_at = StopInfo{n - 1, "end_of_grid"};
    return sol;
}

SolutionCheckReport verify_solution(const ReflectedSolution& sol, const Domain& domain,
                                    const SolutionCheckOptions& opts) {
    sol.validate();
    SolutionCheckReport rep;
    rep.boundary_tol_scale = opts.boundary_tol_scale;
    rep.normal_tol = opts.normal_tol;
    rep.r0_used = domain.meta_r0.value_or(1.0);
    rep.phi0_zero = norm(sol.Phi.at(0)) == 0.0;
    rep.worst_normal_margin = std::numeric_limits<double>::infinity();
    const std::size_t n = sol.X.points();
    const int d = sol.X.dimension();
    Vec dphi(static_cast<std::size_t>(d));
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const auto p0 = sol.Phi.at(k);
        const auto p1 = sol.Phi.at(k + 1);
        for (int c = 0; c < d; ++c)
            dphi[static_cast<std::size_t>(c)] =
                p1[static_cast<std::size_t>(c)] - p0[static_cast<std::size_t>(c)];
        const double mag = norm(dphi);
        const Vec x1 = sol.X.point(k + 1);
        if (mag <= opts.activity_tol_scale * (1.0 + norm(x1))) continue;
        ++rep.reflection_steps;
        const double bdist = domain.boundary_distance(x1);
        rep.worst_boundary_distance = std::max(rep.worst_boundary_distance, bdist);
        if (bdist > opts.boundary_tol_scale * (1.0 + norm(x1))) ++rep.boundary_violations;
        const auto nr = verify_normal(domain, NormalVector(x1, dphi, rep.r0_used), rep.r0_used,
                                      opts.probe_samples, opts.seed ^ (k * 0x9e3779b97f4a7c15ull),
                                      opts.normal_tol);
        rep.worst_normal_margin = std::min(rep.worst_normal_margin, nr.worst_margin);
        if (!nr.pass) ++rep.normal_violations;
    }
    if (rep.reflection_steps == 0)
        rep.worst_normal_margin = 0.0;  // vacuous
    rep.pass = rep.phi0_zero && rep.boundary_violations == 0 && rep.normal_violations == 0;
    return rep;
}

namespace {

void check_window(const SampledPath& w, std::size_t i0, std::size_t i1) {
    if (i1 >= w.points() || i0 > i1)
        throw std::invalid_argument("window out of range");
    if (i1 - i0 + 1 > kMaxWindowPoints)
        throw std::invalid_argument("window exceeds " + std::to_string(kMaxWindowPoints) +
                                    " points");
}

struct Functionals {
    double osc = 0.0;
    double holder = 0.0;
    double tv = 0.0;
};

/// One fused pairwise scan per window; squared norms compared, roots taken
/// once at the end.
Functionals window_functionals(const SampledPath& w, std::size_t i0, std::size_t i1,
                               double theta, bool want_holder) {
    Functionals f;
    const int d = w.dimension();
    const double* base = w.values.data();
    double osc2 = 0.0, holder2 = 0.0;
    // gap table for the Holder denominators (t_j - t_i)^(-2 theta); only the
    // window itself needs a uniform grid for the table to be exact
    bool uniform = i1 > i0;
    if (i1 > i0) {
        const double h = w.t[i0 + 1] - w.t[i0];
        for (std::size_t i = i0; i + 1 <= i1 && uniform; ++i)
            if (std::fabs((w.t[i + 1] - w.t[i]) - h) > 1e-9 * h) uniform = false;
    }
    std::vector<double> inv_pow;
    if (want_holder && uniform && i1 > i0) {
        const double dt_val = w.t[i0 + 1] - w.t[i0];
        inv_pow.resize(i1 - i0 + 1, 0.0);
        for (std::size_t g = 1; g <= i1 - i0; ++g)
            inv_pow[g] = std::pow(static_cast<double>(g) * dt_val, -2.0 * theta);
    }
    for (std::size_t i = i0; i < i1; ++i) {
        const double* pi = base + i * static_cast<std::size_t>(d);
        // total variation: consecutive increments only
        {
            const double* pj = base + (i + 1) * static_cast<std::size_t>(d);
            double s = 0.0;
            for (int c = 0; c < d; ++c) {
                const double diff = pj[c] - pi[c];
                s += diff * diff;
            }
            f.tv += std::sqrt(s);
        }
        for (std::size_t j = i + 1; j <= i1; ++j) {
            const double* pj = base + j * static_cast<std::size_t>(d);
            double s = 0.0;
            for (int c = 0; c < d; ++c) {
                const double diff = pj[c] - pi[c];
                s += diff * diff;
            }
            if (s > osc2) osc2 = s;
            if (want_holder) {
                const double h = uniform ? s * inv_pow[j - i]
                                         : s * std::pow(w.t[j] - w.t[i], -2.0 * theta);
                if (h > holder2) holder2 = h;
            }
        }
    }
    f.osc = std::sqrt(osc2);
    f.holder = std::sqrt(holder2);
    return f;
}

std::size_t snap_index(const SampledPath& w, double time) {
    const auto it = std::lower_bound(w.t.begin(), w.t.end(), time);
    if (it == w.t.end()) return w.points() - 1;
    if (it == w.t.begin()) return 0;
    const std::size_t hi = static_cast<std::size_t>(it - w.t.begin());
    return (time - w.t[hi - 1] <= w.t[hi] - time) ? hi - 1 : hi;
}

WindowSnap snapped(const SampledPath& w, double s, double t) {
    if (!(s < t)) throw std::invalid_argument("window: s must be < t");
    WindowSnap ws;
    ws.i0 = snap_index(w, s);
    ws.i1 = snap_index(w, t);
    if (ws.i0 >= ws.i1) throw std::invalid_argument("window: empty after grid snap");
    ws.s = w.t[ws.i0];
    ws.t = w.t[ws.i1];
    return ws;
}

}  // namespace

double oscillation(const SampledPath& w, std::size_t i0, std::size_t i1) {
    check_window(w, i0, i1);
    return window_functionals(w, i0, i1, 1.0, false).osc;
}

double holder_norm(const SampledPath& w, std::size_t i0, std::size_t i1, double theta) {
    check_window(w, i0, i1);
    if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("holder_norm: theta in (0,1]");
    return window_functionals(w, i0, i1, theta, true).holder;
}

double total_variation(const SampledPath& w, std::size_t i0, std::size_t i1) {
    check_window(w, i0, i1);
    return window_functionals(w, i0, i1, 1.0, false).tv;
}

WindowSnap oscillation_snapped(const SampledPath& w, double s, double t) {
    WindowSnap ws = snapped(w, s, t);
    ws.value = oscillation(w, ws.i0, ws.i1);
    return ws;
}

WindowSnap holder_norm_snapped(const SampledPath& w, double s, double t, double theta) {
    WindowSnap ws = snapped(w, s, t);
    ws.value = holder_norm(w, ws.i0, ws.i1, theta);
    return ws;
}

WindowSnap total_variation_snapped(const SampledPath& w, double s, double t) {
    WindowSnap ws = snapped(w, s, t);
    ws.value = total_variation(w, ws.i0, ws.i1);
    return ws;
}

VariationBoundReport check_variation_bound(
    const ReflectedSolution& sol, const SampledPath& W, double theta, double C1, double C2,
    const std::vector<std::pair<std::size_t, std::size_t>>& windows, bool keep_windows) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("check_variation_bound: theta in (0,1]");
    if (W.points() != sol.X.points() || W.dimension() != sol.X.dimension())
        throw std::invalid_argument("check_variation_bound: W must share X's grid");
    VariationBoundReport rep;
    rep.theta = theta;
    rep.C1 = C1;
    rep.C2 = C2;
    rep.worst_slack = std::numeric_limits<double>::infinity();
    for (const auto& [i0, i1] : windows) {
        check_window(W, i0, i1);
        WindowCheck wc;
        wc.i0 = i0;
        wc.i1 = i1;
        wc.s = W.t[i0];
        wc.t = W.t[i1];
        if (i0 == i1) {
            wc.lhs = wc.rhs = 0.0;  // degenerate window: 0 <= 0 by convention
            wc.pass = true;
            wc.slack = std::numeric_limits<double>::infinity();
        } else {
            wc.lhs = total_variation(sol.X, i0, i1);
            const Functionals f = window_functionals(W, i0, i1, theta, true);
            const double span = wc.t - wc.s;
            wc.rhs = C1 * (1.0 + span * std::pow(f.holder, 1.0 / theta)) *
                     std::exp(C2 * f.osc) * f.osc;
            wc.pass = wc.lhs <= wc.rhs * (1.0 + 1e-12) + 1e-12;
            wc.slack = wc.lhs > 0.0 ? wc.rhs / wc.lhs
                                    : std::numeric_limits<double>::infinity();
        }
        ++rep.windows_checked;
        if (!wc.pass) ++rep.failures;
        rep.worst_slack = std::min(rep.worst_slack, wc.slack);
        if (keep_windows) rep.windows.push_back(wc);
    }
    rep.pass = rep.failures == 0;
    return rep;
}

std::vector<std::pair<std::size_t, std::size_t>> dyadic_windows(std::size_t n_points,
                                                                std::size_t max_points) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t len = 2; len <= max_points && len <= n_points; len *= 2) {
        for (std::size_t start = 0; start + len <= n_points; start += len)
            out.emplace_back(start, start + len - 1);
    }
    return out;
}

}  // namespace skl
