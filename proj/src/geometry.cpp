#include "skl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "skl/rng.hpp"

namespace skl {

std::string to_string(Region r) {
    switch (r) {
        case Region::interior: return "interior";
        case Region::boundary: return "boundary";
        case Region::exterior: return "exterior";
    }
    return "?";
}

NormalVector::NormalVector(Vec base, Vec dir, double r, bool uniq)
    : base_point(std::move(base)), direction(normalized(dir)), radius(r), unique(uniq) {
    if (!(r > 0.0)) throw std::invalid_argument("NormalVector: radius must be positive");
}

void Domain::check_dimension(const Vec& x) const {
    if (static_cast<int>(x.size()) != dimension())
        throw std::invalid_argument("domain " + name() + ": expected dimension " +
                                    std::to_string(dimension()) + ", got " +
                                    std::to_string(x.size()));
}

namespace {

/// Rounding in projection arithmetic can land an epsilon outside the closure;
/// pull toward the interior anchor until strict membership holds. Movement is
/// bounded by ~1e-10 of the anchor distance.
void nudge_inside(const Domain& dom, Vec& p) {
    if (dom.inside_closure(p)) return;
    const Vec anchor = dom.interior_anchor();
    double f = 1e-16;
    for (int it = 0; it < 12 && !dom.inside_closure(p); ++it, f *= 4.0)
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += f * (anchor[i] - p[i]);
}

}  // namespace

// HalfLineDomain -------------------------------------------------------------

bool HalfLineDomain::inside_closure(const Vec& x) const {
    check_dimension(x);
    return x[0] >= lo_;
}

double HalfLineDomain::boundary_distance(const Vec& x) const {
    check_dimension(x);
    return std::fabs(x[0] - lo_);
}

Projection HalfLineDomain::project(const Vec& x) const {
    check_dimension(x);
    if (x[0] >= lo_) return {x, 0.0};
    return {{lo_}, lo_ - x[0]};
}

NormalCone HalfLineDomain::normal_cone(const Vec& x, double /*tol*/) const {
    check_dimension(x);
    return {x, {{1.0}}, {1.0}, true};
}

// HalfSpaceDomain ------------------------------------------------------------

HalfSpaceDomain::HalfSpaceDomain(Vec a, double c) : a_(std::move(a)), c_(c) {
    const double n = norm(a_);
    if (n == 0.0) throw std::invalid_argument("half_space: zero normal");
    for (auto& v : a_) v /= n;
    c_ /= n;
}

bool HalfSpaceDomain::inside_closure(const Vec& x) const {
    check_dimension(x);
    return dot(x, a_) >= c_;
}

double HalfSpaceDomain::boundary_distance(const Vec& x) const {
    check_dimension(x);
    return std::fabs(dot(x, a_) - c_);
}

Projection HalfSpaceDomain::project(const Vec& x) const {
    check_dimension(x);
    const double slack = dot(x, a_) - c_;
    if (slack >= 0.0) return {x, 0.0};
    Vec p = x;
    axpy(-slack, a_, p);
    nudge_inside(*this, p);
    return {std::move(p), -slack};
}

NormalCone HalfSpaceDomain::normal_cone(const Vec& x, double /*tol*/) const {
    check_dimension(x);
    return {x, {a_}, a_, true};
}

Vec HalfSpaceDomain::interior_anchor() const {
    Vec p = (c_ + 1.0) * a_;
    return p;
}

// BoxDomain ------------------------------------------------------------------

BoxDomain::BoxDomain(Vec lo, Vec hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.size() != hi_.size() || lo_.empty()) throw std::invalid_argument("box: bad shape");
    for (std::size_t i = 0; i < lo_.size(); ++i)
        if (!(lo_[i] < hi_[i])) throw std::invalid_argument("box: lo must be < hi");
}

bool BoxDomain::inside_closure(const Vec& x) const {
    check_dimension(x);
    for (std::size_t i = 0; i < lo_.size(); ++i)
        if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
    return true;
}

double BoxDomain::boundary_distance(const Vec& x) const {
    check_dimension(x);
    if (inside_closure(x)) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < lo_.size(); ++i)
            m = std::min({m, x[i] - lo_[i], hi_[i] - x[i]});
        return m;
    }
    return project(x).distance;
}

Projection BoxDomain::project(const Vec& x) const {
    check_dimension(x);
    Vec p = x;
    for (std::size_t i = 0; i < lo_.size(); ++i) p[i] = std::clamp(p[i], lo_[i], hi_[i]);
    return {p, dist(p, x)};
}

NormalCone BoxDomain::normal_cone(const Vec& x, double tol) const {
    check_dimension(x);
    const int d = dimension();
    std::vector<Vec> rays;
    for (int i = 0; i < d; ++i) {
        if (std::fabs(x[static_cast<std::size_t>(i)] - lo_[static_cast<std::size_t>(i)]) <= tol)
            rays.push_back(unit(d, i, +1.0));
        if (std::fabs(x[static_cast<std::size_t>(i)] - hi_[static_cast<std::size_t>(i)]) <= tol)
            rays.push_back(unit(d, i, -1.0));
    }
    if (rays.empty()) throw std::invalid_argument("box: point is not on the boundary");
    Vec rep = zeros(d);
    for (const auto& r : rays) axpy(1.0, r, rep);
    return {x, rays, normalized(rep), rays.size() == 1};
}

Vec BoxDomain::interior_anchor() const {
    Vec p(lo_.size());
    for (std::size_t i = 0; i < lo_.size(); ++i) p[i] = 0.5 * (lo_[i] + hi_[i]);
    return p;
}

std::vector<Vec> BoxDomain::boundary_landmarks() const {
    const int d = dimension();
    std::vector<Vec> out;
    if (d > 8) return out;  // 2^d corners
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        Vec p(lo_.size());
        for (int i = 0; i < d; ++i)
            p[static_cast<std::size_t>(i)] =
                (mask >> i) & 1u ? hi_[static_cast<std::size_t>(i)] : lo_[static_cast<std::size_t>(i)];
        out.push_back(std::move(p));
    }
    return out;
}

// BallDomain -----------------------------------------------------------------

BallDomain::BallDomain(Vec center, double radius) : center_(std::move(center)), radius_(radius) {
    if (!(radius_ > 0.0)) throw std::invalid_argument("ball: radius must be positive");
}

bool BallDomain::inside_closure(const Vec& x) const {
    check_dimension(x);
    return dist(x, center_) <= radius_;
}

double BallDomain::boundary_distance(const Vec& x) const {
    check_dimension(x);
    return std::fabs(dist(x, center_) - radius_);
}

Projection BallDomain::project(const Vec& x) const {
    check_dimension(x);
    const double r = dist(x, center_);
    if (r <= radius_) return {x, 0.0};
    Vec p = center_;
    axpy(radius_ / r, x - center_, p);
    nudge_inside(*this, p);
    return {std::move(p), r - radius_};
}

NormalCone BallDomain::normal_cone(const Vec& x, double /*tol*/) const {
    check_dimension(x);
    Vec n = normalized(center_ - x);
    return {x, {n}, n, true};
}

// PolytopeDomain -------------------------------------------------------------

PolytopeDomain::PolytopeDomain(std::vector<Vec> normals, Vec offsets, Vec anchor)
    : d_(static_cast<int>(anchor.size())), a_(std::move(normals)), b_(std::move(offsets)),
      anchor_(std::move(anchor)) {
    if (a_.size() != b_.size() || a_.empty())
        throw std::invalid_argument("polytope: constraint shape mismatch");
    if (a_.size() > 16)
        throw std::invalid_argument("polytope: more than 16 constraints not supported");
    for (std::size_t i = 0; i < a_.size(); ++i) {
        const double n = norm(a_[i]);
        if (n == 0.0) throw std::invalid_argument("polytope: zero constraint normal");
        for (auto& v : a_[i]) v /= n;
        b_[i] /= n;
        if (dot(anchor_, a_[i]) >= b_[i])
            throw std::invalid_argument("polytope: anchor not strictly interior");
    }
}

bool PolytopeDomain::inside_closure(const Vec& x) const {
    check_dimension(x);
    for (std::size_t i = 0; i < a_.size(); ++i)
        if (dot(x, a_[i]) > b_[i]) return false;
    return true;
}

double PolytopeDomain::boundary_distance(const Vec& x) const {
    check_dimension(x);
    if (!inside_closure(x)) return project(x).distance;
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a_.size(); ++i) m = std::min(m, b_[i] - dot(x, a_[i]));
    return m;
}

Projection PolytopeDomain::project(const Vec& x) const {
    check_dimension(x);
    if (inside_closure(x)) return {x, 0.0};
    const int m = static_cast<int>(a_.size());
    double best = std::numeric_limits<double>::infinity();
    Vec best_p;
    // Enumerate candidate active sets up to size d; for each, project onto
    // the affine hull of the active constraints and keep KKT-feasible points.
    std::vector<int> subset;
    auto consider = [&](const std::vector<int>& S) {
        const int k = static_cast<int>(S.size());
        Vec y;
        if (k == 0) return;  // infeasible x handled by k >= 1 sets
        Mat G(k, k);
        Vec rhs(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j)
                G(i, j) = dot(a_[static_cast<std::size_t>(S[static_cast<std::size_t>(i)])],
                              a_[static_cast<std::size_t>(S[static_cast<std::size_t>(j)])]);
            rhs[static_cast<std::size_t>(i)] =
                b_[static_cast<std::size_t>(S[static_cast<std::size_t>(i)])] -
                dot(x, a_[static_cast<std::size_t>(S[static_cast<std::size_t>(i)])]);
        }
        Vec mu;
        if (!gauss_solve(G, rhs, mu)) return;  // degenerate active set
        // KKT multipliers: y = x + sum mu_i a_i with mu_i <= 0 required.
        for (double v : mu)
            if (v > 1e-10) return;
        y = x;
        for (int i = 0; i < k; ++i)
            axpy(mu[static_cast<std::size_t>(i)], a_[static_cast<std::size_t>(S[static_cast<std::size_t>(i)])], y);
        for (std::size_t i = 0; i < a_.size(); ++i)
            if (dot(y, a_[i]) > b_[i] + 1e-9 * (1.0 + std::fabs(b_[i]))) return;
        const double dd = dist(y, x);
        if (dd < best) {
            best = dd;
            best_p = std::move(y);
        }
    };
    std::function<void(int)> rec = [&](int start) {
        if (!subset.empty()) consider(subset);
        if (static_cast<int>(subset.size()) >= d_) return;
        for (int i = start; i < m; ++i) {
            subset.push_back(i);
            rec(i + 1);
            subset.pop_back();
        }
    };
    rec(0);
    if (!best_p.empty()) {
        // fp rounding can leave tiny positive slack violations; sweep them out
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t i = 0; i < a_.size(); ++i) {
                const double v = dot(best_p, a_[i]) - b_[i];
                if (v > 0.0) axpy(-v, a_[i], best_p);
            }
        nudge_inside(*this, best_p);
        return {best_p, dist(best_p, x)};
    }
    throw std::runtime_error("polytope: projection active-set search failed");
}

NormalCone PolytopeDomain::normal_cone(const Vec& x, double tol) const {
    check_dimension(x);
    std::vector<Vec> rays;
    for (std::size_t i = 0; i < a_.size(); ++i)
        if (std::fabs(dot(x, a_[i]) - b_[i]) <= tol) rays.push_back(-1.0 * a_[i]);
    if (rays.empty()) throw std::invalid_argument("polytope: point is not on the boundary");
    Vec rep = zeros(d_);
    for (const auto& r : rays) axpy(1.0, r, rep);
    return {x, rays, normalized(rep), rays.size() == 1};
}

std::vector<Vec> PolytopeDomain::boundary_landmarks() const {
    // Vertices: feasible solutions of d-subsets of active constraints.
    std::vector<Vec> out;
    const int m = static_cast<int>(a_.size());
    std::vector<int> subset;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(subset.size()) == d_) {
            Mat A(d_, d_);
            Vec rhs(static_cast<std::size_t>(d_));
            for (int i = 0; i < d_; ++i) {
                for (int j = 0; j < d_; ++j)
                    A(i, j) = a_[static_cast<std::size_t>(subset[static_cast<std::size_t>(i)])]
                               [static_cast<std::size_t>(j)];
                rhs[static_cast<std::size_t>(i)] = b_[static_cast<std::size_t>(subset[static_cast<std::size_t>(i)])];
            }
            Vec v;
            if (gauss_solve(A, rhs, v) && inside_closure(v)) {
                bool dup = false;
                for (const auto& w : out)
                    if (dist(w, v) < 1e-12) dup = true;
                if (!dup) out.push_back(std::move(v));
            }
            return;
        }
        for (int i = start; i < m; ++i) {
            subset.push_back(i);
            rec(i + 1);
            subset.pop_back();
        }
    };
    rec(0);
    return out;
}

std::shared_ptr<PolytopeDomain> PolytopeDomain::unit_square() {
    std::vector<Vec> normals = {{-1.0, 0.0}, {1.0, 0.0}, {0.0, -1.0}, {0.0, 1.0}};
    Vec offsets = {0.0, 1.0, 0.0, 1.0};
    return std::make_shared<PolytopeDomain>(std::move(normals), std::move(offsets),
                                            Vec{0.5, 0.5});
}

// TubeDomain -----------------------------------------------------------------

TubeDomain::TubeDomain(std::function<double(double)> H, std::function<double(double)> Hprime,
                       int d, std::string label)
    : H_(std::move(H)), Hp_(std::move(Hprime)), d_(d), label_(std::move(label)) {
    if (d_ < 2) throw std::invalid_argument("tube: dimension must be >= 2");
    if (std::fabs(H_(-1.0)) > 1e-12) throw std::invalid_argument("tube: H(-1) must be 0");
}

namespace {
double tube_rho(const Vec& x) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += x[i] * x[i];
    return std::sqrt(s);
}
}  // namespace

bool TubeDomain::inside_closure(const Vec& x) const {
    check_dimension(x);
    if (x[0] < -1.0) return false;
    return tube_rho(x) <= H_(x[0]);
}

double TubeDomain::nearest_boundary_param(double x1, double rho) const {
    // Profile distance f(s) = (s - x1)^2 + (H(s) - rho)^2 on [-1, s_hi].
    const double d_apex = std::sqrt((x1 + 1.0) * (x1 + 1.0) + rho * rho);
    const double s_lo = -1.0;
    const double s_hi = x1 + d_apex + 1.0;
    auto f = [&](double s) {
        const double ds = s - x1;
        const double dh = H_(s) - rho;
        return ds * ds + dh * dh;
    };
    // Coarse scan (multimodal for curved H), then golden section in the best
    // bracket; ties break toward the smallest parameter by strict comparison.
    const int n = 512;
    double best_s = s_lo;
    double best_f = f(s_lo);
    for (int i = 1; i <= n; ++i) {
        const double s = s_lo + (s_hi - s_lo) * i / n;
        const double v = f(s);
        if (v < best_f) {
            best_f = v;
            best_s = s;
        }
    }
    const double h = (s_hi - s_lo) / n;
    double a = std::max(s_lo, best_s - h);
    double b = std::min(s_hi, best_s + h);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = f(c1), f2 = f(c2);
    for (int it = 0; it < 120 && (b - a) > 1e-14 * (1.0 + std::fabs(a)); ++it) {
        if (f1 <= f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - gr * (b - a);
            f1 = f(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + gr * (b - a);
            f2 = f(c2);
        }
    }
    double s = 0.5 * (a + b);
    // Newton polish on f'(s) = 2(s - x1) + 2 (H(s) - rho) H'(s).
    for (int it = 0; it < 8; ++it) {
        const double hp = Hp_(s);
        const double g = 2.0 * (s - x1) + 2.0 * (H_(s) - rho) * hp;
        const double fd = 1e-7 * (1.0 + std::fabs(s));
        const double gp = (2.0 * (s + fd - x1) + 2.0 * (H_(s + fd) - rho) * Hp_(s + fd) - g) / fd;
        if (!(std::fabs(gp) > 1e-30)) break;
        double step = g / gp;
        const double s_next = std::clamp(s - step, s_lo, s_hi);
        if (f(s_next) <= f(s)) s = s_next;
        if (std::fabs(step) < 1e-15 * (1.0 + std::fabs(s))) break;
    }
    if (f(s_lo) <= f(s)) return s_lo;  // apex wins ties (smallest parameter)
    return s;
}

double TubeDomain::boundary_distance(const Vec& x) const {
    check_dimension(x);
    const double rho = tube_rho(x);
    const double s = nearest_boundary_param(x[0], rho);
    const double ds = s - x[0];
    const double dh = H_(s) - rho;
    return std::sqrt(ds * ds + dh * dh);
}

Projection TubeDomain::project(const Vec& x) const {
    check_dimension(x);
    if (inside_closure(x)) return {x, 0.0};
    const double rho = tube_rho(x);
    const double s = nearest_boundary_param(x[0], rho);
    const int d = dimension();
    Vec p = zeros(d);
    p[0] = s;
    const double hs = std::max(0.0, H_(s));
    if (rho > 1e-300) {
        const double f = hs / rho;
        for (int i = 1; i < d; ++i) p[static_cast<std::size_t>(i)] = f * x[static_cast<std::size_t>(i)];
    }
    // rho == 0 outside happens only left of the apex; nearest point is the apex.
    nudge_inside(*this, p);
    return {p, dist(p, x)};
}

NormalCone TubeDomain::normal_cone(const Vec& x, double tol) const {
    check_dimension(x);
    const int d = dimension();
    const double rho = tube_rho(x);
    const bool at_apex = (x[0] <= -1.0 + tol) && (rho <= tol);
    if (!at_apex && rho > tol) {
        const double hp = Hp_(x[0]);
        const double den = std::sqrt(hp * hp + 1.0);
        Vec n = zeros(d);
        n[0] = hp / den;
        for (int i = 1; i < d; ++i)
            n[static_cast<std::size_t>(i)] = -x[static_cast<std::size_t>(i)] / rho / den;
        return {x, {n}, n, true};
    }
    // Apex (and the degenerate rho ~ 0 rim): sample the cone from projection
    // probes around the point and flag non-uniqueness.
    Rng rng(0x5eed, stream_id(StreamKind::probe, 0x70b3));
    std::vector<Vec> rays;
    const double h = 1e-4;
    for (int k = 0; k < 64; ++k) {
        Vec probe = x;
        Vec dir = rng.sphere_direction(d);
        axpy(h, dir, probe);
        if (inside_closure(probe)) continue;
        const Projection pr = project(probe);
        Vec n = pr.point - probe;
        const double nn = norm(n);
        if (nn < 1e-12) continue;
        rays.push_back((1.0 / nn) * n);
    }
    if (rays.empty()) throw std::runtime_error("tube: no cone direction found at apex");
    Vec rep = zeros(d);
    for (const auto& r : rays) axpy(1.0, r, rep);
    return {x, rays, normalized(rep), false};
}

Vec TubeDomain::interior_anchor() const {
    Vec p = zeros(dimension());
    p[0] = 0.0;
    return p;  // (0, 0...): |x~| = 0 < H(0)
}

std::vector<Vec> TubeDomain::boundary_landmarks() const {
    Vec apex = zeros(dimension());
    apex[0] = -1.0;
    return {apex};
}

// Operations ----------------------------------------------------------------

Region classify(const Domain& domain, const Vec& x, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("classify: tol must be positive");
    domain.check_dimension(x);
    if (!domain.inside_closure(x)) {
        const double d = domain.project(x).distance;
        return d <= tol ? Region::boundary : Region::exterior;
    }
    return domain.boundary_distance(x) <= tol ? Region::boundary : Region::interior;
}

Region classify(const Domain& domain, const Vec& x) { return classify(domain, x, default_tol(x)); }

Projection project(const Domain& domain, const Vec& x) { return domain.project(x); }

NormalVector inward_normal(const Domain& domain, const Vec& x) {
    const double tol = default_tol(x);
    if (classify(domain, x, std::max(tol, 1e-7 * (1.0 + norm(x)))) == Region::interior)
        throw std::invalid_argument("inward_normal: point is not on the boundary");
    const NormalCone cone = domain.normal_cone(x, std::max(tol, 1e-9));
    return NormalVector(x, cone.representative, domain.meta_r0.value_or(1.0), cone.unique);
}

std::vector<Vec> sample_boundary(const Domain& domain, std::uint64_t seed, int count,
                                 bool include_landmarks) {
    const int d = domain.dimension();
    const Vec anchor = domain.interior_anchor();
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(count) + 8);
    if (include_landmarks)
        for (auto& p : domain.boundary_landmarks()) out.push_back(p);
    for (int i = 0; static_cast<int>(out.size()) < count + (include_landmarks ? 0 : 0) &&
                    i < count; ++i) {
        Rng rng(seed, stream_id(StreamKind::boundary, static_cast<std::uint64_t>(i)));
        Vec p;
        for (int attempt = 0; attempt < 64; ++attempt) {
            const Vec u = rng.sphere_direction(d);
            Vec far = anchor;
            const double w = domain.sampling_window * (0.1 + 0.9 * rng.uniform());
            axpy(w, u, far);
            if (domain.inside_closure(far)) continue;  // ray stayed inside the window
            p = domain.project(far).point;
            break;
        }
        if (!p.empty()) out.push_back(std::move(p));
    }
    return out;
}

Vec sample_closure_point(const Domain& domain, const Vec& center, double scale, Rng& rng) {
    Vec y = center;
    const Vec u = rng.ball_point(domain.dimension());
    axpy(scale, u, y);
    if (domain.inside_closure(y)) return y;
    return domain.project(y).point;
}

NormalCheckReport verify_normal(const Domain& domain, const NormalVector& nv, double r,
                                int sample_count, std::uint64_t seed, double tol) {
    if (!(r > 0.0)) throw std::invalid_argument("verify_normal: r must be positive");
    domain.check_dimension(nv.base_point);
    NormalCheckReport rep;
    rep.radius = r;
    rep.tol = tol;
    rep.samples = sample_count;
    double worst = std::numeric_limits<double>::infinity();
    Vec witness;
    const Vec& x = nv.base_point;
    const Vec& n = nv.direction;
    auto margin = [&](const Vec& y) {
        double ip = 0.0, q = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double dy = y[i] - x[i];
            ip += dy * n[i];
            q += dy * dy;
        }
        return ip + q / (2.0 * r);
    };
    auto consider = [&](const Vec& y) {
        const double m = margin(y);
        if (m < worst) {
            worst = m;
            witness = y;
        }
    };
    consider(domain.interior_anchor());
    const double window = domain.sampling_window;
    for (int i = 0; i < sample_count; ++i) {
        Rng rng(seed, stream_id(StreamKind::probe, static_cast<std::uint64_t>(i)));
        // Multi-scale draw concentrated near the base point, projected into
        // the closure (interior points stay, exterior draws land on the
        // boundary).
        const double scale = rng.log_uniform(1e-6 * std::min(r, window), window);
        consider(sample_closure_point(domain, x, scale, rng));
    }
    rep.worst_margin = worst;
    rep.witness = witness;
    rep.pass = worst >= -tol;
    return rep;
}

ConditionAReport verify_condition_A(const Domain& domain, double r0, int boundary_samples,
                                    int probe_samples, std::uint64_t seed) {
    if (!(r0 > 0.0)) throw std::invalid_argument("verify_condition_A: r0 must be positive");
    ConditionAReport rep;
    rep.r0 = r0;
    rep.interpretation =
        "pass means no violation found at the sampled resolution; condition (A) is a "
        "universally quantified statement and cannot be proved by sampling";
    const auto points = sample_boundary(domain, seed, boundary_samples);
    rep.boundary_points = static_cast<int>(points.size());
    double worst = std::numeric_limits<double>::infinity();
    int checked = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Vec& p = points[i];
        NormalCone cone;
        try {
            cone = domain.normal_cone(p, std::max(default_tol(p), 1e-9));
        } catch (const std::exception&) {
            ConditionAFailure f;
            f.point = p;
            f.margin = -std::numeric_limits<double>::infinity();
            rep.failures.push_back(std::move(f));
            continue;
        }
        std::vector<Vec> candidates = cone.rays;
        if (!cone.unique) {
            candidates.push_back(cone.representative);
            Rng rng(seed, stream_id(StreamKind::sample, i));
            for (int k = 0; k < 4; ++k) {
                // random convex combinations of the extreme rays
                Vec c = zeros(domain.dimension());
                double tot = 0.0;
                for (const auto& ray : cone.rays) {
                    const double w = rng.uniform();
                    axpy(w, ray, c);
                    tot += w;
                }
                if (tot > 0.0 && norm(c) > 1e-12) candidates.push_back(normalized(c));
            }
        }
        for (const auto& n : candidates) {
            ++checked;
            const auto nr = verify_normal(domain, NormalVector(p, n, r0, cone.unique), r0,
                                          probe_samples, seed ^ (0x9e3779b97f4a7c15ull + i));
            worst = std::min(worst, nr.worst_margin);
            if (!nr.pass) {
                ConditionAFailure f;
                f.point = p;
                f.normal = n;
                f.margin = nr.worst_margin;
                f.witness = nr.witness;
                rep.failures.push_back(std::move(f));
            }
        }
    }
    rep.normals_checked = checked;
    rep.worst_margin = worst;
    rep.pass = rep.failures.empty() && rep.boundary_points > 0;
    return rep;
}

namespace {

/// Direction maximizing the minimum inner product with the given unit
/// vectors: normalized mean of de-duplicated directions polished by
/// subgradient steps toward the current worst vector.
Vec chebyshev_direction(const std::vector<Vec>& normals, int d) {
    std::vector<Vec> distinct;
    for (const auto& n : normals) {
        bool dup = false;
        for (const auto& m : distinct)
            if (dist(m, n) < 1e-9) dup = true;
        if (!dup) distinct.push_back(n);
    }
    Vec l = zeros(d);
    for (const auto& n : distinct) axpy(1.0, n, l);
    if (norm(l) < 1e-12) l = distinct.front();
    l = normalized(l);
    double step = 0.5;
    for (int it = 0; it < 400; ++it) {
        double worst = std::numeric_limits<double>::infinity();
        const Vec* arg = nullptr;
        for (const auto& n : distinct) {
            const double ip = dot(l, n);
            if (ip < worst) {
                worst = ip;
                arg = &n;
            }
        }
        Vec cand = l;
        axpy(step, *arg, cand);
        cand = normalized(cand);
        double cand_worst = std::numeric_limits<double>::infinity();
        for (const auto& n : distinct) cand_worst = std::min(cand_worst, dot(cand, n));
        if (cand_worst > worst)
            l = cand;
        else
            step *= 0.7;
    }
    return l;
}

}  // namespace

ConditionBReport verify_condition_B(const Domain& domain, double delta, double beta,
                                    int boundary_samples, std::uint64_t seed, double tol) {
    if (!(delta > 0.0)) throw std::invalid_argument("verify_condition_B: delta must be positive");
    if (!(beta >= 1.0)) throw std::invalid_argument("verify_condition_B: beta must be >= 1");
    ConditionBReport rep;
    rep.delta = delta;
    rep.beta = beta;
    rep.interpretation =
        "pass means no violation found at the sampled resolution; l_x is a proposed "
        "direction, not a certified one";
    const auto points = sample_boundary(domain, seed, boundary_samples);
    const int d = domain.dimension();
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Vec& x = points[i];
        std::vector<Vec> normals;
        for (const auto& y : points) {
            if (dist(y, x) > delta) continue;
            NormalCone cone;
            try {
                cone = domain.normal_cone(y, std::max(default_tol(y), 1e-9));
            } catch (const std::exception&) {
                continue;
            }
            for (const auto& r : cone.rays) normals.push_back(r);
        }
        if (normals.empty()) {
            ++rep.empty_neighborhoods;
            continue;
        }
        const Vec l = chebyshev_direction(normals, d);
        double minip = std::numeric_limits<double>::infinity();
        for (const auto& n : normals) minip = std::min(minip, dot(l, n));
        worst = std::min(worst, minip);
        ConditionBPoint pt;
        pt.point = x;
        pt.l_x = l;
        pt.min_inner_product = minip;
        pt.neighborhood_normals = static_cast<int>(normals.size());
        rep.points.push_back(std::move(pt));
    }
    rep.worst_inner_product = worst;
    rep.pass = !rep.points.empty() && rep.empty_neighborhoods == 0 &&
               worst >= 1.0 / beta - tol;
    return rep;
}

SaishoConstants saisho_constants(double theta, double r0, double beta, double delta) {
    if (!(theta > 0.0 && theta <= 1.0)) throw std::domain_error("saisho_constants: theta in (0,1]");
    if (!(r0 > 0.0)) throw std::domain_error("saisho_constants: r0 must be positive");
    if (!(delta > 0.0)) throw std::domain_error("saisho_constants: delta must be positive");
    if (!(beta >= 1.0)) throw std::domain_error("saisho_constants: beta must be >= 1");
    SaishoConstants out;
    const double bracket = std::pow(4.0 * (beta + 2.0) / delta, 1.0 / theta) + 1.0;
    out.C1 = 24.0 * beta * (1.0 + beta) * bracket *
             std::exp(beta * delta * (1.0 + 1.0 / delta) / r0);
    out.C2 = (1.0 + 1.0 / delta) * beta / r0;
    return out;
}

}  // namespace skl
