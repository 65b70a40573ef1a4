#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "skl/linalg.hpp"

namespace skl {

class Rng;

enum class Region { interior, boundary, exterior };

std::string to_string(Region r);

struct Projection {
    Vec point;
    double distance = 0.0;
};

/// Extreme rays of the inward normal cone at a boundary point, plus a
/// representative unit vector. `unique` is false at corners / apex points
/// where the cone is not a singleton.
struct NormalCone {
    Vec base;
    std::vector<Vec> rays;
    Vec representative;
    bool unique = true;
};

struct NormalVector {
    Vec base_point;
    Vec direction;  // unit, normalized on construction
    double radius = 1.0;
    bool unique = true;

    NormalVector(Vec base, Vec dir, double r, bool uniq = true);
};

/// Closed region of R^d with membership, nearest-point projection, boundary
/// distance, and inward normal cones. Evaluators are pure and safe to call
/// concurrently after construction.
class Domain {
public:
    virtual ~Domain() = default;

    virtual int dimension() const = 0;
    virtual std::string name() const = 0;
    virtual bool convex() const = 0;

    /// x within the closure of D (strict set membership, no tolerance).
    virtual bool inside_closure(const Vec& x) const = 0;

    /// Distance from x to the boundary set (valid inside and outside).
    virtual double boundary_distance(const Vec& x) const = 0;

    /// Nearest point of the closure of D.
    virtual Projection project(const Vec& x) const = 0;

    /// Inward normal cone at a boundary point.
    virtual NormalCone normal_cone(const Vec& x, double tol) const = 0;

    /// A point strictly inside D, used as anchor by the boundary sampler.
    virtual Vec interior_anchor() const = 0;

    /// Distinguished boundary points (corners, apexes) that area samplers
    /// would miss with probability one.
    virtual std::vector<Vec> boundary_landmarks() const { return {}; }

    /// Claimed condition (A)/(B) constants, when provided by the caller.
    std::optional<double> meta_r0;
    std::optional<double> meta_delta;
    std::optional<double> meta_beta;

    /// Radius bound for samplers on unbounded domains.
    double sampling_window = 16.0;

    void check_dimension(const Vec& x) const;
};

using DomainPtr = std::shared_ptr<const Domain>;

// Built-in domains ----------------------------------------------------------

/// [lo, inf) in R^1.
class HalfLineDomain final : public Domain {
public:
    explicit HalfLineDomain(double lo = 0.0) : lo_(lo) {}
    int dimension() const override { return 1; }
    std::string name() const override { return "half_line"; }
    bool convex() const override { return true; }
    bool inside_closure(const Vec& x) const override;
    double boundary_distance(const Vec& x) const override;
    Projection project(const Vec& x) const override;
    NormalCone normal_cone(const Vec& x, double tol) const override;
    Vec interior_anchor() const override { return {lo_ + 1.0}; }
    std::vector<Vec> boundary_landmarks() const override { return {{lo_}}; }
    double lo() const { return lo_; }

private:
    double lo_;
};

/// {x : <a, x> >= c}.
class HalfSpaceDomain final : public Domain {
public:
    HalfSpaceDomain(Vec a, double c);
    int dimension() const override { return static_cast<int>(a_.size()); }
    std::string name() const override { return "half_space"; }
    bool convex() const override { return true; }
    bool inside_closure(const Vec& x) const override;
    double boundary_distance(const Vec& x) const override;
    Projection project(const Vec& x) const override;
    NormalCone normal_cone(const Vec& x, double tol) const override;
    Vec interior_anchor() const override;

private:
    Vec a_;  // unit normal after construction
    double c_;
};

/// Axis-aligned box [lo_1, hi_1] x ... x [lo_d, hi_d].
class BoxDomain final : public Domain {
public:
    BoxDomain(Vec lo, Vec hi);
    int dimension() const override { return static_cast<int>(lo_.size()); }
    std::string name() const override { return "box"; }
    bool convex() const override { return true; }
    bool inside_closure(const Vec& x) const override;
    double boundary_distance(const Vec& x) const override;
    Projection project(const Vec& x) const override;
    NormalCone normal_cone(const Vec& x, double tol) const override;
    Vec interior_anchor() const override;
    std::vector<Vec> boundary_landmarks() const override;

private:
    Vec lo_, hi_;
};

/// Closed Euclidean ball.
class BallDomain final : public Domain {
public:
    BallDomain(Vec center, double radius);
    int dimension() const override { return static_cast<int>(center_.size()); }
    std::string name() const override { return "ball"; }
    bool convex() const override { return true; }
    bool inside_closure(const Vec& x) const override;
    double boundary_distance(const Vec& x) const override;
    Projection project(const Vec& x) const override;
    NormalCone normal_cone(const Vec& x, double tol) const override;
    Vec interior_anchor() const override { return center_; }

private:
    Vec center_;
    double radius_;
};

/// Intersection of half-spaces {x : <a_i, x> <= b_i}. Projection is exact
/// active-set enumeration, so the constraint count is capped (<= 16).
class PolytopeDomain final : public Domain {
public:
    PolytopeDomain(std::vector<Vec> normals, Vec offsets, Vec anchor);
    int dimension() const override { return d_; }
    std::string name() const override { return "polytope"; }
    bool convex() const override { return true; }
    bool inside_closure(const Vec& x) const override;
    double boundary_distance(const Vec& x) const override;
    Projection project(const Vec& x) const override;
    NormalCone normal_cone(const Vec& x, double tol) const override;
    Vec interior_anchor() const override { return anchor_; }
    std::vector<Vec> boundary_landmarks() const override;

    static std::shared_ptr<PolytopeDomain> unit_square();

private:
    int d_;
    std::vector<Vec> a_;  // unit rows
    Vec b_;
    Vec anchor_;
};

/// Tube domain {x : x1 > -1, |x~| < H(x1)} with H(-1) = 0 and H > 0 beyond.
/// Nearest points solve the 1D profile problem by coarse scan, golden
/// section, and Newton polish; ties break toward the smallest parameter.
class TubeDomain final : public Domain {
public:
    TubeDomain(std::function<double(double)> H, std::function<double(double)> Hprime, int d,
               std::string label = "tube");
    int dimension() const override { return d_; }
    std::string name() const override { return label_; }
    bool convex() const override { return false; }  // not assumed, even if H is linear
    bool inside_closure(const Vec& x) const override;
    double boundary_distance(const Vec& x) const override;
    Projection project(const Vec& x) const override;
    NormalCone normal_cone(const Vec& x, double tol) const override;
    Vec interior_anchor() const override;
    std::vector<Vec> boundary_landmarks() const override;

    double H(double s) const { return H_(s); }
    double Hprime(double s) const { return Hp_(s); }

    /// Profile parameter of a nearest boundary point for (x1, |x~|); exposed
    /// for oracle tests.
    double nearest_boundary_param(double x1, double rho) const;

private:
    std::function<double(double)> H_;
    std::function<double(double)> Hp_;
    int d_;
    std::string label_;
};

// Operations ----------------------------------------------------------------

/// Scale-aware default classification tolerance.
inline double default_tol(const Vec& x) { return 1e-9 * (1.0 + norm(x)); }

Region classify(const Domain& domain, const Vec& x, double tol);
Region classify(const Domain& domain, const Vec& x);  // default_tol(x)

/// Nearest point of the closure plus its distance.
Projection project(const Domain& domain, const Vec& x);

/// Representative inward normal at a boundary point; flags non-uniqueness at
/// corners. Radius taken from meta_r0 (default 1).
NormalVector inward_normal(const Domain& domain, const Vec& x);

/// Deterministic boundary point sample: rays from the interior anchor are
/// pushed past the boundary (within the sampling window) and projected back.
std::vector<Vec> sample_boundary(const Domain& domain, std::uint64_t seed, int count,
                                 bool include_landmarks = true);

/// Draw a point of the closure near `center` at the given scale (projection
/// of a perturbed point; lands on the boundary when the draw falls outside).
Vec sample_closure_point(const Domain& domain, const Vec& center, double scale, Rng& rng);

struct NormalCheckReport {
    bool pass = false;
    double worst_margin = 0.0;
    Vec witness;
    double radius = 0.0;
    int samples = 0;
    double tol = 0.0;
};

/// Sampled check of the exterior-sphere inequality
///   <y - x, n> + |y - x|^2 / (2r) >= -tol   for y in closure(D).
/// A falsifier: pass means no violation found at the sampled resolution.
NormalCheckReport verify_normal(const Domain& domain, const NormalVector& nv, double r,
                                int sample_count, std::uint64_t seed, double tol = 1e-9);

struct ConditionAFailure {
    Vec point;
    Vec normal;
    double margin = 0.0;
    Vec witness;
};

struct ConditionAReport {
    bool pass = false;
    double r0 = 0.0;
    int boundary_points = 0;
    int normals_checked = 0;
    double worst_margin = 0.0;
    std::vector<ConditionAFailure> failures;
    std::string interpretation;  // falsifier disclaimer, stated verbatim in reports
};

ConditionAReport verify_condition_A(const Domain& domain, double r0, int boundary_samples,
                                    int probe_samples, std::uint64_t seed);

struct ConditionBPoint {
    Vec point;
    Vec l_x;
    double min_inner_product = 0.0;
    int neighborhood_normals = 0;
};

struct ConditionBReport {
    bool pass = false;
    double delta = 0.0;
    double beta = 0.0;
    double worst_inner_product = 0.0;
    std::vector<ConditionBPoint> points;
    int empty_neighborhoods = 0;
    std::string interpretation;
};

ConditionBReport verify_condition_B(const Domain& domain, double delta, double beta,
                                    int boundary_samples, std::uint64_t seed,
                                    double tol = 1e-9);

struct SaishoConstants {
    double C1 = 0.0;
    double C2 = 0.0;
};

/// Closed-form variation-bound constants
///   C1 = 24 b (1+b) [ (4 (b+2)/delta)^{1/theta} + 1 ] exp(b delta (1+1/delta) / r0)
///   C2 = (1 + 1/delta) b / r0.
SaishoConstants saisho_constants(double theta, double r0, double beta, double delta);

}  // namespace skl
