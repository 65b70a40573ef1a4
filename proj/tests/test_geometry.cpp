#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "skl/geometry.hpp"
#include "skl/rng.hpp"

using namespace skl;

namespace {
const double kE2 = std::exp(2.0);
}

TEST_CASE("classify: half-line and ball basics") {
    HalfLineDomain hl;
    CHECK(classify(hl, {0.5}, 1e-9) == Region::interior);
    CHECK(classify(hl, {-0.1}, 1e-9) == Region::exterior);
    CHECK(classify(hl, {0.0}, 1e-9) == Region::boundary);

    BallDomain ball({0.0, 0.0}, 1.0);
    CHECK(classify(ball, {1.0, 0.0}, 1e-9) == Region::boundary);
    CHECK(classify(ball, {0.3, 0.2}, 1e-9) == Region::interior);
    CHECK(classify(ball, {1.5, 0.0}, 1e-9) == Region::exterior);

    CHECK_THROWS_AS(classify(hl, {0.5}, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(classify(hl, {0.5, 0.2}, 1e-9), std::invalid_argument);
}

TEST_CASE("project: radial, clamp, and tube against brute force") {
    BallDomain ball({0.0, 0.0}, 1.0);
    const auto p1 = project(ball, {2.0, 0.0});
    CHECK(p1.point[0] == doctest::Approx(1.0));
    CHECK(p1.point[1] == doctest::Approx(0.0));
    CHECK(p1.distance == doctest::Approx(1.0));

    HalfSpaceDomain hs({1.0, 0.0}, 0.0);
    const auto p2 = project(hs, {-3.0, 5.0});
    CHECK(p2.point[0] == doctest::Approx(0.0));
    CHECK(p2.point[1] == doctest::Approx(5.0));
    CHECK(p2.distance == doctest::Approx(3.0));

    // tube H(s) = s+1, d = 2, x = (0, 2): nearest boundary point on the upper
    // edge x2 = x1 + 1. Oracle: dense scan over 10^6 boundary parameters.
    TubeDomain tube([](double s) { return s + 1.0; }, [](double) { return 1.0; }, 2);
    const Vec x = {0.0, 2.0};
    double best = 1e300, best_s = 0.0;
    for (long i = 0; i <= 1000000; ++i) {
        const double s = -1.0 + 4.0 * static_cast<double>(i) / 1000000.0;
        const double d2 = (s - x[0]) * (s - x[0]) + (s + 1.0 - x[1]) * (s + 1.0 - x[1]);
        if (d2 < best) {
            best = d2;
            best_s = s;
        }
    }
    const auto p3 = project(tube, x);
    CHECK(p3.distance == doctest::Approx(std::sqrt(best)).epsilon(1e-9));
    CHECK(p3.point[0] == doctest::Approx(best_s).epsilon(1e-6));
    CHECK(p3.point[1] == doctest::Approx(best_s + 1.0).epsilon(1e-6));
    // closed form: foot of perpendicular at (1/2, 3/2), distance 1/sqrt(2)
    CHECK(p3.distance == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("project: idempotence and nearest-point property") {
    BallDomain ball({0.5, -0.25}, 2.0);
    TubeDomain tube([](double s) { return s + 1.0; }, [](double) { return 1.0; }, 2);
    const auto square = PolytopeDomain::unit_square();

    auto check_domain = [&](const Domain& dom, double span) {
        Rng rng(41, 7);
        for (int i = 0; i < 200; ++i) {
            Vec x(static_cast<std::size_t>(dom.dimension()));
            for (auto& v : x) v = span * (2.0 * rng.uniform() - 1.0);
            const auto pr = dom.project(x);
            CHECK(dom.inside_closure(pr.point));
            CHECK(std::fabs(dist(pr.point, x) - pr.distance) <= 1e-12 * (1.0 + pr.distance));
            const auto pr2 = dom.project(pr.point);
            CHECK(dist(pr2.point, pr.point) <= 1e-12 * (1.0 + norm(pr.point)));
            // nearest-point: no sampled closure point does better
            for (int j = 0; j < 50; ++j) {
                Vec y(static_cast<std::size_t>(dom.dimension()));
                for (auto& v : y) v = span * (2.0 * rng.uniform() - 1.0);
                if (!dom.inside_closure(y)) continue;
                CHECK(pr.distance <= dist(y, x) + 1e-9);
            }
        }
    };
    check_domain(ball, 4.0);
    check_domain(*square, 2.0);
    check_domain(tube, 4.0);
}

TEST_CASE("inward_normal: closed forms") {
    HalfLineDomain hl;
    const auto n1 = inward_normal(hl, {0.0});
    CHECK(n1.direction[0] == doctest::Approx(1.0));

    BallDomain ball({0.0, 0.0}, 1.0);
    const auto n2 = inward_normal(ball, {0.0, 1.0});
    CHECK(n2.direction[0] == doctest::Approx(0.0));
    CHECK(n2.direction[1] == doctest::Approx(-1.0));

    // tube H(s) = s+1 in d = 3 at x = (0, 1, 0): n = (1, -1, 0)/sqrt(2)
    TubeDomain tube3([](double s) { return s + 1.0; }, [](double) { return 1.0; }, 3);
    const auto n3 = inward_normal(tube3, {0.0, 1.0, 0.0});
    CHECK(n3.direction[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(n3.direction[1] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(n3.direction[2] == doctest::Approx(0.0));
    CHECK(norm(n3.direction) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(inward_normal(ball, {0.2, 0.2}), std::invalid_argument);

    // apex of the tube: non-unique cone, flagged
    TubeDomain tube2([](double s) { return s + 1.0; }, [](double) { return 1.0; }, 2);
    const auto napex = inward_normal(tube2, {-1.0, 0.0});
    CHECK_FALSE(napex.unique);
    CHECK(norm(napex.direction) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("verify_normal: half-space zero margin, ball pass and fail") {
    HalfSpaceDomain hs({1.0, 0.0}, 0.0);
    const auto r1 = verify_normal(hs, NormalVector({0.0, 0.0}, {1.0, 0.0}, 1.0), 1.0, 2048, 3);
    CHECK(r1.pass);
    CHECK(r1.worst_margin >= -1e-12);

    BallDomain ball({0.0, 0.0}, 1.0);
    // correct inward normal at (1,0) with r = 0.5: exterior ball fits
    const auto r2 =
        verify_normal(ball, NormalVector({1.0, 0.0}, {-1.0, 0.0}, 0.5), 0.5, 4096, 5);
    CHECK(r2.pass);
    // flipped normal fails; witness like y = (0.9, 0) has margin -0.1 + 0.01
    const auto r3 =
        verify_normal(ball, NormalVector({1.0, 0.0}, {1.0, 0.0}, 0.5), 0.5, 4096, 7);
    CHECK_FALSE(r3.pass);
    CHECK(r3.worst_margin < -0.05);
    CHECK(r3.witness[0] < 1.0);  // witness lies toward the interior
}

TEST_CASE("verify_condition_A: ball, square (corners), tube with huge r0") {
    BallDomain ball({0.0, 0.0}, 1.0);
    const auto ra = verify_condition_A(ball, 1.0, 64, 1024, 11);
    CHECK(ra.pass);
    CHECK(ra.worst_margin >= -1e-9);

    // convex polytope passes for any r, corners included via cone sampling
    const auto square = PolytopeDomain::unit_square();
    const auto rs = verify_condition_A(*square, 10.0, 64, 1024, 13);
    CHECK(rs.pass);
    CHECK(rs.normals_checked > 64);  // corners contribute multiple rays

    // the linear tube is convex, so even r0 = 1e6 passes (curvature bound inf)
    TubeDomain tube([](double s) { return s + 1.0; }, [](double) { return 1.0; }, 2);
    const auto rt = verify_condition_A(tube, 1e6, 48, 1024, 17);
    CHECK(rt.pass);
}

TEST_CASE("verify_condition_B: half-space, unit square corners, ball cap") {
    HalfSpaceDomain hs({1.0, 0.0}, 0.0);
    const auto r1 = verify_condition_B(hs, 0.5, 1.0, 128, 19);
    CHECK(r1.pass);
    CHECK(r1.worst_inner_product == doctest::Approx(1.0));

    // square with delta = 0.1, beta = sqrt(2): corner neighborhoods hold two
    // orthogonal normals; the bisector reaches exactly 1/sqrt(2)
    const auto square = PolytopeDomain::unit_square();
    const auto r2 = verify_condition_B(*square, 0.1, std::sqrt(2.0), 256, 23, 1e-9);
    CHECK(r2.pass);
    CHECK(r2.worst_inner_product >= 1.0 / std::sqrt(2.0) - 1e-9);

    // ball cap of chordal radius 0.1: normals tilt by <= ~0.1 rad < acos(1/1.01)
    BallDomain ball({0.0, 0.0}, 1.0);
    const auto r3 = verify_condition_B(ball, 0.1, 1.01, 512, 29);
    CHECK(r3.pass);

    // falsification: ball with beta = 1 requires a common direction, which a
    // delta = 1 cap cannot provide
    const auto r4 = verify_condition_B(ball, 1.0, 1.0, 512, 31);
    CHECK_FALSE(r4.pass);
}

TEST_CASE("saisho_constants: closed-form values and monotonicity") {
    // theta = 1: C1 = 48 * 13 * e^2, C2 = 2
    const auto c1 = saisho_constants(1.0, 1.0, 1.0, 1.0);
    CHECK(c1.C1 == doctest::Approx(624.0 * kE2).epsilon(1e-12));
    CHECK(c1.C2 == doctest::Approx(2.0));
    // theta = 1/2: C1 = 48 * (12^2 + 1) * e^2 = 6960 e^2
    const auto c2 = saisho_constants(0.5, 1.0, 1.0, 1.0);
    CHECK(c2.C1 == doctest::Approx(6960.0 * kE2).epsilon(1e-12));
    CHECK(c2.C2 == doctest::Approx(2.0));
    // C2 does not depend on theta
    for (double theta : {0.1, 0.25, 0.5, 0.75, 1.0})
        CHECK(saisho_constants(theta, 1.0, 1.0, 1.0).C2 == doctest::Approx(2.0));
    // monotone non-decreasing in beta
    double prev = 0.0;
    for (double beta = 1.0; beta <= 4.0; beta += 0.25) {
        const double v = saisho_constants(0.5, 1.0, beta, 1.0).C1;
        CHECK(v >= prev);
        prev = v;
    }
    CHECK_THROWS_AS(saisho_constants(0.5, -1.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(saisho_constants(1.5, 1.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("convex domains: Remark-type inequality for sampled normals") {
    // For convex D the linear term alone is nonnegative, so the full
    // expression stays >= 0 for every r.
    const auto square = PolytopeDomain::unit_square();
    BallDomain ball({0.0, 0.0}, 1.5);
    for (const Domain* dom : {static_cast<const Domain*>(square.get()),
                              static_cast<const Domain*>(&ball)}) {
        const auto pts = sample_boundary(*dom, 37, 32);
        Rng rng(43, 1);
        for (const auto& p : pts) {
            const auto cone = dom->normal_cone(p, 1e-9);
            for (const auto& n : cone.rays) {
                for (int j = 0; j < 64; ++j) {
                    Vec y = sample_closure_point(*dom, p, 0.5 + 2.0 * rng.uniform(), rng);
                    const double margin =
                        dot(y - p, n) + dist2(y, p) / (2.0 * 0.7);
                    CHECK(margin >= -1e-9);
                }
            }
        }
    }
}

TEST_CASE("boundary sampler produces boundary points") {
    TubeDomain tube([](double s) { return s + 1.0; }, [](double) { return 1.0; }, 3);
    BallDomain ball({1.0, 2.0}, 0.5);
    for (const Domain* dom :
         {static_cast<const Domain*>(&tube), static_cast<const Domain*>(&ball)}) {
        const auto pts = sample_boundary(*dom, 101, 64);
        CHECK(pts.size() >= 32);
        for (const auto& p : pts) CHECK(classify(*dom, p) == Region::boundary);
    }
}
