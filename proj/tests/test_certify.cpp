#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "skl/certify.hpp"
#include "skl/presets.hpp"
#include "skl/sde.hpp"

using namespace skl;

namespace {

LyapunovCertificate radius_squared() {
    LyapunovCertificate c;
    c.V = [](double, const Vec& x) { return norm2(x); };
    c.gradV = [](double, const Vec& x) { return 2.0 * x; };
    c.lapV = [](double, const Vec& x) { return 2.0 * static_cast<double>(x.size()); };
    c.dtV = [](double, const Vec&) { return 0.0; };
    return c;
}

}  // namespace

TEST_CASE("finite-difference fallbacks match analytic derivatives") {
    LyapunovCertificate fd;  // no analytic derivatives supplied
    fd.V = [](double t, const Vec& x) { return norm2(x) + 0.5 * t * t; };
    const Vec x = {0.7, -1.2};
    const auto g = fd.grad(1.0, x);
    CHECK(g[0] == doctest::Approx(1.4).epsilon(1e-7));
    CHECK(g[1] == doctest::Approx(-2.4).epsilon(1e-7));
    CHECK(fd.lap(1.0, x) == doctest::Approx(4.0).epsilon(1e-5));
    CHECK(fd.ddt(1.0, x) == doctest::Approx(1.0).epsilon(1e-6));
    // consistency scale: |fd - analytic| = O(fd_step^2) with curvature scale
    const auto exact = radius_squared();
    for (double s : {0.1, 1.0, 4.0}) {
        const Vec p = {s, -0.5 * s};
        const auto ga = exact.grad(0.0, p);
        LyapunovCertificate numeric;
        numeric.V = exact.V;
        const auto gn = numeric.grad(0.0, p);
        for (int i = 0; i < 2; ++i)
            CHECK(std::fabs(gn[static_cast<std::size_t>(i)] - ga[static_cast<std::size_t>(i)]) <=
                  1e-8 * (1.0 + norm(p)) * 10.0);
    }
}

TEST_CASE("check_V1: radial V exact ladder, flat V fails") {
    HalfSpaceDomain hs({1.0, 0.0}, 0.0);
    const auto v1 = check_V1(radius_squared(), hs, 1.0, {1, 2, 4, 8}, 512, 3, 50.0);
    REQUIRE(v1.rungs.size() == 4);
    // infimum attained on |x| = R exactly (radial samples included)
    CHECK(v1.rungs[0].infimum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(v1.rungs[1].infimum == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(v1.rungs[2].infimum == doctest::Approx(16.0).epsilon(1e-9));
    CHECK(v1.rungs[3].infimum == doctest::Approx(64.0).epsilon(1e-9));
    CHECK(v1.pass);

    LyapunovCertificate flat;
    flat.V = [](double, const Vec&) { return 5.0; };
    const auto vf = check_V1(flat, hs, 1.0, {1, 2, 4, 8}, 256, 5, 50.0);
    CHECK_FALSE(vf.pass);
    CHECK_FALSE(vf.strictly_increasing);
}

TEST_CASE("check_V2: convex quadratic passes, constant V trivially passes") {
    HalfSpaceDomain hs({1.0, 0.0}, 0.0);
    LyapunovCertificate vq;
    const Vec x0 = {1.0, 0.0};
    vq.V = [x0](double, const Vec& x) { return dist2(x, x0); };
    vq.gradV = [x0](double, const Vec& x) { return 2.0 * (x - x0); };
    const auto r = check_V2(vq, hs, 512, 7);
    CHECK(r.pass);
    CHECK(r.max_inner_product <= 1e-9);

    LyapunovCertificate constv;
    constv.V = [](double, const Vec&) { return 1.0; };
    constv.gradV = [](double, const Vec& x) { return zeros(static_cast<int>(x.size())); };
    const auto rc = check_V2(constv, hs, 128, 9);
    CHECK(rc.pass);
    CHECK(rc.max_inner_product == doctest::Approx(0.0));

    // outward-tilted V fails: V = -|x - x0|^2 has gradient along +n at the wall
    LyapunovCertificate bad;
    bad.V = [x0](double, const Vec& x) { return -dist2(x, x0); };
    bad.gradV = [x0](double, const Vec& x) { return -2.0 * (x - x0); };
    CHECK_FALSE(check_V2(bad, hs, 128, 11).pass);
}

TEST_CASE("check_V3: constant Laplacian bound and constructed equality case") {
    // scalar sigma = 1, b = 0, V = x^2, gamma = s+1 in d = 1:
    // lhs = 2d = 2 <= g (s+1) holds exactly with g = 2d
    HalfLineDomain hl;
    CoefficientField cf = CoefficientField::constant(1, 1.0, {0.0}, 2.0);
    const auto ok = check_V3(radius_squared(), cf, GrowthGamma::linear(), hl, 1.0, 20000, 13);
    CHECK(ok.pass);
    CHECK(ok.worst_ratio <= 1.0);
    CoefficientField tight = CoefficientField::constant(1, 1.0, {0.0}, 1.9);
    CHECK_FALSE(check_V3(radius_squared(), tight, GrowthGamma::linear(), hl, 1.0, 20000, 15).pass);

    // sigma = b = 0 and dV/dt = -g gamma(V)/2: the generator inequality is an
    // identity, 2 dV/dt + g gamma(V) = 0 pointwise
    HalfSpaceDomain hs({1.0, 0.0}, 0.0);
    LyapunovCertificate decay;
    decay.V = [](double t, const Vec& x) { return std::exp(-t) * (norm2(x) + 1.0) - 1.0; };
    decay.gradV = [](double t, const Vec& x) { return (2.0 * std::exp(-t)) * x; };
    decay.lapV = [](double t, const Vec& x) {
        return 2.0 * std::exp(-t) * static_cast<double>(x.size());
    };
    decay.dtV = [](double t, const Vec& x) { return -std::exp(-t) * (norm2(x) + 1.0); };
    CoefficientField g2 = CoefficientField::constant(2, 0.0, {0.0, 0.0}, 2.0);
    const auto lin = GrowthGamma::linear();
    const auto eq = check_V3(decay, g2, lin, hs, 1.0, 5000, 17);
    CHECK(eq.pass);
    for (double t : {0.0, 0.5, 1.0})
        for (double x1 : {0.0, 1.0, 3.0}) {
            const Vec p = {x1, 0.5};
            const double identity = 2.0 * decay.dtV(t, p) + 2.0 * lin(decay.V(t, p));
            CHECK(std::fabs(identity) <= 1e-12 * (1.0 + lin(decay.V(t, p))));
        }
}

TEST_CASE("preset_example_2_1: both bundles satisfy V1, V2, V3") {
    for (const auto which : {ExamplePreset::convex, ExamplePreset::tube}) {
        const auto bundle = preset_example_2_1(which);
        const auto v1 =
            check_V1(bundle.cert, *bundle.domain, 1.0, {1, 2, 4, 8, 16}, 512, 19, 50.0);
        CHECK(v1.pass);
        const auto v2 = check_V2(bundle.cert, *bundle.domain, 1000, 23);
        CHECK(v2.pass);
        const auto v3 =
            check_V3(bundle.cert, bundle.cf, bundle.gamma, *bundle.domain, 1.0, 20000, 29);
        CHECK(v3.pass);
    }
    // tube preset details: V and gradient at x = (0, x2)
    const auto tube = preset_example_2_1(ExamplePreset::tube);
    const Vec p = {0.0, 0.3};
    CHECK(tube.cert.V(0.0, p) == doctest::Approx(0.5 + 2.0 * 0.09));
    const auto g = tube.cert.gradV(0.0, p);
    CHECK(g[0] == doctest::Approx(1.0));  // H(0) = 1
    CHECK(g[1] == doctest::Approx(4.0 * 0.3));
}

TEST_CASE("check_covering: bounded-near-boundary and sublinear cases") {
    HalfSpaceDomain hs({1.0, 0.0}, 0.0);
    hs.sampling_window = 12.0;

    // constant radii, nu = 0: coefficients bounded by K near the boundary
    const auto cf_bounded = make_coefficient_preset("ex22_bounded");
    CoveringSpec net = make_halfspace_covering(hs, 1.0, 0.5, 0.0, 2.0, 1.0, 12.0, false, 31);
    CHECK(net.centers.size() > 4);
    const auto r1 = check_covering(net, cf_bounded, hs, 1500, 256, 33);
    CHECK(r1.pass);

    // growing radii delta_n = |x_n| + 1, nu = 1/2
    const auto cf_sub = make_coefficient_preset("ex22_sublinear");
    CoveringSpec grow = make_halfspace_covering(hs, 1.0, 0.5, 0.5, 5.0, 1.0, 12.0, true, 35);
    const auto r2 = check_covering(grow, cf_sub, hs, 1500, 256, 37);
    CHECK(r2.pass);

    // injected gap: drop every center near x2 in [3, 5]
    CoveringSpec gap = net;
    std::vector<Vec> kept;
    std::vector<double> kept_r;
    for (std::size_t i = 0; i < gap.centers.size(); ++i)
        if (!(gap.centers[i][1] > 3.0 && gap.centers[i][1] < 5.0)) {
            kept.push_back(gap.centers[i]);
            kept_r.push_back(gap.radii[i]);
        }
    gap.centers = kept;
    gap.radii = kept_r;
    const auto r3 = check_covering(gap, cf_bounded, hs, 200, 512, 39);
    CHECK_FALSE(r3.pass);
    CHECK(!r3.uncovered.empty());
    CHECK(r3.uncovered.front()[1] > 2.9);

    // violated growth cap: quadratic drift blows past C delta^nu
    CoefficientField quad = cf_bounded;
    quad.b = [](double, const Vec& x) { return norm2(x) * x; };
    const auto r4 = check_covering(net, quad, hs, 500, 64, 41);
    CHECK_FALSE(r4.pass);
}

TEST_CASE("excursion_diagnostic: interior path, single boundary ball") {
    HalfLineDomain hl;
    CoveringSpec spec;
    spec.centers = {{0.0}};
    spec.radii = {1.0};
    spec.delta_hat = 1.0;
    spec.beta_hat = 0.5;
    spec.T = 1.0;

    // interior-only path: n_k = 0 throughout, no completed excursions
    SampledPath w = SampledPath::uniform(0.1, 10, 1);
    for (std::size_t k = 0; k <= 10; ++k) w.values[k] = 3.0 + 0.01 * static_cast<double>(k);
    const auto sol = solve_discrete(hl, w);
    const auto rep = excursion_diagnostic(sol, spec, hl);
    CHECK(rep.sigma_count == 0);
    REQUIRE(!rep.events.empty());
    CHECK(rep.events.front().n_k == 0);

    // crafted path: start at 0 (inside U_1), leave V_1 (cross 1), come back
    // under beta_hat*delta/2 = 0.25, leave again -> two completed excursions
    std::vector<double> vals = {0.0, 0.5, 1.2, 0.6, 0.1, 0.8, 1.5, 1.1, 0.9};
    SampledPath w2 = SampledPath::uniform(0.125, vals.size() - 1, 1);
    w2.values = vals;
    const auto sol2 = solve_discrete(hl, w2);
    const auto rep2 = excursion_diagnostic(sol2, spec, hl);
    // events: n_0 = 1 (x=0), exit V_1 at x=1.2 -> n_1 = 0 (1.2 > 0.25),
    // exit V_0 at 0.1 (<= 1/6? no, V_0 = {x > beta delta/3 = 1/6}; 0.1 < 1/6)
    // -> n_2 = 1, exit V_1 at 1.5 -> n_3 = 0, then end
    CHECK(rep2.sigma_count == 2);

    // path ending inside a boundary ball: that k is excluded from Sigma
    std::vector<double> vals3 = {0.0, 0.3, 0.4, 0.2, 0.1};
    SampledPath w3 = SampledPath::uniform(0.25, vals3.size() - 1, 1);
    w3.values = vals3;
    const auto sol3 = solve_discrete(hl, w3);
    const auto rep3 = excursion_diagnostic(sol3, spec, hl);
    CHECK(rep3.sigma_count == 0);
    CHECK(rep3.events.back().n_k == -1);  // tau_{k+1} = horizon, n = infinity
}

TEST_CASE("excursion_diagnostic: reflected Brownian paths, dt-halving stability") {
    HalfLineDomain hl;
    const auto cf = make_coefficient_preset("unit_diffusion", 1);
    CoveringSpec spec;
    spec.centers = {{0.0}};
    spec.radii = {1.0};
    spec.delta_hat = 1.0;
    spec.beta_hat = 0.5;
    spec.T = 1.0;
    long changed_by_more_than_1 = 0;
    for (std::uint32_t i = 0; i < 20; ++i) {
        const auto driver = BrownianDriver::make(71, i, 1, 1.0, 5e-4);
        const auto a = simulate(hl, cf, {0.0}, driver);
        const auto b = simulate(hl, cf, {0.0}, driver.refined());
        const auto ra = excursion_diagnostic(a.sol, spec, hl);
        const auto rb = excursion_diagnostic(b.sol, spec, hl);
        CHECK(ra.sigma_count >= 0);
        // tau strictly increasing, n alternation where finite
        for (std::size_t k = 0; k + 1 < ra.events.size(); ++k) {
            CHECK(ra.events[k + 1].tau_index > ra.events[k].tau_index);
            if (ra.events[k].n_k >= 0 && ra.events[k + 1].n_k >= 0)
                CHECK(ra.events[k].n_k != ra.events[k + 1].n_k);
        }
        if (std::labs(ra.sigma_count - rb.sigma_count) > 1) ++changed_by_more_than_1;
    }
    CHECK(changed_by_more_than_1 <= 10);  // median |delta| <= 1
}
