#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "skl/rng.hpp"
#include "skl/skorohod.hpp"

using namespace skl;

namespace {

SampledPath scalar_path(std::vector<double> values, double dt) {
    SampledPath p = SampledPath::uniform(dt, values.size() - 1, 1);
    p.values = std::move(values);
    return p;
}

SampledPath random_walk(std::uint64_t seed, std::size_t steps, double scale, double start) {
    SampledPath p = SampledPath::uniform(1.0 / static_cast<double>(steps), steps, 1);
    Rng rng(seed, 0);
    double x = start;
    p.values[0] = x;
    for (std::size_t k = 1; k <= steps; ++k) {
        x += scale * rng.normal();
        p.values[k] = x;
    }
    return p;
}

}  // namespace

TEST_CASE("solve_1d: worked fixtures") {
    // never-negative driver: no reflection
    const auto [xi0, phi0] = solve_1d(scalar_path({0.0, 0.25, 0.5, 0.75, 1.0}, 0.25));
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(xi0.values[k] == doctest::Approx(0.25 * static_cast<double>(k)));
        CHECK(phi0.values[k] == 0.0);
    }
    // w(t) = 1 - 2t on {0, .25, .5, .75, 1}
    const auto [xi1, phi1] = solve_1d(scalar_path({1.0, 0.5, 0.0, -0.5, -1.0}, 0.25));
    const std::vector<double> xi_expect = {1.0, 0.5, 0.0, 0.0, 0.0};
    const std::vector<double> phi_expect = {0.0, 0.0, 0.0, 0.5, 1.0};
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(xi1.values[k] == doctest::Approx(xi_expect[k]));
        CHECK(phi1.values[k] == doctest::Approx(phi_expect[k]));
    }
    // w(t) = -t: xi = 0, phi(t) = t
    const auto [xi2, phi2] = solve_1d(scalar_path({0.0, -0.5, -1.0}, 0.5));
    CHECK(xi2.values[1] == 0.0);
    CHECK(xi2.values[2] == 0.0);
    CHECK(phi2.values[1] == doctest::Approx(0.5));
    CHECK(phi2.values[2] == doctest::Approx(1.0));

    CHECK_THROWS_AS(solve_1d(scalar_path({-0.1, 0.0}, 1.0)), std::invalid_argument);
}

TEST_CASE("solve_1d postconditions: xi >= 0, phi non-decreasing, grows only at zero") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto w = random_walk(seed, 256, 0.1, 0.3);
        const auto [xi, phi] = solve_1d(w);
        CHECK(phi.values[0] == 0.0);
        for (std::size_t k = 0; k < xi.points(); ++k) CHECK(xi.values[k] >= 0.0);
        for (std::size_t k = 0; k + 1 < phi.points(); ++k) {
            const double dphi = phi.values[k + 1] - phi.values[k];
            CHECK(dphi >= 0.0);
            if (dphi > 1e-15) CHECK(xi.values[k + 1] <= 1e-12);
        }
    }
}

TEST_CASE("solve_discrete reproduces solve_1d on the half-line") {
    HalfLineDomain hl;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto w = random_walk(seed, 128, 0.2, seed % 3 == 0 ? 0.0 : 0.5);
        const auto [xi, phi] = solve_1d(w);
        const auto sol = solve_discrete(hl, w);
        for (std::size_t k = 0; k < w.points(); ++k) {
            CHECK(std::fabs(sol.X.values[k] - xi.values[k]) <= 1e-12);
            CHECK(std::fabs(sol.Phi.values[k] - phi.values[k]) <= 1e-12);
        }
    }
}

TEST_CASE("solve_discrete: constant and half-space fixtures") {
    BallDomain ball({0.0, 0.0}, 1.0);
    SampledPath w = SampledPath::uniform(0.5, 2, 2);
    w.set(0, Vec{0.25, 0.5});
    w.set(1, Vec{0.25, 0.5});
    w.set(2, Vec{0.25, 0.5});
    const auto sol = solve_discrete(ball, w);
    CHECK(sol.total_variation.back() == 0.0);
    CHECK(dist(sol.X.at(2), w.at(0)) == 0.0);

    HalfSpaceDomain hs({1.0, 0.0}, 0.0);
    SampledPath w2 = SampledPath::uniform(1.0, 1, 2);
    w2.set(0, Vec{0.0, 0.0});
    w2.set(1, Vec{-1.0, 1.0});
    const auto sol2 = solve_discrete(hs, w2);
    CHECK(sol2.X.at(1)[0] == doctest::Approx(0.0));
    CHECK(sol2.X.at(1)[1] == doctest::Approx(1.0));
    CHECK(sol2.Phi.at(1)[0] == doctest::Approx(1.0));
    CHECK(sol2.Phi.at(1)[1] == doctest::Approx(0.0));
    CHECK(sol2.total_variation.back() == doctest::Approx(1.0));

    SampledPath bad = SampledPath::uniform(1.0, 1, 2);
    bad.set(0, Vec{-1.0, 0.0});
    bad.set(1, Vec{0.0, 0.0});
    CHECK_THROWS_AS(solve_discrete(hs, bad), std::invalid_argument);
}

TEST_CASE("monotone loading: drivers larger by a non-decreasing load") {
    // Comparison property of the reflection map: if w_hi - w_lo is
    // non-decreasing (constant shifts included) with w_hi(0) >= w_lo(0),
    // then xi_hi >= xi_lo pointwise. (Arbitrary pointwise domination is NOT
    // enough: w_lo = (0,-1,0) vs w_hi = (0,-0.999,0) flips at the end.)
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto w = random_walk(seed, 128, 0.15, 0.2);
        SampledPath w_hi = w;
        Rng rng(seed ^ 0xabc, 2);
        double load = seed % 2 ? 0.05 : 0.0;  // constant shift or growing load
        for (std::size_t k = 0; k < w_hi.points(); ++k) {
            w_hi.values[k] += load;
            if (seed % 2 == 0) load += 0.01 * rng.uniform();
        }
        const auto lo = solve_1d(w).first;
        const auto hi = solve_1d(w_hi).first;
        for (std::size_t k = 0; k < lo.points(); ++k)
            CHECK(hi.values[k] >= lo.values[k] - 1e-12);
    }
}

TEST_CASE("discrete complementarity on reflected random walks") {
    HalfLineDomain hl;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto w = random_walk(seed, 512, 0.05, 0.1);
        const auto sol = solve_discrete(hl, w);
        double weighted = 0.0;
        for (std::size_t k = 0; k + 1 < sol.X.points(); ++k) {
            const double dphi = std::fabs(sol.Phi.values[k + 1] - sol.Phi.values[k]);
            weighted += dphi * hl.boundary_distance(sol.X.point(k + 1));
        }
        CHECK(weighted <= 1e-10 * (1.0 + sol.total_variation.back()));
    }
}

TEST_CASE("verify_solution: interior path vacuous, reflected walks pass") {
    HalfLineDomain hl;
    hl.meta_r0 = 1.0;
    // interior-only: driver stays far above 0
    const auto w_int = random_walk(3, 64, 0.01, 5.0);
    const auto sol_int = solve_discrete(hl, w_int);
    const auto rep_int = verify_solution(sol_int, hl);
    CHECK(rep_int.pass);
    CHECK(rep_int.reflection_steps == 0);

    // reflected: all reflection steps at X = 0 with direction +1
    const auto w_ref = random_walk(5, 512, 0.1, 0.0);
    const auto sol_ref = solve_discrete(hl, w_ref);
    const auto rep_ref = verify_solution(sol_ref, hl);
    CHECK(rep_ref.pass);
    CHECK(rep_ref.reflection_steps > 0);
    CHECK(rep_ref.boundary_violations == 0);
    CHECK(rep_ref.normal_violations == 0);
}

TEST_CASE("path functionals: enumerated fixtures") {
    const auto w = scalar_path({0.0, 1.0, 0.0}, 0.5);
    CHECK(oscillation(w, 0, 2) == doctest::Approx(1.0));
    CHECK(total_variation(w, 0, 2) == doctest::Approx(2.0));
    CHECK(holder_norm(w, 0, 2, 1.0) == doctest::Approx(2.0));  // |1|/0.5 over one step

    // constant path: all zero
    const auto c = scalar_path({0.7, 0.7, 0.7, 0.7}, 0.25);
    CHECK(oscillation(c, 0, 3) == 0.0);
    CHECK(holder_norm(c, 0, 3, 0.5) == 0.0);
    CHECK(total_variation(c, 0, 3) == 0.0);

    // monotone path: tv == oscillation == |w(t) - w(s)|
    const auto m = scalar_path({0.0, 0.2, 0.5, 0.9}, 0.25);
    CHECK(total_variation(m, 0, 3) == doctest::Approx(0.9));
    CHECK(oscillation(m, 0, 3) == doctest::Approx(0.9));

    // tv >= oscillation on random paths (pairwise-scan oracle re-derivation)
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto r = random_walk(seed, 100, 0.3, 0.0);
        double osc_brute = 0.0;
        for (std::size_t i = 0; i <= 100; ++i)
            for (std::size_t j = i + 1; j <= 100; ++j)
                osc_brute = std::max(osc_brute, std::fabs(r.values[j] - r.values[i]));
        CHECK(oscillation(r, 0, 100) == doctest::Approx(osc_brute));
        CHECK(total_variation(r, 0, 100) >= oscillation(r, 0, 100) - 1e-12);
    }
}

TEST_CASE("path functionals: window snapping and cap") {
    const auto w = random_walk(9, 300, 0.1, 1.0);
    const auto snap = oscillation_snapped(w, 0.1004, 0.4996);
    CHECK(snap.i0 == 30);
    CHECK(snap.i1 == 150);
    CHECK(snap.s == doctest::Approx(0.1));
    CHECK(snap.t == doctest::Approx(0.5));
    CHECK_THROWS_AS(oscillation(w, std::size_t{5}, std::size_t{4}), std::invalid_argument);
    const auto big = random_walk(11, 5000, 0.05, 0.0);
    CHECK_THROWS_AS(oscillation(big, std::size_t{0}, std::size_t{4200}), std::invalid_argument);
}

TEST_CASE("check_variation_bound: straight line, degenerate window") {
    HalfLineDomain hl;
    // drift-only straight driver: Phi = 0, |X|_s^t equals the oscillation
    SampledPath w = SampledPath::uniform(0.1, 10, 1);
    for (std::size_t k = 0; k <= 10; ++k) w.values[k] = 1.0 + 0.05 * static_cast<double>(k);
    auto sol = solve_discrete(hl, w);
    const auto sc = saisho_constants(0.5, 1.0, 1.0, 1.0);
    std::vector<std::pair<std::size_t, std::size_t>> windows = {{0, 10}, {3, 3}};
    const auto rep = check_variation_bound(sol, w, 0.5, sc.C1, sc.C2, windows, true);
    CHECK(rep.pass);
    CHECK(rep.windows_checked == 2);
    CHECK(rep.windows[0].slack > 1.0);
    CHECK(rep.windows[1].lhs == 0.0);
    CHECK(rep.windows[1].pass);
}

TEST_CASE("dyadic_windows: coverage and cap") {
    const auto ws = dyadic_windows(17, 8);
    for (const auto& [i0, i1] : ws) {
        CHECK(i1 > i0);
        CHECK(i1 - i0 + 1 <= 8);
        CHECK(i1 < 17);
    }
    // lengths 2, 4, 8 aligned: 8 + 4 + 2 windows
    CHECK(ws.size() == 14);
}

TEST_CASE("csv: write/read round trip at full precision") {
    SampledPath p = SampledPath::uniform(0.1, 3, 2);
    Rng rng(123, 9);
    for (auto& v : p.values) v = rng.normal() * 1e-7 + 0.1234567890123456789;
    std::ostringstream os;
    write_csv(os, p);
    const std::string text = os.str();
    CHECK(text.substr(0, text.find('\n')) == "t,x1,x2");
    std::istringstream is(text);
    const auto q = read_csv(is);
    REQUIRE(q.points() == p.points());
    REQUIRE(q.dimension() == p.dimension());
    for (std::size_t i = 0; i < p.values.size(); ++i) CHECK(q.values[i] == p.values[i]);
    for (std::size_t i = 0; i < p.t.size(); ++i) CHECK(q.t[i] == p.t[i]);
}
