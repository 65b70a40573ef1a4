#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "skl/presets.hpp"
#include "skl/sde.hpp"

using namespace skl;

TEST_CASE("brownian: determinism, refinement identity, moments") {
    const auto a = BrownianDriver::make(1, 0, 2, 1.0, 1.0 / 64);
    const auto b = BrownianDriver::make(1, 0, 2, 1.0, 1.0 / 64);
    for (std::size_t k = 0; k <= a.steps(); ++k)
        for (int c = 0; c < 2; ++c) CHECK(a.value(k)[c] == b.value(k)[c]);
    // different path index, different stream
    const auto c = BrownianDriver::make(1, 1, 2, 1.0, 1.0 / 64);
    CHECK(a.value(1)[0] != c.value(1)[0]);

    // refinement: coarse-grid values preserved bitwise, increments telescope
    const auto fine = a.refined();
    CHECK(fine.steps() == 2 * a.steps());
    CHECK(fine.dt() == doctest::Approx(a.dt() / 2));
    Vec li(2), ri(2), pi(2);
    for (std::size_t k = 0; k < a.steps(); ++k)
        for (int ci = 0; ci < 2; ++ci) {
            CHECK(fine.value(2 * k)[ci] == a.value(k)[ci]);  // bitwise
            fine.increment(2 * k, li);
            fine.increment(2 * k + 1, ri);
            a.increment(k, pi);
            CHECK(li[ci] + ri[ci] == doctest::Approx(pi[ci]).epsilon(1e-14));
        }
    CHECK(fine.value(2 * a.steps())[0] == a.value(a.steps())[0]);
    // cumulative values at coarse points match bitwise
    const auto wc = a.cumulative();
    const auto wf = fine.cumulative();
    for (std::size_t k = 0; k <= a.steps(); ++k) CHECK(dist(wc.at(k), wf.at(2 * k)) == 0.0);

    // increment sample variance within 1% of dt over 10^6 draws
    const double dt = 1e-3;
    const auto big = BrownianDriver::make(77, 0, 1, 1000.0, dt);
    REQUIRE(big.steps() == 1000000);
    double mean = 0.0, m2 = 0.0;
    long n = 0;
    Vec incr(1);
    for (std::size_t k = 0; k < big.steps(); ++k) {
        big.increment(k, incr);
        const double v = incr[0];
        ++n;
        const double d = v - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (v - mean);
    }
    const double var = m2 / static_cast<double>(n - 1);
    CHECK(var == doctest::Approx(dt).epsilon(0.01));
    CHECK(std::fabs(mean) < 3.0 * std::sqrt(dt / static_cast<double>(n)) + 1e-6);

    CHECK_THROWS_AS(BrownianDriver::make(1, 0, 1, 1.0, 0.3), std::invalid_argument);
}

TEST_CASE("simulate: frozen coefficients keep the path constant") {
    BallDomain ball({0.0, 0.0}, 1.0);
    CoefficientField cf = CoefficientField::constant(2, 0.0, {0.0, 0.0});
    const auto driver = BrownianDriver::make(3, 0, 2, 1.0, 0.01);
    const auto res = simulate(ball, cf, {0.25, 0.5}, driver);
    for (std::size_t k = 0; k < res.sol.X.points(); ++k) {
        CHECK(res.sol.X.at(k)[0] == 0.25);
        CHECK(res.sol.X.at(k)[1] == 0.5);
    }
    CHECK(res.sol.total_variation.back() == 0.0);
    CHECK(res.explosion.max_abs == doctest::Approx(std::sqrt(0.25 * 0.25 + 0.5 * 0.5)));
}

TEST_CASE("simulate: quadratic drift hits the ODE blow-up window") {
    HalfLineDomain hl;
    const auto cf = make_coefficient_preset("quadratic_drift_1d");
    const auto driver = BrownianDriver::make(0, 0, 1, 1.2, 1e-4);
    const auto res = simulate(hl, cf, {1.0}, driver, {1e4});
    REQUIRE(res.explosion.hit_times[0].has_value());
    // ODE x' = x^2 from 1 hits 1e4 at t = 1 - 1e-4; Euler lags slightly
    CHECK(*res.explosion.hit_times[0] > 0.9);
    CHECK(*res.explosion.hit_times[0] < 1.1);
    CHECK(res.explosion.stopped);
    CHECK(res.sol.stopped_at->reason == "radius_hit");
    // truncated paths still satisfy the solution invariants
    res.sol.validate();
}

TEST_CASE("simulate: reflected Brownian motion mean approaches sqrt(2/pi)") {
    HalfLineDomain hl;
    const auto cf = make_coefficient_preset("unit_diffusion", 1);
    const WorkerPool pool(2);
    auto mean_at = [&](double dt, long paths) {
        auto finals = pool.map<double>(static_cast<std::size_t>(paths), [&](std::size_t i) {
            const auto driver =
                BrownianDriver::make(42, static_cast<std::uint32_t>(i), 1, 1.0, dt);
            return simulate(hl, cf, {0.0}, driver).sol.X.values.back();
        });
        double mean = 0.0;
        for (double v : finals) mean += v;
        return mean / static_cast<double>(paths);
    };
    const double exact = std::sqrt(2.0 / 3.141592653589793);  // E|N(0,1)|
    // Discrete reflection misses boundary local time: the grid maximum runs
    // -zeta(1/2)/sqrt(2 pi) * sqrt(dt) ~ 0.5826 sqrt(dt) short of the
    // continuous one. Coarse grid, bias-corrected oracle:
    const double m1 = mean_at(1e-2, 100000);
    CHECK(m1 == doctest::Approx(exact - 0.5826 * std::sqrt(1e-2)).epsilon(0.01));
    // Finer grid closes most of the gap toward the continuous value.
    const double m2 = mean_at(1e-4, 10000);
    CHECK(m2 == doctest::Approx(exact).epsilon(0.02));
    CHECK(std::fabs(m2 - exact) < std::fabs(m1 - exact));
}

TEST_CASE("simulate: reflection never activates strictly inside") {
    BallDomain ball({0.0, 0.0}, 1.0);
    const auto cf = make_coefficient_preset("unit_diffusion", 2);
    const auto driver = BrownianDriver::make(5, 0, 2, 1.0, 1e-3);
    const auto res = simulate(ball, cf, {0.0, 0.0}, driver);
    const double dt = 1e-3;
    const double safe = std::sqrt(2.0) * std::sqrt(dt) * 10.0;  // ||sigma|| sqrt(dt) * 10
    for (std::size_t k = 0; k + 1 < res.sol.X.points(); ++k) {
        if (ball.boundary_distance(res.sol.X.point(k)) > safe) {
            const double dphi = dist(res.sol.Phi.at(k + 1), res.sol.Phi.at(k));
            CHECK(dphi == 0.0);
        }
    }
}

TEST_CASE("simulate penalized cross-check stays near projected Euler") {
    HalfSpaceDomain hs({1.0, 0.0}, 0.0);
    const auto cf = make_coefficient_preset("unit_diffusion", 2);
    const auto driver = BrownianDriver::make(11, 0, 2, 1.0, 1e-3);
    const auto proj = simulate(hs, cf, {0.5, 0.0}, driver);
    const auto pen = simulate_penalized(hs, cf, {0.5, 0.0}, driver);
    double sup = 0.0;
    for (std::size_t k = 0; k < proj.sol.X.points(); ++k)
        sup = std::max(sup, dist(proj.sol.X.at(k), pen.at(k)));
    CHECK(sup < 0.25);  // independent discretizations of the same reflection
    BallDomain ball({0.0, 0.0}, 1.0);
    CHECK_NOTHROW(simulate_penalized(ball, cf, {0.0, 0.0}, driver));
    TubeDomain tube([](double s) { return s + 1.0; }, [](double) { return 1.0; }, 2);
    CHECK_THROWS_AS(simulate_penalized(tube, cf, {0.0, 0.0}, driver), std::invalid_argument);
}

TEST_CASE("uniqueness_experiment: zero perturbation is exactly zero") {
    HalfLineDomain hl;
    const auto cf = make_coefficient_preset("log_lipschitz_1d");
    const WorkerPool pool(2);
    const auto rep = uniqueness_experiment(hl, cf, ModulusLambda::s_log_inv(), {1.0}, 0.25,
                                           {1e-2}, {0.0, 1e-2, 1e-6}, 16, 7, pool);
    REQUIRE(rep.cells.size() == 3);
    CHECK(rep.cells[0].delta0 == 0.0);
    CHECK(rep.cells[0].median_sup == 0.0);
    CHECK(rep.cells[0].p90_sup == 0.0);
    CHECK(rep.cells[1].median_sup > rep.cells[2].median_sup);
    CHECK_FALSE(rep.regularity_warning);
}

TEST_CASE("explosion_experiment: frozen field never hits, monotone fractions") {
    HalfSpaceDomain hs({1.0, 0.0}, 0.0);
    CoefficientField frozen = CoefficientField::constant(2, 0.0, {0.0, 0.0});
    const WorkerPool pool(2);
    const auto rep0 =
        explosion_experiment(hs, frozen, {1.0, 0.0}, 1.0, 0.01, {2.0, 4.0}, 64, 3, pool);
    CHECK(rep0.rungs[0].fraction == 0.0);
    CHECK(rep0.rungs[1].fraction == 0.0);

    const auto cf = make_coefficient_preset("unit_diffusion", 2);
    const auto rep = explosion_experiment(hs, cf, {1.0, 0.0}, 1.0, 0.01,
                                          {1.5, 2.5, 4.0, 8.0}, 256, 5, pool);
    for (std::size_t i = 0; i + 1 < rep.rungs.size(); ++i)
        CHECK(rep.rungs[i].fraction >= rep.rungs[i + 1].fraction);
    CHECK(rep.rungs[0].fraction > 0.0);
    CHECK(rep.rungs[0].wilson_hi >= rep.rungs[0].fraction);
    CHECK(rep.rungs[0].wilson_lo <= rep.rungs[0].fraction);
    // tau_R non-decreasing in R per path is implied by sorted rung hits
    for (std::size_t i = 0; i + 1 < rep.rungs.size(); ++i)
        CHECK(rep.rungs[i].hits >= rep.rungs[i + 1].hits);
}

TEST_CASE("worker-count independence of experiment reports") {
    HalfSpaceDomain hs({1.0, 0.0}, 0.0);
    const auto cf = make_coefficient_preset("unit_diffusion", 2);
    const WorkerPool one(1), four(4);
    const auto r1 = explosion_experiment(hs, cf, {1.0, 0.0}, 0.5, 0.01, {2.0}, 128, 9, one);
    const auto r4 = explosion_experiment(hs, cf, {1.0, 0.0}, 0.5, 0.01, {2.0}, 128, 9, four);
    CHECK(r1.rungs[0].hits == r4.rungs[0].hits);
    REQUIRE(r1.per_path_max_abs.size() == r4.per_path_max_abs.size());
    for (std::size_t i = 0; i < r1.per_path_max_abs.size(); ++i)
        CHECK(r1.per_path_max_abs[i] == r4.per_path_max_abs[i]);
    for (std::size_t i = 0; i < r1.rungs[0].hit_times.size(); ++i)
        CHECK(r1.rungs[0].hit_times[i] == r4.rungs[0].hit_times[i]);
}

TEST_CASE("simulate: error paths") {
    BallDomain ball({0.0, 0.0}, 1.0);
    const auto cf = make_coefficient_preset("unit_diffusion", 2);
    const auto driver = BrownianDriver::make(1, 0, 2, 1.0, 0.01);
    CHECK_THROWS_AS(simulate(ball, cf, {2.0, 0.0}, driver), std::invalid_argument);
    CoefficientField bad = cf;
    bad.b = [](double, const Vec&) { return Vec{std::nan(""), 0.0}; };
    CHECK_THROWS_WITH_AS(simulate(ball, bad, {0.0, 0.0}, driver),
                         doctest::Contains("non-finite"), std::runtime_error);
}
