#include <catch2/catch_amalgamated.hpp>

#include "schrod/solver.hpp"
#include "testutil.hpp"

using namespace schrod;
using testutil::cnear;

namespace {

const PhysicalConstants unit_consts{1.0, 1.0};
const double pi = 3.14159265358979323846264338328;

WaveField rest_gaussian(const GridSpec& spec, double sigma = 1.0) {
    return sample(analytic_free_gaussian(sigma, Vec(static_cast<std::size_t>(spec.n), 0.0),
                                         Vec(static_cast<std::size_t>(spec.n), 0.0), unit_consts),
                  spec, 0.0, Observer::rest(spec.n), unit_consts);
}

} // namespace

TEST_CASE("free evolution of a single mode is an exact phase rotation") {
    GridSpec spec = GridSpec::uniform(1, 256, 32.0);
    const double k = 2.0 * pi * 5.0 / 32.0;
    auto f0 = sample(FieldClosure([=](const Vec& y, double) {
                         return std::polar(1.0, k * y[0]);
                     }),
                     spec, 0.0, Observer::rest(1), unit_consts);

    EvolutionConfig cfg;
    cfg.dt = 1e-2;
    cfg.steps = 200;
    auto fT = evolve_final(f0, cfg);
    const double T = cfg.dt * cfg.steps;
    const Complex rot = std::exp(Complex(0.0, -k * k * T / 2.0));
    double dev = 0.0;
    for (std::size_t j = 0; j < fT.samples.size(); ++j)
        dev = std::max(dev, std::abs(fT.samples[j] - rot * f0.samples[j]));
    CHECK(dev < 1e-10);
}

TEST_CASE("analytic free gaussian: shape, velocity factor and residual oracle") {
    // at t = 0, v = 0 it is the plain gaussian
    auto g0 = analytic_free_gaussian(1.0, {0.5}, {0.0}, unit_consts);
    CHECK(cnear(g0({1.5}, 0.0), Complex(std::exp(-0.5)), 1e-14));

    // a moving packet carries the plane-wave factor at t = 0
    Vec v{1.3};
    auto gv = analytic_free_gaussian(1.0, {0.0}, v, unit_consts);
    const Vec y{0.8};
    CHECK(cnear(gv(y, 0.0),
                std::exp(phase_F(v, unit_consts, y, 0.0)) * std::exp(-0.5 * 0.8 * 0.8), 1e-13));

    // residual oracle: the closed form satisfies the discrete equation
    GridSpec spec = GridSpec::uniform(1, 1024, 80.0);
    const double dt = 1e-3;
    auto slice = [&](double t) {
        return sample(analytic_free_gaussian(1.0, {0.0}, {1.0}, unit_consts), spec, t,
                      Observer::rest(1), unit_consts);
    };
    CHECK(schrodinger_residual(slice(1.0 - dt), slice(1.0), slice(1.0 + dt), Expr::c(0.0))
          < 1e-5);
}

TEST_CASE("the n-dimensional gaussian closed form passes the residual oracle") {
    GridSpec spec = GridSpec::uniform(2, 256, 40.0);
    const double dt = 1e-3;
    auto closure = analytic_free_gaussian(1.0, {0.5, -0.25}, {0.5, 0.75}, unit_consts);
    auto slice = [&](double t) {
        return sample(closure, spec, t, Observer::rest(2), unit_consts);
    };
    CHECK(schrodinger_residual(slice(1.0 - dt), slice(1.0), slice(1.0 + dt), Expr::c(0.0))
          < 1e-5);
}

TEST_CASE("free gaussian matches the closed form after T = 2") {
    GridSpec spec = GridSpec::uniform(1, 1024, 80.0);
    auto f0 = rest_gaussian(spec);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.steps = 2000;
    auto fT = evolve_final(f0, cfg);
    auto ref = sample(analytic_free_gaussian(1.0, {0.0}, {0.0}, unit_consts), spec, 2.0,
                      Observer::rest(1), unit_consts);
    CHECK(l2_distance(fT, ref) < 1e-6);
}

TEST_CASE("harmonic self-convergence is second order") {
    GridSpec spec = GridSpec::uniform(1, 512, 40.0);
    auto f0 = rest_gaussian(spec);
    Expr U = parse("y1^2/2");
    auto run = [&](double dt, int steps) {
        EvolutionConfig cfg;
        cfg.dt = dt;
        cfg.steps = steps;
        cfg.potential = U;
        return evolve_final(f0, cfg);
    };
    auto ref = run(1e-4, 5000);
    double e1 = l2_distance(run(4e-3, 125), ref);
    double e2 = l2_distance(run(2e-3, 250), ref);
    const double ratio = e1 / e2;
    CHECK(ratio > 4.0 / 1.5);
    CHECK(ratio < 4.0 * 1.5);
}

TEST_CASE("norm conservation over 2000 steps, free and harmonic") {
    GridSpec spec = GridSpec::uniform(1, 512, 40.0);
    auto f0 = rest_gaussian(spec);
    const double n0 = l2_norm(f0);

    EvolutionConfig freecfg;
    freecfg.dt = 1e-3;
    freecfg.steps = 2000;
    CHECK(std::abs(l2_norm(evolve_final(f0, freecfg)) - n0) < 1e-10);

    EvolutionConfig harm = freecfg;
    harm.potential = parse("(y1^2)/2");
    CHECK(std::abs(l2_norm(evolve_final(f0, harm)) - n0) < 1e-10);
}

TEST_CASE("time reversal returns the initial state") {
    GridSpec spec = GridSpec::uniform(1, 512, 40.0);
    auto f0 = rest_gaussian(spec);
    EvolutionConfig fwd;
    fwd.dt = 1e-3;
    fwd.steps = 500;
    auto half = evolve_final(f0, fwd);
    EvolutionConfig bwd = fwd;
    bwd.dt = -fwd.dt;
    auto back = evolve_final(half, bwd);
    back.t = 0.0;  // numerically t returns to 0; align the slice tags
    CHECK(l2_distance(back, f0) < 1e-8);
}

TEST_CASE("evolve returns requested slices with log entries") {
    GridSpec spec = GridSpec::uniform(1, 256, 32.0);
    auto f0 = rest_gaussian(spec);
    EvolutionConfig cfg;
    cfg.dt = 1e-2;
    cfg.steps = 100;
    std::vector<EvolveLogEntry> log;
    auto slices = evolve(f0, cfg, {0, 50, 100}, &log);
    REQUIRE(slices.size() == 3);
    CHECK(slices[0].t == Catch::Approx(0.0));
    CHECK(slices[1].t == Catch::Approx(0.5));
    CHECK(slices[2].t == Catch::Approx(1.0));
    REQUIRE(log.size() == 3);
    CHECK(log[1].step == 50);
    CHECK(log[1].norm == Catch::Approx(l2_norm(f0)).epsilon(1e-9));
    CHECK(log[2].max_abs > 0.0);

    // zero initial field stays zero
    WaveField zero(spec, 0.0, Observer::rest(1), unit_consts);
    auto zslices = evolve(zero, cfg, {100});
    CHECK(max_abs(zslices[0]) == 0.0);
}

TEST_CASE("complex potential requires the flag; overflow aborts with step index") {
    GridSpec spec = GridSpec::uniform(1, 256, 32.0);
    auto f0 = rest_gaussian(spec);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.steps = 5;
    cfg.potential = parse("i*y1^2");
    CHECK_THROWS_AS(evolve_final(f0, cfg), std::invalid_argument);

    cfg.allow_complex_potential = true;
    cfg.potential = parse("1000000*i*y1^2");  // explosive gain: overflow to non-finite
    try {
        evolve_final(f0, cfg);
        FAIL("expected solver_error");
    } catch (const solver_error& err) {
        CHECK(err.step >= 1);
    }
}

TEST_CASE("covariance_check: identity, boosted gaussian, and phase necessity") {
    GridSpec spec = GridSpec::uniform(1, 1024, 80.0);
    auto f0 = rest_gaussian(spec);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.steps = 2000;

    auto id_rep = covariance_check(f0, GalileanTransition::identity(1), cfg);
    CHECK(id_rep.relative_distance <= 1e-12);

    GalileanTransition boost({1.0}, {0.0}, 0.0);
    auto rep = covariance_check(f0, boost, cfg);
    CHECK(rep.relative_distance <= 1e-6);

    // and both paths match the analytic boosted gaussian
    auto analytic = sample(analytic_free_gaussian(1.0, {0.0}, {1.0}, unit_consts), spec, 2.0,
                           observer_from_transition(Observer::rest(1), boost), unit_consts);
    auto path_a = boost_field(projective_transition(boost, unit_consts), evolve_final(f0, cfg));
    CHECK(l2_distance(path_a, analytic) / rep.initial_norm <= 1e-6);

    auto no_phase = covariance_check(f0, boost, cfg, false);
    CHECK(no_phase.relative_distance >= 0.1);
}

TEST_CASE("covariance holds across a sweep of boost velocities") {
    GridSpec spec = GridSpec::uniform(1, 1024, 80.0);
    auto f0 = rest_gaussian(spec);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.steps = 2000;
    for (double v : {0.5, 1.0, 2.0}) {
        auto rep = covariance_check(f0, GalileanTransition({v}, {0.0}, 0.0), cfg);
        CAPTURE(v);
        CHECK(rep.relative_distance <= 1e-6);
    }
}

TEST_CASE("time-dependent potentials keep second-order accuracy") {
    // driven trap U = (y1^2/2)(1 + sin(t)/2), midpoint-evaluated kicks
    GridSpec spec = GridSpec::uniform(1, 512, 40.0);
    auto f0 = rest_gaussian(spec);
    Expr U = parse("(y1^2/2)*(1 + sin(t)/2)");
    auto run = [&](double dt, int steps) {
        EvolutionConfig cfg;
        cfg.dt = dt;
        cfg.steps = steps;
        cfg.potential = U;
        return evolve_final(f0, cfg);
    };
    auto ref = run(1e-4, 5000);
    double e1 = l2_distance(run(4e-3, 125), ref);
    double e2 = l2_distance(run(2e-3, 250), ref);
    const double ratio = e1 / e2;
    CHECK(ratio > 4.0 / 1.5);
    CHECK(ratio < 4.0 * 1.5);
}

TEST_CASE("covariance_check transforms the potential with the frame") {
    // harmonic trap, small boost, moderate time: the transformed-potential
    // path must agree with evolve-then-boost
    GridSpec spec = GridSpec::uniform(1, 512, 40.0);
    auto f0 = rest_gaussian(spec);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.steps = 500;
    cfg.potential = parse("y1^2/2");
    GalileanTransition boost({0.4}, {0.0}, 0.0);
    auto rep = covariance_check(f0, boost, cfg);
    // Strang error is second order but not zero here; the two paths solve the
    // same continuum equation, so the gap shrinks at O(dt^2)
    CHECK(rep.relative_distance < 5e-5);
}
