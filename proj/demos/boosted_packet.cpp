// Demo: evolve a Gaussian packet, jump to a moving frame, and compare the
// two orders of operations.  Changing frames multiplies the wave function by
// a plane wave on top of the coordinate shift; without that phase the two
// paths disagree badly.

#include <cstdio>

#include "schrod/schrod.hpp"

using namespace schrod;

int main() {
    const PhysicalConstants consts(1.0, 1.0);
    const GridSpec grid = GridSpec::uniform(1, 1024, 80.0);

    WaveField packet = sample(analytic_free_gaussian(1.0, {0.0}, {0.0}, consts), grid, 0.0,
                              Observer::rest(1), consts);

    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.steps = 2000;

    std::printf("free Gaussian, L=%.0f, N=%d, dt=%g, T=%g\n", grid.extents[0], grid.sizes[0],
                cfg.dt, cfg.dt * cfg.steps);
    std::printf("%6s  %22s  %14s\n", "v", "evolve-boost vs boost-evolve", "without phase");
    for (double v : {0.5, 1.0, 2.0}) {
        GalileanTransition boost({v}, {0.0}, 0.0);
        auto with_phase = covariance_check(packet, boost, cfg);
        auto without = covariance_check(packet, boost, cfg, false);
        std::printf("%6.2f  %22.3e  %14.3e\n", v, with_phase.relative_distance,
                    without.relative_distance);
    }

    // the boost of the constant function is exactly the plane wave
    WaveField ones = sample(parse("1"), grid, 0.0, Observer::rest(1), consts);
    auto T = projective_transition(GalileanTransition({1.0}, {0.0}, 0.0), consts);
    WaveField wave = boost_field(T, ones);
    std::printf("\nconstant function boosted by v=1 at t=0: sample at y=%.4f is %.6f%+.6fi\n",
                grid.coord(0, 600), wave.samples[600].real(), wave.samples[600].imag());
    return 0;
}
