// Demo: the deformed exterior calculus in action.  Applies the deformed
// differential to a wave function, assembles its gradient field and
// divergence, and shows that div(grad psi) reproduces the free Schrodinger
// operator up to the hbar^2/2m factor.

#include <cstdio>

#include "schrod/schrod.hpp"

using namespace schrod;

int main() {
    const PhysicalConstants consts(1.0, 1.0);
    const int n = 1;

    Expr psi = parse("y1^2 + exp(i*(y1 - t/2))");
    std::printf("psi        = %s\n", psi.to_string().c_str());

    WaveForm dpsi = wave_d(WaveForm::function(n, psi), consts);
    std::printf("d~psi      = %s\n", dpsi.to_string().c_str());

    WaveVectorField grad = wave_gradient(psi, n, consts);
    std::printf("grad psi   = (%s) d/dy1 + (%s) d/dt + (%s) d/dr\n",
                grad.f[0].to_string().c_str(), grad.g.to_string().c_str(),
                grad.h.to_string().c_str());

    Expr lap = schrodinger_laplace(psi, n, consts);
    std::printf("Lap psi    = %s\n", lap.to_string().c_str());

    Expr free_op = schrodinger_operator(psi, consts, n);
    Expr scaled = Expr::c(consts.hbar * consts.hbar / (2.0 * consts.m)) * lap;
    std::printf("free-op match (randomized evaluation): %s\n",
                equal(scaled, free_op, 1e-9) ? "yes" : "NO");

    // the invariant metric and its failure under perturbation
    GalileanTransition boost({1.0}, {0.0}, 0.0);
    std::printf("metric residual, invariant:  %.3e\n",
                metric_invariance_residual(schrodinger_metric(n), boost));
    std::printf("metric residual, B1=1e-3:    %.3e\n",
                metric_invariance_residual(invariant_metric_candidate(n, {1e-3}, 0.0, 1.0),
                                           boost));
    return 0;
}
