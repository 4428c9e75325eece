#pragma once

// The classical side of the bundle: the additive ("logarithm") cocycle, its
// exponentiation back to the gauge cocycle, adapted Darboux transforms of
// phase points, the action of transitions on sections, and a Hamilton-Jacobi
// residual checker with h = -p_t sign conventions.

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "schrod/expr.hpp"
#include "schrod/gauge.hpp"
#include "schrod/spacetime.hpp"

namespace schrod {

/// Additive counterpart of a GaugeMap: acts as
///   (y, t, s) -> (apply(g,(y,t)), s + shift(y, t))
/// with shift(y,t) = m<y + w' + (t+t0')/2 v', v'> + m<w' - (t0'/2) v, v>.
struct AdditiveGaugeMap {
    GalileanTransition g;
    Vec aux_v;   // source observer's velocity relative to the anchor class
    double m = 1.0;

    double shift_at(const Vec& y, double t) const {
        check_same_dim(y.size(), g.v.size(), "AdditiveGaugeMap::shift_at");
        double first = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k)
            first += (y[k] + g.w[k] + 0.5 * (t + g.t0) * g.v[k]) * g.v[k];
        double second = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k)
            second += (g.w[k] - 0.5 * g.t0 * aux_v[k]) * aux_v[k];
        return m * (first + second);
    }

    std::pair<SpacetimePoint, double> apply_to(const Vec& y, double t, double s) const {
        return {apply(g, {y, t}), s + shift_at(y, t)};
    }
};

inline AdditiveGaugeMap additive_transition(const Observer& obs_from, const Observer& obs_to,
                                            const Vec& anchor_u, double m) {
    check_same_dim(obs_from.b.size(), anchor_u.size(), "additive_transition");
    AdditiveGaugeMap out;
    out.g = transition_between(obs_from, obs_to);
    out.m = m;
    out.aux_v.resize(anchor_u.size());
    for (std::size_t k = 0; k < anchor_u.size(); ++k)
        out.aux_v[k] = anchor_u[k] - obs_from.u[k];
    return out;
}

/// Applies the homomorphism s -> exp(i s / hbar) to the additive part.  The
/// linear coefficients of the shift are m v' and m |v'|^2/2, i.e. hbar times
/// the projective exponent; only the constant carries the anchor dependence
/// and is read off the shift directly.
inline GaugeMap exponentiate(const AdditiveGaugeMap& a, double hbar) {
    const double c = a.shift_at(Vec(a.g.v.size(), 0.0), 0.0);
    return projective_transition(a.g, PhysicalConstants(a.m, hbar), Complex(0.0, c / hbar));
}

/// Point of the phase bundle in adapted Darboux coordinates (y, t, p, h)
/// with h = -p_t.
struct PhasePoint {
    Vec y;
    double t = 0.0;
    Vec p;
    double h = 0.0;
};

/// Transition action on phase points:
///   (y,t,p,h) -> (y + w' + (t+t0')v', t+t0', p + m v', h + <p,v'> + (m/2)|v'|^2).
inline PhasePoint phase_transform(const PhasePoint& pt, const Vec& vprime, const Vec& wprime,
                                  double t0prime, double m) {
    check_same_dim(pt.y.size(), vprime.size(), "phase_transform");
    check_same_dim(pt.p.size(), wprime.size(), "phase_transform");
    PhasePoint out;
    out.t = pt.t + t0prime;
    out.y.resize(pt.y.size());
    out.p.resize(pt.p.size());
    for (std::size_t k = 0; k < pt.y.size(); ++k) {
        out.y[k] = pt.y[k] + wprime[k] + (pt.t + t0prime) * vprime[k];
        out.p[k] = pt.p[k] + m * vprime[k];
    }
    out.h = pt.h + dot(pt.p, vprime) + 0.5 * m * norm_sq(vprime);
    return out;
}

using Hamiltonian = std::function<double(const Vec& y, double t, const Vec& p)>;

inline Hamiltonian free_hamiltonian(double m) {
    return [m](const Vec&, double, const Vec& p) { return norm_sq(p) / (2.0 * m); };
}

struct HjReport {
    double max_residual = 0.0;
    int evaluated = 0;
    int skipped = 0;
};

/// max |H(y, t, dsigma/dy) + dsigma/dt| over the sample points; points where
/// sigma is singular are skipped and counted.
inline HjReport hj_residual(const Expr& sigma, const Hamiltonian& H,
                            const std::vector<SpacetimePoint>& points, int n = 0) {
    if (sigma.uses_var(VR))
        throw std::invalid_argument("hj_residual: sigma must not mention r");
    if (n <= 0) n = std::max(1, sigma.max_y_index());
    std::vector<Expr> grad;
    for (int k = 1; k <= n; ++k) grad.push_back(sigma.diff(k));
    Expr dt_sigma = sigma.diff(VT);

    HjReport rep;
    for (const auto& pt : points) {
        EvalPoint p;
        p.y.assign(pt.y.begin(), pt.y.end());
        p.t = Complex(pt.t);
        try {
            Vec momenta(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k)
                momenta[static_cast<std::size_t>(k)] = grad[static_cast<std::size_t>(k)].eval(p).real();
            const double st = dt_sigma.eval(p).real();
            const double resid = std::abs(H(pt.y, pt.t, momenta) + st);
            rep.max_residual = std::max(rep.max_residual, resid);
            ++rep.evaluated;
        } catch (const eval_error&) {
            ++rep.skipped;
        }
    }
    return rep;
}

/// Push a section through a transition:
///   sigma'(y,t) = sigma(y - t v' - w', t - t0')
///                 + m ( <y - (t/2) v', v'> + <w' - (t0'/2) v, v> ).
inline Expr section_transform(const Expr& sigma, const GalileanTransition& data, const Vec& aux_v,
                              double m) {
    check_same_dim(data.v.size(), aux_v.size(), "section_transform");
    const int n = data.dim();
    std::map<int, Expr> repl;
    for (int k = 1; k <= n; ++k)
        repl[k] = Expr::y(k) - Expr::t() * Expr::c(data.v[static_cast<std::size_t>(k - 1)])
                - Expr::c(data.w[static_cast<std::size_t>(k - 1)]);
    repl[VT] = Expr::t() - Expr::c(data.t0);
    Expr out = sigma.substitute(repl);

    Expr bracket = Expr::c(0.0);
    for (int k = 1; k <= n; ++k) {
        const double vk = data.v[static_cast<std::size_t>(k - 1)];
        bracket = bracket + (Expr::y(k) - Expr::c(0.5) * Expr::t() * Expr::c(vk)) * Expr::c(vk);
    }
    double constant = 0.0;
    for (std::size_t k = 0; k < aux_v.size(); ++k)
        constant += (data.w[k] - 0.5 * data.t0 * aux_v[k]) * aux_v[k];
    return out + Expr::c(m) * (bracket + Expr::c(constant));
}

} // namespace schrod
