#pragma once

// Phase cocycles attached to Galilean transitions.  A GaugeMap acts on
// (y, t, z) as (apply(g, (y,t)), exp(E(y,t)) * z) where the exponent E is
// affine in (y, t) with complex coefficients.  The strict family (one map per
// ordered observer pair, relative to a fixed anchor velocity class) satisfies
// the cocycle law exactly; the projective family satisfies it up to constant
// phases.  Pushing a wave function forward through a GaugeMap commutes with
// the free Schrodinger operator.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "schrod/constants.hpp"
#include "schrod/expr.hpp"
#include "schrod/spacetime.hpp"

namespace schrod {

/// Exponent of the boost phase: (i m/hbar)(<v,y> - (t/2)|v|^2) + c.
inline Complex phase_F(const Vec& v, const PhysicalConstants& consts, const Vec& y, double t,
                       Complex c = Complex(0.0)) {
    check_same_dim(v.size(), y.size(), "phase_F");
    const double s = dot(v, y) - 0.5 * t * norm_sq(v);
    return Complex(0.0, consts.m / consts.hbar) * s + c;
}

/// Same exponent as a symbolic expression in (y1..yn, t).
inline Expr phase_F_expr(const Vec& v, const PhysicalConstants& consts, Complex c = Complex(0.0)) {
    const Complex im_h(0.0, consts.m / consts.hbar);
    Expr s = Expr::c(0.0);
    for (std::size_t k = 0; k < v.size(); ++k)
        s = s + Expr::c(v[k]) * Expr::y(static_cast<int>(k) + 1);
    s = s - Expr::c(0.5 * norm_sq(v)) * Expr::t();
    return Expr::c(im_h) * s + Expr::c(c);
}

/// Unit-modulus plane wave W_v(y,t) = exp(phase_F).
struct PlaneWave {
    Vec v;
    PhysicalConstants consts;

    Complex operator()(const Vec& y, double t) const {
        return std::exp(phase_F(v, consts, y, t));
    }
    Expr as_expr() const { return exp(phase_F_expr(v, consts)); }
};

class GaugeMap {
public:
    GaugeMap() = default;

    const GalileanTransition& transition() const { return g_; }
    const PhysicalConstants& constants() const { return consts_; }
    const Vec& aux_v() const { return aux_v_; }
    Complex additive_constant() const { return c_; }
    int dim() const { return g_.dim(); }

    static GaugeMap identity(int n, const PhysicalConstants& consts) {
        GaugeMap m;
        m.g_ = GalileanTransition::identity(n);
        m.consts_ = consts;
        m.lin_y_.assign(static_cast<std::size_t>(n), Complex(0.0));
        return m;
    }

    /// Exponent E(y,t) evaluated at source coordinates.
    Complex exponent_at(const Vec& y, double t) const {
        check_same_dim(y.size(), lin_y_.size(), "GaugeMap::exponent_at");
        Complex s = c_ + lin_t_ * t;
        for (std::size_t k = 0; k < y.size(); ++k) s += lin_y_[k] * y[k];
        return s;
    }

    Complex factor_at(const Vec& y, double t) const { return std::exp(exponent_at(y, t)); }

    /// Exponent in target coordinates, F = E o (coordinate map)^-1; this is
    /// the F of the push-forward convention.
    Complex exponent_at_target(const Vec& y, double t) const {
        SpacetimePoint src = apply_inverse(g_, {y, t});
        return exponent_at(src.y, src.t);
    }

    /// Full action on a point of the trivial bundle.
    std::pair<SpacetimePoint, Complex> apply_to(const Vec& y, double t, Complex z) const {
        return {apply(g_, {y, t}), factor_at(y, t) * z};
    }

    bool is_identity_map(double tol = 0.0) const {
        if (!g_.is_identity(tol)) return false;
        if (std::abs(c_) > tol || std::abs(lin_t_) > tol) return false;
        for (const auto& a : lin_y_)
            if (std::abs(a) > tol) return false;
        return true;
    }

    /// Coefficients of the target-coordinate exponent F(y,t) = <a,y> + b t + c.
    struct AffineExponent {
        std::vector<Complex> a;
        Complex b{0.0};
        Complex c{0.0};
    };

    AffineExponent target_exponent_coefficients() const {
        AffineExponent out;
        out.a = lin_y_;
        out.b = lin_t_;
        out.c = c_ - lin_t_ * g_.t0;
        for (std::size_t k = 0; k < lin_y_.size(); ++k) {
            out.b -= lin_y_[k] * g_.v[k];
            out.c -= lin_y_[k] * g_.w[k];
        }
        return out;
    }

    /// The target-coordinate exponent as a symbolic expression in (y, t).
    Expr exponent_target_expr() const {
        const std::size_t n = lin_y_.size();
        Complex b = lin_t_;
        Complex cc = c_;
        for (std::size_t k = 0; k < n; ++k) {
            b -= lin_y_[k] * g_.v[k];
            cc -= lin_y_[k] * g_.w[k];
        }
        cc -= lin_t_ * g_.t0;
        Expr e = Expr::c(cc) + Expr::c(b) * Expr::t();
        for (std::size_t k = 0; k < n; ++k)
            e = e + Expr::c(lin_y_[k]) * Expr::y(static_cast<int>(k) + 1);
        return e;
    }

    /// Copy with the exponent's y_axis coefficient perturbed; used by cocycle
    /// detector tests.
    GaugeMap with_phase_perturbation(int axis, Complex delta) const {
        GaugeMap m = *this;
        m.lin_y_.at(static_cast<std::size_t>(axis)) += delta;
        return m;
    }

    friend GaugeMap compose(const GaugeMap& second, const GaugeMap& first);
    friend GaugeMap inverse(const GaugeMap& m);
    friend GaugeMap projective_transition(const GalileanTransition& g,
                                          const PhysicalConstants& consts, Complex c);
    friend GaugeMap strict_transition(const Observer& obs_from, const Observer& obs_to,
                                      const Vec& anchor_u, const PhysicalConstants& consts);
    friend GaugeMap coordinate_only_map(const GalileanTransition& g,
                                        const PhysicalConstants& consts);

private:
    GalileanTransition g_;
    PhysicalConstants consts_;
    Vec aux_v_;
    std::vector<Complex> lin_y_;
    Complex lin_t_{0.0};
    Complex c_{0.0};
};

/// The projective-cocycle representative: exponent (i m/hbar)(<y,v> + (t/2)|v|^2)
/// at source coordinates, no constant term.
inline GaugeMap projective_transition(const GalileanTransition& g,
                                      const PhysicalConstants& consts,
                                      Complex c = Complex(0.0)) {
    GaugeMap m;
    m.g_ = g;
    m.consts_ = consts;
    const Complex im_h(0.0, consts.m / consts.hbar);
    m.lin_y_.resize(g.v.size());
    for (std::size_t k = 0; k < g.v.size(); ++k) m.lin_y_[k] = im_h * g.v[k];
    m.lin_t_ = im_h * 0.5 * norm_sq(g.v);
    m.c_ = c;
    return m;
}

/// A coordinate change with no phase at all (diagnostic use only: this does
/// NOT commute with the Schrodinger operator for nonzero boosts).
inline GaugeMap coordinate_only_map(const GalileanTransition& g, const PhysicalConstants& consts) {
    GaugeMap m;
    m.g_ = g;
    m.consts_ = consts;
    m.lin_y_.assign(g.v.size(), Complex(0.0));
    return m;
}

/// The strict-cocycle transition map between two observers, relative to an
/// anchor velocity class.  Exponent at source coordinates:
///   (i m/hbar)( <y + w' + (t+t0')/2 v', v'> + <w' - (t0'/2) v, v> )
/// with v' = relative velocity, (w', t0') the offsets of the transition and
/// v the source observer's velocity relative to the anchor.
inline GaugeMap strict_transition(const Observer& obs_from, const Observer& obs_to,
                                  const Vec& anchor_u, const PhysicalConstants& consts) {
    check_same_dim(obs_from.b.size(), anchor_u.size(), "strict_transition");
    GaugeMap m = projective_transition(transition_between(obs_from, obs_to), consts);
    const GalileanTransition& g = m.g_;
    Vec v(anchor_u.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = anchor_u[k] - obs_from.u[k];
    const double kappa = dot(g.w, g.v) + 0.5 * g.t0 * norm_sq(g.v)
                       + dot(g.w, v) - 0.5 * g.t0 * norm_sq(v);
    m.c_ = Complex(0.0, consts.m / consts.hbar) * kappa;
    m.aux_v_ = v;
    return m;
}

inline GaugeMap compose(const GaugeMap& second, const GaugeMap& first) {
    check_same_dim(first.lin_y_.size(), second.lin_y_.size(), "compose(GaugeMap)");
    GaugeMap out;
    out.g_ = compose(second.g_, first.g_);
    out.consts_ = first.consts_;
    const std::size_t n = first.lin_y_.size();
    out.lin_y_.resize(n);
    Complex a2_dot_v1(0.0), a2_dot_w1(0.0);
    for (std::size_t k = 0; k < n; ++k) {
        out.lin_y_[k] = first.lin_y_[k] + second.lin_y_[k];
        a2_dot_v1 += second.lin_y_[k] * first.g_.v[k];
        a2_dot_w1 += second.lin_y_[k] * (first.g_.w[k] + first.g_.t0 * first.g_.v[k]);
    }
    out.lin_t_ = first.lin_t_ + second.lin_t_ + a2_dot_v1;
    out.c_ = first.c_ + second.c_ + a2_dot_w1 + second.lin_t_ * first.g_.t0;
    return out;
}

inline GaugeMap inverse(const GaugeMap& m) {
    GaugeMap out;
    out.g_ = inverse(m.g_);
    out.consts_ = m.consts_;
    const std::size_t n = m.lin_y_.size();
    out.lin_y_.resize(n);
    Complex a_dot_w(0.0);
    for (std::size_t k = 0; k < n; ++k) {
        out.lin_y_[k] = -m.lin_y_[k];
        a_dot_w += m.lin_y_[k] * m.g_.w[k];
    }
    Complex a_dot_v(0.0);
    for (std::size_t k = 0; k < n; ++k) a_dot_v += m.lin_y_[k] * m.g_.v[k];
    out.lin_t_ = -m.lin_t_ + a_dot_v;
    out.c_ = -m.c_ + a_dot_w + m.lin_t_ * m.g_.t0;
    return out;
}

/// Push-forward of a symbolic wave function: (y,t) -> e^{F(y,t)} psi(theta^{-1}(y,t)).
inline Expr push_forward(const GaugeMap& T, const Expr& psi) {
    const auto& g = T.transition();
    std::map<int, Expr> repl;
    for (int k = 1; k <= g.dim(); ++k)
        repl[k] = Expr::y(k) - Expr::c(g.w[static_cast<std::size_t>(k - 1)])
                - Expr::c(g.v[static_cast<std::size_t>(k - 1)]) * Expr::t();
    repl[VT] = Expr::t() - Expr::c(g.t0);
    return exp(T.exponent_target_expr()) * psi.substitute(repl);
}

/// Push-forward of a callable representative psi(y, t).
inline std::function<Complex(const Vec&, double)>
push_forward(const GaugeMap& T, std::function<Complex(const Vec&, double)> psi) {
    return [T, psi = std::move(psi)](const Vec& y, double t) {
        SpacetimePoint src = apply_inverse(T.transition(), {y, t});
        return std::exp(T.exponent_at(src.y, src.t)) * psi(src.y, src.t);
    };
}

/// Free (or potential-U) Schrodinger operator acting on a symbolic wave
/// function: (hbar^2/2m) sum_k d^2/dy_k^2 + i hbar d/dt - U.
inline Expr schrodinger_operator(const Expr& psi, const PhysicalConstants& consts, int n = -1,
                                 const Expr& U = Expr::c(0.0)) {
    if (n < 0) n = std::max(psi.max_y_index(), U.max_y_index());
    Expr out = Expr::c(Complex(0.0, consts.hbar)) * psi.diff(VT);
    const Expr half(consts.hbar * consts.hbar / (2.0 * consts.m));
    for (int k = 1; k <= n; ++k)
        out = out + half * psi.diff(k).diff(k);
    return out - U * psi;
}

/// Residuals whose joint vanishing is equivalent to the gauge factor exp(F)
/// commuting with the free Schrodinger operator for boost velocity v:
///   time:    i dF/dt + (hbar/2m)(sum (dF/dy_k)^2 + sum d^2F/dy_k^2)
///   space_k: (hbar/m) dF/dy_k - i v_k
struct GaugeInvarianceResiduals {
    Expr time_residual;
    std::vector<Expr> space_residuals;
};

inline GaugeInvarianceResiduals gauge_invariance_residual(const Expr& F, const Expr& psi,
                                                          const Vec& v,
                                                          const PhysicalConstants& consts) {
    if (F.uses_var(VR) || psi.uses_var(VR))
        throw std::invalid_argument("gauge_invariance_residual: expressions must not mention r");
    int n = static_cast<int>(v.size());
    n = std::max({n, F.max_y_index(), psi.max_y_index()});

    GaugeInvarianceResiduals out;
    Expr sq = Expr::c(0.0);
    for (int k = 1; k <= n; ++k) {
        Expr dk = F.diff(k);
        sq = sq + pow(dk, 2) + dk.diff(k);
        double vk = (k <= static_cast<int>(v.size())) ? v[static_cast<std::size_t>(k - 1)] : 0.0;
        out.space_residuals.push_back(Expr::c(consts.hbar / consts.m) * dk
                                      - Expr::i() * Expr::c(vk));
    }
    out.time_residual = Expr::i() * F.diff(VT)
                      + Expr::c(consts.hbar / (2.0 * consts.m)) * sq;
    return out;
}

// -- cocycle verification -----------------------------------------------------

enum class CocycleMode { strict, projective };

struct CocycleReport {
    CocycleMode mode = CocycleMode::strict;
    double max_coord_dev = 0.0;
    double max_factor_dev = 0.0;   // strict mode
    double phase_stddev = 0.0;     // projective mode: worst per-triple circular stddev
    double max_ratio_offset = 0.0; // max |mean ratio - 1| over triples
    int samples = 0;
    int triples = 0;

    double max_dev() const {
        return std::max(max_coord_dev,
                        mode == CocycleMode::strict ? max_factor_dev : phase_stddev);
    }
};

/// Checks the cocycle law for a family of gauge maps indexed by observer
/// pairs.  Strict mode measures the worst pointwise deviation of T''∘T' from
/// T''' in coordinates and gauge factor; projective mode measures how far the
/// composed-vs-direct factor ratio is from being constant over sample points.
inline CocycleReport check_cocycle(
    const std::function<GaugeMap(const Observer&, const Observer&)>& family,
    const std::vector<std::array<Observer, 3>>& triples, CocycleMode mode,
    int points_per_triple = 50, std::uint64_t seed = 12345) {

    CocycleReport rep;
    rep.mode = mode;
    rep.triples = static_cast<int>(triples.size());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);

    for (const auto& tri : triples) {
        const GaugeMap t12 = family(tri[0], tri[1]);
        const GaugeMap t23 = family(tri[1], tri[2]);
        const GaugeMap t13 = family(tri[0], tri[2]);
        const int n = t12.dim();

        std::vector<Complex> ratios;
        for (int j = 0; j < points_per_triple; ++j) {
            Vec y(static_cast<std::size_t>(n));
            for (auto& x : y) x = coord(rng);
            const double t = coord(rng);

            const SpacetimePoint mid = apply(t12.transition(), {y, t});
            const SpacetimePoint via = apply(t23.transition(), mid);
            const SpacetimePoint direct = apply(t13.transition(), {y, t});
            double cd = std::abs(via.t - direct.t);
            for (int k = 0; k < n; ++k)
                cd = std::max(cd, std::abs(via.y[static_cast<std::size_t>(k)] -
                                           direct.y[static_cast<std::size_t>(k)]));
            rep.max_coord_dev = std::max(rep.max_coord_dev, cd);

            const Complex composed = t23.factor_at(mid.y, mid.t) * t12.factor_at(y, t);
            const Complex direct_f = t13.factor_at(y, t);
            if (mode == CocycleMode::strict) {
                rep.max_factor_dev = std::max(rep.max_factor_dev, std::abs(composed - direct_f));
            } else {
                ratios.push_back(composed / direct_f);
            }
            ++rep.samples;
        }

        if (mode == CocycleMode::projective && !ratios.empty()) {
            Complex mean(0.0);
            for (const auto& z : ratios) mean += z;
            mean /= static_cast<double>(ratios.size());
            const Complex dir = mean / std::abs(mean);
            double var = 0.0;
            for (const auto& z : ratios) {
                const double ang = std::arg(z * std::conj(dir));
                var += ang * ang;
            }
            rep.phase_stddev = std::max(rep.phase_stddev,
                                        std::sqrt(var / static_cast<double>(ratios.size())));
            rep.max_ratio_offset = std::max(rep.max_ratio_offset, std::abs(mean - Complex(1.0)));
        }
    }
    return rep;
}

} // namespace schrod
