#pragma once

// Inertial frames on flat Newtonian space-time and the affine coordinate
// transitions between them.  A fiducial frame is fixed once; observers are
// stored by their offsets and velocity relative to it, in orthonormal spatial
// coordinates.  The transition group is boosts + space/time translations
// (no rotations).

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace schrod {

using Vec = std::vector<double>;

inline void check_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

inline double dot(const Vec& a, const Vec& b) {
    check_same_dim(a.size(), b.size(), "dot");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline double norm_sq(const Vec& a) { return dot(a, a); }

/// An inertial observer: spatial offset b and time offset t0 of its origin
/// event, and velocity u, all in fiducial coordinates.
struct Observer {
    Vec b;       // spatial offset of x0
    double t0 = 0.0;
    Vec u;       // velocity coordinates

    Observer() = default;
    Observer(Vec b_, double t0_, Vec u_) : b(std::move(b_)), t0(t0_), u(std::move(u_)) {
        if (b.size() < 1) throw std::invalid_argument("Observer: dimension must be >= 1");
        check_same_dim(b.size(), u.size(), "Observer");
    }

    int dim() const { return static_cast<int>(b.size()); }

    static Observer rest(int n) { return Observer(Vec(n, 0.0), 0.0, Vec(n, 0.0)); }
};

/// The affine coordinate change (y,t) -> (y + w + v*(t + t0), t + t0)
/// between two inertial frames.
struct GalileanTransition {
    Vec v;       // relative velocity
    Vec w;       // spatial offset
    double t0 = 0.0;

    GalileanTransition() = default;
    GalileanTransition(Vec v_, Vec w_, double t0_)
        : v(std::move(v_)), w(std::move(w_)), t0(t0_) {
        check_same_dim(v.size(), w.size(), "GalileanTransition");
    }

    int dim() const { return static_cast<int>(v.size()); }

    static GalileanTransition identity(int n) {
        return GalileanTransition(Vec(n, 0.0), Vec(n, 0.0), 0.0);
    }

    bool is_identity(double tol = 0.0) const {
        if (std::abs(t0) > tol) return false;
        for (double x : v) if (std::abs(x) > tol) return false;
        for (double x : w) if (std::abs(x) > tol) return false;
        return true;
    }
};

struct SpacetimePoint {
    Vec y;
    double t = 0.0;
};

inline SpacetimePoint apply(const GalileanTransition& g, const SpacetimePoint& p) {
    check_same_dim(g.v.size(), p.y.size(), "apply");
    SpacetimePoint out;
    out.t = p.t + g.t0;
    out.y.resize(p.y.size());
    for (std::size_t k = 0; k < p.y.size(); ++k)
        out.y[k] = p.y[k] + g.w[k] + g.v[k] * (p.t + g.t0);
    return out;
}

/// Composite transition: apply(compose(g2, g1), p) == apply(g2, apply(g1, p)).
inline GalileanTransition compose(const GalileanTransition& g2, const GalileanTransition& g1) {
    check_same_dim(g1.v.size(), g2.v.size(), "compose");
    const std::size_t n = g1.v.size();
    GalileanTransition out;
    out.t0 = g1.t0 + g2.t0;
    out.v.resize(n);
    out.w.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.v[k] = g1.v[k] + g2.v[k];
        // From expanding apply(g2, apply(g1, p)) and matching the canonical
        // form y + w + v*(t + t0).
        out.w[k] = g1.w[k] + g2.w[k] - g1.v[k] * g2.t0;
    }
    return out;
}

/// Inverse transition: compose(g, inverse(g)) == identity.
inline GalileanTransition inverse(const GalileanTransition& g) {
    const std::size_t n = g.v.size();
    GalileanTransition out;
    out.t0 = -g.t0;
    out.v.resize(n);
    out.w.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.v[k] = -g.v[k];
        out.w[k] = -g.w[k] - g.v[k] * g.t0;
    }
    return out;
}

/// Inverse coordinate map applied directly: cheaper and exact where needed.
inline SpacetimePoint apply_inverse(const GalileanTransition& g, const SpacetimePoint& p) {
    check_same_dim(g.v.size(), p.y.size(), "apply_inverse");
    SpacetimePoint out;
    out.t = p.t - g.t0;
    out.y.resize(p.y.size());
    for (std::size_t k = 0; k < p.y.size(); ++k)
        out.y[k] = p.y[k] - g.w[k] - g.v[k] * p.t;
    return out;
}

/// Transition from observer a's coordinates to observer b's:
/// apply(result, coords_of(a, x)) == coords_of(b, x) for every event x.
inline GalileanTransition transition_between(const Observer& a, const Observer& b) {
    check_same_dim(a.b.size(), b.b.size(), "transition_between");
    const std::size_t n = a.b.size();
    GalileanTransition g;
    g.t0 = a.t0 - b.t0;
    g.v.resize(n);
    g.w.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        g.v[k] = a.u[k] - b.u[k];
        // w is the offset x0_a - x0_b in a's coordinates: the spatial part
        // minus the drift of a's frame over the elapsed time.
        g.w[k] = a.b[k] - b.b[k] - g.t0 * a.u[k];
    }
    return g;
}

/// The observer b with transition_between(a, b) == g.
inline Observer observer_from_transition(const Observer& a, const GalileanTransition& g) {
    check_same_dim(a.b.size(), g.v.size(), "observer_from_transition");
    const std::size_t n = a.b.size();
    Observer b;
    b.t0 = a.t0 - g.t0;
    b.b.resize(n);
    b.u.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        b.u[k] = a.u[k] - g.v[k];
        b.b[k] = a.b[k] - g.w[k] - g.t0 * a.u[k];
    }
    return b;
}

} // namespace schrod
