#pragma once

// Sampled wave functions on periodic spatial grids: sampling from expressions
// or closures, grid-weighted norms, exact spectral translation, gauge boosts
// of sampled fields, and the discrete Schrodinger residual.  Sample layout is
// y1-fastest; norms use pairwise summation so results do not depend on the
// degree of parallelism.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "schrod/constants.hpp"
#include "schrod/expr.hpp"
#include "schrod/fft.hpp"
#include "schrod/gauge.hpp"
#include "schrod/parallel.hpp"
#include "schrod/spacetime.hpp"

namespace schrod {

struct GridSpec {
    int n = 1;
    std::vector<int> sizes;
    std::vector<double> extents;
    std::vector<double> origins;

    GridSpec() = default;
    GridSpec(std::vector<int> sizes_, std::vector<double> extents_,
             std::vector<double> origins_ = {})
        : n(static_cast<int>(sizes_.size())), sizes(std::move(sizes_)),
          extents(std::move(extents_)), origins(std::move(origins_)) {
        if (n < 1 || n > 3) throw std::invalid_argument("GridSpec: n must be 1..3");
        if (extents.size() != sizes.size())
            throw std::invalid_argument("GridSpec: extents/sizes mismatch");
        if (origins.empty()) {
            origins.resize(sizes.size());
            for (std::size_t a = 0; a < sizes.size(); ++a) origins[a] = -0.5 * extents[a];
        }
        if (origins.size() != sizes.size())
            throw std::invalid_argument("GridSpec: origins/sizes mismatch");
        for (std::size_t a = 0; a < sizes.size(); ++a) {
            if (sizes[a] < 8 || !is_power_of_two(sizes[a]))
                throw std::invalid_argument("GridSpec: sizes must be powers of two >= 8");
            if (!(extents[a] > 0.0)) throw std::invalid_argument("GridSpec: extents must be > 0");
        }
    }

    /// Uniform 1D..3D box [-L/2, L/2) with N points per axis.
    static GridSpec uniform(int n, int points, double extent) {
        return GridSpec(std::vector<int>(static_cast<std::size_t>(n), points),
                        std::vector<double>(static_cast<std::size_t>(n), extent));
    }

    std::size_t total() const {
        std::size_t p = 1;
        for (int s : sizes) p *= static_cast<std::size_t>(s);
        return p;
    }

    double step(int axis) const {
        return extents[static_cast<std::size_t>(axis)] / sizes[static_cast<std::size_t>(axis)];
    }

    double coord(int axis, int i) const {
        return origins[static_cast<std::size_t>(axis)] + i * step(axis);
    }

    double cell_volume() const {
        double v = 1.0;
        for (int a = 0; a < n; ++a) v *= step(a);
        return v;
    }

    void multi_index(std::size_t flat, int* idx) const {
        for (int a = 0; a < n; ++a) {
            idx[a] = static_cast<int>(flat % static_cast<std::size_t>(sizes[static_cast<std::size_t>(a)]));
            flat /= static_cast<std::size_t>(sizes[static_cast<std::size_t>(a)]);
        }
    }

    bool operator==(const GridSpec& o) const {
        return n == o.n && sizes == o.sizes && extents == o.extents && origins == o.origins;
    }
};

/// Complex samples of a wave function at one time slice, tagged with the
/// frame it is written in and the physical constants.
struct WaveField {
    GridSpec spec;
    double t = 0.0;
    std::vector<Complex> samples;
    Observer frame;
    PhysicalConstants consts;

    WaveField() = default;
    WaveField(GridSpec spec_, double t_, Observer frame_, PhysicalConstants consts_)
        : spec(std::move(spec_)), t(t_), samples(spec.total(), Complex(0.0)),
          frame(std::move(frame_)), consts(consts_) {
        if (frame.dim() != spec.n)
            throw std::invalid_argument("WaveField: frame dimension mismatch");
    }
};

using FieldClosure = std::function<Complex(const Vec&, double)>;

inline WaveField sample(const FieldClosure& fn, const GridSpec& spec, double t,
                        const Observer& frame, const PhysicalConstants& consts) {
    WaveField f(spec, t, frame, consts);
    const std::size_t total = spec.total();
    parallel_for(0, total, [&](std::size_t lo, std::size_t hi) {
        int idx[3] = {0, 0, 0};
        Vec y(static_cast<std::size_t>(spec.n));
        for (std::size_t j = lo; j < hi; ++j) {
            spec.multi_index(j, idx);
            for (int a = 0; a < spec.n; ++a) y[static_cast<std::size_t>(a)] = spec.coord(a, idx[a]);
            f.samples[j] = fn(y, t);
        }
    });
    return f;
}

inline WaveField sample(const Expr& expr, const GridSpec& spec, double t, const Observer& frame,
                        const PhysicalConstants& consts) {
    if (expr.uses_var(VR))
        throw std::invalid_argument("sample: expression must not mention r");
    if (expr.max_y_index() > spec.n)
        throw std::invalid_argument("sample: expression uses y beyond the grid dimension");
    WaveField f(spec, t, frame, consts);
    const std::size_t total = spec.total();
    parallel_for(0, total, [&](std::size_t lo, std::size_t hi) {
        int idx[3] = {0, 0, 0};
        EvalPoint p;
        p.y.resize(static_cast<std::size_t>(spec.n));
        p.t = Complex(t);
        for (std::size_t j = lo; j < hi; ++j) {
            spec.multi_index(j, idx);
            for (int a = 0; a < spec.n; ++a)
                p.y[static_cast<std::size_t>(a)] = Complex(spec.coord(a, idx[a]));
            f.samples[j] = expr.eval(p);
        }
    });
    return f;
}

// -- norms --------------------------------------------------------------------

namespace detail {
inline double pairwise_sum(const double* v, std::size_t count) {
    if (count <= 32) {
        double s = 0.0;
        for (std::size_t j = 0; j < count; ++j) s += v[j];
        return s;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, count - half);
}
} // namespace detail

inline double l2_norm(const WaveField& f) {
    std::vector<double> sq(f.samples.size());
    for (std::size_t j = 0; j < sq.size(); ++j) sq[j] = std::norm(f.samples[j]);
    return std::sqrt(detail::pairwise_sum(sq.data(), sq.size()) * f.spec.cell_volume());
}

inline double max_abs(const WaveField& f) {
    double m = 0.0;
    for (const auto& z : f.samples) m = std::max(m, std::abs(z));
    return m;
}

inline double l2_distance(const WaveField& a, const WaveField& b) {
    if (!(a.spec == b.spec)) throw std::invalid_argument("l2_distance: grid mismatch");
    if (std::abs(a.t - b.t) > 1e-9 * std::max(1.0, std::abs(a.t)))
        throw std::invalid_argument("l2_distance: time slices differ");
    std::vector<double> sq(a.samples.size());
    for (std::size_t j = 0; j < sq.size(); ++j) sq[j] = std::norm(a.samples[j] - b.samples[j]);
    return std::sqrt(detail::pairwise_sum(sq.data(), sq.size()) * a.spec.cell_volume());
}

// -- spectral machinery ---------------------------------------------------------

namespace detail {

/// Multiplies data in place by the separable product of per-axis tables.
inline void apply_separable(std::vector<Complex>& data, const GridSpec& spec,
                            const std::vector<std::vector<Complex>>& tables) {
    const std::size_t n1 = static_cast<std::size_t>(spec.sizes[0]);
    const std::size_t lines = data.size() / n1;
    parallel_for(0, lines, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t li = lo; li < hi; ++li) {
            Complex outer(1.0);
            std::size_t rest = li;
            for (int a = 1; a < spec.n; ++a) {
                const std::size_t na = static_cast<std::size_t>(spec.sizes[static_cast<std::size_t>(a)]);
                outer *= tables[static_cast<std::size_t>(a)][rest % na];
                rest /= na;
            }
            Complex* line = data.data() + li * n1;
            const auto& t1 = tables[0];
            for (std::size_t i = 0; i < n1; ++i) line[i] *= outer * t1[i];
        }
    }, 1u << 12);
}

inline std::vector<double> axis_wavenumbers(const GridSpec& spec, int axis) {
    const int n = spec.sizes[static_cast<std::size_t>(axis)];
    const double dk = 2.0 * 3.14159265358979323846264338328 / spec.extents[static_cast<std::size_t>(axis)];
    std::vector<double> k(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) k[static_cast<std::size_t>(j)] = dk * fft_freq(j, n);
    return k;
}

} // namespace detail

/// Exact Fourier translation: output(y) = f(y - delta) for band-limited f.
inline WaveField spectral_shift(const WaveField& f, const Vec& delta) {
    check_same_dim(delta.size(), static_cast<std::size_t>(f.spec.n), "spectral_shift");
    bool zero = true;
    for (double d : delta)
        if (d != 0.0) zero = false;
    if (zero) return f;

    WaveField out = f;
    fft_nd(out.samples, out.spec.sizes, false);
    std::vector<std::vector<Complex>> tables(static_cast<std::size_t>(out.spec.n));
    for (int a = 0; a < out.spec.n; ++a) {
        auto k = detail::axis_wavenumbers(out.spec, a);
        auto& tab = tables[static_cast<std::size_t>(a)];
        tab.resize(k.size());
        for (std::size_t j = 0; j < k.size(); ++j)
            tab[j] = std::polar(1.0, -k[j] * delta[static_cast<std::size_t>(a)]);
    }
    detail::apply_separable(out.samples, out.spec, tables);
    fft_nd(out.samples, out.spec.sizes, true);
    return out;
}

/// Ratio of the largest |sample| in the outermost two-cell shell to the
/// global maximum; the wrap-around heuristic for boosts.
inline double boundary_amplitude_ratio(const WaveField& f) {
    const double global = max_abs(f);
    if (global == 0.0) return 0.0;
    double edge = 0.0;
    const std::size_t total = f.spec.total();
    int idx[3] = {0, 0, 0};
    for (std::size_t j = 0; j < total; ++j) {
        f.spec.multi_index(j, idx);
        bool boundary = false;
        for (int a = 0; a < f.spec.n; ++a) {
            const int na = f.spec.sizes[static_cast<std::size_t>(a)];
            if (idx[a] < 2 || idx[a] >= na - 2) boundary = true;
        }
        if (boundary) edge = std::max(edge, std::abs(f.samples[j]));
    }
    return edge / global;
}

struct BoostDiagnostics {
    bool wraparound_warning = false;
    double boundary_ratio = 0.0;
};

/// Push a sampled field through a gauge map:
///   output(y) = exp(F(y, t_out)) * f(y - w - t_out v),  t_out = f.t + t0,
/// realized as a spectral shift followed by the pointwise gauge factor.
/// The frame tag moves to the target observer.
inline WaveField boost_field(const GaugeMap& T, const WaveField& f,
                             BoostDiagnostics* diag = nullptr) {
    if (T.dim() != f.spec.n) throw std::invalid_argument("boost_field: dimension mismatch");
    if (T.is_identity_map()) {
        if (diag) *diag = {};
        return f;
    }
    const GalileanTransition& g = T.transition();
    const double t_out = f.t + g.t0;

    Vec delta(static_cast<std::size_t>(f.spec.n));
    for (int a = 0; a < f.spec.n; ++a)
        delta[static_cast<std::size_t>(a)] =
            g.w[static_cast<std::size_t>(a)] + g.v[static_cast<std::size_t>(a)] * t_out;

    WaveField out = spectral_shift(f, delta);
    out.t = t_out;
    out.frame = observer_from_transition(f.frame, g);

    const auto F = T.target_exponent_coefficients();
    std::vector<std::vector<Complex>> tables(static_cast<std::size_t>(f.spec.n));
    for (int a = 0; a < f.spec.n; ++a) {
        const int na = f.spec.sizes[static_cast<std::size_t>(a)];
        auto& tab = tables[static_cast<std::size_t>(a)];
        tab.resize(static_cast<std::size_t>(na));
        for (int i = 0; i < na; ++i)
            tab[static_cast<std::size_t>(i)] =
                std::exp(F.a[static_cast<std::size_t>(a)] * f.spec.coord(a, i));
    }
    const Complex constant = std::exp(F.b * t_out + F.c);
    for (auto& tab0 : tables[0]) tab0 *= constant;  // fold the scalar into axis 0
    detail::apply_separable(out.samples, out.spec, tables);

    if (diag) {
        diag->boundary_ratio = boundary_amplitude_ratio(out);
        diag->wraparound_warning = diag->boundary_ratio > 1e-9;
    }
    return out;
}

/// Spectral Laplacian of one slice.
inline WaveField spectral_laplacian(const WaveField& f) {
    WaveField out = f;
    fft_nd(out.samples, out.spec.sizes, false);
    // |k|^2 is not separable as a product; apply directly over modes.
    std::vector<std::vector<double>> k(static_cast<std::size_t>(f.spec.n));
    for (int a = 0; a < f.spec.n; ++a) k[static_cast<std::size_t>(a)] = detail::axis_wavenumbers(f.spec, a);
    const std::size_t total = out.samples.size();
    parallel_for(0, total, [&](std::size_t lo, std::size_t hi) {
        int idx[3] = {0, 0, 0};
        for (std::size_t j = lo; j < hi; ++j) {
            out.spec.multi_index(j, idx);
            double k2 = 0.0;
            for (int a = 0; a < out.spec.n; ++a) {
                const double ka = k[static_cast<std::size_t>(a)][static_cast<std::size_t>(idx[a])];
                k2 += ka * ka;
            }
            out.samples[j] *= -k2;
        }
    }, 1u << 12);
    fft_nd(out.samples, out.spec.sizes, true);
    return out;
}

/// Relative discrete residual of the Schrodinger equation on three
/// consecutive slices: || (hbar^2/2m) Lap psi + i hbar (psi_+ - psi_-)/(2 dt)
/// - U psi ||_2 / ||psi||_2 with spectral space derivatives and a centered
/// time difference.
inline double schrodinger_residual(const WaveField& prev, const WaveField& cur,
                                   const WaveField& next, const Expr& U) {
    if (!(prev.spec == cur.spec) || !(cur.spec == next.spec))
        throw std::invalid_argument("schrodinger_residual: grid mismatch");
    const double dt1 = cur.t - prev.t;
    const double dt2 = next.t - cur.t;
    if (dt1 == 0.0 || std::abs(dt1 - dt2) > 1e-9 * std::max(1.0, std::abs(dt1)))
        throw std::invalid_argument("schrodinger_residual: slices must be uniformly spaced in time");
    const double denom = l2_norm(cur);
    if (denom == 0.0) return 0.0;

    const double m = cur.consts.m, hbar = cur.consts.hbar;
    WaveField lap = spectral_laplacian(cur);

    const bool have_potential = !(U.is_constant() && U.constant_value() == Complex(0.0));
    if (U.uses_var(VR))
        throw std::invalid_argument("schrodinger_residual: U must not mention r");

    std::vector<double> sq(cur.samples.size());
    const Complex ih(0.0, hbar);
    const double half = hbar * hbar / (2.0 * m);
    int idx[3] = {0, 0, 0};
    EvalPoint p;
    p.y.resize(static_cast<std::size_t>(cur.spec.n));
    p.t = Complex(cur.t);
    for (std::size_t j = 0; j < sq.size(); ++j) {
        Complex resid = half * lap.samples[j]
                      + ih * (next.samples[j] - prev.samples[j]) / (2.0 * dt1);
        if (have_potential) {
            cur.spec.multi_index(j, idx);
            for (int a = 0; a < cur.spec.n; ++a)
                p.y[static_cast<std::size_t>(a)] = Complex(cur.spec.coord(a, idx[a]));
            resid -= U.eval(p) * cur.samples[j];
        }
        sq[j] = std::norm(resid);
    }
    const double num = std::sqrt(detail::pairwise_sum(sq.data(), sq.size()) * cur.spec.cell_volume());
    return num / denom;
}

} // namespace schrod
