#pragma once

// Exterior calculus for wave forms over the coordinates (y1..yn, t, r): wedge
// products, the deformed differential d~ = d + (i m/hbar) dr ^ . , the
// invariant metric with its volume form, and the gradient / divergence /
// Laplace pipeline built from them.  Coefficients are r-independent
// representatives; the homogeneous factor e^{i m r/hbar} stays implicit and
// is only materialized in cross-checks that pass r explicitly.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "schrod/constants.hpp"
#include "schrod/expr.hpp"
#include "schrod/spacetime.hpp"

namespace schrod {

/// Axes 0..n-1 are y1..yn, axis n is t, axis n+1 is r.
inline int axis_var(int n, int axis) {
    if (axis < n) return axis + 1;
    if (axis == n) return VT;
    if (axis == n + 1) return VR;
    throw std::out_of_range("axis_var: bad axis");
}

inline std::string axis_name(int n, int axis) {
    if (axis < n) return "dy" + std::to_string(axis + 1);
    return axis == n ? "dt" : "dr";
}

using FormIndex = std::vector<int>;  // strictly increasing axis list

class WaveForm {
public:
    WaveForm() = default;
    WaveForm(int n, int degree) : n_(n), degree_(degree) {
        if (n < 1) throw std::invalid_argument("WaveForm: n must be >= 1");
        if (degree < 0 || degree > n + 2)
            throw std::invalid_argument("WaveForm: degree out of range");
    }

    static WaveForm function(int n, const Expr& psi) {
        WaveForm w(n, 0);
        w.set({}, psi);
        return w;
    }

    int n() const { return n_; }
    int degree() const { return degree_; }
    int num_axes() const { return n_ + 2; }

    const std::map<FormIndex, Expr>& coefficients() const { return coeffs_; }

    void set(const FormIndex& idx, const Expr& e) {
        validate(idx);
        if (e.is_constant() && e.constant_value() == Complex(0.0)) {
            coeffs_.erase(idx);
            return;
        }
        coeffs_[idx] = e;
    }

    Expr get(const FormIndex& idx) const {
        validate(idx);
        auto it = coeffs_.find(idx);
        return it == coeffs_.end() ? Expr::c(0.0) : it->second;
    }

    void add_to(const FormIndex& idx, const Expr& e) { set(idx, get(idx) + e); }

    WaveForm operator+(const WaveForm& other) const {
        require_same_shape(other);
        WaveForm out = *this;
        for (const auto& [idx, e] : other.coeffs_) out.add_to(idx, e);
        return out;
    }

    WaveForm operator-(const WaveForm& other) const {
        require_same_shape(other);
        WaveForm out = *this;
        for (const auto& [idx, e] : other.coeffs_) out.add_to(idx, -e);
        return out;
    }

    WaveForm scaled(const Expr& s) const {
        WaveForm out(n_, degree_);
        for (const auto& [idx, e] : coeffs_) out.set(idx, s * e);
        return out;
    }

    std::string to_string() const {
        if (coeffs_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [idx, e] : coeffs_) {
            if (!first) out += " + ";
            first = false;
            std::string coeff = e.to_string();
            if (coeff.find(' ') != std::string::npos) coeff = "(" + coeff + ")";
            out += coeff;
            for (std::size_t j = 0; j < idx.size(); ++j) {
                out += (j == 0 ? " " : " ∧ ");
                out += axis_name(n_, idx[j]);
            }
        }
        return out;
    }

private:
    void validate(const FormIndex& idx) const {
        if (static_cast<int>(idx.size()) != degree_)
            throw std::invalid_argument("WaveForm: index size does not match degree");
        for (std::size_t j = 0; j < idx.size(); ++j) {
            if (idx[j] < 0 || idx[j] >= num_axes())
                throw std::invalid_argument("WaveForm: axis out of range");
            if (j > 0 && idx[j] <= idx[j - 1])
                throw std::invalid_argument("WaveForm: index must be strictly increasing");
        }
    }

    void require_same_shape(const WaveForm& other) const {
        if (n_ != other.n_ || degree_ != other.degree_)
            throw std::invalid_argument("WaveForm: shape mismatch");
    }

    int n_ = 1;
    int degree_ = 0;
    std::map<FormIndex, Expr> coeffs_;
};

/// Sign of dx_J ^ dx_K as (-1)^inversions times dx_{J u K}; zero overlap
/// required (returns 0 sign on overlap).
inline int merge_indices(const FormIndex& a, const FormIndex& b, FormIndex& out) {
    out.clear();
    out.reserve(a.size() + b.size());
    int inversions = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return 0;
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            // b[j] jumps over the remaining elements of a
            inversions += static_cast<int>(a.size() - i);
            out.push_back(b[j++]);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return (inversions % 2 == 0) ? 1 : -1;
}

inline WaveForm wedge(const WaveForm& a, const WaveForm& b) {
    if (a.n() != b.n()) throw std::invalid_argument("wedge: dimension mismatch");
    if (a.degree() + b.degree() > a.num_axes()) return WaveForm(a.n(), a.num_axes());
    WaveForm out(a.n(), a.degree() + b.degree());
    FormIndex merged;
    for (const auto& [ia, ea] : a.coefficients()) {
        for (const auto& [ib, eb] : b.coefficients()) {
            int sign = merge_indices(ia, ib, merged);
            if (sign == 0) continue;
            Expr term = ea * eb;
            if (sign < 0) term = -term;
            out.add_to(merged, term);
        }
    }
    return out;
}

/// Coordinate exterior derivative (includes the r direction; coefficients
/// that do not mention r simply contribute nothing there).
inline WaveForm exterior_d(const WaveForm& w) {
    if (w.degree() == w.num_axes()) return WaveForm(w.n(), w.num_axes());
    WaveForm out(w.n(), w.degree() + 1);
    for (const auto& [idx, e] : w.coefficients()) {
        for (int axis = 0; axis < w.num_axes(); ++axis) {
            if (std::binary_search(idx.begin(), idx.end(), axis)) continue;
            Expr de = e.diff(axis_var(w.n(), axis));
            if (de.is_constant() && de.constant_value() == Complex(0.0)) continue;
            FormIndex target = idx;
            auto pos = std::lower_bound(target.begin(), target.end(), axis);
            int before = static_cast<int>(pos - target.begin());
            target.insert(pos, axis);
            if (before % 2 != 0) de = -de;
            out.add_to(target, de);
        }
    }
    return out;
}

inline WaveForm dr_one_form(int n) {
    WaveForm w(n, 1);
    w.set({n + 1}, Expr::c(1.0));
    return w;
}

/// The wave-de Rham differential d~w = dw + (i m/hbar) dr ^ w.
inline WaveForm wave_d(const WaveForm& w, const PhysicalConstants& consts) {
    if (w.degree() == w.num_axes()) return WaveForm(w.n(), w.num_axes());
    WaveForm twist = wedge(dr_one_form(w.n()).scaled(
                               Expr::c(Complex(0.0, consts.m / consts.hbar))),
                           w);
    return exterior_d(w) + twist;
}

/// Vector field f_1 d/dy1 + ... + f_n d/dyn + g d/dt + h d/dr.
struct WaveVectorField {
    int n = 1;
    std::vector<Expr> f;  // size n
    Expr g = Expr::c(0.0);
    Expr h = Expr::c(0.0);

    WaveVectorField() = default;
    explicit WaveVectorField(int n_) : n(n_), f(static_cast<std::size_t>(n_), Expr::c(0.0)) {}

    Expr component(int axis) const {
        if (axis < n) return f[static_cast<std::size_t>(axis)];
        if (axis == n) return g;
        if (axis == n + 1) return h;
        throw std::out_of_range("WaveVectorField: bad axis");
    }

    bool mentions_r() const {
        for (const auto& e : f)
            if (e.uses_var(VR)) return true;
        return g.uses_var(VR) || h.uses_var(VR);
    }
};

/// Interior product (contraction in the first slot).
inline WaveForm interior(const WaveVectorField& X, const WaveForm& w) {
    if (X.n != w.n()) throw std::invalid_argument("interior: dimension mismatch");
    if (w.degree() == 0) return WaveForm(w.n(), 0);
    WaveForm out(w.n(), w.degree() - 1);
    for (const auto& [idx, e] : w.coefficients()) {
        for (std::size_t j = 0; j < idx.size(); ++j) {
            Expr comp = X.component(idx[j]);
            if (comp.is_constant() && comp.constant_value() == Complex(0.0)) continue;
            FormIndex rest;
            rest.reserve(idx.size() - 1);
            for (std::size_t k = 0; k < idx.size(); ++k)
                if (k != j) rest.push_back(idx[k]);
            Expr term = comp * e;
            if (j % 2 != 0) term = -term;
            out.add_to(rest, term);
        }
    }
    return out;
}

// -- metrics -----------------------------------------------------------------

/// Symmetric (n+2)x(n+2) matrix of expressions over (y1..yn, t, r).
struct Metric {
    int n = 1;
    std::vector<std::vector<Expr>> entries;

    explicit Metric(int n_) : n(n_) {
        entries.assign(static_cast<std::size_t>(n + 2),
                       std::vector<Expr>(static_cast<std::size_t>(n + 2), Expr::c(0.0)));
    }

    Expr& at(int a, int b) { return entries[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
    const Expr& at(int a, int b) const {
        return entries[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }

    void set_symmetric(int a, int b, const Expr& e) {
        at(a, b) = e;
        at(b, a) = e;
    }
};

/// The family of U(1)-invariant extensions of the spatial metric:
///   sum dy_k (x) dy_k + sum B_k dy_k v dr + C dr (x) dr + D dt v dr.
inline Metric invariant_metric_candidate(int n, const Vec& B, double C, double D) {
    if (static_cast<int>(B.size()) != n)
        throw std::invalid_argument("invariant_metric_candidate: B must have length n");
    Metric m(n);
    for (int k = 0; k < n; ++k) m.at(k, k) = Expr::c(1.0);
    for (int k = 0; k < n; ++k) m.set_symmetric(k, n + 1, Expr::c(B[static_cast<std::size_t>(k)]));
    m.at(n + 1, n + 1) = Expr::c(C);
    m.set_symmetric(n, n + 1, Expr::c(D));
    return m;
}

/// The invariant metric: B = 0, C = 0, D = 1.  Equals its own inverse.
inline Metric schrodinger_metric(int n, const PhysicalConstants& = {}) {
    return invariant_metric_candidate(n, Vec(static_cast<std::size_t>(n), 0.0), 0.0, 1.0);
}

/// Its contravariant form: the same matrix over (d/dy_k, d/dt, d/dr).
inline Metric contravariant_schrodinger_metric(int n, const PhysicalConstants& c = {}) {
    return schrodinger_metric(n, c);
}

/// i_X M as a 1-form: (i_X M)_b = sum_a X^a M_{ab}.
inline WaveForm interior_with_metric(const WaveVectorField& X, const Metric& M) {
    if (X.n != M.n) throw std::invalid_argument("interior_with_metric: dimension mismatch");
    WaveForm out(M.n, 1);
    for (int b = 0; b < M.n + 2; ++b) {
        Expr acc = Expr::c(0.0);
        for (int a = 0; a < M.n + 2; ++a) acc = acc + X.component(a) * M.at(a, b);
        out.set({b}, acc);
    }
    return out;
}

/// Max-norm residual of pulling a constant-coefficient metric back through
/// the affine coordinate change of the bundle: (y,t,r) maps to
///   (y + w + (t+t0) v,  t + t0,  r - <y + w + (t+t0)/2 v, v> - const).
/// Invariance means J^T M J == M for the constant Jacobian J.
inline double metric_invariance_residual(const Metric& M, const GalileanTransition& g,
                                         const PhysicalConstants& = {}) {
    if (M.n != g.dim())
        throw std::invalid_argument("metric_invariance_residual: dimension mismatch");
    const int dim = M.n + 2;
    const EvalPoint origin{std::vector<Complex>(static_cast<std::size_t>(M.n), Complex(0.0)),
                           Complex(0.0), Complex(0.0)};

    std::vector<std::vector<double>> m(static_cast<std::size_t>(dim),
                                       std::vector<double>(static_cast<std::size_t>(dim)));
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                M.at(a, b).eval(origin).real();

    // J[a][b] = d(target coordinate a) / d(source coordinate b)
    std::vector<std::vector<double>> J(static_cast<std::size_t>(dim),
                                       std::vector<double>(static_cast<std::size_t>(dim), 0.0));
    for (int k = 0; k < M.n; ++k) {
        J[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] = 1.0;
        J[static_cast<std::size_t>(k)][static_cast<std::size_t>(M.n)] =
            g.v[static_cast<std::size_t>(k)];
        J[static_cast<std::size_t>(M.n + 1)][static_cast<std::size_t>(k)] =
            -g.v[static_cast<std::size_t>(k)];
    }
    J[static_cast<std::size_t>(M.n)][static_cast<std::size_t>(M.n)] = 1.0;
    J[static_cast<std::size_t>(M.n + 1)][static_cast<std::size_t>(M.n)] = -0.5 * norm_sq(g.v);
    J[static_cast<std::size_t>(M.n + 1)][static_cast<std::size_t>(M.n + 1)] = 1.0;

    double residual = 0.0;
    for (int b = 0; b < dim; ++b) {
        for (int c = 0; c < dim; ++c) {
            double s = 0.0;
            for (int a = 0; a < dim; ++a)
                for (int d = 0; d < dim; ++d)
                    s += J[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] *
                         m[static_cast<std::size_t>(a)][static_cast<std::size_t>(d)] *
                         J[static_cast<std::size_t>(d)][static_cast<std::size_t>(c)];
            residual = std::max(residual,
                                std::abs(s - m[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)]));
        }
    }
    return residual;
}

// -- gradient / divergence / Laplace ------------------------------------------

/// Wave-gradient: the unique X with i_X mu = d~psi, solved through the
/// contravariant metric.  psi must be an r-independent representative.
inline WaveVectorField wave_gradient(const Expr& psi, int n, const PhysicalConstants& consts) {
    if (psi.uses_var(VR))
        throw std::invalid_argument("wave_gradient: psi must not mention r");
    WaveForm dpsi = wave_d(WaveForm::function(n, psi), consts);
    Metric nu = contravariant_schrodinger_metric(n, consts);
    WaveVectorField X(n);
    for (int a = 0; a < n + 2; ++a) {
        Expr acc = Expr::c(0.0);
        for (int b = 0; b < n + 2; ++b) acc = acc + nu.at(a, b) * dpsi.get({b});
        if (a < n) X.f[static_cast<std::size_t>(a)] = acc;
        else if (a == n) X.g = acc;
        else X.h = acc;
    }
    return X;
}

inline WaveForm schrodinger_volume(int n) {
    WaveForm w(n, n + 2);
    FormIndex all(static_cast<std::size_t>(n + 2));
    for (int a = 0; a < n + 2; ++a) all[static_cast<std::size_t>(a)] = a;
    w.set(all, Expr::c(1.0));
    return w;
}

/// Wave-divergence via div(Y) Omega = d~(i_Y Omega).
inline Expr wave_divergence(const WaveVectorField& Y, const PhysicalConstants& consts) {
    if (Y.mentions_r())
        throw std::invalid_argument("wave_divergence: components must not mention r");
    WaveForm contracted = interior(Y, schrodinger_volume(Y.n));
    WaveForm result = wave_d(contracted, consts);
    FormIndex all(static_cast<std::size_t>(Y.n + 2));
    for (int a = 0; a < Y.n + 2; ++a) all[static_cast<std::size_t>(a)] = a;
    return result.get(all);
}

/// The Laplace operator of the invariant metric: div(grad psi).  Equals
/// sum_k d^2 psi/dy_k^2 + (2 i m/hbar) d psi/dt on representatives.
inline Expr schrodinger_laplace(const Expr& psi, int n, const PhysicalConstants& consts) {
    if (psi.uses_var(VR))
        throw std::invalid_argument("schrodinger_laplace: psi must not mention r");
    return wave_divergence(wave_gradient(psi, n, consts), consts);
}

/// First-order operator of a Schrodinger vector field:
///   psi -> sum f_k d psi/dy_k + g d psi/dt + (i m/hbar) h psi.
inline Expr schrodinger_operator_of_field(const WaveVectorField& X, const Expr& psi,
                                          const PhysicalConstants& consts) {
    Expr out = Expr::c(0.0);
    for (int k = 0; k < X.n; ++k)
        out = out + X.f[static_cast<std::size_t>(k)] * psi.diff(k + 1);
    out = out + X.g * psi.diff(VT);
    out = out + Expr::c(Complex(0.0, consts.m / consts.hbar)) * X.h * psi;
    return out;
}

/// Compare two forms coefficientwise by randomized evaluation.
inline bool forms_equal(const WaveForm& a, const WaveForm& b, double tol = 1e-9,
                        std::uint64_t seed = 0x5eed5eedULL) {
    if (a.n() != b.n() || a.degree() != b.degree()) return false;
    std::set<FormIndex> keys;
    for (const auto& [idx, e] : a.coefficients()) keys.insert(idx);
    for (const auto& [idx, e] : b.coefficients()) keys.insert(idx);
    EqualOptions opt;
    opt.tol = tol;
    opt.seed = seed;
    for (const auto& idx : keys)
        if (!equal(a.get(idx), b.get(idx), opt)) return false;
    return true;
}

} // namespace schrod
