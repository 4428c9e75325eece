// Batch CLI: verification suites over the gauge/calculus/metric/classical
// machinery, split-step evolution with SCHWF001 snapshots, field boosts, and
// the evolve-boost vs boost-evolve covariance check.  Reports are a single
// JSON document on stdout (numbers at 17 significant digits, byte-stable for
// a fixed seed); human-readable summaries go to stderr.  Exit codes: 0 all
// checks pass, 1 a check failed, 2 configuration error.

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "schrod/expr.hpp"
#include "schrod/fields.hpp"
#include "schrod/gauge.hpp"
#include "schrod/hj.hpp"
#include "schrod/io.hpp"
#include "schrod/solver.hpp"
#include "schrod/spacetime.hpp"
#include "schrod/waveforms.hpp"

using namespace schrod;

namespace {

struct Check {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool lower_is_pass = true;  // pass iff value <= bound (else value >= bound)

    bool pass() const { return lower_is_pass ? value <= bound : value >= bound; }
};

struct CheckList {
    std::vector<Check> checks;

    void require_le(const std::string& name, double value, double bound) {
        checks.push_back({name, value, bound, true});
    }
    void require_ge(const std::string& name, double value, double bound) {
        checks.push_back({name, value, bound, false});
    }
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass()) return false;
        return true;
    }
};

JsonValue checks_to_json(const CheckList& list) {
    JsonValue arr = JsonValue::array();
    for (const auto& c : list.checks) {
        JsonValue item = JsonValue::object();
        item.set("name", JsonValue::string(c.name));
        item.set("value", JsonValue::number(c.value));
        item.set("bound", JsonValue::number(c.bound));
        item.set("op", JsonValue::string(c.lower_is_pass ? "<=" : ">="));
        item.set("pass", JsonValue::boolean(c.pass()));
        arr.push(item);
    }
    return arr;
}

void print_summary(const CheckList& list) {
    for (const auto& c : list.checks)
        std::fprintf(stderr, "%-34s %.3e %s %.1e  [%s]\n", c.name.c_str(), c.value,
                     c.lower_is_pass ? "<=" : ">=", c.bound, c.pass() ? "ok" : "FAIL");
}

Vec parse_vec(const std::string& text, int n, const char* what) {
    Vec out;
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        out.push_back(std::stod(token));
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty vector");
    if (static_cast<int>(out.size()) == 1 && n > 1) out.assign(static_cast<std::size_t>(n), out[0]);
    if (static_cast<int>(out.size()) != n)
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(n) +
                                    " components");
    return out;
}

std::vector<Observer> random_observers(std::mt19937_64& rng, int n, int count) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<Observer> out;
    for (int j = 0; j < count; ++j) {
        Vec b(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n));
        for (auto& x : b) x = u(rng);
        for (auto& x : v) x = u(rng);
        out.emplace_back(b, u(rng), v);
    }
    return out;
}

double max_abs_eval(const Expr& e, int n, std::mt19937_64& rng, int points = 20) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    for (int j = 0; j < points; ++j) {
        EvalPoint p;
        p.y.resize(static_cast<std::size_t>(std::max(n, e.max_y_index())));
        for (auto& z : p.y) z = Complex(u(rng));
        p.t = Complex(u(rng));
        p.r = Complex(u(rng));
        try {
            worst = std::max(worst, std::abs(e.eval(p)));
        } catch (const eval_error&) {
            continue;
        }
    }
    return worst;
}

std::vector<Expr> psi_corpus(int n, const PhysicalConstants& consts) {
    const double k = 1.0;
    std::vector<Expr> out = {
        Expr::c(1.0), Expr::y(1), pow(Expr::y(1), 2),
        exp(Expr::i() * Expr::c(k) * Expr::y(1)),
        exp(Expr::i() * (Expr::c(k) * Expr::y(1)
                         - Expr::c(consts.hbar * k * k / (2.0 * consts.m)) * Expr::t()))};
    if (n >= 2) out.push_back(Expr::y(2) * Expr::y(1));
    return out;
}

Expr random_poly_exp(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Expr poly = Expr::c(Complex(u(rng), u(rng)));
    for (int k = 1; k <= n; ++k)
        poly = poly + Expr::c(Complex(u(rng), u(rng))) * pow(Expr::y(k), 1 + (k % 2));
    poly = poly + Expr::c(Complex(u(rng), u(rng))) * Expr::t();
    Expr lin = Expr::c(0.0);
    for (int k = 1; k <= n; ++k) lin = lin + Expr::c(Complex(u(rng), u(rng)) * 0.5) * Expr::y(k);
    lin = lin + Expr::c(Complex(u(rng), u(rng)) * 0.5) * Expr::t();
    return poly * exp(lin);
}

// -- verify suites --------------------------------------------------------------

struct VerifyConfig {
    std::string suite;
    std::uint64_t seed = 42;
    int n = 1;
    double m = 1.0;
    double hbar = 1.0;
    double perturb = 0.0;
};

void suite_cocycle(const VerifyConfig& cfg, CheckList& list, JsonValue& reports) {
    std::mt19937_64 rng(cfg.seed);
    const PhysicalConstants consts(cfg.m, cfg.hbar);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Vec anchor(static_cast<std::size_t>(cfg.n));
    for (auto& x : anchor) x = u(rng);

    std::vector<std::array<Observer, 3>> triples;
    auto obs = random_observers(rng, cfg.n, 180);
    for (int j = 0; j + 2 < static_cast<int>(obs.size()); j += 3)
        triples.push_back({obs[static_cast<std::size_t>(j)], obs[static_cast<std::size_t>(j + 1)],
                           obs[static_cast<std::size_t>(j + 2)]});

    const Observer* mark_a = &triples[0][0];
    const Observer* mark_b = &triples[0][1];
    const double eps = cfg.perturb;
    auto strict_family = [&](const Observer& p, const Observer& q) {
        auto t = strict_transition(p, q, anchor, consts);
        if (eps != 0.0 && p.b == mark_a->b && q.b == mark_b->b)
            t = t.with_phase_perturbation(0, Complex(0.0, eps));
        return t;
    };
    auto strict_rep = check_cocycle(strict_family, triples, CocycleMode::strict, 40, cfg.seed + 1);
    reports.set("strict", cocycle_report_to_json(strict_rep));
    list.require_le("strict_coord_dev", strict_rep.max_coord_dev, 1e-9);
    list.require_le("strict_factor_dev", strict_rep.max_factor_dev, 1e-9);

    auto projective_family = [&](const Observer& p, const Observer& q) {
        return projective_transition(transition_between(p, q), consts);
    };
    auto proj_rep =
        check_cocycle(projective_family, triples, CocycleMode::projective, 40, cfg.seed + 2);
    reports.set("projective", cocycle_report_to_json(proj_rep));
    list.require_le("projective_phase_stddev", proj_rep.phase_stddev, 1e-9);
    list.require_ge("projective_nonunit_ratio", proj_rep.max_ratio_offset, 1e-6);
}

void suite_gauge_invariance(const VerifyConfig& cfg, CheckList& list) {
    std::mt19937_64 rng(cfg.seed);
    const PhysicalConstants consts(cfg.m, cfg.hbar);
    std::uniform_real_distribution<double> u(-2.0, 2.0);

    double worst_time = 0.0, worst_space = 0.0, worst_conj = 0.0;
    for (int rep = 0; rep < 6; ++rep) {
        Vec v(static_cast<std::size_t>(cfg.n));
        for (auto& x : v) x = u(rng);
        Expr F = phase_F_expr(v, consts);
        if (cfg.perturb != 0.0) F = F + Expr::c(cfg.perturb) * pow(Expr::y(1), 2);
        auto res = gauge_invariance_residual(F, Expr::c(1.0), v, consts);
        worst_time = std::max(worst_time, max_abs_eval(res.time_residual, cfg.n, rng));
        for (const auto& e : res.space_residuals)
            worst_space = std::max(worst_space, max_abs_eval(e, cfg.n, rng));

        auto T = projective_transition(GalileanTransition(v, Vec(v.size(), 0.0), 0.0), consts);
        for (const auto& psi : psi_corpus(cfg.n, consts)) {
            Expr lhs = schrodinger_operator(push_forward(T, psi), consts, cfg.n);
            Expr rhs = push_forward(T, schrodinger_operator(psi, consts, cfg.n));
            worst_conj = std::max(worst_conj, max_abs_eval(lhs - rhs, cfg.n, rng));
        }
    }
    list.require_le("time_residual", worst_time, 1e-8);
    list.require_le("space_residual", worst_space, 1e-8);
    list.require_le("operator_conjugation", worst_conj, 1e-8);
}

void suite_calculus(const VerifyConfig& cfg, CheckList& list) {
    std::mt19937_64 rng(cfg.seed);
    const PhysicalConstants consts(cfg.m, cfg.hbar);
    const Complex imh(0.0, consts.m / consts.hbar);

    // d~ d~ = 0
    double worst_dd = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const int degree = rep % (cfg.n + 3);
        WaveForm w(cfg.n, degree);
        std::vector<int> axes(static_cast<std::size_t>(cfg.n + 2));
        for (int a = 0; a < cfg.n + 2; ++a) axes[static_cast<std::size_t>(a)] = a;
        std::shuffle(axes.begin(), axes.end(), rng);
        FormIndex idx(axes.begin(), axes.begin() + degree);
        std::sort(idx.begin(), idx.end());
        w.set(idx, random_poly_exp(rng, cfg.n));
        WaveForm dd = wave_d(wave_d(w, consts), consts);
        for (const auto& [jdx, e] : dd.coefficients())
            worst_dd = std::max(worst_dd, max_abs_eval(e, cfg.n, rng));
    }
    list.require_le("dtilde_squared", worst_dd, 1e-9);

    // Laplace pipeline vs coordinate formula vs free operator
    double worst_lap = 0.0, worst_free = 0.0, worst_grad = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        Expr psi = random_poly_exp(rng, cfg.n);
        Expr lap = schrodinger_laplace(psi, cfg.n, consts);
        Expr coords = Expr::c(2.0 * imh) * psi.diff(VT);
        for (int k = 1; k <= cfg.n; ++k) coords = coords + psi.diff(k).diff(k);
        worst_lap = std::max(worst_lap, max_abs_eval(lap - coords, cfg.n, rng));

        Expr scaled = Expr::c(consts.hbar * consts.hbar / (2.0 * consts.m)) * lap;
        worst_free = std::max(worst_free,
                              max_abs_eval(scaled - schrodinger_operator(psi, consts, cfg.n),
                                           cfg.n, rng));

        auto X = wave_gradient(psi, cfg.n, consts);
        WaveForm lhs = interior_with_metric(X, schrodinger_metric(cfg.n, consts));
        WaveForm rhs = wave_d(WaveForm::function(cfg.n, psi), consts);
        WaveForm diff = lhs - rhs;
        for (const auto& [jdx, e] : diff.coefficients())
            worst_grad = std::max(worst_grad, max_abs_eval(e, cfg.n, rng));
    }
    list.require_le("laplace_coordinates", worst_lap, 1e-9);
    list.require_le("laplace_vs_free_operator", worst_free, 1e-9);
    list.require_le("gradient_consistency", worst_grad, 1e-9);

    // homogeneity correspondence and the conjugated-differential identity
    double worst_field = 0.0, worst_witten = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        WaveVectorField X(cfg.n);
        for (int k = 0; k < cfg.n; ++k)
            X.f[static_cast<std::size_t>(k)] = random_poly_exp(rng, cfg.n);
        X.g = random_poly_exp(rng, cfg.n);
        X.h = random_poly_exp(rng, cfg.n);
        Expr psi = random_poly_exp(rng, cfg.n);
        Expr ext = exp(Expr::c(imh) * Expr::r());
        Expr lifted = psi * ext;
        Expr as_derivation = X.g * lifted.diff(VT) + X.h * lifted.diff(VR);
        for (int k = 0; k < cfg.n; ++k)
            as_derivation = as_derivation + X.f[static_cast<std::size_t>(k)] * lifted.diff(k + 1);
        Expr through = schrodinger_operator_of_field(X, psi, consts) * ext;
        worst_field = std::max(worst_field, max_abs_eval(as_derivation - through, cfg.n, rng));

        WaveForm lhs = wave_d(WaveForm::function(cfg.n, psi), consts);
        WaveForm rhs =
            exterior_d(WaveForm::function(cfg.n, lifted)).scaled(exp(Expr::c(-imh) * Expr::r()));
        WaveForm diff = lhs - rhs;
        for (const auto& [jdx, e] : diff.coefficients())
            worst_witten = std::max(worst_witten, max_abs_eval(e, cfg.n, rng));
    }
    list.require_le("operator_correspondence", worst_field, 1e-9);
    list.require_le("witten_form", worst_witten, 1e-9);
}

void suite_metric(const VerifyConfig& cfg, CheckList& list) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);

    Metric base = schrodinger_metric(cfg.n);
    if (cfg.perturb != 0.0) {
        Vec B(static_cast<std::size_t>(cfg.n), 0.0);
        B[0] = cfg.perturb;
        base = invariant_metric_candidate(cfg.n, B, 0.0, 1.0);
    }

    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        Vec v(static_cast<std::size_t>(cfg.n)), w(static_cast<std::size_t>(cfg.n));
        for (auto& x : v) x = u(rng);
        for (auto& x : w) x = u(rng);
        worst = std::max(worst,
                         metric_invariance_residual(base, GalileanTransition(v, w, u(rng))));
    }
    list.require_le("invariance_residual", worst, 1e-12);

    // single-parameter detectors at epsilon = 1e-3
    const double eps = 1e-3;
    auto detect = [&](const Metric& M) {
        double best = 0.0;
        for (double vx : {1.0, -1.0, 0.5}) {
            Vec v(static_cast<std::size_t>(cfg.n), 0.0);
            v[0] = vx;
            best = std::max(best, metric_invariance_residual(
                                      M, GalileanTransition(v, Vec(v.size(), 0.0), 0.0)));
        }
        return best;
    };
    for (int k = 0; k < cfg.n; ++k) {
        Vec B(static_cast<std::size_t>(cfg.n), 0.0);
        B[static_cast<std::size_t>(k)] = eps;
        list.require_ge("detect_B" + std::to_string(k + 1),
                        detect(invariant_metric_candidate(cfg.n, B, 0.0, 1.0)), 1e-4);
    }
    list.require_ge("detect_C",
                    detect(invariant_metric_candidate(
                        cfg.n, Vec(static_cast<std::size_t>(cfg.n), 0.0), eps, 1.0)),
                    1e-4);
    list.require_ge("detect_D",
                    detect(invariant_metric_candidate(
                        cfg.n, Vec(static_cast<std::size_t>(cfg.n), 0.0), 0.0, 1.0 + eps)),
                    1e-4);
}

void suite_hj(const VerifyConfig& cfg, CheckList& list, JsonValue& reports) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_real_distribution<double> tsmall(-0.3, 0.3);
    const double m = cfg.m;
    Vec anchor(static_cast<std::size_t>(cfg.n));
    for (auto& x : anchor) x = u(rng);

    double worst_add = 0.0, worst_exp = 0.0;
    auto obs = random_observers(rng, cfg.n, 90);
    for (int j = 0; j + 2 < static_cast<int>(obs.size()); j += 3) {
        const auto& a = obs[static_cast<std::size_t>(j)];
        const auto& b = obs[static_cast<std::size_t>(j + 1)];
        const auto& c = obs[static_cast<std::size_t>(j + 2)];
        auto t_ab = additive_transition(a, b, anchor, m);
        if (cfg.perturb != 0.0) t_ab.aux_v[0] += cfg.perturb;  // break anchor coherence
        auto t_bc = additive_transition(b, c, anchor, m);
        auto t_ac = additive_transition(a, c, anchor, m);
        auto lifted = exponentiate(t_ab, cfg.hbar);
        auto strict = strict_transition(a, b, anchor, PhysicalConstants(m, cfg.hbar));
        for (int p = 0; p < 10; ++p) {
            Vec y(static_cast<std::size_t>(cfg.n));
            for (auto& x : y) x = u(rng);
            const double t = u(rng);
            auto [p1, s1] = t_ab.apply_to(y, t, 0.0);
            auto [p2, s2] = t_bc.apply_to(p1.y, p1.t, s1);
            auto [p3, s3] = t_ac.apply_to(y, t, 0.0);
            worst_add = std::max(worst_add, std::abs(s2 - s3));
            worst_exp =
                std::max(worst_exp, std::abs(lifted.factor_at(y, t) - strict.factor_at(y, t)));
        }
    }
    list.require_le("additive_cocycle", worst_add, 1e-10);
    list.require_le("exponentiate_vs_strict", worst_exp, 1e-12);

    // free Hamilton-Jacobi solutions and their covariance
    auto H = free_hamiltonian(m);
    std::vector<SpacetimePoint> pts;
    for (int j = 0; j < 40; ++j) {
        Vec y(static_cast<std::size_t>(cfg.n));
        for (auto& x : y) x = u(rng);
        pts.push_back({y, 1.0 + 0.5 * (1.0 + std::sin(double(j)))});
    }
    Vec p0(static_cast<std::size_t>(cfg.n));
    for (auto& x : p0) x = u(rng);
    Expr plane = Expr::c(0.0);
    for (int k = 1; k <= cfg.n; ++k)
        plane = plane + Expr::c(p0[static_cast<std::size_t>(k - 1)]) * Expr::y(k);
    plane = plane - Expr::c(norm_sq(p0) / (2.0 * m)) * Expr::t();
    Expr spray = Expr::c(0.0);
    for (int k = 1; k <= cfg.n; ++k) spray = spray + pow(Expr::y(k), 2);
    spray = Expr::c(m / 2.0) * spray / Expr::t();

    double worst_res = 0.0, worst_cov = 0.0, worst_disp = 0.0;
    JsonValue residual_reports = JsonValue::object();
    const char* action_names[2] = {"plane", "spreading"};
    int action_index = 0;
    for (const Expr& action : {plane, spray}) {
        auto rep = hj_residual(action, H, pts, cfg.n);
        residual_reports.set(action_names[action_index++], hj_report_to_json(rep));
        worst_res = std::max(worst_res, rep.max_residual);
        Vec v(static_cast<std::size_t>(cfg.n)), w(static_cast<std::size_t>(cfg.n));
        for (auto& x : v) x = u(rng);
        for (auto& x : w) x = u(rng);
        GalileanTransition data(v, w, tsmall(rng));
        Vec aux(static_cast<std::size_t>(cfg.n));
        for (auto& x : aux) x = u(rng);
        Expr moved = section_transform(action, data, aux, m);
        worst_cov = std::max(worst_cov, hj_residual(moved, H, pts, cfg.n).max_residual);
    }
    reports.set("hj_residuals", residual_reports);
    for (int rep = 0; rep < 50; ++rep) {
        Vec p(static_cast<std::size_t>(cfg.n)), v(static_cast<std::size_t>(cfg.n)),
            w(static_cast<std::size_t>(cfg.n));
        for (auto& x : p) x = u(rng);
        for (auto& x : v) x = u(rng);
        for (auto& x : w) x = u(rng);
        PhasePoint q{w, u(rng), p, norm_sq(p) / (2.0 * m)};
        auto moved = phase_transform(q, v, w, u(rng), m);
        worst_disp = std::max(worst_disp, std::abs(moved.h - norm_sq(moved.p) / (2.0 * m)));
    }
    list.require_le("hj_residual", worst_res, 1e-10);
    list.require_le("section_covariance", worst_cov, 1e-9);
    list.require_le("dispersion_preserved", worst_disp, 1e-12);
}

int run_verify(const VerifyConfig& cfg) {
    CheckList list;
    JsonValue reports = JsonValue::object();
    if (cfg.suite == "cocycle") suite_cocycle(cfg, list, reports);
    else if (cfg.suite == "gauge-invariance") suite_gauge_invariance(cfg, list);
    else if (cfg.suite == "calculus") suite_calculus(cfg, list);
    else if (cfg.suite == "metric") suite_metric(cfg, list);
    else if (cfg.suite == "hj") suite_hj(cfg, list, reports);
    else throw std::invalid_argument("unknown suite: " + cfg.suite);

    JsonValue doc = JsonValue::object();
    doc.set("command", JsonValue::string("verify"));
    doc.set("suite", JsonValue::string(cfg.suite));
    doc.set("seed", JsonValue::integer(static_cast<long long>(cfg.seed)));
    doc.set("n", JsonValue::integer(cfg.n));
    doc.set("m", JsonValue::number(cfg.m));
    doc.set("hbar", JsonValue::number(cfg.hbar));
    doc.set("perturb", JsonValue::number(cfg.perturb));
    doc.set("reports", reports);
    doc.set("checks", checks_to_json(list));
    doc.set("pass", JsonValue::boolean(list.all_pass()));
    std::fputs((doc.dump() + "\n").c_str(), stdout);
    print_summary(list);
    return list.all_pass() ? 0 : 1;
}

// -- evolve / boost / covariance ---------------------------------------------------

struct EvolveCli {
    std::string initial = "exp(-y1^2/2)";
    std::string potential = "0";
    int n = 1;
    int points = 1024;
    double extent = 80.0;
    double dt = 1e-3;
    int steps = 2000;
    double t0 = 0.0;
    double m = 1.0;
    double hbar = 1.0;
    std::string snapshots;  // comma-separated step indices
    std::string out_prefix;
    bool allow_complex = false;
};

int run_evolve(const EvolveCli& cli) {
    const PhysicalConstants consts(cli.m, cli.hbar);
    GridSpec spec = GridSpec::uniform(cli.n, cli.points, cli.extent);
    Expr initial = parse(cli.initial);
    EvolutionConfig cfg;
    cfg.dt = cli.dt;
    cfg.steps = cli.steps;
    cfg.potential = parse(cli.potential);
    cfg.allow_complex_potential = cli.allow_complex;

    std::vector<int> snaps;
    if (!cli.snapshots.empty()) {
        std::stringstream ss(cli.snapshots);
        std::string token;
        while (std::getline(ss, token, ',')) snaps.push_back(std::stoi(token));
    } else {
        snaps = {0, cli.steps};
    }

    WaveField f0 = sample(initial, spec, cli.t0, Observer::rest(cli.n), consts);
    std::vector<EvolveLogEntry> log;
    auto slices = evolve(f0, cfg, snaps, &log);

    const double norm0 = l2_norm(f0);
    JsonValue snaparr = JsonValue::array();
    for (std::size_t j = 0; j < slices.size(); ++j) {
        JsonValue item = JsonValue::object();
        item.set("step", JsonValue::integer(log[j].step));
        item.set("t", JsonValue::number(log[j].t));
        item.set("norm", JsonValue::number(log[j].norm));
        item.set("max_abs", JsonValue::number(log[j].max_abs));
        if (!cli.out_prefix.empty()) {
            const std::string path =
                cli.out_prefix + "_" + std::to_string(log[j].step) + ".swf";
            write_field(slices[j], path);
            item.set("file", JsonValue::string(path));
        }
        snaparr.push(item);
    }

    CheckList list;
    list.require_le("norm_deviation",
                    norm0 > 0.0 ? std::abs(log.back().norm - norm0) : 0.0, 1e-10);

    JsonValue doc = JsonValue::object();
    doc.set("command", JsonValue::string("evolve"));
    doc.set("initial", JsonValue::string(cli.initial));
    doc.set("potential", JsonValue::string(cli.potential));
    doc.set("dt", JsonValue::number(cli.dt));
    doc.set("steps", JsonValue::integer(cli.steps));
    doc.set("snapshots", snaparr);
    doc.set("checks", checks_to_json(list));
    doc.set("pass", JsonValue::boolean(list.all_pass()));
    std::fputs((doc.dump() + "\n").c_str(), stdout);
    print_summary(list);
    return list.all_pass() ? 0 : 1;
}

struct BoostCli {
    std::string in_path;
    std::string out_path;
    std::string v = "0";
    std::string w = "0";
    double t0 = 0.0;
    bool no_gauge_phase = false;
};

int run_boost(const BoostCli& cli) {
    WaveField f = read_field(cli.in_path);
    const int n = f.spec.n;
    GalileanTransition g(parse_vec(cli.v, n, "--v"), parse_vec(cli.w, n, "--w"), cli.t0);
    const GaugeMap T = cli.no_gauge_phase ? coordinate_only_map(g, f.consts)
                                          : projective_transition(g, f.consts);
    BoostDiagnostics diag;
    WaveField out = boost_field(T, f, &diag);
    write_field(out, cli.out_path);
    if (diag.wraparound_warning)
        std::fprintf(stderr,
                     "warning: wave-packet support reaches the periodic boundary "
                     "(edge/max amplitude %.3e); shift wraps around\n",
                     diag.boundary_ratio);

    const double norm_in = l2_norm(f), norm_out = l2_norm(out);
    CheckList list;
    list.require_le("norm_change", std::abs(norm_out - norm_in), 1e-10 * std::max(1.0, norm_in));

    JsonValue doc = JsonValue::object();
    doc.set("command", JsonValue::string("boost"));
    doc.set("in", JsonValue::string(cli.in_path));
    doc.set("out", JsonValue::string(cli.out_path));
    doc.set("g", transition_to_json(g));
    doc.set("gauge_phase", JsonValue::boolean(!cli.no_gauge_phase));
    doc.set("t_out", JsonValue::number(out.t));
    doc.set("norm_in", JsonValue::number(norm_in));
    doc.set("norm_out", JsonValue::number(norm_out));
    doc.set("boundary_ratio", JsonValue::number(diag.boundary_ratio));
    doc.set("checks", checks_to_json(list));
    doc.set("pass", JsonValue::boolean(list.all_pass()));
    std::fputs((doc.dump() + "\n").c_str(), stdout);
    print_summary(list);
    return list.all_pass() ? 0 : 1;
}

struct CovarianceCli {
    int n = 1;
    int points = 1024;
    double extent = 80.0;
    double sigma = 1.0;
    std::string v = "1";
    std::string w = "0";
    double t0 = 0.0;
    double dt = 1e-3;
    double total_time = 2.0;
    std::string potential = "0";
    double m = 1.0;
    double hbar = 1.0;
    double tol = 1e-6;
    bool no_gauge_phase = false;
};

int run_covariance(const CovarianceCli& cli) {
    const PhysicalConstants consts(cli.m, cli.hbar);
    GridSpec spec = GridSpec::uniform(cli.n, cli.points, cli.extent);
    GalileanTransition g(parse_vec(cli.v, cli.n, "--v"), parse_vec(cli.w, cli.n, "--w"), cli.t0);

    WaveField f0 =
        sample(analytic_free_gaussian(cli.sigma, Vec(static_cast<std::size_t>(cli.n), 0.0),
                                      Vec(static_cast<std::size_t>(cli.n), 0.0), consts),
               spec, 0.0, Observer::rest(cli.n), consts);
    EvolutionConfig cfg;
    cfg.dt = cli.dt;
    cfg.steps = static_cast<int>(std::lround(cli.total_time / cli.dt));
    cfg.potential = parse(cli.potential);

    auto rep = covariance_check(f0, g, cfg, !cli.no_gauge_phase);

    CheckList list;
    list.require_le("relative_distance", rep.relative_distance, cli.tol);

    JsonValue doc = JsonValue::object();
    doc.set("command", JsonValue::string("covariance"));
    doc.set("g", transition_to_json(g));
    doc.set("gauge_phase", JsonValue::boolean(!cli.no_gauge_phase));
    doc.set("dt", JsonValue::number(cli.dt));
    doc.set("steps", JsonValue::integer(cfg.steps));
    doc.set("relative_distance", JsonValue::number(rep.relative_distance));
    doc.set("tolerance", JsonValue::number(cli.tol));
    doc.set("boundary_ratio", JsonValue::number(rep.boost_diag.boundary_ratio));
    doc.set("checks", checks_to_json(list));
    doc.set("pass", JsonValue::boolean(list.all_pass()));
    std::fputs((doc.dump() + "\n").c_str(), stdout);
    print_summary(list);
    return list.all_pass() ? 0 : 1;
}

// Apply JSON config values as defaults for options the user did not pass.
template <typename T>
void config_default(const CLI::App* cmd, const nlohmann::json& j, const std::string& flag,
                    const std::string& key, T& target) {
    if (!j.contains(key)) return;
    const CLI::Option* opt = cmd->get_option_no_throw("--" + flag);
    if (opt != nullptr && opt->count() > 0) return;  // explicit flag wins
    target = j.at(key).get<T>();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frame-covariant Schrodinger toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its values");

    VerifyConfig vc;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", vc.suite,
                       "one of: cocycle, gauge-invariance, calculus, metric, hj")
        ->required();
    verify->add_option("--seed", vc.seed, "RNG seed");
    verify->add_option("--n", vc.n, "spatial dimension")->check(CLI::Range(1, 3));
    verify->add_option("--m", vc.m, "mass");
    verify->add_option("--hbar", vc.hbar, "reduced Planck constant");
    verify->add_option("--perturb", vc.perturb, "inject a defect of this size (suite must fail)");

    EvolveCli ec;
    auto* evolve_cmd = app.add_subcommand("evolve", "split-step evolution with snapshots");
    evolve_cmd->add_option("--initial", ec.initial, "initial wave function expression");
    evolve_cmd->add_option("--potential", ec.potential, "potential expression U(y, t)");
    evolve_cmd->add_option("--n", ec.n, "spatial dimension")->check(CLI::Range(1, 3));
    evolve_cmd->add_option("--points", ec.points, "grid points per axis (power of two)");
    evolve_cmd->add_option("--extent", ec.extent, "box length per axis");
    evolve_cmd->add_option("--dt", ec.dt, "time step");
    evolve_cmd->add_option("--steps", ec.steps, "number of steps");
    evolve_cmd->add_option("--t0", ec.t0, "initial slice time");
    evolve_cmd->add_option("--m", ec.m, "mass");
    evolve_cmd->add_option("--hbar", ec.hbar, "reduced Planck constant");
    evolve_cmd->add_option("--snapshots", ec.snapshots, "comma-separated step indices");
    evolve_cmd->add_option("--out", ec.out_prefix, "output file prefix for SCHWF001 snapshots");
    evolve_cmd->add_flag("--allow-complex-potential", ec.allow_complex,
                         "permit complex potentials (no norm conservation)");

    BoostCli bc;
    auto* boost_cmd = app.add_subcommand("boost", "gauge-boost a stored field");
    boost_cmd->add_option("--in", bc.in_path, "input SCHWF001 file")->required();
    boost_cmd->add_option("--out", bc.out_path, "output SCHWF001 file")->required();
    boost_cmd->add_option("--v", bc.v, "relative velocity (comma separated)");
    boost_cmd->add_option("--w", bc.w, "spatial offset");
    boost_cmd->add_option("--t0", bc.t0, "time offset");
    boost_cmd->add_flag("--no-gauge-phase", bc.no_gauge_phase,
                        "diagnostic: coordinate shift without the phase factor");

    CovarianceCli cc;
    auto* cov_cmd = app.add_subcommand("covariance", "evolve-boost vs boost-evolve check");
    cov_cmd->add_option("--n", cc.n, "spatial dimension")->check(CLI::Range(1, 3));
    cov_cmd->add_option("--points", cc.points, "grid points per axis");
    cov_cmd->add_option("--extent", cc.extent, "box length per axis");
    cov_cmd->add_option("--sigma", cc.sigma, "initial Gaussian width");
    cov_cmd->add_option("--v", cc.v, "boost velocity");
    cov_cmd->add_option("--w", cc.w, "spatial offset");
    cov_cmd->add_option("--t0", cc.t0, "time offset");
    cov_cmd->add_option("--dt", cc.dt, "time step");
    cov_cmd->add_option("--T", cc.total_time, "total evolution time");
    cov_cmd->add_option("--potential", cc.potential, "potential expression");
    cov_cmd->add_option("--m", cc.m, "mass");
    cov_cmd->add_option("--hbar", cc.hbar, "reduced Planck constant");
    cov_cmd->add_option("--tol", cc.tol, "pass tolerance on the relative distance");
    cov_cmd->add_flag("--no-gauge-phase", cc.no_gauge_phase,
                      "diagnostic: omit the gauge phase (check must fail)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::invalid_argument("cannot open config: " + config_path);
            nlohmann::json j = nlohmann::json::parse(in);
            if (verify->parsed()) {
                config_default(verify, j, "suite", "suite", vc.suite);
                config_default(verify, j, "seed", "seed", vc.seed);
                config_default(verify, j, "n", "n", vc.n);
                config_default(verify, j, "m", "m", vc.m);
                config_default(verify, j, "hbar", "hbar", vc.hbar);
                config_default(verify, j, "perturb", "perturb", vc.perturb);
            } else if (evolve_cmd->parsed()) {
                config_default(evolve_cmd, j, "initial", "initial", ec.initial);
                config_default(evolve_cmd, j, "potential", "potential", ec.potential);
                config_default(evolve_cmd, j, "n", "n", ec.n);
                config_default(evolve_cmd, j, "points", "points", ec.points);
                config_default(evolve_cmd, j, "extent", "extent", ec.extent);
                config_default(evolve_cmd, j, "dt", "dt", ec.dt);
                config_default(evolve_cmd, j, "steps", "steps", ec.steps);
                config_default(evolve_cmd, j, "snapshots", "snapshots", ec.snapshots);
                config_default(evolve_cmd, j, "out", "out", ec.out_prefix);
                config_default(evolve_cmd, j, "m", "m", ec.m);
                config_default(evolve_cmd, j, "hbar", "hbar", ec.hbar);
            } else if (boost_cmd->parsed()) {
                config_default(boost_cmd, j, "v", "v", bc.v);
                config_default(boost_cmd, j, "w", "w", bc.w);
                config_default(boost_cmd, j, "t0", "t0", bc.t0);
            } else if (cov_cmd->parsed()) {
                config_default(cov_cmd, j, "n", "n", cc.n);
                config_default(cov_cmd, j, "points", "points", cc.points);
                config_default(cov_cmd, j, "extent", "extent", cc.extent);
                config_default(cov_cmd, j, "sigma", "sigma", cc.sigma);
                config_default(cov_cmd, j, "v", "v", cc.v);
                config_default(cov_cmd, j, "w", "w", cc.w);
                config_default(cov_cmd, j, "t0", "t0", cc.t0);
                config_default(cov_cmd, j, "dt", "dt", cc.dt);
                config_default(cov_cmd, j, "T", "T", cc.total_time);
                config_default(cov_cmd, j, "potential", "potential", cc.potential);
                config_default(cov_cmd, j, "tol", "tol", cc.tol);
            }
        }

        if (verify->parsed()) return run_verify(vc);
        if (evolve_cmd->parsed()) return run_evolve(ec);
        if (boost_cmd->parsed()) return run_boost(bc);
        if (cov_cmd->parsed()) return run_covariance(cc);
    } catch (const parse_error& e) {
        std::fprintf(stderr, "expression error: %s\n", e.what());
        return 2;
    } catch (const io_error& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 2;
    } catch (const solver_error& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
