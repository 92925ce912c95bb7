// Acceptance suite: one PASS/FAIL line per criterion, each with the measured
// numbers and wall time. Exit status is nonzero when any criterion fails.

#include "su11/fock_oracle.hpp"
#include "su11/moments.hpp"
#include "su11/observables.hpp"
#include "su11/optimizer.hpp"
#include "su11/qfi.hpp"
#include "su11/validate.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace su11;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> run;
};

InterferometerParams make(unsigned m, double t, double g, double alpha, double T, double phi = 1.0) {
    InterferometerParams p;
    p.m = m;
    p = p.with_t(t);
    p.g = g;
    p.alpha = alpha;
    p.T = T;
    p.phi = phi;
    return p;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Grid shared by the oracle-equivalence criteria, in a fixed order.
std::vector<InterferometerParams> oracle_grid() {
    std::vector<InterferometerParams> g;
    for (unsigned m : {0u, 1u, 2u, 3u})
        for (double t : {0.0, 0.5, 1.0})
            for (double gain : {0.5, 1.0})
                for (double a : {0.5, 1.0, 2.0})
                    for (double T : {0.7, 1.0}) g.push_back(make(m, t, gain, a, T));
    return g;
}

std::vector<QIndex> indices(unsigned m) {
    std::vector<QIndex> out;
    for (unsigned a = 0; a <= 4; ++a)
        for (unsigned b = 0; a + b <= 4; ++b)
            for (unsigned c = 0; a + b + c <= 4; ++c)
                for (unsigned d = 0; a + b + c + d <= 4; ++d) out.push_back({m, a, b, c, d});
    return out;
}

// Δφ minimized over the working point on the positive half of the fringe
// (the curve is even in φ).
OptimizationResult best_phi(const InterferometerParams& p) { return optimize_phi(p, 1e-3, 1.5, 301, 1e-7); }

Outcome standard_optimum() {
    const auto r = best_phi(make(0, 0, 1, 1, 1));
    const bool ok = std::abs(r.value - 0.25) <= 0.03 && std::abs(std::abs(r.argmin) - 0.7) <= 0.1;
    return {ok, fmt("min dphi = %.4f at |phi*| = %.3f; target 0.25 +- 0.03 at 0.7 +- 0.1", r.value, std::abs(r.argmin))};
}

Outcome lpso_optimum() {
    const auto a = best_phi(make(1, 0, 1, 1, 1));
    const auto b = best_phi(make(1, 1, 1, 1, 1));
    const double best = std::min(a.value, b.value);
    return {std::abs(best - 0.18) <= 0.03,
            fmt("mode a %.4f (phi* %.3f), mode b %.4f (phi* %.3f); best %.4f, target 0.18 +- 0.03", a.value,
                a.argmin, b.value, b.argmin, best)};
}

Outcome dpso_envelope() {
    const double standard = phase_sensitivity(make(0, 0, 1, 1, 1));
    bool ok = true;
    std::ostringstream os;
    os << "standard " << fmt("%.4f", standard) << ";";
    for (unsigned m : {1u, 2u, 3u}) {
        const auto p = make(m, 0, 1, 1, 1);
        const auto r = optimize_dpso_t(p, TObjective::Sensitivity);
        const double e0 = phase_sensitivity(p.with_t(0.0)), e1 = phase_sensitivity(p.with_t(1.0));
        const bool here = r.value <= std::min(e0, e1) + 1e-12 && r.value < standard;
        ok = ok && here;
        os << fmt(" m=%u: min_t %.4f (t*=%.3f) vs t=0 %.4f, t=1 %.4f;", m, r.value, r.argmin, e0, e1);
    }
    return {ok, os.str()};
}

Outcome q_oracle() {
    double worst = 0.0;
    std::string where;
    std::size_t n = 0;
    for (const auto& p : oracle_grid()) {
        const auto idx = indices(p.m);
        const auto ref = fock::oracle_q_moments(idx, p);
        for (std::size_t k = 0; k < idx.size(); ++k, ++n) {
            const double d = rel(q_moment(idx[k], p), ref.value[k]);
            if (d > worst) {
                worst = d;
                where = p.describe();
            }
        }
    }
    return {worst <= 1e-8, fmt("%zu moments, max rel err %.2e (at %s)", n, worst, where.c_str())};
}

Outcome sensitivity_oracle() {
    const auto grid = oracle_grid();
    const std::size_t count = 40;
    double worst = 0.0;
    std::string where;
    for (std::size_t i = 0; i < count; ++i) {
        const auto& p = grid[i * grid.size() / count];
        const double phis[] = {0.5, 1.0};
        const auto ref = fock::oracle_sensitivities(p, phis);
        for (int j = 0; j < 2; ++j) {
            const double d = rel(phase_sensitivity(p.with_phi(phis[j])), ref.value[j]);
            if (d > worst) {
                worst = d;
                where = p.with_phi(phis[j]).describe();
            }
        }
    }
    return {worst <= 1e-6, fmt("80 comparisons, max rel err %.2e (at %s)", worst, where.c_str())};
}

Outcome qfi_consistency() {
    double worst_var = 0.0, worst_ovl = 0.0;
    std::size_t n = 0;
    for (const auto& p : oracle_grid()) {
        if (p.T != 1.0) continue;
        const auto ref = fock::oracle_qfi_pure(p, 1e-3);
        const double f = qfi_ideal(p);
        worst_var = std::max(worst_var, rel(f, ref.value.variance_route));
        worst_ovl = std::max(worst_ovl, rel(f, ref.value.overlap_route));
        ++n;
    }
    return {worst_var <= 1e-8 && worst_ovl <= 1e-3,
            fmt("%zu points, variance route %.2e (<= 1e-8), overlap route %.2e (<= 1e-3)", n, worst_var, worst_ovl)};
}

Outcome lossy_limits() {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool ok = true;
    double worst_eta1 = 0.0;
    for (int i = 0; i < 10; ++i) {
        auto p = make(static_cast<unsigned>(i % 4), u(rng), 0.2 + 1.3 * u(rng), 0.2 + 2.8 * u(rng), 1.0);
        const double f = qfi_ideal(p);
        p.eta = 1.0;
        worst_eta1 = std::max(worst_eta1, std::abs(qfi_lossy(p) - f) / f);
        p.eta = 0.0;
        ok = ok && qfi_lossy(p) == 0.0;
        double prev = -1.0;
        for (int k = 0; k < 50; ++k) {
            p.eta = k / 49.0;
            const double fl = qfi_lossy(p);
            ok = ok && fl >= prev;
            prev = fl;
        }
    }
    ok = ok && worst_eta1 <= 1e-12;
    return {ok, fmt("10 random points: |F_L(1) - F|/F <= %.1e, F_L(0) = 0 and nondecreasing: %s", worst_eta1,
                    ok ? "yes" : "no")};
}

Outcome cramer_rao_ordering() {
    bool crb = true, sql = true;
    int below_sql = 0, total = 0;
    double worst_ratio = 0.0;
    for (double T : {1.0, 0.7})
        for (unsigned m : {1u, 2u, 3u})
            for (double a : {0.5, 1.0, 2.0, 3.0}) {
                auto p = make(m, 0, 1, a, T);
                const auto r = optimize_dpso_t(p, TObjective::Sensitivity);
                const auto lim = limits(p.with_t(r.argmin));
                crb = crb && lim.qcrb <= r.value;
                const bool beats = r.value < lim.sql;
                sql = sql && beats;
                below_sql += beats;
                ++total;
                worst_ratio = std::max(worst_ratio, r.value / lim.sql);
            }
    return {crb && sql, fmt("QCRB <= D-PSO dphi everywhere: %s; D-PSO below SQL at %d/%d points (max dphi/SQL %.3f)",
                            crb ? "yes" : "no", below_sql, total, worst_ratio)};
}

Outcome structural_invariants() {
    double herm = 0.0, norm_T = 0.0, imag = 0.0, sym = 0.0, opa = 0.0;
    for (const auto& p : {make(1, 0.5, 1, 1, 0.7), make(2, 1, 0.5, 2, 1), make(3, 0.3, 1, 1, 0.7)}) {
        for (const auto& idx : indices(p.m)) {
            const cplx q = q_moment(idx, p);
            herm = std::max(herm, std::abs(q - std::conj(q_moment(idx.adjoint(), p))) / std::max(1.0, std::abs(q)));
        }
        norm_T = std::max(norm_T, rel(q_moment({p.m, 0, 0, 0, 0}, p), q_moment({p.m, 0, 0, 0, 0}, p.with_T(0.3))));
        const IntensityModel model(p);
        for (double phi : {0.2, 0.7, 1.0, 1.4}) {
            const auto st = model.at(phi);
            imag = std::max(imag, st.imag_residual / std::max(1.0, st.mean_X2));
            sym = std::max(sym, std::abs(model.sensitivity(phi) - model.sensitivity(-phi)) / model.sensitivity(phi));
        }
    }
    std::mt19937 rng(5);
    std::normal_distribution<double> n(0.0, 1.0);
    const unsigned nc = 40;
    fock::TwoModeState psi(nc);
    for (unsigned a = 0; a < 8; ++a)
        for (unsigned b = 0; a + b < 8; ++b) psi(a, b) = cplx(n(rng), n(rng));
    psi.scale(1.0 / std::sqrt(psi.norm_squared()));
    const fock::TwoModeSqueezer s1(nc, 1.0, 0.0), s2(nc, 1.0, std::numbers::pi);
    const auto back = s2.apply(s1.apply(psi));
    for (std::size_t i = 0; i < psi.dim(); ++i)
        opa = std::max(opa, std::abs(back.amplitudes()[i] - psi.amplitudes()[i]));
    const bool ok = herm <= 1e-12 && norm_T <= 1e-12 && imag <= 1e-10 && sym <= 1e-9 && opa <= 1e-10;
    return {ok, fmt("hermiticity %.1e, norm T-dependence %.1e, imag(X,X2) %.1e, phi-asymmetry %.1e, "
                    "balanced OPA %.1e",
                    herm, norm_T, imag, sym, opa)};
}

Outcome printed_variance_flag() {
    ValidationOptions opt;
    opt.variance_form = VarianceForm::Printed;
    opt.quantities = {"F_L"};
    const auto report = run_validate(opt);
    std::size_t flagged = 0;
    for (const auto& r : report.rows) flagged += r.rel_delta > 1e-2;
    ValidationOptions faithful = opt;
    faithful.variance_form = VarianceForm::Standard;
    const double standard = run_validate(faithful).max_rel_delta("F_L");
    return {flagged > 0, fmt("printed variant: %zu/%zu grid points deviate > 1e-2 (max %.3f); standard variance max %.1e",
                             flagged, report.rows.size(), report.max_rel_delta("F_L"), standard)};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::set<int> only;
    app.add_option("--only", only, "run only these criterion ids")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {1, "standard-interferometer optimum", 1, standard_optimum},
        {2, "single-mode subtraction optimum", 5, lpso_optimum},
        {3, "delocalized-subtraction envelope", 30, dpso_envelope},
        {4, "Q moments vs Fock oracle", 600, q_oracle},
        {5, "sensitivity vs Fock oracle", 600, sensitivity_oracle},
        {6, "QFI consistency", 300, qfi_consistency},
        {7, "lossy-QFI limits", 60, lossy_limits},
        {8, "Cramer-Rao ordering", 120, cramer_rao_ordering},
        {9, "structural invariants", 120, structural_invariants},
        {10, "printed-variance documentation", 60, printed_variance_flag},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = dt < c.budget_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("%s criterion %d (%s): %s [%.2f s of %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    o.detail.c_str(), dt, c.budget_s, in_time ? "" : ", over budget");
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
