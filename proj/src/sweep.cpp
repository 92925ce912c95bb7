#include "su11/sweep.hpp"

#include "su11/errors.hpp"
#include "su11/fock_oracle.hpp"
#include "su11/observables.hpp"
#include "su11/optimizer.hpp"
#include "su11/qfi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

namespace su11 {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::map<std::string, ModeKind>& mode_table() {
    static const std::map<std::string, ModeKind> t{{"standard", ModeKind::Standard},
                                                   {"mode_a", ModeKind::ModeA},
                                                   {"mode_b", ModeKind::ModeB},
                                                   {"dpso", ModeKind::Dpso},
                                                   {"fixed", ModeKind::Fixed}};
    return t;
}

const std::map<std::string, Quantity>& quantity_table() {
    static const std::map<std::string, Quantity> t{{"sensitivity", Quantity::Sensitivity},
                                                   {"qfi", Quantity::Qfi},
                                                   {"qfi_lossy", Quantity::QfiLossy},
                                                   {"limits", Quantity::Limits}};
    return t;
}

void set_variable(InterferometerParams& p, const std::string& var, double x) {
    if (var == "phi") p.phi = x;
    else if (var == "alpha") p.alpha = x;
    else if (var == "g") p.g = x;
    else if (var == "T") p.T = x;
    else if (var == "eta") p.eta = x;
    else if (var == "t") {
        p.t = x;
        p.s = 1.0 - x;
    } else
        throw InvalidParameter("unknown sweep variable '" + var + "'");
}

} // namespace

ModeKind parse_mode(const std::string& name) {
    const auto it = mode_table().find(name);
    if (it == mode_table().end()) throw InvalidParameter("unknown mode '" + name + "'");
    return it->second;
}

std::string mode_name(ModeKind kind) {
    for (const auto& [k, v] : mode_table())
        if (v == kind) return k;
    return "?";
}

Quantity parse_quantity(const std::string& name) {
    std::string key = name;
    for (auto& c : key)
        if (c == '-') c = '_';
    const auto it = quantity_table().find(key);
    if (it == quantity_table().end()) throw InvalidParameter("unknown quantity '" + name + "'");
    return it->second;
}

std::string quantity_name(Quantity q) {
    for (const auto& [k, v] : quantity_table())
        if (v == q) return k;
    return "?";
}

void SweepSpec::validate() const {
    static const std::vector<std::string> vars{"phi", "alpha", "g", "T", "eta", "t"};
    if (std::find(vars.begin(), vars.end(), variable) == vars.end())
        throw InvalidParameter("unknown sweep variable '" + variable + "'");
    if (n < 2) throw InvalidParameter("sweep needs n >= 2");
    if (!(lo < hi)) throw InvalidParameter("sweep needs lo < hi");
    if (modes.empty()) throw InvalidParameter("sweep needs at least one mode");
    if (v == 0) throw InvalidParameter("v must be positive");
    if (variable == "t")
        for (auto m : modes)
            if (m != ModeKind::Fixed) throw InvalidParameter("a t sweep only supports the fixed mode");
    if (pin_t && (*pin_t < 0.0 || *pin_t > 1.0)) throw InvalidParameter("pinned t must lie in [0, 1]");
    auto probe = base;
    set_variable(probe, variable, lo);
    probe.validate();
    set_variable(probe, variable, hi);
    probe.validate();
}

double SweepSpec::point(int i) const {
    return i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
}

std::vector<std::string> sweep_columns(const SweepSpec& spec) {
    std::vector<std::string> cols{"index", spec.variable + "_value", "mode", "m", "s", "t",
                                  "t_source", "alpha", "g", "T", "eta", "phi"};
    switch (spec.quantity) {
    case Quantity::Sensitivity: cols.push_back("delta_phi"); break;
    case Quantity::Qfi: cols.push_back("F"); break;
    case Quantity::QfiLossy: cols.push_back("F_L"); break;
    case Quantity::Limits:
        for (const char* c : {"delta_phi", "F", "F_L", "N", "qcrb", "sql", "hl"}) cols.push_back(c);
        break;
    }
    if (spec.with_oracle) cols.push_back("oracle_rel_delta");
    return cols;
}

PointResult evaluate_point(InterferometerParams params, ModeKind mode, Quantity quantity, unsigned v,
                           std::optional<double> pin_t) {
    PointResult r;
    r.t_source = "fixed";
    switch (mode) {
    case ModeKind::Standard: params.m = 0; break;
    case ModeKind::ModeA: params.s = 1.0; params.t = 0.0; break;
    case ModeKind::ModeB: params.s = 0.0; params.t = 1.0; break;
    case ModeKind::Fixed: break;
    case ModeKind::Dpso:
        if (pin_t) {
            params = params.with_t(*pin_t);
            r.t_source = "pinned";
        } else {
            const TObjective obj = quantity == Quantity::Qfi        ? TObjective::Qfi
                                   : quantity == Quantity::QfiLossy ? TObjective::QfiLossy
                                                                    : TObjective::Sensitivity;
            try {
                params = params.with_t(optimize_dpso_t(params, obj).argmin);
                r.t_source = "optimized";
            } catch (const NoFeasiblePoint&) {
                // Δφ diverges for every t (fringe extremum): report the marker.
                r.t_source = "divergent";
            }
        }
        break;
    }
    params.validate();
    r.params = params;
    r.delta_phi = r.F = r.F_L = r.N = r.qcrb = r.sql = r.hl = kNaN;
    switch (quantity) {
    case Quantity::Sensitivity: r.delta_phi = phase_sensitivity(params); break;
    case Quantity::Qfi: r.F = qfi_ideal(params); break;
    case Quantity::QfiLossy: r.F_L = qfi_lossy(params); break;
    case Quantity::Limits: {
        r.delta_phi = phase_sensitivity(params);
        const QfiReport q = limits(params, v);
        r.F = q.F_ideal;
        r.F_L = q.F_lossy;
        r.N = q.N_total;
        r.qcrb = q.qcrb;
        r.sql = q.sql;
        r.hl = q.hl;
        break;
    }
    }
    return r;
}

namespace {

double oracle_delta(const PointResult& r, Quantity q) {
    const auto& p = r.params;
    double closed = 0.0, ref = 0.0;
    switch (q) {
    case Quantity::Sensitivity:
    case Quantity::Limits:
        closed = r.delta_phi;
        ref = fock::oracle_sensitivity(p).value;
        break;
    case Quantity::Qfi:
        closed = r.F;
        ref = fock::oracle_qfi_pure(p).value.variance_route;
        break;
    case Quantity::QfiLossy:
        closed = r.F_L;
        ref = qfi_lossy_from_statistics(fock::oracle_mode_a_statistics(p).value, p.eta);
        break;
    }
    if (!std::isfinite(closed) || !std::isfinite(ref)) return closed == ref ? 0.0 : kNaN;
    return std::abs(closed - ref) / std::max(std::abs(ref), 1e-300);
}

struct Task {
    int index;
    double x;
    ModeKind mode;
    unsigned m;
};

std::vector<Cell> compute_row(const SweepSpec& spec, const Task& task) {
    InterferometerParams p = spec.base;
    set_variable(p, spec.variable, task.x);
    p.m = task.m;

    std::vector<Cell> row;
    PointResult r;
    bool degenerate = false;
    try {
        r = evaluate_point(p, task.mode, spec.quantity, spec.v, spec.pin_t);
    } catch (const DegenerateState&) {
        degenerate = true;
        r.params = p;
        if (task.mode == ModeKind::Standard) r.params.m = 0;
        r.t_source = "degenerate";
        r.delta_phi = r.F = r.F_L = r.N = r.qcrb = r.sql = r.hl = kNaN;
    }
    const auto& q = r.params;
    row = {std::int64_t{task.index}, task.x, mode_name(task.mode), std::int64_t{q.m}, q.s, q.t,
           r.t_source, q.alpha.real(), q.g, q.T, q.eta, q.phi};
    switch (spec.quantity) {
    case Quantity::Sensitivity: row.emplace_back(r.delta_phi); break;
    case Quantity::Qfi: row.emplace_back(r.F); break;
    case Quantity::QfiLossy: row.emplace_back(r.F_L); break;
    case Quantity::Limits:
        for (double d : {r.delta_phi, r.F, r.F_L, r.N, r.qcrb, r.sql, r.hl}) row.emplace_back(d);
        break;
    }
    if (spec.with_oracle) row.emplace_back(degenerate ? kNaN : oracle_delta(r, spec.quantity));
    return row;
}

} // namespace

std::vector<std::vector<Cell>> run_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<Task> tasks;
    for (int i = 0; i < spec.n; ++i) {
        const double x = spec.point(i);
        for (ModeKind mode : spec.modes) {
            if (mode == ModeKind::Standard) {
                tasks.push_back({i, x, mode, 0});
                continue;
            }
            for (unsigned m : spec.orders) tasks.push_back({i, x, mode, m});
        }
    }

    std::vector<std::vector<Cell>> rows(tasks.size());
    const unsigned jobs = std::max(1u, std::min<unsigned>(spec.jobs, static_cast<unsigned>(tasks.size())));
    if (jobs == 1) {
        for (std::size_t k = 0; k < tasks.size(); ++k) rows[k] = compute_row(spec, tasks[k]);
        return rows;
    }
    // Strided static partition; each slot is written by exactly one worker.
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t k = w; k < tasks.size(); k += jobs) rows[k] = compute_row(spec, tasks[k]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

std::vector<std::string> figure_names() {
    return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig9", "fig10", "fig11", "fig12", "fig13"};
}

SweepSpec figure_preset(const std::string& name) {
    SweepSpec s;
    s.base.g = 1.0;
    s.base.alpha = 1.0;
    s.base.T = 1.0;
    s.base.phi = 1.0;
    s.base.eta = 1.0;
    s.orders = {1, 2, 3};
    s.modes = {ModeKind::ModeA, ModeKind::ModeB, ModeKind::Dpso};
    if (name == "fig2") {
        s.variable = "phi";
        s.lo = -1.5, s.hi = 1.5, s.n = 301;
        s.modes = {ModeKind::Standard, ModeKind::ModeA, ModeKind::ModeB, ModeKind::Dpso};
    } else if (name == "fig3") {
        s.variable = "alpha";
        s.lo = 0.05, s.hi = 3.0, s.n = 60;
    } else if (name == "fig4") {
        s.variable = "g";
        s.lo = 0.05, s.hi = 1.5, s.n = 59;
    } else if (name == "fig5") {
        s.variable = "T";
        s.base.alpha = 3.0;
        s.lo = 0.0, s.hi = 1.0, s.n = 51;
    } else if (name == "fig6") {
        s.variable = "alpha";
        s.quantity = Quantity::Qfi;
        s.lo = 0.05, s.hi = 3.0, s.n = 60;
    } else if (name == "fig7") {
        s.variable = "g";
        s.quantity = Quantity::Qfi;
        s.lo = 0.05, s.hi = 1.5, s.n = 59;
    } else if (name == "fig9") {
        s.variable = "eta";
        s.quantity = Quantity::QfiLossy;
        s.base.alpha = 3.0;
        s.lo = 0.0, s.hi = 1.0, s.n = 51;
    } else if (name == "fig10") {
        s.variable = "alpha";
        s.quantity = Quantity::QfiLossy;
        s.base.eta = 0.7;
        s.lo = 0.05, s.hi = 3.0, s.n = 60;
    } else if (name == "fig11") {
        s.variable = "g";
        s.quantity = Quantity::QfiLossy;
        s.base.eta = 0.7;
        s.lo = 0.05, s.hi = 1.5, s.n = 59;
    } else if (name == "fig12" || name == "fig13") {
        s.variable = "alpha";
        s.quantity = Quantity::Limits;
        s.base.T = name == "fig12" ? 1.0 : 0.7;
        s.lo = 0.05, s.hi = 3.0, s.n = 60;
    } else if (name == "fig1" || name == "fig8") {
        throw InvalidParameter(name + " is a schematic and has no data");
    } else {
        throw InvalidParameter("unknown figure '" + name + "'");
    }
    return s;
}

} // namespace su11
