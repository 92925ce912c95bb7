#include "su11/errors.hpp"
#include "su11/optimizer.hpp"
#include "su11/output.hpp"
#include "su11/params.hpp"
#include "su11/qfi.hpp"
#include "su11/sweep.hpp"
#include "su11/validate.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kInvalid = 2, kBreach = 3, kDegenerate = 4 };

struct CommonOptions {
    su11::InterferometerParams params;
    double alpha = 1.0;
    std::optional<double> s, t, pin_t;
    std::string mode = "fixed";
    unsigned v = 1;
    std::string out;
    std::string format = "csv";
    unsigned jobs = 1;
};

struct SweepOptions {
    std::string variable = "phi";
    double lo = 0.0, hi = 1.0;
    int n = 11;
    std::vector<std::string> modes{"fixed"};
    std::vector<unsigned> orders{1};
    std::string quantity = "sensitivity";
    bool oracle = false;
    std::string figure;
};

struct ValidateOptions {
    su11::ValidationGrid grid;
    std::vector<std::string> quantities;
    bool printed_variance = false;
};

su11::InterferometerParams resolve(const CommonOptions& o) {
    su11::InterferometerParams p = o.params;
    p.alpha = o.alpha;
    if (o.s && o.t) {
        p.s = *o.s;
        p.t = *o.t;
    } else if (o.s) {
        p.s = *o.s;
        p.t = 1.0 - *o.s;
    } else if (o.t) {
        p = p.with_t(*o.t);
    }
    p.validate();
    return p;
}

class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw su11::InvalidParameter("cannot open output file '" + path + "'");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void log_params(const su11::InterferometerParams& p) {
    std::cerr << "resolved: " << p.describe() << '\n';
}

int run_point(const CommonOptions& o, su11::Quantity q) {
    const auto p = resolve(o);
    log_params(p);
    const auto mode = su11::parse_mode(o.mode);
    su11::SweepSpec spec;
    spec.quantity = q;
    spec.variable = "phi";
    const auto r = su11::evaluate_point(p, mode, q, o.v, o.pin_t);
    if (r.t_source != "fixed") std::cerr << "resolved t=" << su11::format_double(r.params.t) << " (" << r.t_source << ")\n";

    Sink sink(o.out);
    auto cols = su11::sweep_columns(spec);
    cols.erase(cols.begin(), cols.begin() + 2); // no sweep index or variable
    su11::RowWriter w(sink.stream(), su11::parse_output_format(o.format), cols);
    const auto& rp = r.params;
    std::vector<su11::Cell> row{su11::mode_name(mode), std::int64_t{rp.m}, rp.s,    rp.t, r.t_source,
                                rp.alpha.real(),      rp.g,                rp.T,    rp.eta, rp.phi};
    switch (q) {
    case su11::Quantity::Sensitivity: row.emplace_back(r.delta_phi); break;
    case su11::Quantity::Qfi: row.emplace_back(r.F); break;
    case su11::Quantity::QfiLossy: row.emplace_back(r.F_L); break;
    case su11::Quantity::Limits:
        for (double d : {r.delta_phi, r.F, r.F_L, r.N, r.qcrb, r.sql, r.hl}) row.emplace_back(d);
        break;
    }
    w.write(row);
    return kOk;
}

int run_sweep_command(const CommonOptions& o, const SweepOptions& so) {
    su11::SweepSpec spec;
    if (!so.figure.empty()) {
        spec = su11::figure_preset(so.figure);
        std::cerr << "figure " << so.figure << ": " << spec.variable << " in [" << spec.lo << ", " << spec.hi
                  << "], n=" << spec.n << ", quantity=" << su11::quantity_name(spec.quantity) << '\n';
    } else {
        spec.base = resolve(o);
        spec.variable = so.variable;
        spec.lo = so.lo;
        spec.hi = so.hi;
        spec.n = so.n;
        spec.modes.clear();
        for (const auto& m : so.modes) spec.modes.push_back(su11::parse_mode(m));
        spec.orders = so.orders;
        spec.quantity = su11::parse_quantity(so.quantity);
    }
    spec.v = o.v;
    spec.pin_t = o.pin_t;
    spec.jobs = o.jobs;
    spec.with_oracle = so.oracle;
    log_params(spec.base);
    spec.validate();

    const auto rows = su11::run_sweep(spec);
    Sink sink(o.out);
    su11::RowWriter w(sink.stream(), su11::parse_output_format(o.format), su11::sweep_columns(spec));
    for (const auto& r : rows) w.write(r);
    return kOk;
}

int run_validate_command(const CommonOptions& o, const ValidateOptions& vo) {
    su11::ValidationOptions opt;
    opt.grid = vo.grid;
    opt.quantities = vo.quantities;
    opt.jobs = o.jobs;
    opt.variance_form = vo.printed_variance ? su11::VarianceForm::Printed : su11::VarianceForm::Standard;
    const auto report = su11::run_validate(opt);

    Sink sink(o.out);
    su11::RowWriter w(sink.stream(), su11::parse_output_format(o.format), su11::validation_columns());
    for (const auto& r : report.rows) w.write(su11::validation_cells(r));
    for (const char* q : {"Q", "X", "X2", "delta_phi", "F", "F_L"})
        std::cerr << "max rel delta " << q << ": " << su11::format_double(report.max_rel_delta(q)) << '\n';
    std::size_t bad = 0;
    for (const auto& r : report.rows) bad += r.status != "ok";
    std::cerr << report.rows.size() << " comparisons, " << bad << " outside threshold\n";
    return report.breached() ? kBreach : kOk;
}

int run_optimize_t(const CommonOptions& o, const std::string& objective) {
    const auto p = resolve(o);
    log_params(p);
    const auto q = su11::parse_quantity(objective);
    const su11::TObjective kind = q == su11::Quantity::Qfi        ? su11::TObjective::Qfi
                                  : q == su11::Quantity::QfiLossy ? su11::TObjective::QfiLossy
                                  : q == su11::Quantity::Sensitivity
                                      ? su11::TObjective::Sensitivity
                                      : throw su11::InvalidParameter("objective must be sensitivity, qfi or qfi_lossy");
    const auto r = su11::optimize_dpso_t(p, kind);
    Sink sink(o.out);
    su11::RowWriter w(sink.stream(), su11::parse_output_format(o.format),
                      {"m", "alpha", "g", "T", "eta", "phi", "objective", "t_star", "value", "evaluations", "flat"});
    w.write({std::int64_t{p.m}, p.alpha.real(), p.g, p.T, p.eta, p.phi, su11::quantity_name(q), r.argmin, r.value,
             std::int64_t{r.evaluations}, std::string(r.flat ? "true" : "false")});
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SU(1,1) interferometer calculator: phase sensitivity, QFI and metrological limits"};
    app.set_config("--config", "", "key = value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    CommonOptions o;
    auto& p = o.params;
    app.add_option("--m", p.m, "subtraction order")->capture_default_str();
    app.add_option("--alpha", o.alpha, "coherent amplitude (real)")->capture_default_str();
    app.add_option("--g", p.g, "amplifier gain")->capture_default_str();
    app.add_option("--T", p.T, "internal transmissivity")->capture_default_str();
    app.add_option("--eta", p.eta, "loss parameter of the lossy QFI (1 = lossless)")->capture_default_str();
    app.add_option("--phi", p.phi, "phase shift [rad]")->capture_default_str();
    app.add_option("--s", o.s, "weight of mode a (t = 1 - s unless --t is given)");
    app.add_option("--t", o.t, "weight of mode b (s = 1 - t unless --s is given)");
    app.add_option("--theta1", p.theta1, "phase of the first amplifier")->capture_default_str();
    app.add_option("--theta2", p.theta2, "phase of the second amplifier")->capture_default_str();
    app.add_option("--mode", o.mode, "standard | mode_a | mode_b | dpso | fixed")->capture_default_str();
    app.add_option("--v", o.v, "number of repetitions in the Cramér-Rao bound")->capture_default_str();
    app.add_option("--pin-t", o.pin_t, "use this t for D-PSO rows instead of optimizing");
    app.add_option("--out", o.out, "output file (default stdout)");
    app.add_option("--format", o.format, "csv | jsonl")->capture_default_str();
    app.add_option("--jobs", o.jobs, "worker threads for sweeps and validation")->capture_default_str();

    auto* sens = app.add_subcommand("sensitivity", "phase sensitivity with intensity detection");
    auto* qfi = app.add_subcommand("qfi", "quantum Fisher information of the lossless state");
    auto* qfil = app.add_subcommand("qfi-lossy", "lossy quantum Fisher information");
    auto* lim = app.add_subcommand("limits", "sensitivity, QFI, QCRB, SQL and HL at one point");

    SweepOptions so;
    auto* sweep = app.add_subcommand("sweep", "one-dimensional parameter sweep");
    sweep->add_option("--var", so.variable, "phi | alpha | g | T | eta | t")->capture_default_str();
    sweep->add_option("--lo", so.lo)->capture_default_str();
    sweep->add_option("--hi", so.hi)->capture_default_str();
    sweep->add_option("--n", so.n, "number of points")->capture_default_str();
    sweep->add_option("--modes", so.modes, "comma-separated mode list")->delimiter(',');
    sweep->add_option("--orders", so.orders, "comma-separated list of m")->delimiter(',');
    sweep->add_option("--quantity", so.quantity, "sensitivity | qfi | qfi_lossy | limits")->capture_default_str();
    sweep->add_flag("--oracle", so.oracle, "add the relative delta against the Fock oracle");

    auto* fig = app.add_subcommand("figure", "named sweep preset (fig2 ... fig13)");
    fig->add_option("name", so.figure, "fig2 ... fig7, fig9 ... fig13")->required();
    fig->add_flag("--oracle", so.oracle, "add the relative delta against the Fock oracle");

    ValidateOptions vo;
    auto* val = app.add_subcommand("validate", "compare closed forms against the Fock oracle");
    val->add_flag("--printed-variance", vo.printed_variance, "use the printed variance in the lossy QFI");
    val->add_option("--quantities", vo.quantities, "subset of Q,X,X2,delta_phi,F,F_L (default all)")->delimiter(',');
    val->add_option("--orders", vo.grid.orders)->delimiter(',');
    val->add_option("--ts", vo.grid.ts)->delimiter(',');
    val->add_option("--gs", vo.grid.gs)->delimiter(',');
    val->add_option("--alphas", vo.grid.alphas)->delimiter(',');
    val->add_option("--Ts", vo.grid.Ts)->delimiter(',');
    val->add_option("--phis", vo.grid.phis)->delimiter(',');
    val->add_option("--etas", vo.grid.etas)->delimiter(',');

    std::string objective = "sensitivity";
    auto* opt = app.add_subcommand("optimize-t", "optimize the delocalization weight t");
    opt->add_option("--objective", objective, "sensitivity | qfi | qfi_lossy")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInvalid;
    }

    try {
        if (*sens) return run_point(o, su11::Quantity::Sensitivity);
        if (*qfi) return run_point(o, su11::Quantity::Qfi);
        if (*qfil) return run_point(o, su11::Quantity::QfiLossy);
        if (*lim) return run_point(o, su11::Quantity::Limits);
        if (*sweep) {
            so.figure.clear();
            return run_sweep_command(o, so);
        }
        if (*fig) return run_sweep_command(o, so);
        if (*val) return run_validate_command(o, vo);
        if (*opt) return run_optimize_t(o, objective);
    } catch (const su11::InvalidParameter& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kInvalid;
    } catch (const su11::DegenerateState& e) {
        std::cerr << "degenerate parameter point: " << e.what() << '\n';
        return kDegenerate;
    } catch (const su11::NoFeasiblePoint& e) {
        std::cerr << "degenerate parameter point: " << e.what() << '\n';
        return kDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kInvalid;
}
