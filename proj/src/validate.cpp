#include "su11/validate.hpp"

#include "su11/errors.hpp"
#include "su11/fock_oracle.hpp"
#include "su11/moments.hpp"
#include "su11/observables.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <thread>

namespace su11 {

namespace {

struct GridPoint {
    InterferometerParams params;
};

std::vector<GridPoint> expand(const ValidationGrid& grid) {
    std::vector<GridPoint> out;
    for (unsigned m : grid.orders)
        for (std::size_t it = 0; it < grid.ts.size(); ++it) {
            if (m == 0 && it > 0) break;
            for (double g : grid.gs)
                for (double a : grid.alphas)
                    for (double T : grid.Ts) {
                        InterferometerParams p;
                        p.m = m;
                        p = p.with_t(m == 0 ? 0.0 : grid.ts[it]);
                        p.g = g;
                        p.alpha = a;
                        p.T = T;
                        p.phi = grid.phis.empty() ? 1.0 : grid.phis.front();
                        p.validate();
                        out.push_back({p});
                    }
        }
    return out;
}

std::vector<QIndex> q_indices(unsigned m, unsigned max_order) {
    std::vector<QIndex> idx;
    for (unsigned x1 = 0; x1 <= max_order; ++x1)
        for (unsigned y1 = 0; x1 + y1 <= max_order; ++y1)
            for (unsigned x2 = 0; x1 + y1 + x2 <= max_order; ++x2)
                for (unsigned y2 = 0; x1 + y1 + x2 + y2 <= max_order; ++y2) idx.push_back({m, x1, y1, x2, y2});
    return idx;
}

std::string index_label(const QIndex& q) {
    return std::to_string(q.x1) + std::to_string(q.y1) + std::to_string(q.x2) + std::to_string(q.y2);
}

ValidationRow base_row(const InterferometerParams& p, const std::string& quantity, double threshold) {
    ValidationRow r;
    r.m = p.m;
    r.t = p.t;
    r.g = p.g;
    r.alpha = p.alpha.real();
    r.T = p.T;
    r.phi = p.phi;
    r.eta = p.eta;
    r.quantity = quantity;
    r.threshold = threshold;
    r.closed = r.oracle = r.rel_delta = std::numeric_limits<double>::quiet_NaN();
    return r;
}

void finish(ValidationRow& r, double closed, double oracle, unsigned cutoff) {
    r.closed = closed;
    r.oracle = oracle;
    r.cutoff = cutoff;
    r.rel_delta = relative_delta(closed, oracle);
    r.status = r.rel_delta <= r.threshold ? "ok" : "breach";
}

// Runs one comparison, turning oracle/closed-form failures into report rows.
template <typename F>
void guarded(std::vector<ValidationRow>& out, ValidationRow row, F&& body) {
    try {
        body(row);
    } catch (const CutoffInadequate& e) {
        row.status = "cutoff_inadequate";
        row.detail = e.what();
    } catch (const DegenerateState& e) {
        row.status = "degenerate";
        row.detail = e.what();
    }
    out.push_back(std::move(row));
}

std::vector<ValidationRow> validate_point(const InterferometerParams& p, const ValidationOptions& opt) {
    const auto& th = opt.thresholds;
    std::vector<ValidationRow> out;
    auto wanted = [&](const char* q) {
        return opt.quantities.empty() ||
               std::find(opt.quantities.begin(), opt.quantities.end(), q) != opt.quantities.end();
    };

    if (wanted("Q")) guarded(out, base_row(p, "Q", th.q), [&](ValidationRow& row) {
        const auto idx = q_indices(p.m, opt.grid.max_q_order);
        const auto ref = fock::oracle_q_moments(idx, p);
        double worst = -1.0;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const cplx c = q_moment(idx[k], p);
            const cplx o = ref.value[k];
            const double d = std::abs(c - o) / std::max(std::abs(o), 1e-300);
            if (d > worst) {
                worst = d;
                row.detail = index_label(idx[k]);
                row.closed = std::abs(c);
                row.oracle = std::abs(o);
            }
        }
        row.cutoff = ref.cutoff;
        row.rel_delta = worst;
        row.status = worst <= row.threshold ? "ok" : "breach";
    });

    const IntensityModel model(p);
    for (double phi : opt.grid.phis) {
        auto q = p.with_phi(phi);
        const double arr[] = {phi};
        std::optional<fock::Converged<std::vector<fock::OracleIntensity>>> ref;
        auto intensity = [&] {
            if (!ref) ref = fock::oracle_intensity(q, arr);
            return *ref;
        };
        if (wanted("X")) guarded(out, base_row(q, "X", th.intensity), [&](ValidationRow& row) {
            const auto r = intensity();
            finish(row, model.at(phi).mean_X, r.value[0].mean_X, r.cutoff);
        });
        if (wanted("X2")) guarded(out, base_row(q, "X2", th.intensity), [&](ValidationRow& row) {
            const auto r = intensity();
            finish(row, model.at(phi).mean_X2, r.value[0].mean_X2, r.cutoff);
        });
        if (wanted("delta_phi")) guarded(out, base_row(q, "delta_phi", th.sensitivity), [&](ValidationRow& row) {
            const auto r = fock::oracle_sensitivity(q);
            finish(row, model.sensitivity(phi), r.value, r.cutoff);
        });
    }

    // F and F_L depend only on the lossless state.
    if (p.T == 1.0) {
        if (wanted("F")) guarded(out, base_row(p, "F", th.qfi), [&](ValidationRow& row) {
            const auto r = fock::oracle_qfi_pure(p);
            finish(row, qfi_ideal(p), r.value.variance_route, r.cutoff);
        });
        std::optional<fock::Converged<ModeAStatistics>> stats;
        for (double eta : opt.grid.etas) {
            InterferometerParams q = p;
            q.eta = eta;
            if (wanted("F_L")) guarded(out, base_row(q, "F_L", th.qfi_lossy), [&](ValidationRow& row) {
                if (!stats) stats = fock::oracle_mode_a_statistics(p);
                finish(row, qfi_lossy(q, opt.variance_form), qfi_lossy_from_statistics(stats->value, eta),
                       stats->cutoff);
                if (opt.variance_form == VarianceForm::Printed) row.detail = "printed-variance";
            });
        }
    }
    return out;
}

} // namespace

double relative_delta(double closed, double oracle) {
    if (std::isinf(closed) && std::isinf(oracle)) return 0.0;
    if (!std::isfinite(closed) || !std::isfinite(oracle)) return std::numeric_limits<double>::infinity();
    if (closed == oracle) return 0.0;
    return std::abs(closed - oracle) / std::max(std::abs(oracle), 1e-300);
}

bool ValidationReport::breached() const {
    return std::any_of(rows.begin(), rows.end(), [](const ValidationRow& r) { return r.status != "ok"; });
}

double ValidationReport::max_rel_delta(const std::string& quantity) const {
    double worst = 0.0;
    for (const auto& r : rows)
        if (r.quantity == quantity && r.status != "degenerate") worst = std::max(worst, r.rel_delta);
    return worst;
}

ValidationReport run_validate(const ValidationOptions& options) {
    static const std::vector<std::string> known{"Q", "X", "X2", "delta_phi", "F", "F_L"};
    for (const auto& q : options.quantities)
        if (std::find(known.begin(), known.end(), q) == known.end())
            throw InvalidParameter("unknown validation quantity '" + q + "'");
    const auto points = expand(options.grid);
    std::vector<std::vector<ValidationRow>> per_point(points.size());
    const unsigned jobs =
        std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(points.size())));
    std::vector<std::exception_ptr> errors(jobs);
    auto worker = [&](unsigned w) {
        try {
            for (std::size_t k = w; k < points.size(); k += jobs)
                per_point[k] = validate_point(points[k].params, options);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    ValidationReport report;
    for (auto& rows : per_point)
        for (auto& r : rows) report.rows.push_back(std::move(r));
    return report;
}

std::vector<std::string> validation_columns() {
    return {"m", "t", "g", "alpha", "T", "phi", "eta", "quantity", "detail",
            "closed", "oracle", "rel_delta", "threshold", "cutoff", "status"};
}

std::vector<Cell> validation_cells(const ValidationRow& r) {
    return {std::int64_t{r.m}, r.t, r.g, r.alpha, r.T, r.phi, r.eta, r.quantity, r.detail,
            r.closed, r.oracle, r.rel_delta, r.threshold, std::int64_t{r.cutoff}, r.status};
}

} // namespace su11
