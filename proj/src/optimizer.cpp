#include "su11/optimizer.hpp"

#include "su11/errors.hpp"
#include "su11/observables.hpp"
#include "su11/qfi.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace su11 {

OptimizationResult minimize_scalar(const std::function<double(double)>& objective, double lo,
                                   double hi, int grid_n, double tol) {
    if (!(lo < hi)) throw ContractViolation("minimize_scalar: requires lo < hi");
    if (grid_n < 3) throw ContractViolation("minimize_scalar: grid needs at least 3 points");
    if (!(tol > 0.0)) throw ContractViolation("minimize_scalar: tol must be positive");

    OptimizationResult res;
    std::vector<double> xs(static_cast<std::size_t>(grid_n)), fs(xs.size());
    for (int i = 0; i < grid_n; ++i) {
        xs[i] = i == grid_n - 1 ? hi : lo + (hi - lo) * i / (grid_n - 1);
        fs[i] = objective(xs[i]);
        ++res.evaluations;
    }

    int best = -1;
    double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin;
    for (int i = 0; i < grid_n; ++i) {
        if (!std::isfinite(fs[i])) continue;
        if (best < 0 || fs[i] < fs[best]) best = i;
        fmin = std::min(fmin, fs[i]);
        fmax = std::max(fmax, fs[i]);
    }
    if (best < 0) throw NoFeasiblePoint("objective is not finite anywhere on the scan grid");

    res.flat = (fmax - fmin) <= 1e-12 * std::max(std::abs(fmin), std::abs(fmax));
    res.argmin = xs[best];
    res.value = fs[best];
    res.bracket = {xs[std::max(best - 1, 0)], xs[std::min(best + 1, grid_n - 1)]};

    const bool interior = best > 0 && best < grid_n - 1;
    if (res.flat || !interior || !(fs[best] < fs[best - 1] && fs[best] < fs[best + 1])) return res;

    // Golden-section search on the bracket around the best grid point.
    constexpr double invphi = 0.6180339887498948482;
    double a = xs[best - 1], b = xs[best + 1];
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = objective(c), fd = objective(d);
    res.evaluations += 2;
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = objective(d);
        }
        ++res.evaluations;
    }
    const double xm = 0.5 * (a + b);
    const double fm = objective(xm);
    ++res.evaluations;
    // Keep whichever candidate is lowest; the grid point is a valid fallback.
    for (auto [x, f] : {std::pair{c, fc}, std::pair{d, fd}, std::pair{xm, fm}}) {
        if (std::isfinite(f) && f < res.value) {
            res.value = f;
            res.argmin = x;
        }
    }
    res.bracket = {a, b};
    if (res.argmin < a || res.argmin > b) res.bracket = {std::min(a, res.argmin), std::max(b, res.argmin)};
    return res;
}

OptimizationResult optimize_dpso_t(const InterferometerParams& params, TObjective kind, int grid_n,
                                   double tol) {
    params.validate();
    std::function<double(double)> f;
    double sign = 1.0;
    switch (kind) {
    case TObjective::Sensitivity:
        f = [&](double t) {
            try {
                return phase_sensitivity(params.with_t(t));
            } catch (const DegenerateState&) {
                return std::numeric_limits<double>::infinity();
            }
        };
        break;
    case TObjective::Qfi:
    case TObjective::QfiLossy:
        sign = -1.0;
        f = [&, kind](double t) {
            try {
                const auto p = params.with_t(t);
                return -(kind == TObjective::Qfi ? qfi_ideal(p) : qfi_lossy(p));
            } catch (const DegenerateState&) {
                return std::numeric_limits<double>::infinity();
            }
        };
        break;
    }
    OptimizationResult r = minimize_scalar(f, 0.0, 1.0, grid_n, tol);
    r.value *= sign;
    return r;
}

OptimizationResult optimize_phi(const InterferometerParams& params, double lo, double hi, int grid_n,
                                double tol) {
    const IntensityModel model(params);
    return minimize_scalar([&](double phi) { return model.sensitivity(phi); }, lo, hi, grid_n, tol);
}

} // namespace su11
