#pragma once

#include "su11/params.hpp"

#include <functional>
#include <utility>

namespace su11 {

struct OptimizationResult {
    double argmin = 0.0;
    double value = 0.0;
    int evaluations = 0;
    std::pair<double, double> bracket{0.0, 0.0};
    /// Objective constant over the scan grid (to 1e-12 relative).
    bool flat = false;
};

/// Grid scan of `grid_n` points on [lo, hi] followed by golden-section
/// refinement of the best interior bracket down to width `tol`. Infinite
/// objective values are skipped. Refinement runs only when the best grid
/// point is strictly below both neighbours.
OptimizationResult minimize_scalar(const std::function<double(double)>& objective, double lo,
                                   double hi, int grid_n = 64, double tol = 1e-6);

enum class TObjective { Sensitivity, Qfi, QfiLossy };

/// Optimizes the delocalization weight t in [0, 1] (s = 1 − t): minimizes Δφ
/// at params.phi, or maximizes F / F_L. `value` holds Δφ, F or F_L at t*.
OptimizationResult optimize_dpso_t(const InterferometerParams& params, TObjective kind,
                                   int grid_n = 64, double tol = 1e-6);

/// Minimizes Δφ over φ ∈ [lo, hi] at fixed t.
OptimizationResult optimize_phi(const InterferometerParams& params, double lo, double hi,
                                int grid_n = 64, double tol = 1e-6);

} // namespace su11
