#pragma once

#include "su11/output.hpp"
#include "su11/qfi.hpp"

#include <string>
#include <vector>

namespace su11 {

/// Cartesian grid of parameter points checked against the Fock oracle.
struct ValidationGrid {
    std::vector<unsigned> orders{0, 1, 2};
    std::vector<double> ts{0.0, 0.5, 1.0}; ///< collapsed to one value when m = 0
    std::vector<double> gs{0.5, 1.0};
    std::vector<double> alphas{0.5, 1.0};
    std::vector<double> Ts{0.7, 1.0};
    std::vector<double> phis{1.0};
    std::vector<double> etas{0.7};
    unsigned max_q_order = 4;
};

struct ValidationThresholds {
    double q = 1e-8;
    double intensity = 1e-8;
    double sensitivity = 1e-6;
    double qfi = 1e-8;
    double qfi_lossy = 1e-8;
};

struct ValidationOptions {
    ValidationGrid grid;
    ValidationThresholds thresholds;
    VarianceForm variance_form = VarianceForm::Standard; ///< Printed reproduces the misprint
    std::vector<std::string> quantities;                 ///< subset of Q, X, X2, delta_phi, F, F_L; empty = all
    unsigned jobs = 1;
};

/// One compared quantity at one grid point.
struct ValidationRow {
    unsigned m = 0;
    double t = 0.0, g = 0.0, alpha = 0.0, T = 0.0, phi = 0.0, eta = 0.0;
    std::string quantity; ///< Q, X, X2, delta_phi, F, F_L
    std::string detail;   ///< worst Q index, or empty
    double closed = 0.0;
    double oracle = 0.0;
    double rel_delta = 0.0;
    double threshold = 0.0;
    unsigned cutoff = 0;
    std::string status; ///< ok | breach | cutoff_inadequate | degenerate
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    bool breached() const;
    double max_rel_delta(const std::string& quantity) const;
};

double relative_delta(double closed, double oracle);

ValidationReport run_validate(const ValidationOptions& options);

std::vector<std::string> validation_columns();
std::vector<Cell> validation_cells(const ValidationRow& row);

} // namespace su11
