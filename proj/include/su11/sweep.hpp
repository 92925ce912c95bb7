#pragma once

#include "su11/output.hpp"
#include "su11/params.hpp"

#include <optional>
#include <string>
#include <vector>

namespace su11 {

enum class ModeKind {
    Standard, ///< no subtraction (m = 0)
    ModeA,    ///< s = 1, t = 0
    ModeB,    ///< s = 0, t = 1
    Dpso,     ///< t optimized per point (or pinned)
    Fixed,    ///< s, t as given in the base parameters
};

enum class Quantity { Sensitivity, Qfi, QfiLossy, Limits };

ModeKind parse_mode(const std::string& name);
std::string mode_name(ModeKind kind);
Quantity parse_quantity(const std::string& name);
std::string quantity_name(Quantity q);

struct SweepSpec {
    std::string variable = "phi"; ///< phi | alpha | g | T | eta | t
    double lo = 0.0;
    double hi = 1.0;
    int n = 2;
    InterferometerParams base;
    std::vector<ModeKind> modes{ModeKind::Fixed};
    std::vector<unsigned> orders{1};
    Quantity quantity = Quantity::Sensitivity;
    unsigned v = 1;
    std::optional<double> pin_t; ///< D-PSO rows use this t instead of optimizing
    bool with_oracle = false;
    unsigned jobs = 1;

    /// Throws InvalidParameter on an inconsistent spec.
    void validate() const;
    double point(int i) const;
};

/// Column names; a pure function of the quantity and the oracle flag.
std::vector<std::string> sweep_columns(const SweepSpec& spec);

/// Rows in sweep-major, mode-minor, order-innermost order, each matching
/// sweep_columns(spec).
std::vector<std::vector<Cell>> run_sweep(const SweepSpec& spec);

/// Parameter grids of the published figures (fig2 … fig13, excluding the
/// schematic fig8).
SweepSpec figure_preset(const std::string& name);
std::vector<std::string> figure_names();

/// One computed point for single-shot commands.
struct PointResult {
    InterferometerParams params; ///< with s, t resolved
    std::string t_source;        ///< fixed | optimized | pinned
    double delta_phi = 0.0;
    double F = 0.0;
    double F_L = 0.0;
    double N = 0.0;
    double qcrb = 0.0, sql = 0.0, hl = 0.0;
};

/// Evaluates `quantity` at one point, resolving s/t from the mode.
PointResult evaluate_point(InterferometerParams params, ModeKind mode, Quantity quantity, unsigned v,
                           std::optional<double> pin_t);

} // namespace su11
