#pragma once

#include "su11/params.hpp"

namespace su11 {

/// How ⟨Δn²⟩ enters the lossy bound.
enum class VarianceForm {
    Standard, ///< A²⟨n_a²⟩ − (A²⟨n_a⟩)²
    Printed,  ///< 4[A²(Q_{m,2,2,0,0} + Q_{m,1,1,0,0}) − (A²Q_{m,1,1,0,0})²], kept to document the discrepancy
};

/// Photon statistics of mode a inside the interferometer (after the
/// subtraction, before loss and phase).
struct ModeAStatistics {
    double mean = 0.0;     ///< ⟨n⟩
    double variance = 0.0; ///< ⟨Δn²⟩
};

ModeAStatistics mode_a_statistics(const InterferometerParams& params);

/// F = 4⟨Δ²n_a⟩ on the lossless state.
double qfi_ideal(const InterferometerParams& params);

/// Lossy bound F_L = 4η⟨n⟩⟨Δn²⟩ / ((1−η)⟨Δn²⟩ + η⟨n⟩) with η = params.eta.
double qfi_lossy(const InterferometerParams& params, VarianceForm form = VarianceForm::Standard);
double qfi_lossy_from_statistics(const ModeAStatistics& stats, double eta);

/// N = A²(Q_{m,1,1,0,0} + Q_{m,0,0,1,1}) before the second amplifier.
double total_photon_number(const InterferometerParams& params);

struct QfiReport {
    double F_ideal = 0.0;
    double F_lossy = 0.0;
    double N_total = 0.0;
    double qcrb = 0.0; ///< 1/√(vF)
    double sql = 0.0;  ///< 1/√N
    double hl = 0.0;   ///< 1/N
    unsigned v = 1;
};

/// Throws DegenerateState when F or N vanishes.
QfiReport limits(const InterferometerParams& params, unsigned v = 1);

} // namespace su11
