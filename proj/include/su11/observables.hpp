#pragma once

#include "su11/moments.hpp"
#include "su11/params.hpp"

#include <array>

namespace su11 {

/// Trigonometric polynomial Σ_{k=-2..2} c_k e^{ikφ}. Output-port moments are
/// stored in this form so one set of Q evaluations serves a whole φ sweep.
class PhaseSeries {
public:
    static constexpr int kMaxHarmonic = 2;

    cplx& operator[](int k) { return c_.at(static_cast<std::size_t>(k + kMaxHarmonic)); }
    cplx operator[](int k) const { return c_.at(static_cast<std::size_t>(k + kMaxHarmonic)); }

    cplx evaluate(double phi) const;
    cplx derivative(double phi) const;
    /// Σ |k·c_k|, the natural magnitude of the derivative.
    double derivative_scale() const;

    PhaseSeries& operator+=(const PhaseSeries& other);
    PhaseSeries scaled(double f) const;

private:
    std::array<cplx, 2 * kMaxHarmonic + 1> c_{};
};

// Unnormalized output-port expectations (multiply by A²). The table must
// cover max_order 4 / max_power 2, the default MomentTable shape.
PhaseSeries exp_na(const MomentTable& q, double g);
PhaseSeries exp_nb(const MomentTable& q, double g);
PhaseSeries exp_na2(const MomentTable& q, double g);  ///< ⟨a†² a²⟩
PhaseSeries exp_nb2(const MomentTable& q, double g);  ///< ⟨b†² b²⟩
PhaseSeries exp_nanb(const MomentTable& q, double g); ///< ⟨a†a b†b⟩

PhaseSeries exp_na(const InterferometerParams& params);
PhaseSeries exp_nb(const InterferometerParams& params);
PhaseSeries exp_na2(const InterferometerParams& params);
PhaseSeries exp_nb2(const InterferometerParams& params);
PhaseSeries exp_nanb(const InterferometerParams& params);

/// Statistics of X = a†a + b†b at the output ports.
struct IntensityStats {
    double mean_X = 0.0;
    double mean_X2 = 0.0;
    double dmeanX_dphi = 0.0;
    double variance_X = 0.0;
    /// Largest imaginary part discarded from ⟨X⟩, ⟨X²⟩ and the slope.
    double imag_residual = 0.0;
    /// True when the slope vanishes to rounding (fringe extremum).
    bool stationary = false;
};

/// Normalized ⟨X⟩ and ⟨X²⟩ as phase series for one parameter point; φ and
/// θ₂ enter only at evaluation.
class IntensityModel {
public:
    explicit IntensityModel(const InterferometerParams& params);

    IntensityStats at(double phi) const;
    /// Error-propagation Δφ; +∞ at stationary points of ⟨X⟩.
    double sensitivity(double phi) const;

    const PhaseSeries& mean_X() const { return mean_X_; }
    const PhaseSeries& mean_X2() const { return mean_X2_; }
    double A2() const { return A2_; }

private:
    double phase_offset_ = 0.0; // θ₂ − π shifts the fringe
    double A2_ = 1.0;
    PhaseSeries mean_X_;
    PhaseSeries mean_X2_;
};

IntensityStats intensity_stats(const InterferometerParams& params);
double phase_sensitivity(const InterferometerParams& params);

} // namespace su11
