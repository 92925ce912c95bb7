#pragma once

#include <complex>
#include <numbers>
#include <string>

namespace su11 {

/// Physical knobs of the interferometer with the delocalized subtraction
/// (s·a + t·b)^m placed after the first amplifier.
struct InterferometerParams {
    double g = 1.0;                  ///< gain of both amplifiers
    std::complex<double> alpha{1.0}; ///< coherent amplitude in mode a
    double s = 1.0;                  ///< weight of a in the subtraction
    double t = 0.0;                  ///< weight of b in the subtraction
    unsigned m = 0;                  ///< subtraction order
    double T = 1.0;                  ///< transmissivity of the internal loss beam splitters
    double phi = 0.0;                ///< phase shift on mode a [rad]
    double eta = 1.0;                ///< loss parameter of the lossy-QFI channel (1 = lossless)
    double theta1 = 0.0;             ///< phase of the first amplifier
    double theta2 = std::numbers::pi;///< phase of the second amplifier
    bool allow_unnormalized_weights = false; ///< skip the s + t = 1 check

    /// Throws InvalidParameter if any knob is out of range.
    void validate() const;

    /// Copy with t set and s = 1 − t.
    InterferometerParams with_t(double t_new) const;
    InterferometerParams with_phi(double phi_new) const;
    InterferometerParams with_T(double T_new) const;

    std::string describe() const;
};

} // namespace su11
