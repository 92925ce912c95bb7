#pragma once

#include "su11/moments.hpp"
#include "su11/params.hpp"
#include "su11/qfi.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace su11::fock {

/// Pure state on the truncated space 0 <= n_a, n_b <= cutoff, amplitudes
/// stored row-major in n_a.
class TwoModeState {
public:
    explicit TwoModeState(unsigned cutoff);

    unsigned cutoff() const { return cutoff_; }
    std::size_t dim() const { return amps_.size(); }
    std::size_t index(unsigned na, unsigned nb) const { return std::size_t{na} * (cutoff_ + 1) + nb; }

    cplx& operator()(unsigned na, unsigned nb) { return amps_[index(na, nb)]; }
    cplx operator()(unsigned na, unsigned nb) const { return amps_[index(na, nb)]; }

    std::span<cplx> amplitudes() { return amps_; }
    std::span<const cplx> amplitudes() const { return amps_; }

    double norm_squared() const;
    /// Probability mass with n_a or n_b in the top `layers` Fock levels.
    double tail_mass(unsigned layers = 2) const;
    void scale(cplx f);

private:
    unsigned cutoff_;
    std::vector<cplx> amps_;
};

/// Mixed state ρ = Σ_k |v_k⟩⟨v_k| kept as unnormalized Kraus branches. A dense
/// ρ on the two-mode space needs (cutoff+1)⁴ entries, which the cutoffs used
/// here cannot afford; the dense form is available for small cutoffs.
class TwoModeDensity {
public:
    explicit TwoModeDensity(TwoModeState pure);
    TwoModeDensity(unsigned cutoff, std::vector<TwoModeState> branches);

    unsigned cutoff() const { return cutoff_; }
    const std::vector<TwoModeState>& branches() const { return branches_; }
    std::vector<TwoModeState>& branches() { return branches_; }

    double trace() const;
    void scale(double f);
    Eigen::MatrixXcd to_dense() const;

private:
    unsigned cutoff_;
    std::vector<TwoModeState> branches_;
};

TwoModeState prepare_input(cplx alpha, unsigned cutoff);

/// exp(ξ* ab − ξ a†b†), ξ = g e^{iθ}, on the truncated space. The generator
/// conserves n_a − n_b, so it is exponentiated exactly sector by sector.
class TwoModeSqueezer {
public:
    TwoModeSqueezer(unsigned cutoff, double g, double theta);

    unsigned cutoff() const { return cutoff_; }
    TwoModeState apply(const TwoModeState& in) const;
    /// Block acting on n_a − n_b = d, basis k ↦ (k + max(d,0), k + max(−d,0)).
    const Eigen::MatrixXcd& sector(int d) const { return sectors_[static_cast<std::size_t>(d + static_cast<int>(cutoff_))]; }

private:
    unsigned cutoff_;
    std::vector<Eigen::MatrixXcd> sectors_; // index d + cutoff, d = n_a − n_b
};

/// Throws CutoffInadequate when the result leaks into the top two layers.
TwoModeState apply_two_mode_squeeze(const TwoModeState& in, double g, double theta,
                                    double tail_tol = 1e-13);
/// (s a + t b)^m, unnormalized. Throws DegenerateState if the result vanishes.
TwoModeState apply_photon_subtraction(const TwoModeState& in, double s, double t, unsigned m);

enum class Mode { A, B };

/// ρ → Σ_l K_l ρ K_l†,  K_l = √((1−T)^l / l!) T^{n/2} c^l  on the chosen mode.
TwoModeDensity apply_loss_channel(const TwoModeDensity& rho, double T, Mode mode);

TwoModeState apply_phase_shift(const TwoModeState& in, double phi);
TwoModeDensity apply_phase_shift(const TwoModeDensity& rho, double phi);

/// a^p b^q |ψ⟩.
TwoModeState lower(const TwoModeState& in, unsigned p, unsigned q);

struct Observable {
    enum class Kind { Monomial, X, X2 };
    Kind kind = Kind::Monomial;
    unsigned x1 = 0, y1 = 0, x2 = 0, y2 = 0;

    /// a†^x1 a^y1 b†^x2 b^y2
    static Observable monomial(unsigned x1, unsigned y1, unsigned x2, unsigned y2) {
        return {Kind::Monomial, x1, y1, x2, y2};
    }
    static Observable na() { return monomial(1, 1, 0, 0); }
    static Observable nb() { return monomial(0, 0, 1, 1); }
    static Observable X() { return {Kind::X}; }
    static Observable X2() { return {Kind::X2}; }
};

cplx expectation(const TwoModeState& psi, const Observable& obs);
cplx expectation(const TwoModeDensity& rho, const Observable& obs);

/// Cutoff control shared by every convergence-checked oracle quantity.
struct OracleConfig {
    unsigned cutoff = 0;          ///< 0 selects the heuristic seed
    unsigned cutoff_step = 8;     ///< comparison offset and escalation step
    unsigned max_cutoff = 240;
    double drift_tol = 1e-9;      ///< relative drift between cutoff and cutoff + step
    double tail_tol = 1e-13;
};

unsigned default_cutoff(const InterferometerParams& params);

/// Result of a convergence-checked evaluation.
template <typename V>
struct Converged {
    V value;
    unsigned cutoff = 0; ///< the larger of the two compared cutoffs
    double drift = 0.0;
};

/// Q moments by explicit simulation with the Kraus loss channel. The index
/// m must equal params.m.
Converged<std::vector<cplx>> oracle_q_moments(std::span<const QIndex> indices,
                                              const InterferometerParams& params,
                                              const OracleConfig& cfg = {});

struct OracleIntensity {
    double mean_X = 0.0;
    double mean_X2 = 0.0;
    double variance() const { return mean_X2 - mean_X * mean_X; }
};

/// ⟨X⟩, ⟨X²⟩ on the full pipeline for each requested φ.
Converged<std::vector<OracleIntensity>> oracle_intensity(const InterferometerParams& params,
                                                         std::span<const double> phis,
                                                         const OracleConfig& cfg = {});

/// √Var(X) at φ over the central-difference slope of ⟨X⟩ with step dphi.
Converged<double> oracle_sensitivity(const InterferometerParams& params, double dphi = 1e-5,
                                     const OracleConfig& cfg = {});
/// Δφ at several working points from one convergence-checked pipeline.
Converged<std::vector<double>> oracle_sensitivities(const InterferometerParams& params,
                                                   std::span<const double> phis, double dphi = 1e-5,
                                                   const OracleConfig& cfg = {});

struct OracleQfi {
    double variance_route = 0.0; ///< 4 Var(n_a)
    double overlap_route = 0.0;  ///< 8 (1 − |⟨Ψ_φ|Ψ_{φ+δ}⟩|) / δ²
};

/// Pure-state QFI on the lossless state (params.T is ignored).
Converged<OracleQfi> oracle_qfi_pure(const InterferometerParams& params, double delta = 1e-3,
                                     const OracleConfig& cfg = {});

/// ⟨n_a⟩ and Var(n_a) on the lossless state.
Converged<ModeAStatistics> oracle_mode_a_statistics(const InterferometerParams& params,
                                                    const OracleConfig& cfg = {});

/// Total photon number before the second amplifier on the lossless state.
Converged<double> oracle_total_photon_number(const InterferometerParams& params,
                                             const OracleConfig& cfg = {});

} // namespace su11::fock
