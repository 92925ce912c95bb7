#include "su11/observables.hpp"

#include "su11/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace su11 {

cplx PhaseSeries::evaluate(double phi) const {
    cplx sum{0.0, 0.0};
    for (int k = -kMaxHarmonic; k <= kMaxHarmonic; ++k) sum += (*this)[k] * std::polar(1.0, k * phi);
    return sum;
}

cplx PhaseSeries::derivative(double phi) const {
    cplx sum{0.0, 0.0};
    for (int k = -kMaxHarmonic; k <= kMaxHarmonic; ++k)
        sum += cplx{0.0, static_cast<double>(k)} * (*this)[k] * std::polar(1.0, k * phi);
    return sum;
}

double PhaseSeries::derivative_scale() const {
    double s = 0.0;
    for (int k = -kMaxHarmonic; k <= kMaxHarmonic; ++k) s += std::abs(static_cast<double>(k) * (*this)[k]);
    return s;
}

PhaseSeries& PhaseSeries::operator+=(const PhaseSeries& other) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
    return *this;
}

PhaseSeries PhaseSeries::scaled(double f) const {
    PhaseSeries r = *this;
    for (auto& c : r.c_) c *= f;
    return r;
}

// With θ₂ = π the output-port operators are
//   a_out = cosh g e^{iφ} a + sinh g b†,   b_out = cosh g b + sinh g e^{−iφ} a†,
// and every expansion below is the normal ordering of a product of these in
// terms of the moments Q_{m,x1,y1,x2,y2}.

PhaseSeries exp_na(const MomentTable& q, double g) {
    const double c = std::cosh(g), s = std::sinh(g);
    PhaseSeries r;
    r[0] = c * c * q(1, 1, 0, 0) + s * s * (q(0, 0, 1, 1) + q(0, 0, 0, 0));
    r[-1] = s * c * q(1, 0, 1, 0);
    r[1] = s * c * q(0, 1, 0, 1);
    return r;
}

PhaseSeries exp_nb(const MomentTable& q, double g) {
    const double c = std::cosh(g), s = std::sinh(g);
    PhaseSeries r;
    r[0] = c * c * q(0, 0, 1, 1) + s * s * (q(1, 1, 0, 0) + q(0, 0, 0, 0));
    r[-1] = s * c * q(1, 0, 1, 0);
    r[1] = s * c * q(0, 1, 0, 1);
    return r;
}

PhaseSeries exp_na2(const MomentTable& q, double g) {
    const double c = std::cosh(g), s = std::sinh(g);
    const double c2 = c * c, s2 = s * s;
    PhaseSeries r;
    r[0] = c2 * c2 * q(2, 2, 0, 0) + 4.0 * s2 * c2 * (q(1, 1, 1, 1) + q(1, 1, 0, 0)) +
           s2 * s2 * (q(0, 0, 2, 2) + 4.0 * q(0, 0, 1, 1) + 2.0 * q(0, 0, 0, 0));
    r[-1] = 2.0 * s * c2 * c * q(2, 1, 1, 0) + 2.0 * s2 * s * c * (q(1, 0, 2, 1) + 2.0 * q(1, 0, 1, 0));
    r[1] = 2.0 * s * c2 * c * q(1, 2, 0, 1) + 2.0 * s2 * s * c * (q(0, 1, 1, 2) + 2.0 * q(0, 1, 0, 1));
    r[-2] = s2 * c2 * q(2, 0, 2, 0);
    r[2] = s2 * c2 * q(0, 2, 0, 2);
    return r;
}

PhaseSeries exp_nb2(const MomentTable& q, double g) {
    const double c = std::cosh(g), s = std::sinh(g);
    const double c2 = c * c, s2 = s * s;
    PhaseSeries r;
    r[0] = c2 * c2 * q(0, 0, 2, 2) + 4.0 * s2 * c2 * (q(1, 1, 1, 1) + q(0, 0, 1, 1)) +
           s2 * s2 * (q(2, 2, 0, 0) + 4.0 * q(1, 1, 0, 0) + 2.0 * q(0, 0, 0, 0));
    r[-1] = 2.0 * s * c2 * c * q(1, 0, 2, 1) + 2.0 * s2 * s * c * (q(2, 1, 1, 0) + 2.0 * q(1, 0, 1, 0));
    r[1] = 2.0 * s * c2 * c * q(0, 1, 1, 2) + 2.0 * s2 * s * c * (q(1, 2, 0, 1) + 2.0 * q(0, 1, 0, 1));
    r[-2] = s2 * c2 * q(2, 0, 2, 0);
    r[2] = s2 * c2 * q(0, 2, 0, 2);
    return r;
}

// a†a b†b = (a_out† b_out†)(a_out b_out) with
//   a_out b_out = c² e^{iφ} ab + cs K + s² e^{−iφ} a†b†,  K = a†a + b†b + 1.
// See docs/derivations.md for the term-by-term normal ordering.
PhaseSeries exp_nanb(const MomentTable& q, double g) {
    const double c = std::cosh(g), s = std::sinh(g);
    const double c2 = c * c, s2 = s * s;
    PhaseSeries r;
    r[0] = c2 * c2 * q(1, 1, 1, 1) +
           c2 * s2 * (q(2, 2, 0, 0) + q(0, 0, 2, 2) + 2.0 * q(1, 1, 1, 1) + 3.0 * q(1, 1, 0, 0) +
                      3.0 * q(0, 0, 1, 1) + q(0, 0, 0, 0)) +
           s2 * s2 * (q(1, 1, 1, 1) + q(1, 1, 0, 0) + q(0, 0, 1, 1) + q(0, 0, 0, 0));
    r[-1] = c2 * c * s * (q(2, 1, 1, 0) + q(1, 0, 2, 1) + q(1, 0, 1, 0)) +
            c * s2 * s * (q(2, 1, 1, 0) + q(1, 0, 2, 1) + 3.0 * q(1, 0, 1, 0));
    r[1] = c2 * c * s * (q(1, 2, 0, 1) + q(0, 1, 1, 2) + q(0, 1, 0, 1)) +
           c * s2 * s * (q(1, 2, 0, 1) + q(0, 1, 1, 2) + 3.0 * q(0, 1, 0, 1));
    r[-2] = c2 * s2 * q(2, 0, 2, 0);
    r[2] = c2 * s2 * q(0, 2, 0, 2);
    return r;
}

PhaseSeries exp_na(const InterferometerParams& p) { return exp_na(MomentTable(p), p.g); }
PhaseSeries exp_nb(const InterferometerParams& p) { return exp_nb(MomentTable(p), p.g); }
PhaseSeries exp_na2(const InterferometerParams& p) { return exp_na2(MomentTable(p), p.g); }
PhaseSeries exp_nb2(const InterferometerParams& p) { return exp_nb2(MomentTable(p), p.g); }
PhaseSeries exp_nanb(const InterferometerParams& p) { return exp_nanb(MomentTable(p), p.g); }

IntensityModel::IntensityModel(const InterferometerParams& params)
    : phase_offset_(params.theta2 - std::numbers::pi) {
    const MomentTable q(params);
    A2_ = q.A2();
    const double g = params.g;
    const PhaseSeries na = exp_na(q, g);
    const PhaseSeries nb = exp_nb(q, g);

    PhaseSeries x = na;
    x += nb;
    PhaseSeries x2 = exp_na2(q, g);
    x2 += na;
    x2 += exp_nanb(q, g).scaled(2.0);
    x2 += exp_nb2(q, g);
    x2 += nb;

    mean_X_ = x.scaled(A2_);
    mean_X2_ = x2.scaled(A2_);
}

IntensityStats IntensityModel::at(double phi) const {
    const double ph = phi - phase_offset_;
    const cplx x = mean_X_.evaluate(ph);
    const cplx x2 = mean_X2_.evaluate(ph);
    const cplx dx = mean_X_.derivative(ph);

    IntensityStats st;
    st.mean_X = x.real();
    st.mean_X2 = x2.real();
    st.dmeanX_dphi = dx.real();
    st.imag_residual = std::max({std::abs(x.imag()), std::abs(x2.imag()), std::abs(dx.imag())});
    st.stationary = std::abs(dx) <= 1e-12 * mean_X_.derivative_scale();

    double var = st.mean_X2 - st.mean_X * st.mean_X;
    if (var < 0.0) {
        if (var < -1e-9 * std::max(1.0, st.mean_X2))
            throw std::logic_error("negative intensity variance " + std::to_string(var));
        var = 0.0;
    }
    st.variance_X = var;
    return st;
}

double IntensityModel::sensitivity(double phi) const {
    const IntensityStats st = at(phi);
    if (st.stationary || st.dmeanX_dphi == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(st.variance_X) / std::abs(st.dmeanX_dphi);
}

IntensityStats intensity_stats(const InterferometerParams& params) {
    return IntensityModel(params).at(params.phi);
}

double phase_sensitivity(const InterferometerParams& params) {
    return IntensityModel(params).sensitivity(params.phi);
}

} // namespace su11
