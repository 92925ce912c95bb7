#include "su11/qfi.hpp"

#include "su11/errors.hpp"
#include "su11/moments.hpp"

#include <algorithm>
#include <cmath>

namespace su11 {

namespace {

// The QFI state carries no internal loss: moments are taken at T = 1.
MomentTable lossless_table(const InterferometerParams& params) {
    return MomentTable(params.with_T(1.0), 4, 2);
}

} // namespace

ModeAStatistics mode_a_statistics(const InterferometerParams& params) {
    const MomentTable q = lossless_table(params);
    const double A2 = q.A2();
    const double n1 = q(1, 1, 0, 0).real();
    const double n2 = q(2, 2, 0, 0).real();
    ModeAStatistics st;
    st.mean = A2 * n1;
    st.variance = std::max(0.0, A2 * (n2 + n1) - st.mean * st.mean);
    return st;
}

double qfi_ideal(const InterferometerParams& params) {
    return 4.0 * mode_a_statistics(params).variance;
}

double qfi_lossy_from_statistics(const ModeAStatistics& st, double eta) {
    if (st.mean <= 0.0) return 0.0;
    const double den = (1.0 - eta) * st.variance + eta * st.mean;
    if (den <= 0.0) return 0.0;
    return 4.0 * eta * st.mean * st.variance / den;
}

double qfi_lossy(const InterferometerParams& params, VarianceForm form) {
    params.validate();
    ModeAStatistics st = mode_a_statistics(params);
    if (form == VarianceForm::Printed) st.variance *= 4.0;
    return qfi_lossy_from_statistics(st, params.eta);
}

double total_photon_number(const InterferometerParams& params) {
    const MomentTable q = lossless_table(params);
    return q.A2() * (q(1, 1, 0, 0).real() + q(0, 0, 1, 1).real());
}

QfiReport limits(const InterferometerParams& params, unsigned v) {
    if (v == 0) throw InvalidParameter("measurement count v must be positive");
    const MomentTable q = lossless_table(params);
    const double A2 = q.A2();
    const double n1 = q(1, 1, 0, 0).real();
    const double n2 = q(2, 2, 0, 0).real();

    ModeAStatistics st;
    st.mean = A2 * n1;
    st.variance = std::max(0.0, A2 * (n2 + n1) - st.mean * st.mean);

    QfiReport r;
    r.v = v;
    r.F_ideal = 4.0 * st.variance;
    r.F_lossy = qfi_lossy_from_statistics(st, params.eta);
    r.N_total = A2 * (n1 + q(0, 0, 1, 1).real());
    if (!(r.F_ideal > 0.0)) throw DegenerateState("quantum Fisher information vanishes");
    if (!(r.N_total > 0.0)) throw DegenerateState("mean photon number vanishes");
    r.qcrb = 1.0 / std::sqrt(v * r.F_ideal);
    r.sql = 1.0 / std::sqrt(r.N_total);
    r.hl = 1.0 / r.N_total;
    return r;
}

} // namespace su11
