#include "su11/fock_oracle.hpp"
#include "su11/observables.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

using namespace su11;

namespace {

InterferometerParams point(unsigned m, double t, double g, double alpha, double T, double phi) {
    InterferometerParams p;
    p.m = m;
    p = p.with_t(t);
    p.g = g;
    p.alpha = alpha;
    p.T = T;
    p.phi = phi;
    return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

using ParamsMoment = PhaseSeries (*)(const InterferometerParams&);
using TableMoment = PhaseSeries (*)(const MomentTable&, double);
const std::array<ParamsMoment, 5> kParamsMoments{exp_na, exp_nb, exp_na2, exp_nb2, exp_nanb};
const std::array<TableMoment, 5> kTableMoments{exp_na, exp_nb, exp_na2, exp_nb2, exp_nanb};

} // namespace

TEST_SUITE("observables") {

TEST_CASE("balanced amplifiers return the vacuum") {
    const auto p = point(0, 0, 1, 0, 1, 0);
    for (auto f : kParamsMoments) CHECK(std::abs(f(p).evaluate(0.0)) < 1e-12);
    CHECK(intensity_stats(p).mean_X == doctest::Approx(0.0));
}

TEST_CASE("individual output moments match the oracle") {
    for (const auto& p : {point(0, 0, 1, 1, 1, 1), point(1, 1, 1, 1, 0.7, 1), point(2, 0.5, 1, 1, 1, 1),
                          point(1, 0.6, 1, 1, 1, 1), point(3, 1, 1, 1, 1, 1)}) {
        CAPTURE(p.describe());
        const MomentTable q(p);
        const double a2 = q.A2();
        const double phi[] = {p.phi};
        const auto ref = fock::oracle_intensity(p, phi);
        const auto st = intensity_stats(p);
        CHECK(rel(st.mean_X, ref.value[0].mean_X) < 1e-8);
        CHECK(rel(st.mean_X2, ref.value[0].mean_X2) < 1e-8);
        CHECK(rel(st.variance_X, ref.value[0].variance()) < 1e-8);
        CHECK(st.imag_residual < 1e-10 * std::max(1.0, st.mean_X2));
        // Each assembled piece is real for a Hermitian observable.
        for (auto f : kTableMoments)
            CHECK(std::abs(f(q, p.g).evaluate(p.phi).imag()) * a2 < 1e-10 * std::max(1.0, st.mean_X2));
    }
}

TEST_CASE("cross term is the remainder of ⟨X²⟩") {
    const auto p = point(3, 1, 1, 1, 1, 1);
    const double phi[] = {p.phi};
    const auto ref = fock::oracle_intensity(p, phi).value[0];
    const MomentTable q(p);
    const double a2 = q.A2();
    auto at = [&](TableMoment f) { return a2 * f(q, p.g).evaluate(p.phi).real(); };
    const double x = at(exp_na) + at(exp_nb);
    const double x2_without_cross = at(exp_na2) + at(exp_na) + at(exp_nb2) + at(exp_nb);
    const double cross = 0.5 * (ref.mean_X2 - x2_without_cross);
    CHECK(rel(x, ref.mean_X) < 1e-8);
    CHECK(rel(at(exp_nanb), cross) < 1e-7);
}

TEST_CASE("fringe centre is stationary") {
    const auto p = point(0, 0, 1, 1, 1, 0);
    const auto st = intensity_stats(p);
    CHECK(std::abs(st.dmeanX_dphi) < 1e-10);
    CHECK(st.stationary);
    CHECK(std::isinf(phase_sensitivity(p)));
}

TEST_CASE("analytic slope matches central differences") {
    for (const auto& p : {point(0, 0, 1, 1, 1, 0.7), point(2, 0.3, 0.8, 1.5, 0.6, -0.4)}) {
        const IntensityModel model(p);
        const double h = 1e-5;
        const double fd = (model.at(p.phi + h).mean_X - model.at(p.phi - h).mean_X) / (2 * h);
        CHECK(rel(model.at(p.phi).dmeanX_dphi, fd) < 1e-6);
    }
}

TEST_CASE("sensitivity is even in phi for real alpha") {
    for (const auto& p : {point(0, 0, 1, 1, 1, 0), point(1, 0.5, 1, 1, 0.7, 0), point(3, 0, 0.5, 2, 1, 0)}) {
        const IntensityModel model(p);
        for (double phi : {0.1, 0.5, 0.7, 1.3}) CHECK(rel(model.sensitivity(phi), model.sensitivity(-phi)) < 1e-9);
    }
}

TEST_CASE("second amplifier phase enters as a fringe offset") {
    auto p = point(1, 0.5, 1, 1, 1, 0.4);
    p.theta2 = std::numbers::pi + 0.3;
    const double phi[] = {p.phi};
    const auto ref = fock::oracle_intensity(p, phi).value[0];
    const auto st = intensity_stats(p);
    CHECK(rel(st.mean_X, ref.mean_X) < 1e-8);
    CHECK(rel(st.mean_X2, ref.mean_X2) < 1e-8);
}

TEST_CASE("sensitivity matches the oracle") {
    for (const auto& p : {point(0, 0, 1, 1, 1, 1), point(1, 1, 1, 1, 0.7, 1)}) {
        CAPTURE(p.describe());
        CHECK(rel(phase_sensitivity(p), fock::oracle_sensitivity(p).value) < 1e-6);
    }
}

}
