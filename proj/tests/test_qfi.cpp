#include "su11/errors.hpp"
#include "su11/fock_oracle.hpp"
#include "su11/optimizer.hpp"
#include "su11/qfi.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace su11;

namespace {

InterferometerParams point(unsigned m, double t, double g, double alpha) {
    InterferometerParams p;
    p.m = m;
    p = p.with_t(t);
    p.g = g;
    p.alpha = alpha;
    p.phi = 1.0;
    return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace

TEST_SUITE("qfi") {

TEST_CASE("coherent input has F = 4|alpha|^2 and N = |alpha|^2") {
    for (double a : {0.5, 1.0, 2.0}) {
        const auto p = point(0, 0, 0, a);
        CHECK(qfi_ideal(p) == doctest::Approx(4 * a * a).epsilon(1e-12));
        CHECK(total_photon_number(p) == doctest::Approx(a * a).epsilon(1e-12));
    }
}

TEST_CASE("ideal QFI matches both oracle routes") {
    for (const auto& p : {point(0, 0, 1, 1), point(1, 0.5, 1, 1), point(2, 1, 0.5, 2)}) {
        CAPTURE(p.describe());
        const auto ref = fock::oracle_qfi_pure(p);
        CHECK(rel(qfi_ideal(p), ref.value.variance_route) < 1e-8);
        CHECK(rel(qfi_ideal(p), ref.value.overlap_route) < 1e-3);
    }
}

TEST_CASE("ideal QFI ignores the internal loss") {
    auto p = point(2, 0.3, 1, 1);
    const double f1 = qfi_ideal(p);
    p.T = 0.4;
    CHECK(qfi_ideal(p) == f1);
}

TEST_CASE("total photon number matches the oracle") {
    for (const auto& p : {point(0, 0, 1, 1), point(2, 1, 1, 1)})
        CHECK(rel(total_photon_number(p), fock::oracle_total_photon_number(p).value) < 1e-8);
}

TEST_CASE("lossy QFI limits and monotonicity") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
        auto p = point(static_cast<unsigned>(trial % 4), u(rng), 0.2 + u(rng), 0.3 + 2 * u(rng));
        p.eta = 1.0;
        CHECK(rel(qfi_lossy(p), qfi_ideal(p)) < 1e-12);
        p.eta = 0.0;
        CHECK(qfi_lossy(p) == 0.0);
        double prev = -1.0;
        for (int i = 0; i < 50; ++i) {
            p.eta = i / 49.0;
            const double f = qfi_lossy(p);
            CHECK(f >= prev);
            CHECK(f <= qfi_ideal(p) + 1e-9);
            prev = f;
        }
    }
}

TEST_CASE("lossy QFI from oracle statistics") {
    auto p = point(1, 0.0, 1, 3);
    p = p.with_t(optimize_dpso_t(p, TObjective::QfiLossy).argmin);
    p.eta = 0.7;
    const auto stats = fock::oracle_mode_a_statistics(p).value;
    CHECK(rel(qfi_lossy(p), qfi_lossy_from_statistics(stats, 0.7)) < 1e-8);
    CHECK(qfi_lossy_from_statistics({0.0, 0.0}, 0.5) == 0.0);
}

TEST_CASE("printed variance differs from the faithful one") {
    auto p = point(1, 0.5, 1, 1);
    p.eta = 0.7;
    CHECK(rel(qfi_lossy(p, VarianceForm::Printed), qfi_lossy(p)) > 1e-2);
}

TEST_CASE("limits report") {
    const auto p = point(1, 0.5, 1, 1);
    const auto r = limits(p, 1);
    CHECK(r.qcrb == doctest::Approx(1.0 / std::sqrt(r.F_ideal)));
    CHECK(r.sql == doctest::Approx(1.0 / std::sqrt(r.N_total)));
    CHECK(r.hl == doctest::Approx(1.0 / r.N_total));
    CHECK(r.hl <= r.sql);
    CHECK(r.F_lossy <= r.F_ideal + 1e-9);
    CHECK(limits(p, 4).qcrb == doctest::Approx(r.qcrb / 2));
    CHECK_THROWS_AS(limits(p, 0), InvalidParameter);
    CHECK_THROWS_AS(limits(point(0, 0, 0, 0), 1), DegenerateState);
}

TEST_CASE("Cramér-Rao bound lies below the optimized intensity sensitivity") {
    for (unsigned m : {0u, 1u, 2u}) {
        auto p = point(m, 0.5, 1, 1);
        const auto best = optimize_phi(p, 0.01, 1.5);
        CHECK(limits(p).qcrb <= best.value + 1e-9);
    }
}

}
