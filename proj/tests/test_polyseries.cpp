#include "su11/errors.hpp"
#include "su11/polyseries.hpp"

#include <doctest.h>

#include <random>

using namespace su11;

namespace {

ExponentVector ev(unsigned a, unsigned b = 0, unsigned c = 0, unsigned d = 0, unsigned e = 0, unsigned f = 0) {
    return {a, b, c, d, e, f};
}

SparsePoly var(unsigned cap, std::size_t i, cplx c = 1.0) { return SparsePoly::variable(Truncation{cap}, i, c); }

bool same(const SparsePoly& a, const SparsePoly& b) { return a.terms() == b.terms(); }

} // namespace

TEST_SUITE("polyseries") {

TEST_CASE("exponent vector packing round-trips") {
    const ExponentVector e{1, 63, 0, 7, 2, 5};
    CHECK(ExponentVector::unpack(e.packed()) == e);
    CHECK(e.total_degree() == 78);
    CHECK(ev(2, 3).factorial_weight() == doctest::Approx(12.0));
    CHECK_THROWS_AS(ExponentVector(64, 0, 0, 0, 0, 0), ContractViolation);
}

TEST_CASE("poly_add") {
    const auto p = var(3, 0, 2.0) + var(3, 0, 3.0);
    CHECK(p.size() == 1);
    CHECK(p.coefficient(ev(1)) == cplx(5.0));

    const auto q = var(3, 2) * var(3, 3) + var(3, 0, 1.0);
    CHECK(same(q + SparsePoly(3u), q));

    const auto x = var(3, 0) * var(3, 1);
    CHECK((x + x.scaled(-1.0)).empty());

    CHECK_THROWS_AS(var(2, 0) + var(3, 0), ContractViolation);
}

TEST_CASE("poly_mul") {
    const auto p = var(2, 0) * var(2, 1);
    CHECK(p.size() == 1);
    CHECK(p.coefficient(ev(1, 1)) == cplx(1.0));

    CHECK((var(1, 0) * var(1, 1)).empty());

    const auto one = SparsePoly::constant(Truncation{2}, 1.0);
    const auto r = (one + var(2, 2)) * (one + var(2, 3));
    CHECK(r.size() == 4);
    for (const auto& e : {ev(0), ev(0, 0, 1), ev(0, 0, 0, 1), ev(0, 0, 1, 1)}) CHECK(r.coefficient(e) == cplx(1.0));

    CHECK_THROWS_AS(var(2, 0) * var(3, 0), ContractViolation);
}

TEST_CASE("poly_mul is commutative and associative") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coef(-3, 3);
    auto random_poly = [&](unsigned cap) {
        SparsePoly p(cap);
        for (std::size_t v = 0; v < 6; ++v) p = p + var(cap, v, cplx(coef(rng), coef(rng)));
        return p + var(cap, 0) * var(cap, 5, cplx(coef(rng), 0.0));
    };
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = random_poly(4), b = random_poly(4), c = random_poly(4);
        CHECK(same(a * b, b * a));
        CHECK(same((a * b) * c, a * (b * c)));
    }
}

TEST_CASE("poly_exp examples") {
    const cplx c{0.3, -1.2};
    const auto e1 = poly_exp(var(2, 0, c));
    CHECK(e1.size() == 3);
    CHECK(e1.coefficient(ev(0)) == cplx(1.0));
    CHECK(std::abs(e1.coefficient(ev(1)) - c) < 1e-15);
    CHECK(std::abs(e1.coefficient(ev(2)) - c * c / 2.0) < 1e-15);

    const auto e2 = poly_exp(var(2, 0) * var(2, 1));
    CHECK(e2.size() == 2);
    CHECK(e2.coefficient(ev(1, 1)) == cplx(1.0));

    const auto e3 = poly_exp(var(2, 0) + var(2, 1));
    CHECK(e3.size() == 6);
    CHECK(e3.coefficient(ev(2)) == cplx(0.5));
    CHECK(e3.coefficient(ev(1, 1)) == cplx(1.0));
    CHECK(e3.coefficient(ev(0, 2)) == cplx(0.5));

    const auto bad = SparsePoly::constant(Truncation{2}, 1.0) + var(2, 0);
    CHECK_THROWS_AS(poly_exp(bad), ContractViolation);
}

TEST_CASE("extract_derivative") {
    const cplx c{0.7, 0.2};
    CHECK(std::abs(extract_derivative(poly_exp(var(2, 0, c)), ev(2)) - c * c) < 1e-15);

    const auto p = SparsePoly::constant(Truncation{2}, 1.0) + var(2, 0) * var(2, 1);
    CHECK(extract_derivative(p, ev(1, 1)) == cplx(1.0));

    // ∂λ₃² ∂λ₄ ∂λ₅ exp(λ₃λ₄ + λ₃λ₅) at 0 = 2 (from (λ₃λ₄)(λ₃λ₅)·2!/2!·...).
    const auto w = var(4, 0) * var(4, 1) + var(4, 0) * var(4, 2);
    CHECK(std::abs(extract_derivative(poly_exp(w), ev(2, 1, 1)) - 2.0) < 1e-14);

    CHECK_THROWS_AS(extract_derivative(p, ev(2, 1)), ContractViolation);
}

TEST_CASE("extract_derivative is linear") {
    const auto a = poly_exp(var(3, 0, 0.5) + var(3, 0) * var(3, 1));
    const auto b = poly_exp(var(3, 1, cplx(0.0, 1.0)) + var(3, 2));
    const auto k = ev(1, 1, 1);
    const cplx lhs = extract_derivative(a + b.scaled(2.5), k);
    const cplx rhs = extract_derivative(a, k) + 2.5 * extract_derivative(b, k);
    CHECK(std::abs(lhs - rhs) < 1e-14);
}

TEST_CASE("truncated exponential matches the full series") {
    // exp of a polynomial in one variable with x = λ₃: coefficients of
    // exp(a x + b x²) satisfy n c_n = a c_{n−1} + 2 b c_{n−2}.
    const cplx a{0.4, 0.1}, b{-0.3, 0.2};
    const unsigned cap = 10;
    const auto p = poly_exp(var(cap, 0, a) + var(cap, 0) * var(cap, 0, b));
    std::vector<cplx> c(cap + 1);
    c[0] = 1.0;
    for (unsigned n = 1; n <= cap; ++n)
        c[n] = (a * c[n - 1] + (n >= 2 ? 2.0 * b * c[n - 2] : 0.0)) / static_cast<double>(n);
    for (unsigned n = 0; n <= cap; ++n) CHECK(std::abs(p.coefficient(ev(n)) - c[n]) < 1e-15);
}

TEST_CASE("box truncation keeps the admitted coefficients exact") {
    const auto w = var(6, 0, 0.3) * var(6, 2) + var(6, 1, 0.2) + var(6, 2) * var(6, 3, 1.5) + var(6, 4, -0.4);
    const auto full = poly_exp(w);
    Truncation boxed{6, ev(1, 1, 2, 2, 2, 2)};
    const auto wb = SparsePoly::variable(boxed, 0, 0.3) * SparsePoly::variable(boxed, 2) +
                    SparsePoly::variable(boxed, 1, 0.2) +
                    SparsePoly::variable(boxed, 2) * SparsePoly::variable(boxed, 3, 1.5) +
                    SparsePoly::variable(boxed, 4, -0.4);
    const auto part = poly_exp(wb);
    for (const auto& [key, coef] : part.terms()) {
        const auto e = ExponentVector::unpack(key);
        CHECK(boxed.admits(e));
        CHECK(std::abs(coef - full.coefficient(e)) < 1e-15);
    }
    CHECK(part.size() > 0);
}

TEST_CASE("evaluate and homogeneous parts") {
    const auto p = var(3, 0, 2.0) + var(3, 1) * var(3, 2, 3.0);
    const std::array<cplx, 6> pt{1.0, 2.0, 0.5, 0.0, 0.0, 0.0};
    CHECK(p.evaluate(pt) == cplx(5.0));
    CHECK(p.homogeneous_part(2).size() == 1);
    CHECK(p.homogeneous_part(1).coefficient(ev(1)) == cplx(2.0));
}

}
