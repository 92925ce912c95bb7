#include "su11/moments.hpp"

#include "su11/errors.hpp"

#include <cmath>
#include <string>

namespace su11 {

namespace {

enum Var : std::size_t { kBra = 0, kKet = 1, kAdag = 2, kA = 3, kBdag = 4, kB = 5 };

} // namespace

// Normal ordering gives, with the creator weights μ and annihilator weights ν
//   μa = s·λ₃ + √T·λ₅   μb = t·λ₃ + √T·λ₇
//   νa = s·λ₄ + √T·λ₆   νb = t·λ₄ + √T·λ₈
// and z = e^{iθ₁} sinh g, c = cosh g,
//   w₄ = −c z* μa μb − c z νa νb + sinh²g (μa νa + μb νb)
//        + (c μa − z νb) α* + (c νa − z* μb) α.
// Loss-mode operators drop out against the environment vacuum, leaving the √T
// factors on the probe variables.
SparsePoly build_w4(const InterferometerParams& params, Truncation trunc) {
    params.validate();
    const double c = std::cosh(params.g);
    const double sh = std::sinh(params.g);
    const cplx z = std::polar(sh, params.theta1);
    const double rt = std::sqrt(params.T);
    const cplx alpha = params.alpha;

    auto lin = [&](std::size_t v1, double c1, std::size_t v2, double c2) {
        return SparsePoly::variable(trunc, v1, c1) + SparsePoly::variable(trunc, v2, c2);
    };
    const SparsePoly mu_a = lin(kBra, params.s, kAdag, rt);
    const SparsePoly mu_b = lin(kBra, params.t, kBdag, rt);
    const SparsePoly nu_a = lin(kKet, params.s, kA, rt);
    const SparsePoly nu_b = lin(kKet, params.t, kB, rt);

    SparsePoly w = (-c * std::conj(z)) * (mu_a * mu_b);
    w = w + (-c * z) * (nu_a * nu_b);
    w = w + cplx{sh * sh} * (mu_a * nu_a + mu_b * nu_b);
    w = w + std::conj(alpha) * (cplx{c} * mu_a + (-z) * nu_b);
    w = w + alpha * (cplx{c} * nu_a + (-std::conj(z)) * mu_b);
    return w;
}

SparsePoly build_w4(const InterferometerParams& params, unsigned cap) {
    return build_w4(params, Truncation{cap});
}

cplx q_moment(const QIndex& idx, const InterferometerParams& params) {
    const auto k = idx.exponents();
    Truncation trunc{idx.order(), k};
    return extract_derivative(poly_exp(build_w4(params, trunc)), k);
}

double normalization_A(const InterferometerParams& params) {
    const double q = q_moment(QIndex{params.m, 0, 0, 0, 0}, params).real();
    if (!(q > 0.0) || !std::isfinite(q))
        throw DegenerateState("normalization Q_{m,0,0,0,0} = " + std::to_string(q) +
                              " is not positive; the subtracted state vanishes");
    return 1.0 / std::sqrt(q);
}

MomentTable::MomentTable(const InterferometerParams& params, unsigned max_order,
                         unsigned max_power)
    : m_(params.m), max_order_(max_order), max_power_(std::min(max_power, max_order)),
      series_([&] {
          const unsigned p = std::min(max_power, max_order);
          Truncation trunc{2 * params.m + max_order, ExponentVector{params.m, params.m, p, p, p, p}};
          return poly_exp(build_w4(params, trunc));
      }()) {}

cplx MomentTable::operator()(unsigned x1, unsigned y1, unsigned x2, unsigned y2) const {
    if (x1 + y1 + x2 + y2 > max_order_ || x1 > max_power_ || y1 > max_power_ ||
        x2 > max_power_ || y2 > max_power_)
        throw ContractViolation("MomentTable: index outside the tabulated range");
    return extract_derivative(series_, ExponentVector{m_, m_, x1, y1, x2, y2});
}

cplx MomentTable::at(const QIndex& idx) const {
    if (idx.m != m_) throw ContractViolation("MomentTable: subtraction order mismatch");
    return (*this)(idx.x1, idx.y1, idx.x2, idx.y2);
}

double MomentTable::norm() const { return (*this)(0, 0, 0, 0).real(); }

double MomentTable::A2() const {
    const double q = norm();
    if (!(q > 0.0) || !std::isfinite(q))
        throw DegenerateState("normalization Q_{m,0,0,0,0} = " + std::to_string(q) +
                              " is not positive; the subtracted state vanishes");
    return 1.0 / q;
}

} // namespace su11
