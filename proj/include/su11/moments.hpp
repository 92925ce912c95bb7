#pragma once

#include "su11/params.hpp"
#include "su11/polyseries.hpp"

namespace su11 {

/// Index of the moment
///   Q_{m,x1,y1,x2,y2} = ⟨ψ| a†^x1 a^y1 b†^x2 b^y2 |ψ⟩,
///   |ψ⟩ = U_B (s a + t b)^m U_S1 |α⟩|0⟩  (loss modes traced out).
struct QIndex {
    unsigned m = 0, x1 = 0, y1 = 0, x2 = 0, y2 = 0;

    unsigned order() const { return 2 * m + x1 + y1 + x2 + y2; }
    ExponentVector exponents() const { return {m, m, x1, y1, x2, y2}; }
    /// Index of the Hermitian-conjugate moment.
    QIndex adjoint() const { return {m, y1, x1, y2, x2}; }
};

/// Generating polynomial w₄ whose exponential yields every Q moment as a
/// mixed derivative at the origin.
SparsePoly build_w4(const InterferometerParams& params, Truncation trunc);
SparsePoly build_w4(const InterferometerParams& params, unsigned cap);

/// Single moment, truncating the series at exactly the requested order.
cplx q_moment(const QIndex& idx, const InterferometerParams& params);

/// A = Q_{m,0,0,0,0}^{-1/2}; throws DegenerateState if the subtracted
/// state vanishes.
double normalization_A(const InterferometerParams& params);

/// Every moment Q_{m,x1,y1,x2,y2} with x1+y1+x2+y2 <= max_order and each
/// power <= max_power, from a single truncated exponential.
class MomentTable {
public:
    explicit MomentTable(const InterferometerParams& params, unsigned max_order = 4,
                         unsigned max_power = 2);

    cplx operator()(unsigned x1, unsigned y1, unsigned x2, unsigned y2) const;
    cplx at(const QIndex& idx) const;

    unsigned m() const { return m_; }
    unsigned max_order() const { return max_order_; }
    /// Q_{m,0,0,0,0}.
    double norm() const;
    /// A² = 1 / Q_{m,0,0,0,0}; throws DegenerateState when the norm vanishes.
    double A2() const;

private:
    unsigned m_;
    unsigned max_order_;
    unsigned max_power_;
    SparsePoly series_;
};

} // namespace su11
