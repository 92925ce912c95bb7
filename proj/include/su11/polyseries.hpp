#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace su11 {

using cplx = std::complex<double>;

/// Powers of the six differentiation variables of the moment generating
/// function. Slot 0..5 correspond to the bra-side subtraction variable, the
/// ket-side subtraction variable, and the a†, a, b†, b probe variables.
class ExponentVector {
public:
    static constexpr std::size_t kVars = 6;
    static constexpr unsigned kMaxExponent = 63;

    ExponentVector() = default;
    ExponentVector(unsigned e3, unsigned e4, unsigned e5, unsigned e6, unsigned e7, unsigned e8);

    static ExponentVector unpack(std::uint64_t key);
    std::uint64_t packed() const;

    unsigned operator[](std::size_t i) const { return e_[i]; }
    unsigned total_degree() const;
    /// Product of the factorials of every exponent.
    double factorial_weight() const;

    friend ExponentVector operator+(const ExponentVector& a, const ExponentVector& b);
    friend bool operator==(const ExponentVector&, const ExponentVector&) = default;

private:
    std::array<std::uint8_t, kVars> e_{};
};

/// Degree truncation shared by every operand of an arithmetic operation.
/// `cap` bounds the total degree; `box` optionally bounds each variable
/// separately (terms above either bound are discarded).
struct Truncation {
    unsigned cap = 0;
    ExponentVector box{63, 63, 63, 63, 63, 63};

    bool admits(const ExponentVector& e) const;
    friend bool operator==(const Truncation&, const Truncation&) = default;
};

/// Truncated multivariate polynomial in six variables with complex
/// coefficients. Terms are kept sorted by packed exponent key; no stored
/// coefficient is exactly zero.
class SparsePoly {
public:
    using Term = std::pair<std::uint64_t, cplx>;

    explicit SparsePoly(unsigned cap);
    explicit SparsePoly(Truncation trunc);

    static SparsePoly constant(Truncation trunc, cplx value);
    /// c·λ_var  (var in 0..5 addresses λ₃..λ₈)
    static SparsePoly monomial(Truncation trunc, const ExponentVector& e, cplx c);
    static SparsePoly variable(Truncation trunc, std::size_t var, cplx c = 1.0);

    unsigned cap() const { return trunc_.cap; }
    const Truncation& truncation() const { return trunc_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    cplx coefficient(const ExponentVector& e) const;
    cplx constant_term() const { return coefficient(ExponentVector{}); }

    /// Value of the polynomial at a point (used by tests and by the w₄
    /// "vanishes at the origin" check).
    cplx evaluate(const std::array<cplx, ExponentVector::kVars>& point) const;

    SparsePoly scaled(cplx factor) const;
    /// Part of total degree exactly `degree`.
    SparsePoly homogeneous_part(unsigned degree) const;

private:
    friend class PolyBuilder;
    Truncation trunc_;
    std::vector<Term> terms_;
};

SparsePoly poly_add(const SparsePoly& a, const SparsePoly& b);
SparsePoly poly_mul(const SparsePoly& a, const SparsePoly& b);
/// Truncated exp(w); requires w(0) == 0 so the series terminates within the cap.
SparsePoly poly_exp(const SparsePoly& w);
/// Mixed partial derivative of the represented function at the origin.
cplx extract_derivative(const SparsePoly& p, const ExponentVector& k);

inline SparsePoly operator+(const SparsePoly& a, const SparsePoly& b) { return poly_add(a, b); }
inline SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) { return poly_mul(a, b); }
inline SparsePoly operator*(cplx c, const SparsePoly& p) { return p.scaled(c); }

} // namespace su11
