#include "su11/polyseries.hpp"

#include "su11/errors.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace su11 {

namespace {

constexpr unsigned kBits = 6;
constexpr std::uint64_t kMask = (1u << kBits) - 1;

double factorial(unsigned n) {
    double r = 1.0;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

void require_same_truncation(const SparsePoly& a, const SparsePoly& b, const char* op) {
    if (!(a.truncation() == b.truncation()))
        throw ContractViolation(std::string(op) + ": operands have different truncations (cap " +
                                std::to_string(a.cap()) + " vs " + std::to_string(b.cap()) + ")");
}

} // namespace

ExponentVector::ExponentVector(unsigned e3, unsigned e4, unsigned e5, unsigned e6, unsigned e7,
                               unsigned e8) {
    const std::array<unsigned, kVars> in{e3, e4, e5, e6, e7, e8};
    for (std::size_t i = 0; i < kVars; ++i) {
        if (in[i] > kMaxExponent) throw ContractViolation("exponent exceeds 63");
        e_[i] = static_cast<std::uint8_t>(in[i]);
    }
}

ExponentVector ExponentVector::unpack(std::uint64_t key) {
    ExponentVector e;
    for (std::size_t i = 0; i < kVars; ++i)
        e.e_[i] = static_cast<std::uint8_t>((key >> (kBits * (kVars - 1 - i))) & kMask);
    return e;
}

std::uint64_t ExponentVector::packed() const {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < kVars; ++i) key = (key << kBits) | e_[i];
    return key;
}

unsigned ExponentVector::total_degree() const {
    unsigned d = 0;
    for (auto x : e_) d += x;
    return d;
}

double ExponentVector::factorial_weight() const {
    double w = 1.0;
    for (auto x : e_) w *= factorial(x);
    return w;
}

ExponentVector operator+(const ExponentVector& a, const ExponentVector& b) {
    ExponentVector r;
    for (std::size_t i = 0; i < ExponentVector::kVars; ++i) {
        const unsigned v = unsigned{a.e_[i]} + b.e_[i];
        if (v > ExponentVector::kMaxExponent) throw ContractViolation("exponent overflow");
        r.e_[i] = static_cast<std::uint8_t>(v);
    }
    return r;
}

bool Truncation::admits(const ExponentVector& e) const {
    if (e.total_degree() > cap) return false;
    for (std::size_t i = 0; i < ExponentVector::kVars; ++i)
        if (e[i] > box[i]) return false;
    return true;
}

// Accumulates terms keyed by packed exponents, then emits a canonical
// sorted, zero-free SparsePoly.
class PolyBuilder {
public:
    explicit PolyBuilder(Truncation trunc, std::size_t hint = 0) : trunc_(trunc) {
        acc_.reserve(hint);
    }

    void add(std::uint64_t key, cplx c) { acc_[key] += c; }

    SparsePoly finish() && {
        SparsePoly p(trunc_);
        p.terms_.reserve(acc_.size());
        for (const auto& [k, c] : acc_)
            if (c != cplx{0.0, 0.0}) p.terms_.emplace_back(k, c);
        std::sort(p.terms_.begin(), p.terms_.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        return p;
    }

private:
    Truncation trunc_;
    std::unordered_map<std::uint64_t, cplx> acc_;
};

SparsePoly::SparsePoly(unsigned cap) : trunc_{cap} {}
SparsePoly::SparsePoly(Truncation trunc) : trunc_(trunc) {}

SparsePoly SparsePoly::constant(Truncation trunc, cplx value) {
    return monomial(trunc, ExponentVector{}, value);
}

SparsePoly SparsePoly::monomial(Truncation trunc, const ExponentVector& e, cplx c) {
    SparsePoly p(trunc);
    if (c != cplx{0.0, 0.0} && trunc.admits(e)) p.terms_.emplace_back(e.packed(), c);
    return p;
}

SparsePoly SparsePoly::variable(Truncation trunc, std::size_t var, cplx c) {
    if (var >= ExponentVector::kVars) throw ContractViolation("variable index out of range");
    std::array<unsigned, ExponentVector::kVars> e{};
    e[var] = 1;
    return monomial(trunc, ExponentVector{e[0], e[1], e[2], e[3], e[4], e[5]}, c);
}

cplx SparsePoly::coefficient(const ExponentVector& e) const {
    const auto key = e.packed();
    auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                               [](const Term& t, std::uint64_t k) { return t.first < k; });
    if (it != terms_.end() && it->first == key) return it->second;
    return {0.0, 0.0};
}

cplx SparsePoly::evaluate(const std::array<cplx, ExponentVector::kVars>& point) const {
    cplx sum{0.0, 0.0};
    for (const auto& [key, c] : terms_) {
        const auto e = ExponentVector::unpack(key);
        cplx v = c;
        for (std::size_t i = 0; i < ExponentVector::kVars; ++i)
            for (unsigned k = 0; k < e[i]; ++k) v *= point[i];
        sum += v;
    }
    return sum;
}

SparsePoly SparsePoly::scaled(cplx factor) const {
    SparsePoly p(trunc_);
    if (factor == cplx{0.0, 0.0}) return p;
    p.terms_.reserve(terms_.size());
    for (const auto& [k, c] : terms_) {
        const cplx v = c * factor;
        if (v != cplx{0.0, 0.0}) p.terms_.emplace_back(k, v);
    }
    return p;
}

SparsePoly SparsePoly::homogeneous_part(unsigned degree) const {
    SparsePoly p(trunc_);
    for (const auto& t : terms_)
        if (ExponentVector::unpack(t.first).total_degree() == degree) p.terms_.push_back(t);
    return p;
}

SparsePoly poly_add(const SparsePoly& a, const SparsePoly& b) {
    require_same_truncation(a, b, "poly_add");
    PolyBuilder out(a.truncation(), a.size() + b.size());
    for (const auto& [k, c] : a.terms()) out.add(k, c);
    for (const auto& [k, c] : b.terms()) out.add(k, c);
    return std::move(out).finish();
}

SparsePoly poly_mul(const SparsePoly& a, const SparsePoly& b) {
    require_same_truncation(a, b, "poly_mul");
    const auto& trunc = a.truncation();
    PolyBuilder out(trunc, a.size() * b.size());
    for (const auto& [ka, ca] : a.terms()) {
        const auto ea = ExponentVector::unpack(ka);
        for (const auto& [kb, cb] : b.terms()) {
            const auto e = ea + ExponentVector::unpack(kb);
            if (trunc.admits(e)) out.add(e.packed(), ca * cb);
        }
    }
    return std::move(out).finish();
}

// For E = exp(w) split into homogeneous parts E_n, w_j, the identity
// n·E_n = Σ_j j·w_j·E_{n−j} (Euler operator applied to E' = E·w') builds E
// degree by degree. It is exact up to the cap because w has no constant term.
SparsePoly poly_exp(const SparsePoly& w) {
    if (w.constant_term() != cplx{0.0, 0.0})
        throw ContractViolation("poly_exp: argument has a nonzero constant term");
    const auto& trunc = w.truncation();
    const unsigned cap = trunc.cap;

    std::vector<SparsePoly> wj;
    wj.reserve(cap + 1);
    for (unsigned j = 0; j <= cap; ++j) wj.push_back(w.homogeneous_part(j));

    std::vector<SparsePoly> parts;
    parts.reserve(cap + 1);
    parts.push_back(SparsePoly::constant(trunc, 1.0));
    for (unsigned n = 1; n <= cap; ++n) {
        PolyBuilder acc(trunc);
        for (unsigned j = 1; j <= n; ++j) {
            if (wj[j].empty() || parts[n - j].empty()) continue;
            const double weight = static_cast<double>(j) / n;
            for (const auto& [kw, cw] : wj[j].terms()) {
                const auto ew = ExponentVector::unpack(kw);
                for (const auto& [ke, ce] : parts[n - j].terms()) {
                    const auto e = ew + ExponentVector::unpack(ke);
                    if (trunc.admits(e)) acc.add(e.packed(), weight * cw * ce);
                }
            }
        }
        parts.push_back(std::move(acc).finish());
    }

    PolyBuilder total(trunc);
    for (const auto& p : parts)
        for (const auto& [k, c] : p.terms()) total.add(k, c);
    return std::move(total).finish();
}

cplx extract_derivative(const SparsePoly& p, const ExponentVector& k) {
    if (!p.truncation().admits(k))
        throw ContractViolation("extract_derivative: derivative order " +
                                std::to_string(k.total_degree()) + " exceeds truncation (cap " +
                                std::to_string(p.cap()) + ")");
    return p.coefficient(k) * k.factorial_weight();
}

} // namespace su11
