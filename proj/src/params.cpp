#include "su11/params.hpp"

#include "su11/errors.hpp"

#include <cmath>
#include <sstream>

namespace su11 {

void InterferometerParams::validate() const {
    auto fail = [](const std::string& msg) { throw InvalidParameter(msg); };
    if (!std::isfinite(g) || g < 0.0) fail("g must be finite and >= 0");
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) fail("alpha must be finite");
    if (!std::isfinite(T) || T < 0.0 || T > 1.0) fail("T must lie in [0, 1]");
    if (!std::isfinite(eta) || eta < 0.0 || eta > 1.0) fail("eta must lie in [0, 1]");
    if (!std::isfinite(phi) || !std::isfinite(theta1) || !std::isfinite(theta2))
        fail("phases must be finite");
    if (!std::isfinite(s) || !std::isfinite(t)) fail("s and t must be finite");
    if (!allow_unnormalized_weights) {
        if (s < 0.0 || s > 1.0) fail("s must lie in [0, 1]");
        if (std::abs(s + t - 1.0) > 1e-12) fail("s + t must equal 1");
    }
    if (m > 20) fail("m above 20 is not supported");
}

InterferometerParams InterferometerParams::with_t(double t_new) const {
    auto p = *this;
    p.t = t_new;
    p.s = 1.0 - t_new;
    return p;
}

InterferometerParams InterferometerParams::with_phi(double phi_new) const {
    auto p = *this;
    p.phi = phi_new;
    return p;
}

InterferometerParams InterferometerParams::with_T(double T_new) const {
    auto p = *this;
    p.T = T_new;
    return p;
}

std::string InterferometerParams::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "m=" << m << " g=" << g << " alpha=" << alpha.real();
    if (alpha.imag() != 0.0) os << (alpha.imag() < 0 ? "" : "+") << alpha.imag() << "i";
    os << " s=" << s << " t=" << t << " T=" << T << " phi=" << phi << " eta=" << eta
       << " theta1=" << theta1 << " theta2=" << theta2;
    return os.str();
}

} // namespace su11
