#include "su11/fock_oracle.hpp"

#include "su11/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <map>
#include <numeric>
#include <string>

namespace su11::fock {

namespace {

cplx inner(std::span<const cplx> u, std::span<const cplx> w) {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * w[i];
    return s;
}

// √((n+k)!/n!)
double lowering_factor(unsigned n, unsigned k) {
    double f = 1.0;
    for (unsigned j = 1; j <= k; ++j) f *= std::sqrt(static_cast<double>(n + j));
    return f;
}

void require_same_cutoff(unsigned a, unsigned b) {
    if (a != b) throw ContractViolation("cutoff mismatch between oracle states");
}

} // namespace

// ---------------------------------------------------------------------------
// States

TwoModeState::TwoModeState(unsigned cutoff)
    : cutoff_(cutoff), amps_((std::size_t{cutoff} + 1) * (cutoff + 1), cplx{0.0, 0.0}) {
    if (cutoff == 0) throw ContractViolation("cutoff must be positive");
}

double TwoModeState::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

double TwoModeState::tail_mass(unsigned layers) const {
    const unsigned lo = cutoff_ + 1 > layers ? cutoff_ + 1 - layers : 0;
    double s = 0.0;
    for (unsigned na = 0; na <= cutoff_; ++na)
        for (unsigned nb = 0; nb <= cutoff_; ++nb)
            if (na >= lo || nb >= lo) s += std::norm((*this)(na, nb));
    return s;
}

void TwoModeState::scale(cplx f) {
    for (auto& a : amps_) a *= f;
}

TwoModeDensity::TwoModeDensity(TwoModeState pure) : cutoff_(pure.cutoff()) {
    branches_.push_back(std::move(pure));
}

TwoModeDensity::TwoModeDensity(unsigned cutoff, std::vector<TwoModeState> branches)
    : cutoff_(cutoff), branches_(std::move(branches)) {
    for (const auto& b : branches_) require_same_cutoff(b.cutoff(), cutoff_);
}

double TwoModeDensity::trace() const {
    double s = 0.0;
    for (const auto& b : branches_) s += b.norm_squared();
    return s;
}

void TwoModeDensity::scale(double f) {
    const double r = std::sqrt(f);
    for (auto& b : branches_) b.scale(r);
}

Eigen::MatrixXcd TwoModeDensity::to_dense() const {
    const auto dim = static_cast<Eigen::Index>((std::size_t{cutoff_} + 1) * (cutoff_ + 1));
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& b : branches_) {
        Eigen::Map<const Eigen::VectorXcd> v(b.amplitudes().data(), dim);
        rho.noalias() += v * v.adjoint();
    }
    return rho;
}

// ---------------------------------------------------------------------------
// Operations

TwoModeState prepare_input(cplx alpha, unsigned cutoff) {
    const double mean = std::norm(alpha);
    // Poisson tail beyond the cutoff, summed term by term in log space.
    double tail = 0.0;
    for (unsigned n = cutoff + 1; n <= cutoff + 400; ++n) {
        const double logp = mean > 0.0 ? -mean + n * std::log(mean) - std::lgamma(n + 1.0) : -INFINITY;
        tail += std::exp(logp);
    }
    if (tail >= 1e-12)
        throw CutoffInadequate("coherent tail " + std::to_string(tail) + " above cutoff " +
                               std::to_string(cutoff));

    TwoModeState psi(cutoff);
    cplx c = std::exp(-mean / 2.0);
    psi(0, 0) = c;
    for (unsigned n = 1; n <= cutoff; ++n) {
        c *= alpha / std::sqrt(static_cast<double>(n));
        psi(n, 0) = c;
    }
    return psi;
}

TwoModeSqueezer::TwoModeSqueezer(unsigned cutoff, double g, double theta) : cutoff_(cutoff) {
    const int nc = static_cast<int>(cutoff);
    sectors_.reserve(2 * cutoff + 1);
    for (int d = -nc; d <= nc; ++d) {
        const int n = nc - std::abs(d) + 1;
        // Basis k ↦ (n_a, n_b) = (k + max(d,0), k + max(−d,0)). The generator
        // G = ξ* ab − ξ a†b† is anti-Hermitian and tridiagonal; with
        // D = diag(e^{ik(θ−π/2)}), iG = D H D† where H is real symmetric with
        // off-diagonal g·√(n_a n_b), so exp(G) = D V e^{−iΛ} Vᵀ D†.
        const int da = std::max(d, 0), db = std::max(-d, 0);
        Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd sub(std::max(n - 1, 0));
        for (int k = 1; k < n; ++k) sub(k - 1) = g * std::sqrt(static_cast<double>(k + da) * (k + db));
        Eigen::MatrixXcd u;
        if (n == 1) {
            u = Eigen::MatrixXcd::Identity(1, 1);
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
            es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
            const Eigen::MatrixXd& v = es.eigenvectors();
            const Eigen::VectorXd cs = es.eigenvalues().array().cos();
            const Eigen::VectorXd sn = es.eigenvalues().array().sin();
            u.resize(n, n);
            u.real() = v * cs.asDiagonal() * v.transpose();
            u.imag() = -(v * sn.asDiagonal() * v.transpose());
        }
        const double beta = theta - std::numbers::pi / 2.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) u(i, j) *= std::polar(1.0, beta * (i - j));
        sectors_.push_back(std::move(u));
    }
}

TwoModeState TwoModeSqueezer::apply(const TwoModeState& in) const {
    require_same_cutoff(in.cutoff(), cutoff_);
    TwoModeState out(cutoff_);
    const int nc = static_cast<int>(cutoff_);
    Eigen::VectorXcd v(nc + 1), w(nc + 1);
    for (int d = -nc; d <= nc; ++d) {
        const int n = nc - std::abs(d) + 1;
        const int da = std::max(d, 0), db = std::max(-d, 0);
        for (int k = 0; k < n; ++k) v(k) = in(k + da, k + db);
        const auto& u = sectors_[static_cast<std::size_t>(d + nc)];
        w.head(n).noalias() = u * v.head(n);
        for (int k = 0; k < n; ++k) out(k + da, k + db) = w(k);
    }
    return out;
}

TwoModeState apply_two_mode_squeeze(const TwoModeState& in, double g, double theta,
                                    double tail_tol) {
    if (g == 0.0) return in;
    TwoModeState out = TwoModeSqueezer(in.cutoff(), g, theta).apply(in);
    const double tail = out.tail_mass(2);
    if (tail > tail_tol * std::max(1e-300, in.norm_squared()))
        throw CutoffInadequate("squeezed state leaks into the top Fock layers");
    return out;
}

TwoModeState lower(const TwoModeState& in, unsigned p, unsigned q) {
    const unsigned nc = in.cutoff();
    TwoModeState out(nc);
    if (p > nc || q > nc) return out;
    for (unsigned na = 0; na + p <= nc; ++na) {
        const double fa = lowering_factor(na, p);
        for (unsigned nb = 0; nb + q <= nc; ++nb)
            out(na, nb) = fa * lowering_factor(nb, q) * in(na + p, nb + q);
    }
    return out;
}

TwoModeState apply_photon_subtraction(const TwoModeState& in, double s, double t, unsigned m) {
    TwoModeState cur = in;
    for (unsigned k = 0; k < m; ++k) {
        const TwoModeState la = lower(cur, 1, 0);
        const TwoModeState lb = lower(cur, 0, 1);
        std::span<cplx> out = cur.amplitudes();
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = s * la.amplitudes()[i] + t * lb.amplitudes()[i];
    }
    if (m > 0 && cur.norm_squared() < 1e-300)
        throw DegenerateState("photon subtraction annihilated the state");
    return cur;
}

TwoModeDensity apply_loss_channel(const TwoModeDensity& rho, double T, Mode mode) {
    if (T < 0.0 || T > 1.0) throw InvalidParameter("transmissivity must lie in [0, 1]");
    if (T == 1.0) return rho;
    const unsigned nc = rho.cutoff();
    const double logT = std::log(T);
    const double logR = std::log1p(-T);

    // coef(n, l) = √(C(n+l, l) (1−T)^l T^n), the amplitude for n + l → n.
    auto coef = [&](unsigned n, unsigned l) {
        if (T == 0.0) return n == 0 ? 1.0 : 0.0;
        const double lg = std::lgamma(n + l + 1.0) - std::lgamma(n + 1.0) - std::lgamma(l + 1.0) +
                          l * logR + n * logT;
        return std::exp(0.5 * lg);
    };

    std::vector<TwoModeState> out;
    for (const auto& v : rho.branches()) {
        for (unsigned l = 0; l <= nc; ++l) {
            TwoModeState k(nc);
            for (unsigned na = 0; na <= nc; ++na)
                for (unsigned nb = 0; nb <= nc; ++nb) {
                    if (mode == Mode::A) {
                        if (na + l <= nc) k(na, nb) = coef(na, l) * v(na + l, nb);
                    } else {
                        if (nb + l <= nc) k(na, nb) = coef(nb, l) * v(na, nb + l);
                    }
                }
            const double kw = k.norm_squared();
            if (kw > 0.0) out.push_back(std::move(k));
        }
    }
    return TwoModeDensity(nc, std::move(out));
}

TwoModeState apply_phase_shift(const TwoModeState& in, double phi) {
    TwoModeState out = in;
    for (unsigned na = 0; na <= in.cutoff(); ++na) {
        const cplx f = std::polar(1.0, phi * na);
        for (unsigned nb = 0; nb <= in.cutoff(); ++nb) out(na, nb) *= f;
    }
    return out;
}

TwoModeDensity apply_phase_shift(const TwoModeDensity& rho, double phi) {
    std::vector<TwoModeState> out;
    out.reserve(rho.branches().size());
    for (const auto& b : rho.branches()) out.push_back(apply_phase_shift(b, phi));
    return TwoModeDensity(rho.cutoff(), std::move(out));
}

cplx expectation(const TwoModeState& psi, const Observable& obs) {
    const unsigned nc = psi.cutoff();
    switch (obs.kind) {
    case Observable::Kind::X:
    case Observable::Kind::X2: {
        const int power = obs.kind == Observable::Kind::X ? 1 : 2;
        double s = 0.0;
        for (unsigned na = 0; na <= nc; ++na)
            for (unsigned nb = 0; nb <= nc; ++nb)
                s += std::norm(psi(na, nb)) * std::pow(static_cast<double>(na + nb), power);
        return s;
    }
    case Observable::Kind::Monomial:
        break;
    }
    const TwoModeState bra = lower(psi, obs.x1, obs.x2);
    const TwoModeState ket = lower(psi, obs.y1, obs.y2);
    return inner(bra.amplitudes(), ket.amplitudes());
}

cplx expectation(const TwoModeDensity& rho, const Observable& obs) {
    cplx s{0.0, 0.0};
    for (const auto& b : rho.branches()) s += expectation(b, obs);
    return s;
}

// ---------------------------------------------------------------------------
// Convergence-checked pipelines

unsigned default_cutoff(const InterferometerParams& p) {
    const double a = std::abs(p.alpha);
    const double sh = std::sinh(p.g);
    return static_cast<unsigned>(std::ceil(a * a + 2.0 * a + 6.0 * sh * sh * (p.m + 3) + 20.0));
}

namespace {

// Runs `eval` at successive cutoffs until two evaluations `step` apart agree.
template <typename Eval>
Converged<std::vector<cplx>> converge(Eval&& eval, unsigned seed, const OracleConfig& cfg) {
    const unsigned step = std::max(1u, cfg.cutoff_step);
    unsigned nc = seed;
    std::vector<cplx> prev;
    bool have_prev = false;
    double last_drift = INFINITY;
    while (nc <= cfg.max_cutoff) {
        std::vector<cplx> cur;
        try {
            cur = eval(nc);
        } catch (const CutoffInadequate& e) {
            have_prev = false;
            // Truncation failures are far from convergence: grow geometrically.
            nc = std::max(nc + step, nc + nc / 4);
            continue;
        }
        if (have_prev) {
            double scale = 0.0;
            for (const auto& v : cur) scale = std::max(scale, std::abs(v));
            double drift = 0.0;
            for (std::size_t i = 0; i < cur.size(); ++i) {
                const double ref = std::max(std::abs(cur[i]), 1e-12 * scale);
                if (ref > 0.0) drift = std::max(drift, std::abs(cur[i] - prev[i]) / ref);
            }
            last_drift = drift;
            if (drift <= cfg.drift_tol) return {std::move(cur), nc, drift};
        }
        prev = std::move(cur);
        have_prev = true;
        nc += step;
    }
    throw CutoffInadequate("oracle did not converge below cutoff " + std::to_string(cfg.max_cutoff) +
                           " (last relative drift " + std::to_string(last_drift) + ")");
}

unsigned seed_cutoff(const InterferometerParams& p, const OracleConfig& cfg) {
    return cfg.cutoff > 0 ? cfg.cutoff : default_cutoff(p);
}

// U_S1 |α, 0⟩ followed by (s a + t b)^m, unnormalized.
TwoModeState subtracted_state(const InterferometerParams& p, unsigned nc, const OracleConfig& cfg) {
    TwoModeState psi = prepare_input(p.alpha, nc);
    psi = apply_two_mode_squeeze(psi, p.g, p.theta1, cfg.tail_tol);
    return apply_photon_subtraction(psi, p.s, p.t, p.m);
}

// c(l, n) = √(C(n+l, l) (1−T)^l T^n): amplitude of the loss Kraus operator
// K_l taking n + l photons to n.
Eigen::MatrixXd loss_amplitudes(unsigned nc, double T) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(nc + 1, nc + 1);
    for (unsigned l = 0; l <= nc; ++l)
        for (unsigned n = 0; n + l <= nc; ++n) {
            if (T == 1.0 || T == 0.0) {
                c(l, n) = (T == 1.0 ? l == 0 : n == 0) ? 1.0 : 0.0;
                continue;
            }
            const double lg = std::lgamma(n + l + 1.0) - std::lgamma(n + 1.0) - std::lgamma(l + 1.0) +
                              l * std::log1p(-T) + n * std::log(T);
            c(l, n) = std::exp(0.5 * lg);
        }
    return c;
}

// Band δ of the density after loss on both modes, B(p) = ⟨p+δ|ρ'|p⟩ with
// ρ' = Σ_{la,lb} (K_la ⊗ K_lb) |ψ⟩⟨ψ| (K_la ⊗ K_lb)†. The double Kraus sum
// factorizes into one transform per mode:
//   B = M_a P M_bᵀ,  P(q) = ψ(q+δ) ψ*(q),  M(p, p+l) = c(l, p+δ) c(l, p).
Eigen::MatrixXcd lossy_band(const TwoModeState& psi, const Eigen::MatrixXd& c, bool lossless, int da,
                            int db) {
    const int n = static_cast<int>(psi.cutoff());
    Eigen::MatrixXcd band = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    const int a0 = std::max(0, -da), a1 = n - std::max(0, da);
    const int b0 = std::max(0, -db), b1 = n - std::max(0, db);
    if (a0 > a1 || b0 > b1) return band;
    for (int qa = a0; qa <= a1; ++qa)
        for (int qb = b0; qb <= b1; ++qb) band(qa, qb) = psi(qa + da, qb + db) * std::conj(psi(qa, qb));
    if (lossless) return band;

    auto transfer = [&](int d, int lo, int hi) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(hi - lo + 1, hi - lo + 1);
        for (int p = lo; p <= hi; ++p)
            for (int q = p; q <= hi; ++q) m(p - lo, q - lo) = c(q - p, p + d) * c(q - p, p);
        return m;
    };
    const Eigen::MatrixXd ma = transfer(da, a0, a1);
    const Eigen::MatrixXd mb = transfer(db, b0, b1);
    const auto blk = band.block(a0, b0, a1 - a0 + 1, b1 - b0 + 1);
    const Eigen::MatrixXd re = ma * blk.real() * mb.transpose();
    const Eigen::MatrixXd im = ma * blk.imag() * mb.transpose();
    band.block(a0, b0, a1 - a0 + 1, b1 - b0 + 1).real() = re;
    band.block(a0, b0, a1 - a0 + 1, b1 - b0 + 1).imag() = im;
    return band;
}

// ⟨p|a†^x a^y|p − x + y⟩ for a single mode; zero outside the truncated space.
double ladder_element(int p, unsigned x, unsigned y, int nc) {
    const int n = p - static_cast<int>(x) + static_cast<int>(y);
    if (p < static_cast<int>(x) || n < 0 || n > nc || p > nc) return 0.0;
    const int base = n - static_cast<int>(y);
    return lowering_factor(static_cast<unsigned>(base), y) * lowering_factor(static_cast<unsigned>(base), x);
}

} // namespace

Converged<std::vector<cplx>> oracle_q_moments(std::span<const QIndex> indices,
                                              const InterferometerParams& params,
                                              const OracleConfig& cfg) {
    params.validate();
    for (const auto& idx : indices)
        if (idx.m != params.m) throw ContractViolation("oracle_q_moments: index m differs from params.m");
    // tr(ρ' a†^x1 a^y1 b†^x2 b^y2) = Σ_p B_δ(p) ⟨p|…|p+δ⟩ with δ = (y1−x1, y2−x2).
    auto eval = [&](unsigned nc) {
        const int n = static_cast<int>(nc);
        const TwoModeState psi = subtracted_state(params, nc, cfg);
        const Eigen::MatrixXd c = loss_amplitudes(nc, params.T);
        std::map<std::pair<int, int>, Eigen::MatrixXcd> bands;
        std::vector<cplx> out;
        out.reserve(indices.size());
        for (const auto& idx : indices) {
            const int da = static_cast<int>(idx.y1) - static_cast<int>(idx.x1);
            const int db = static_cast<int>(idx.y2) - static_cast<int>(idx.x2);
            auto it = bands.find({da, db});
            if (it == bands.end())
                it = bands.emplace(std::make_pair(da, db), lossy_band(psi, c, params.T == 1.0, da, db)).first;
            const auto& band = it->second;
            cplx sum{0.0, 0.0};
            for (int pa = 0; pa <= n; ++pa) {
                const double fa = ladder_element(pa, idx.x1, idx.y1, n);
                if (fa == 0.0) continue;
                for (int pb = 0; pb <= n; ++pb) {
                    const double fb = ladder_element(pb, idx.x2, idx.y2, n);
                    if (fb != 0.0) sum += band(pa, pb) * (fa * fb);
                }
            }
            out.push_back(sum);
        }
        return out;
    };
    return converge(eval, seed_cutoff(params, cfg), cfg);
}

Converged<std::vector<OracleIntensity>> oracle_intensity(const InterferometerParams& params,
                                                         std::span<const double> phis,
                                                         const OracleConfig& cfg) {
    params.validate();
    auto eval = [&](unsigned nc) {
        const int n = static_cast<int>(nc);
        const TwoModeState psi = subtracted_state(params, nc, cfg);
        // The phase shift, the second amplifier and X all conserve n_a − n_b,
        // so only the sector blocks ρ_d of the lossy state matter. Entry
        // (k, k') of block d lies on the band δ = (k − k', k − k').
        const TwoModeSqueezer opa2(nc, params.g, params.theta2);
        auto sector_range = [n](int d) {
            return std::array<int, 3>{n - std::abs(d) + 1, std::max(d, 0), std::max(-d, 0)};
        };
        auto is_top = [n](int na, int nb) { return na + 2 > n || nb + 2 > n; };
        std::vector<cplx> out;

        if (params.T == 1.0) {
            // Pure state: propagate each sector vector directly.
            const double norm = psi.norm_squared();
            for (double phi : phis) {
                double mx = 0.0, mx2 = 0.0, tail = 0.0;
                for (int d = -n; d <= n; ++d) {
                    const auto [len, da, db] = sector_range(d);
                    Eigen::VectorXcd v(len);
                    for (int k = 0; k < len; ++k) v(k) = psi(k + da, k + db) * std::polar(1.0, phi * (k + da));
                    const Eigen::VectorXd pop = (opa2.sector(d) * v).cwiseAbs2();
                    for (int k = 0; k < len; ++k) {
                        const double x = 2 * k + da + db;
                        mx += x * pop(k);
                        mx2 += x * x * pop(k);
                        if (is_top(k + da, k + db)) tail += pop(k);
                    }
                }
                if (tail > cfg.tail_tol * norm)
                    throw CutoffInadequate("output state leaks into the top Fock layers");
                out.emplace_back(mx / norm);
                out.emplace_back(mx2 / norm);
            }
            return out;
        }

        std::vector<Eigen::MatrixXcd> rho(2 * nc + 1);
        for (int d = -n; d <= n; ++d) {
            const int len = sector_range(d)[0];
            rho[d + n] = Eigen::MatrixXcd::Zero(len, len);
        }
        const Eigen::MatrixXd c = loss_amplitudes(nc, params.T);
        for (int j = -n; j <= n; ++j) {
            const Eigen::MatrixXcd band = lossy_band(psi, c, false, j, j);
            for (int d = -n; d <= n; ++d) {
                const auto [len, da, db] = sector_range(d);
                for (int kp = std::max(0, -j); kp < len && kp + j < len; ++kp)
                    rho[d + n](kp + j, kp) = band(kp + da, kp + db);
            }
        }
        double trace = 0.0;
        for (const auto& r : rho) trace += r.trace().real();

        // tr(P ρ P† U† O U), P = diag(e^{iφ n_a}); within a sector the phase
        // depends only on k − k'. The top-layer rows of U give the leakage.
        auto phased_trace = [](const Eigen::MatrixXcd& r, const Eigen::MatrixXcd& o, double phi) {
            const Eigen::Index len = r.rows();
            Eigen::VectorXcd ph(len);
            for (Eigen::Index k = 0; k < len; ++k) ph(k) = std::polar(1.0, phi * static_cast<double>(k));
            return (ph.asDiagonal() * r * ph.conjugate().asDiagonal()).cwiseProduct(o.transpose()).sum().real();
        };
        for (double phi : phis) {
            double tail = 0.0;
            for (int d = -n; d <= n; ++d) {
                const auto [len, da, db] = sector_range(d);
                const auto& u = opa2.sector(d);
                for (int k = 0; k < len; ++k) {
                    if (!is_top(k + da, k + db)) continue;
                    const Eigen::MatrixXcd row = u.row(k);
                    tail += phased_trace(rho[d + n], row.adjoint() * row, phi);
                }
            }
            if (tail > cfg.tail_tol * trace)
                throw CutoffInadequate("output state leaks into the top Fock layers");
        }
        std::vector<double> mx(phis.size(), 0.0), mx2(phis.size(), 0.0);
        for (int d = -n; d <= n; ++d) {
            const auto [len, da, db] = sector_range(d);
            const auto& u = opa2.sector(d);
            Eigen::VectorXd x(len);
            for (int k = 0; k < len; ++k) x(k) = 2 * k + da + db;
            const Eigen::MatrixXcd ox = u.adjoint() * x.asDiagonal() * u;
            const Eigen::MatrixXcd ox2 = u.adjoint() * x.cwiseAbs2().asDiagonal() * u;
            for (std::size_t i = 0; i < phis.size(); ++i) {
                mx[i] += phased_trace(rho[d + n], ox, phis[i]);
                mx2[i] += phased_trace(rho[d + n], ox2, phis[i]);
            }
        }
        for (std::size_t i = 0; i < phis.size(); ++i) {
            out.emplace_back(mx[i] / trace);
            out.emplace_back(mx2[i] / trace);
        }
        return out;
    };
    auto c = converge(eval, seed_cutoff(params, cfg), cfg);
    std::vector<OracleIntensity> res;
    for (std::size_t i = 0; i + 1 < c.value.size(); i += 2)
        res.push_back({c.value[i].real(), c.value[i + 1].real()});
    return {std::move(res), c.cutoff, c.drift};
}

Converged<std::vector<double>> oracle_sensitivities(const InterferometerParams& params,
                                                   std::span<const double> phis, double dphi,
                                                   const OracleConfig& cfg) {
    if (dphi < 1e-6 || dphi > 1e-3) throw ContractViolation("oracle_sensitivity: dphi outside [1e-6, 1e-3]");
    std::vector<double> samples;
    for (double phi : phis) samples.insert(samples.end(), {phi - dphi, phi, phi + dphi});
    const auto r = oracle_intensity(params, samples, cfg);
    std::vector<double> out;
    for (std::size_t i = 0; i < phis.size(); ++i) {
        const auto& lo = r.value[3 * i];
        const auto& mid = r.value[3 * i + 1];
        const auto& hi = r.value[3 * i + 2];
        const double slope = (hi.mean_X - lo.mean_X) / (2.0 * dphi);
        const double var = std::max(0.0, mid.variance());
        out.push_back(slope == 0.0 ? INFINITY : std::sqrt(var) / std::abs(slope));
    }
    return {std::move(out), r.cutoff, r.drift};
}

Converged<double> oracle_sensitivity(const InterferometerParams& params, double dphi,
                                     const OracleConfig& cfg) {
    const double phi[] = {params.phi};
    const auto r = oracle_sensitivities(params, phi, dphi, cfg);
    return {r.value[0], r.cutoff, r.drift};
}

namespace {

TwoModeState lossless_normalized(const InterferometerParams& p, unsigned nc, const OracleConfig& cfg) {
    TwoModeState psi = subtracted_state(p, nc, cfg);
    psi.scale(1.0 / std::sqrt(psi.norm_squared()));
    return psi;
}

} // namespace

Converged<OracleQfi> oracle_qfi_pure(const InterferometerParams& params, double delta,
                                     const OracleConfig& cfg) {
    params.validate();
    auto variance_route = [&](unsigned nc) {
        const TwoModeState psi = lossless_normalized(params, nc, cfg);
        const double n1 = expectation(psi, Observable::na()).real();
        const double n2 = expectation(psi, Observable::monomial(2, 2, 0, 0)).real() + n1;
        return std::vector<cplx>{4.0 * (n2 - n1 * n1)};
    };
    // The overlap route carries O(δ²) and rounding noise, so convergence is
    // judged on the variance route and the overlap is taken at that cutoff.
    const auto c = converge(variance_route, seed_cutoff(params, cfg), cfg);
    const TwoModeState psi = apply_phase_shift(lossless_normalized(params, c.cutoff, cfg), params.phi);
    const TwoModeState shifted = apply_phase_shift(psi, delta);
    const double overlap = std::abs(inner(psi.amplitudes(), shifted.amplitudes()));
    return {{c.value[0].real(), 8.0 * (1.0 - overlap) / (delta * delta)}, c.cutoff, c.drift};
}

Converged<ModeAStatistics> oracle_mode_a_statistics(const InterferometerParams& params,
                                                    const OracleConfig& cfg) {
    params.validate();
    auto eval = [&](unsigned nc) {
        const TwoModeState psi = lossless_normalized(params, nc, cfg);
        const double n1 = expectation(psi, Observable::na()).real();
        const double n2 = expectation(psi, Observable::monomial(2, 2, 0, 0)).real() + n1;
        return std::vector<cplx>{n1, n2 - n1 * n1};
    };
    auto c = converge(eval, seed_cutoff(params, cfg), cfg);
    return {{c.value[0].real(), c.value[1].real()}, c.cutoff, c.drift};
}

Converged<double> oracle_total_photon_number(const InterferometerParams& params,
                                             const OracleConfig& cfg) {
    params.validate();
    auto eval = [&](unsigned nc) {
        const TwoModeState psi = lossless_normalized(params, nc, cfg);
        return std::vector<cplx>{expectation(psi, Observable::na()) + expectation(psi, Observable::nb())};
    };
    auto c = converge(eval, seed_cutoff(params, cfg), cfg);
    return {c.value[0].real(), c.cutoff, c.drift};
}

} // namespace su11::fock
