#pragma once

#include <vector>

#include "dqw/core.hpp"
#include "dqw/fft.hpp"
#include "dqw/mat2.hpp"
#include "dqw/spectral.hpp"

namespace dqw {

enum class WalkMode { fixed_mass, variable_mass };
enum class Representation { stencil, spectral };

inline void check_lattice_size(int n, const char* what) {
    if (n < 2) throw invalid_lattice(std::string(what) + ": lattice size must be >= 2");
    if (n % 2 != 0)
        throw invalid_lattice(std::string(what) +
                              ": lattice size must be even so k = 0 and the B0 "
                              "interior are on-grid");
}

// discrete momentum of FFT bin j, reported in (-pi, pi]
inline double grid_momentum(int j, int n) {
    const double k = 2.0 * pi * static_cast<double>(j) / static_cast<double>(n);
    return k > pi ? k - 2.0 * pi : k;
}

// ── SpinorField ──────────────────────────────────────────────────────────────
// Two-component complex amplitudes on a periodic lattice; coin-major layout
// so the stencil pass touches each coin plane with unit stride.

class SpinorField {
public:
    static SpinorField fixed_mass(double mu, int n) {
        check_lattice_size(n, "SpinorField");
        SpinorField f;
        f.mode_ = WalkMode::fixed_mass;
        f.mu_ = mu;
        f.n_ = n;
        f.ntau_ = 1;
        f.amp_.assign(2 * static_cast<std::size_t>(n), cplx(0));
        return f;
    }

    static SpinorField variable_mass(int n, int ntau) {
        check_lattice_size(n, "SpinorField");
        check_lattice_size(ntau, "SpinorField (tau axis)");
        SpinorField f;
        f.mode_ = WalkMode::variable_mass;
        f.n_ = n;
        f.ntau_ = ntau;
        f.amp_.assign(2 * static_cast<std::size_t>(n) * ntau, cplx(0));
        return f;
    }

    WalkMode mode() const { return mode_; }
    double mu() const { return mu_; }
    int n() const { return n_; }
    int ntau() const { return ntau_; }

    cplx& at(int s, int x) { return amp_[idx(s, 0, x)]; }
    const cplx& at(int s, int x) const { return amp_[idx(s, 0, x)]; }
    cplx& at(int s, int tau, int x) { return amp_[idx(s, tau, x)]; }
    const cplx& at(int s, int tau, int x) const { return amp_[idx(s, tau, x)]; }

    std::vector<cplx>& amplitudes() { return amp_; }
    const std::vector<cplx>& amplitudes() const { return amp_; }

    double squared_norm() const {
        double s = 0.0;
        for (const auto& a : amp_) s += std::norm(a);
        return s;
    }
    double norm() const { return std::sqrt(squared_norm()); }

    void normalize() {
        const double nn = norm();
        if (nn == 0.0) throw domain_error("SpinorField::normalize: zero state");
        for (auto& a : amp_) a /= nn;
    }

    std::size_t idx(int s, int tau, int x) const {
        return (static_cast<std::size_t>(s) * ntau_ + tau) * n_ + x;
    }

private:
    WalkMode mode_ = WalkMode::fixed_mass;
    double mu_ = 0.0;
    int n_ = 2, ntau_ = 1;
    std::vector<cplx> amp_;
};

// ── WalkOperator ─────────────────────────────────────────────────────────────

// momentum-space block of the fixed-mass walk (T cos mu on the R component,
// -i sin mu coin mixing):
//   [ cos(mu) e^{-ik}   -i sin(mu)     ]
//   [ -i sin(mu)         cos(mu) e^{ik} ]
inline Mat2 fixed_mass_block(double mu, double k) {
    const double c = std::cos(mu), s = std::sin(mu);
    return {{c * std::polar(1.0, -k), cplx(0, -s), cplx(0, -s), c * std::polar(1.0, k)}};
}

// Immutable after construction; safe to share across threads.
class WalkOperator {
public:
    WalkMode mode() const { return mode_; }
    double mu() const { return mu_; }
    int n() const { return n_; }
    int ntau() const { return ntau_; }
    Representation representation() const { return repr_; }

    // momentum-space 2x2 block of bin (jx [, jtau])
    Mat2 block(int jx, int jtau = 0) const {
        const double k = 2.0 * pi * jx / static_cast<double>(n_);
        if (mode_ == WalkMode::fixed_mass) return fixed_mass_block(mu_, k);
        const double m = 2.0 * pi * jtau / static_cast<double>(ntau_);
        return walk_matrix(k, m);
    }

    // cached per-mode unitaries (spectral representation only)
    const std::vector<Mat2>& spectral_blocks() const {
        if (blocks_.empty())
            throw mismatch_error("WalkOperator: no spectral cache for a stencil operator");
        return blocks_;
    }

    friend WalkOperator build_fixed_mass_walk(double mu, int n, Representation repr);
    friend WalkOperator build_variable_mass_walk(int n, int ntau, Representation repr);

private:
    WalkMode mode_ = WalkMode::fixed_mass;
    double mu_ = 0.0;
    int n_ = 2, ntau_ = 1;
    Representation repr_ = Representation::stencil;
    std::vector<Mat2> blocks_;  // [jtau * n + jx] when spectral
};

inline WalkOperator build_fixed_mass_walk(double mu, int n,
                                          Representation repr = Representation::stencil) {
    check_lattice_size(n, "build_fixed_mass_walk");
    WalkOperator op;
    op.mode_ = WalkMode::fixed_mass;
    op.mu_ = mu;
    op.n_ = n;
    op.ntau_ = 1;
    op.repr_ = repr;
    if (repr == Representation::spectral) {
        op.blocks_.reserve(n);
        for (int j = 0; j < n; ++j) op.blocks_.push_back(op.block(j));
    }
    return op;
}

inline WalkOperator build_variable_mass_walk(int n, int ntau,
                                             Representation repr = Representation::stencil) {
    check_lattice_size(n, "build_variable_mass_walk");
    check_lattice_size(ntau, "build_variable_mass_walk (tau axis)");
    WalkOperator op;
    op.mode_ = WalkMode::variable_mass;
    op.n_ = n;
    op.ntau_ = ntau;
    op.repr_ = repr;
    if (repr == Representation::spectral) {
        op.blocks_.reserve(static_cast<std::size_t>(n) * ntau);
        for (int m = 0; m < ntau; ++m)
            for (int j = 0; j < n; ++j) op.blocks_.push_back(op.block(j, m));
    }
    return op;
}

namespace walk_detail {

inline void check_compatible(const WalkOperator& op, const SpinorField& psi) {
    if (op.mode() != psi.mode())
        throw mismatch_error("step: operator and state have different modes");
    if (op.n() != psi.n() || op.ntau() != psi.ntau())
        throw mismatch_error("step: operator and state have different lattice sizes");
    if (op.mode() == WalkMode::fixed_mass && op.mu() != psi.mu())
        throw mismatch_error("step: operator and state have different mass angles");
}

inline void step_stencil_fixed(const SpinorField& in, SpinorField& out, double mu) {
    const int n = in.n();
    const double c = std::cos(mu), s = std::sin(mu);
    const cplx mis(0, -s);
    for (int x = 0; x < n; ++x) {
        const int xm = (x == 0) ? n - 1 : x - 1;
        out.at(0, x) = c * in.at(0, xm) + mis * in.at(1, x);
    }
    for (int x = 0; x < n; ++x) {
        const int xp = (x == n - 1) ? 0 : x + 1;
        out.at(1, x) = mis * in.at(0, x) + c * in.at(1, xp);
    }
}

// A = 1/2 [ (T^dag + T) S    T^dag - T        ]   T: tau-shift, S: x-shift
//         [ T^dag - T        (T^dag + T) S^dag ]
inline void step_stencil_variable(const SpinorField& in, SpinorField& out) {
    const int n = in.n(), nt = in.ntau();
    for (int t = 0; t < nt; ++t) {
        const int tp = (t == nt - 1) ? 0 : t + 1;
        const int tm = (t == 0) ? nt - 1 : t - 1;
        for (int x = 0; x < n; ++x) {
            const int xm = (x == 0) ? n - 1 : x - 1;
            const int xp = (x == n - 1) ? 0 : x + 1;
            out.at(0, t, x) = 0.5 * (in.at(0, tp, xm) + in.at(0, tm, xm)) +
                              0.5 * (in.at(1, tp, x) - in.at(1, tm, x));
            out.at(1, t, x) = 0.5 * (in.at(0, tp, x) - in.at(0, tm, x)) +
                              0.5 * (in.at(1, tp, xp) + in.at(1, tm, xp));
        }
    }
}

// 2D unitary FFT over (tau, x) of one coin plane, in place
inline void fft2_coin(cplx* plane, int ntau, int n, bool forward) {
    for (int t = 0; t < ntau; ++t) {
        cplx* row = plane + static_cast<std::size_t>(t) * n;
        forward ? fft_forward_unitary(row, n) : fft_inverse_unitary(row, n);
    }
    if (ntau > 1) {
        std::vector<cplx> col(ntau);
        for (int x = 0; x < n; ++x) {
            for (int t = 0; t < ntau; ++t) col[t] = plane[static_cast<std::size_t>(t) * n + x];
            forward ? fft_forward_unitary(col.data(), ntau)
                    : fft_inverse_unitary(col.data(), ntau);
            for (int t = 0; t < ntau; ++t) plane[static_cast<std::size_t>(t) * n + x] = col[t];
        }
    }
}

// Transform to momentum space, apply op.block(j, m)^steps per mode via
//   B^t = cos(t w) I + (sin(t w)/sin(w)) (B - cos(w) I),
// exact for any unitary with det 1, stable through sin(w) -> 0, then
// transform back.
inline void evolve_spectral(const WalkOperator& op, SpinorField& psi, long steps) {
    const int n = psi.n(), nt = psi.ntau();
    const std::size_t plane = static_cast<std::size_t>(n) * nt;
    cplx* r = psi.amplitudes().data();
    cplx* l = r + plane;
    fft2_coin(r, nt, n, true);
    fft2_coin(l, nt, n, true);
    const bool cached = op.representation() == Representation::spectral;
    const std::vector<Mat2>* cache = cached ? &op.spectral_blocks() : nullptr;
    for (int m = 0; m < nt; ++m) {
        for (int j = 0; j < n; ++j) {
            const std::size_t i = static_cast<std::size_t>(m) * n + j;
            const Mat2 b = cached ? (*cache)[i] : op.block(j, m);
            const Vec2 v{r[i], l[i]};
            Vec2 w;
            if (steps == 1) {
                w = b * v;
            } else {
                const double cw = std::clamp(0.5 * (b.a[0] + b.a[3]).real(), -1.0, 1.0);
                const double om = std::acos(cw);
                const double sw = std::sin(om);
                const double t = static_cast<double>(steps);
                const double ratio = sw > 1e-150 ? std::sin(t * om) / sw : t;
                const double ct = std::cos(t * om);
                const Vec2 bv = b * v;
                w = {ct * v[0] + ratio * (bv[0] - cw * v[0]),
                     ct * v[1] + ratio * (bv[1] - cw * v[1])};
            }
            r[i] = w[0];
            l[i] = w[1];
        }
    }
    fft2_coin(r, nt, n, false);
    fft2_coin(l, nt, n, false);
}

}  // namespace walk_detail

// One application of the walk unitary, using the operator's representation.
inline SpinorField step(const WalkOperator& op, const SpinorField& psi) {
    walk_detail::check_compatible(op, psi);
    if (op.representation() == Representation::spectral) {
        SpinorField out = psi;
        walk_detail::evolve_spectral(op, out, 1);
        return out;
    }
    SpinorField out = psi;
    if (op.mode() == WalkMode::fixed_mass)
        walk_detail::step_stencil_fixed(psi, out, op.mu());
    else
        walk_detail::step_stencil_variable(psi, out);
    return out;
}

// Iterated step; the spectral path applies e^{i steps * phase} per mode in a
// single transform pass.
inline SpinorField evolve(const WalkOperator& op, const SpinorField& psi, long steps) {
    if (steps < 0) throw domain_error("evolve: steps must be non-negative");
    walk_detail::check_compatible(op, psi);
    if (steps == 0) return psi;
    if (op.representation() == Representation::spectral) {
        SpinorField out = psi;
        walk_detail::evolve_spectral(op, out, steps);
        return out;
    }
    SpinorField a = psi, b = psi;
    for (long s = 0; s < steps; ++s) {
        if (op.mode() == WalkMode::fixed_mass)
            walk_detail::step_stencil_fixed(a, b, op.mu());
        else
            walk_detail::step_stencil_variable(a, b);
        std::swap(a, b);
    }
    return a;
}

// ── Wavepacket construction ──────────────────────────────────────────────────

// Gaussian packet on the e^{+i s_branch omega} band of the fixed-mass walk,
// centred at momentum k0 and position x0.
inline SpinorField gaussian_packet_fixed(double mu, int n, double k0, double sigma_k,
                                         int x0, int branch = -1) {
    check_lattice_size(n, "gaussian_packet_fixed");
    if (sigma_k <= 0) throw domain_error("gaussian_packet_fixed: sigma_k must be > 0");
    SpinorField psi = SpinorField::fixed_mass(mu, n);
    std::vector<cplx> r(n), l(n);
    for (int j = 0; j < n; ++j) {
        const double k = grid_momentum(j, n);
        const double dk = wrap_angle(k - k0);
        const double g = std::exp(-dk * dk / (4.0 * sigma_k * sigma_k));
        const auto eig = eig_unitary_det1(fixed_mass_block(mu, k));
        const Vec2& chi = branch >= 0 ? eig.plus : eig.minus;
        const cplx centre = std::polar(g, -k * x0);
        r[j] = centre * chi[0];
        l[j] = centre * chi[1];
    }
    fft_inverse_unitary(r.data(), n);
    fft_inverse_unitary(l.data(), n);
    for (int x = 0; x < n; ++x) {
        psi.at(0, x) = r[x];
        psi.at(1, x) = l[x];
    }
    psi.normalize();
    return psi;
}

// Gaussian packet for the variable-mass walk, centred at (k0, mu0) in
// momentum space and (x0, tau0) on the lattice, on the e^{-i omega} band.
inline SpinorField gaussian_packet_variable(int n, int ntau, double k0, double mu0,
                                            double sigma_k, double sigma_mu, int x0,
                                            int tau0) {
    SpinorField psi = SpinorField::variable_mass(n, ntau);
    if (sigma_k <= 0 || sigma_mu <= 0)
        throw domain_error("gaussian_packet_variable: widths must be > 0");
    const std::size_t plane = static_cast<std::size_t>(n) * ntau;
    std::vector<cplx> buf(2 * plane, cplx(0));
    for (int m = 0; m < ntau; ++m) {
        const double muv = grid_momentum(m, ntau);
        const double dm = wrap_angle(muv - mu0);
        for (int j = 0; j < n; ++j) {
            const double k = grid_momentum(j, n);
            const double dk = wrap_angle(k - k0);
            const double g = std::exp(-dk * dk / (4.0 * sigma_k * sigma_k) -
                                      dm * dm / (4.0 * sigma_mu * sigma_mu));
            const auto es = eigensystem(k, muv);
            const cplx centre = std::polar(g, -k * x0 - muv * tau0);
            const std::size_t i = static_cast<std::size_t>(m) * n + j;
            buf[i] = centre * es.chi_minus[0];
            buf[plane + i] = centre * es.chi_minus[1];
        }
    }
    walk_detail::fft2_coin(buf.data(), ntau, n, false);
    walk_detail::fft2_coin(buf.data() + plane, ntau, n, false);
    std::copy(buf.begin(), buf.end(), psi.amplitudes().begin());
    psi.normalize();
    return psi;
}

// argmax of the position marginal sum_{s[,tau]} |psi|^2
inline int peak_position(const SpinorField& psi) {
    const int n = psi.n(), nt = psi.ntau();
    int best = 0;
    double bestv = -1.0;
    for (int x = 0; x < n; ++x) {
        double v = 0.0;
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < nt; ++t) v += std::norm(psi.at(s, t, x));
        if (v > bestv) {
            bestv = v;
            best = x;
        }
    }
    return best;
}

// signed cyclic displacement from x0 to x1 on a ring of size n, in (-n/2, n/2]
inline int cyclic_displacement(int x0, int x1, int n) {
    int d = (x1 - x0) % n;
    if (d <= -n / 2) d += n;
    if (d > n / 2) d -= n;
    return d;
}

}  // namespace dqw
