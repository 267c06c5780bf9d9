#pragma once

#include <array>
#include <cmath>

#include "dqw/core.hpp"
#include "dqw/mat2.hpp"
#include "dqw/nvector.hpp"
#include "dqw/rng.hpp"

namespace dqw {

// tolerance used by the on-shell constructor check
inline constexpr double kOnShellTol = 1e-12;
// sin(omega) below this is treated as a degenerate band point
inline constexpr double kDegeneracyTol = 1e-9;

// Dispersion relation omega = arccos(cos mu cos k), principal branch in [0, pi].
inline double dispersion(double k, double mu) {
    const double c = std::clamp(std::cos(mu) * std::cos(k), -1.0, 1.0);
    return std::acos(c);
}

// A point k = (omega, k, mu) of the mass shell V. The constructor enforces
// the on-shell condition, so a KPoint is on-shell by construction.
struct KPoint {
    double omega, k, mu;

    KPoint(double omega_, double k_, double mu_) : omega(omega_), k(k_), mu(mu_) {
        if (!std::isfinite(omega) || std::abs(omega - dispersion(k, mu)) > kOnShellTol)
            throw domain_error("KPoint: omega is not on the mass shell");
    }

    static KPoint on_shell(double k, double mu) { return KPoint(dispersion(k, mu), k, mu); }
};

// Walk matrix in momentum space,
//   A(mu,k) = [ cos(mu) e^{-ik}   i sin(mu)      ]
//             [ i sin(mu)         cos(mu) e^{ik} ]
// unitary with det = 1, eigenphases e^{+-i omega(k,mu)}.
inline Mat2 walk_matrix(double k, double mu) {
    const double c = std::cos(mu), s = std::sin(mu);
    return {{c * std::polar(1.0, -k), cplx(0, s), cplx(0, s), c * std::polar(1.0, k)}};
}

// ── Clifford basis ───────────────────────────────────────────────────────────
// tau = (sigma2, -i sigma1, -i sigma3) generates Cl_{1,2}(R):
// {tau_i, tau_j} = 2 eta_ij with eta = diag(+1,-1,-1).

inline Mat2 clifford_tau(int i) {
    switch (i) {
        case 0: return sigma2();
        case 1: return cplx(0, -1) * sigma1();
        case 2: return cplx(0, -1) * sigma3();
        default: throw domain_error("clifford_tau: index out of range");
    }
}

inline double clifford_eta(int i, int j) {
    if (i != j) return 0.0;
    return i == 0 ? 1.0 : -1.0;
}

// Contraction n_mu tau^mu for contravariant components n = (n0, n1, n2):
//   n0 sigma2 + i n1 sigma1 + i n2 sigma3.
// Annihilates the +omega eigenvector whenever n is the on-shell n-vector.
inline Mat2 kernel_matrix(const NVector& n) {
    return {{cplx(0, n.n2), cplx(0, n.n1 - n.n0), cplx(0, n.n1 + n.n0), cplx(0, -n.n2)}};
}

// n(k) = (sin omega, cos mu sin k, sin mu); null w.r.t. eta on the shell.
inline NVector n_vector(const KPoint& p) {
    return {std::sin(p.omega), std::cos(p.mu) * std::sin(p.k), std::sin(p.mu)};
}

// ||(n(p).tau) psi||: zero iff psi lies in the +omega kernel at p.
inline double kernel_residual(const KPoint& p, const Vec2& psi) {
    return norm(kernel_matrix(n_vector(p)) * psi);
}

// ── Eigensystem of the walk matrix ───────────────────────────────────────────

struct EigenSystem {
    double omega = 0.0;
    cplx phase_plus{1, 0};   // e^{+i omega}
    cplx phase_minus{1, 0};  // e^{-i omega}
    Vec2 chi_plus{cplx(1), cplx(0)};
    Vec2 chi_minus{cplx(0), cplx(1)};
    bool degenerate = false;
};

// Eigenvectors from the kernel of n_mu tau^mu: chi+ is proportional to
// (n0 - n1, n2) and to (n2, n0 + n1); the better-conditioned form is used.
// Phase convention: first component above 1e-12 made real positive.
inline EigenSystem eigensystem(double k, double mu) {
    EigenSystem es;
    es.omega = dispersion(k, mu);
    es.phase_plus = std::polar(1.0, es.omega);
    es.phase_minus = std::polar(1.0, -es.omega);
    if (std::sin(es.omega) < kDegeneracyTol) {
        es.degenerate = true;
        es.chi_plus = {cplx(1), cplx(0)};
        es.chi_minus = {cplx(0), cplx(1)};
        return es;
    }
    const NVector n = n_vector(KPoint(es.omega, k, mu));
    Vec2 a{cplx(n.n0 - n.n1), cplx(n.n2)};
    Vec2 b{cplx(n.n2), cplx(n.n0 + n.n1)};
    Vec2 chi = (norm(a) >= norm(b)) ? a : b;
    const double nn = norm(chi);
    chi = {chi[0] / nn, chi[1] / nn};
    es.chi_plus = canonical_phase(chi);
    es.chi_minus = canonical_phase({-std::conj(es.chi_plus[1]), std::conj(es.chi_plus[0])});
    return es;
}

// ── Clifford algebra verification ────────────────────────────────────────────

struct CliffordReport {
    // max over the 9 pairs of |{tau_i, tau_j} - 2 eta_ij I|
    double anticommutator_residual = 0.0;
    // max over random n of |sigma2 (n.tau) - (n1 sigma3 - n2 sigma1 + n0 I)|,
    // i.e. multiplying the kernel equation by sigma2 reproduces the
    // projector form of the eigenvalue equation
    double bridge_residual = 0.0;
    int samples = 0;

    bool pass(double tol = 1e-15) const {
        return anticommutator_residual <= tol && bridge_residual <= tol;
    }
};

// tau2_fault is a verification hook: it perturbs one entry of tau_2 so that
// fault injection demonstrably trips the check.
inline CliffordReport clifford_check(int samples = 256, std::uint64_t seed = 1,
                                     double tau2_fault = 0.0) {
    CliffordReport rep;
    rep.samples = samples;
    std::array<Mat2, 3> tau{clifford_tau(0), clifford_tau(1), clifford_tau(2)};
    tau[1](0, 1) += tau2_fault;  // tau_2 in the paper's 1-based naming
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const Mat2 anti = tau[i] * tau[j] + tau[j] * tau[i];
            const Mat2 want = cplx(2.0 * clifford_eta(i, j)) * Mat2::identity();
            rep.anticommutator_residual =
                std::max(rep.anticommutator_residual, distance(anti, want));
        }
    Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
        const NVector n{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const Mat2 lhs =
            sigma2() * (n.n0 * tau[0] + cplx(-n.n1) * tau[1] + cplx(-n.n2) * tau[2]);
        const Mat2 rhs = cplx(n.n1) * sigma3() + cplx(-n.n2) * sigma1() +
                         cplx(n.n0) * Mat2::identity();
        rep.bridge_residual = std::max(rep.bridge_residual, distance(lhs, rhs));
    }
    return rep;
}

// ── Rank-one structure of sigma2 n.tau ───────────────────────────────────────

struct RankOneReport {
    double sv_large = 0.0;
    double sv_small = 0.0;
    int rank = 0;  // 0 only at the degenerate origin
};

// On the shell sigma2 (n.tau) has singular values {2 n0, 0}: rank one away
// from the origin, rank zero at it.
inline RankOneReport rank_one_check(const KPoint& p, double tol = 1e-12) {
    const Mat2 m = sigma2() * kernel_matrix(n_vector(p));
    const auto sv = singular_values(m);
    RankOneReport rep;
    rep.sv_large = sv[0];
    rep.sv_small = sv[1];
    rep.rank = (sv[0] > tol ? 1 : 0) + (sv[1] > tol ? 1 : 0);
    return rep;
}

}  // namespace dqw
