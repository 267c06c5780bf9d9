#pragma once

#include <vector>

#include "dqw/core.hpp"
#include "dqw/nvector.hpp"
#include "dqw/shell.hpp"
#include "dqw/spectral.hpp"
#include "dqw/symmetry.hpp"

namespace dqw {

// ── Generating matrices of the fixed-mass symmetry group ───────────────────
// The group preserving the mass slice is SO+(1,1) x| Z_2, generated by
// L = S D S^-1 and L+ = S F S^-1, with S the eigenbasis [v | u | w] of the
// slice's extremal null directions u, v and their eta-orthogonal w.

inline void check_nonsingular_mu(double mu, const char* what) {
    if (std::abs(std::cos(mu)) < 1e-12)
        throw domain_error(std::string(what) + ": singular at cos mu = 0");
}

inline Mat3 fixed_mu_S(double mu) {
    check_nonsingular_mu(mu, "fixed_mu_S");
    const double c = std::cos(mu), s = std::sin(mu);
    return {{1, 1, s, -c, c, 0, s, s, 1}};
}

inline Mat3 fixed_mu_D(double beta) {
    return {{std::exp(-beta), 0, 0, 0, std::exp(beta), 0, 0, 0, 1}};
}

inline Mat3 fixed_mu_F() { return {{0, 1, 0, 1, 0, 0, 0, 0, -1}}; }

// L(beta) = S D(beta) S^-1: scales the extremal directions by e^{+-beta},
// fixes w = (sin mu, 0, 1).
inline LorentzElement fixed_mu_L(double beta, double mu) {
    const Mat3 s = fixed_mu_S(mu);
    return LorentzElement::from_matrix(s * fixed_mu_D(beta) * inverse(s), 1e-9);
}

// L+(beta) = S F D(beta) S^-1: the orientation-reversing coset (swaps the
// extremal directions, flips w); beta = 0 gives S F S^-1.
inline LorentzElement fixed_mu_Lplus(double beta, double mu) {
    const Mat3 s = fixed_mu_S(mu);
    return LorentzElement::from_matrix(s * fixed_mu_F() * fixed_mu_D(beta) * inverse(s),
                                       1e-9);
}

enum class FixedMuParity { identity, plus };

// A fixed-mass change of frame: mass angle, rapidity and the Z_2 coset.
struct FixedMuFrame {
    double mu, beta;
    FixedMuParity parity;

    FixedMuFrame(double mu_, double beta_, FixedMuParity parity_ = FixedMuParity::identity)
        : mu(mu_), beta(beta_), parity(parity_) {
        if (!(std::abs(mu) < pi / 2) || mu == 0.0)
            throw domain_error("FixedMuFrame: mu must lie in (-pi/2, pi/2) \\ {0}");
        if (!std::isfinite(beta)) throw domain_error("FixedMuFrame: beta must be finite");
    }

    LorentzElement matrix() const {
        return parity == FixedMuParity::identity ? fixed_mu_L(beta, mu)
                                                 : fixed_mu_Lplus(beta, mu);
    }
};

// ── Exclusion of the non-orthochronous candidates ───────────────────────────

struct ExclusionReport {
    double mu = 0.0, beta = 0.0;
    // (1,1) entries (top-left, 1-based naming) and their closed forms
    double t2_entry = 0.0, t2_closed_form = 0.0;         // -(3-cos 2mu)/(2cos^2 mu)
    double lminus_entry = 0.0, lminus_closed_form = 0.0;  // -sec^2 cosh b + tan^2
    double lplus_entry = 0.0, lplus_closed_form = 0.0;    // +sec^2 cosh b + tan^2
    bool t2_orthochronous = false;
    bool lminus_orthochronous = false;
    bool lplus_orthochronous = false;
};

// Builds T+-^2 = S O+-^2 S^-1 and L+- = S N+- S^-1 and reports which fail the
// orthochronicity condition (time-time entry >= 1). Only the L+ family
// survives, leaving SO+(1,1) x| Z_2.
inline ExclusionReport exclusion_report(double mu, double beta) {
    check_nonsingular_mu(mu, "exclusion_report");
    ExclusionReport rep;
    rep.mu = mu;
    rep.beta = beta;
    const Mat3 s = fixed_mu_S(mu);
    const Mat3 sinv = inverse(s);
    const Mat3 osq{{-1, 0, 0, 0, -1, 0, 0, 0, 1}};  // O_+-^2, independent of beta
    const Mat3 t2 = s * osq * sinv;
    const Mat3 nminus{{0, -std::exp(beta), 0, -std::exp(-beta), 0, 0, 0, 0, -1}};
    const Mat3 nplus{{0, std::exp(beta), 0, std::exp(-beta), 0, 0, 0, 0, -1}};
    const Mat3 lminus = s * nminus * sinv;
    const Mat3 lplus = s * nplus * sinv;

    const double sec2 = 1.0 / sqr(std::cos(mu)), tan2 = sqr(std::tan(mu));
    rep.t2_entry = t2(0, 0);
    rep.t2_closed_form = -(3.0 - std::cos(2.0 * mu)) / (2.0 * sqr(std::cos(mu)));
    rep.lminus_entry = lminus(0, 0);
    rep.lminus_closed_form = -sec2 * std::cosh(beta) + tan2;
    rep.lplus_entry = lplus(0, 0);
    rep.lplus_closed_form = sec2 * std::cosh(beta) + tan2;
    rep.t2_orthochronous = t2(0, 0) >= 1.0;
    rep.lminus_orthochronous = lminus(0, 0) >= 1.0;
    rep.lplus_orthochronous = lplus(0, 0) >= 1.0 && metric_residual(lplus) < 1e-9 &&
                              std::abs(det(lplus) - 1.0) < 1e-9;
    return rep;
}

// ── The mass-preserving transformation ──────────────────────────────────────

// 1/phi(k, mu, T) = (T n(k,mu))_2 / sin mu: the radial rescaling that returns
// the boosted n-vector to the mass slice n_2 = sin mu.
inline double phi_scale(double k, double mu, const LorentzElement& t) {
    if (std::abs(std::sin(mu)) < 1e-12)
        throw domain_error("phi_scale: undefined at sin mu = 0");
    if (region_of(k, mu) != Region::B0)
        throw domain_error("phi_scale: (k, mu) must lie in B0");
    const NVector y = t * n_vector(KPoint::on_shell(k, mu));
    if (std::abs(y.n2) < 1e-300)
        throw domain_error("phi_scale: boosted mass component vanished");
    return std::sin(mu) / y.n2;
}

struct FixedMuImage {
    double omega, k;  // mu is unchanged by construction
};

// k'(k) with the third component held fixed: n(k') = phi * T n(k).
inline FixedMuImage fixed_mu_transform(double k, double mu, const LorentzElement& t) {
    const double phi = phi_scale(k, mu, t);
    const NVector y = t * n_vector(KPoint::on_shell(k, mu));
    NVector np = phi * y;
    np.n2 = std::sin(mu);  // exact slice restoration
    if (np.n0 <= 0.0 || 1.0 - np.n0 * np.n0 <= kTruncationTol)
        throw truncation_error("fixed_mu_transform: image left the B0 interior");
    const double kp = std::asin(std::clamp(np.n1 / std::cos(mu), -1.0, 1.0));
    return {dispersion(kp, mu), kp};
}

// ── Relativistic-limit probe ─────────────────────────────────────────────────
// Differentiates the transform with respect to beta at beta = 0 on a k-grid
// and compares the generator action with the linear Lorentz one
// (omega_dot, k_dot) = (k, omega). The deviation stays bounded away from
// zero as mu -> 0: the fixed-mass group has no consistent relativistic limit.

struct GeneratorSample {
    double k = 0.0;
    double omega_dot = 0.0, k_dot = 0.0;          // measured generator action
    double lorentz_omega_dot = 0.0, lorentz_k_dot = 0.0;  // (k, omega)
    double deviation = 0.0;
};

struct ProbeResult {
    double mu = 0.0;
    std::vector<GeneratorSample> samples;
    double deviation_norm = 0.0;  // sup over the grid
};

inline ProbeResult relativistic_limit_probe_single(double mu, double beta_step = 1e-4,
                                                   int grid_points = 32,
                                                   double k_max = 1.3) {
    if (beta_step <= 0) throw domain_error("relativistic_limit_probe: step must be > 0");
    ProbeResult res;
    res.mu = mu;
    res.samples.reserve(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        const double k = -k_max + 2.0 * k_max * i / (grid_points - 1);
        auto derivative = [&](double h) {
            const LorentzElement lp = fixed_mu_L(h, mu);
            const LorentzElement lm = fixed_mu_L(-h, mu);
            const FixedMuImage a = fixed_mu_transform(k, mu, lp);
            const FixedMuImage b = fixed_mu_transform(k, mu, lm);
            return std::array<double, 2>{(a.omega - b.omega) / (2 * h),
                                         (a.k - b.k) / (2 * h)};
        };
        const auto d1 = derivative(beta_step);
        const auto d2 = derivative(beta_step / 2);
        for (int c = 0; c < 2; ++c) {
            if (std::abs(d1[c] - d2[c]) > 0.1 * std::max(std::abs(d2[c]), 1e-6))
                throw accuracy_error(
                    "relativistic_limit_probe: Richardson disagreement > 10%, "
                    "beta step too coarse");
        }
        GeneratorSample smp;
        smp.k = k;
        // Richardson-extrapolated central differences
        smp.omega_dot = (4.0 * d2[0] - d1[0]) / 3.0;
        smp.k_dot = (4.0 * d2[1] - d1[1]) / 3.0;
        smp.lorentz_omega_dot = k;
        smp.lorentz_k_dot = dispersion(k, mu);
        smp.deviation = std::hypot(smp.omega_dot - smp.lorentz_omega_dot,
                                   smp.k_dot - smp.lorentz_k_dot);
        res.deviation_norm = std::max(res.deviation_norm, smp.deviation);
        res.samples.push_back(smp);
    }
    return res;
}

inline std::vector<ProbeResult> relativistic_limit_probe(const std::vector<double>& mu_list,
                                                         double beta_step = 1e-4,
                                                         int grid_points = 32,
                                                         double k_max = 1.3) {
    std::vector<ProbeResult> out;
    out.reserve(mu_list.size());
    for (const double mu : mu_list)
        out.push_back(relativistic_limit_probe_single(mu, beta_step, grid_points, k_max));
    return out;
}

}  // namespace dqw
