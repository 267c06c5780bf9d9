#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dqw/core.hpp"
#include "dqw/fixed_mu.hpp"
#include "dqw/io.hpp"
#include "dqw/rng.hpp"
#include "dqw/shell.hpp"
#include "dqw/spectral.hpp"
#include "dqw/symmetry.hpp"
#include "dqw/walk.hpp"

namespace dqw {

// ── Verification framework ───────────────────────────────────────────────────

struct CheckResult {
    std::string suite;
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    long samples = 0;
    bool pass = false;
};

struct VerifyOptions {
    std::uint64_t seed = 20250810;
    double samples_scale = 1.0;      // multiplies the default sweep sizes
    double clifford_tau2_fault = 0.0;  // fault-injection hook for tau_2
};

namespace verify_detail {

inline long scaled(const VerifyOptions& o, long base) {
    const long n = static_cast<long>(base * o.samples_scale);
    return std::max<long>(4, n);
}

inline CheckResult make(const std::string& suite, const std::string& name, double residual,
                        double tol, long samples) {
    CheckResult r;
    r.suite = suite;
    r.name = name;
    r.max_residual = residual;
    r.tolerance = tol;
    r.samples = samples;
    r.pass = residual <= tol;
    return r;
}

}  // namespace verify_detail

// ── Dense matrix oracle ──────────────────────────────────────────────────────
// Explicit matrices assembled entry-wise from the Kronecker-delta block
// definitions; they share no code with the stencil or spectral steppers.

// row-major (2n)x(2n), basis index s*n + x
inline std::vector<cplx> dense_fixed_mass_matrix(double mu, int n) {
    const std::size_t dim = 2 * static_cast<std::size_t>(n);
    std::vector<cplx> a(dim * dim, cplx(0));
    const double c = std::cos(mu);
    const cplx mis(0, -std::sin(mu));
    auto at = [&](std::size_t r, std::size_t col) -> cplx& { return a[r * dim + col]; };
    for (int x = 0; x < n; ++x) {
        const int xp = (x + 1) % n, xm = (x + n - 1) % n;
        at(xp, x) += c;              // R<-R: T cos(mu)
        at(n + x, x) += mis;         // L<-R: -i sin(mu)
        at(x, n + x) += mis;         // R<-L: -i sin(mu)
        at(n + xm, n + x) += c;      // L<-L: T^dag cos(mu)
    }
    return a;
}

// row-major (2 n ntau)^2, basis index (s*ntau + tau)*n + x
inline std::vector<cplx> dense_variable_mass_matrix(int n, int ntau) {
    const std::size_t plane = static_cast<std::size_t>(n) * ntau;
    const std::size_t dim = 2 * plane;
    std::vector<cplx> a(dim * dim, cplx(0));
    auto id = [&](int s, int t, int x) {
        return (static_cast<std::size_t>(s) * ntau + t) * n + x;
    };
    auto at = [&](std::size_t r, std::size_t col) -> cplx& { return a[r * dim + col]; };
    for (int t = 0; t < ntau; ++t) {
        const int tp = (t + 1) % ntau, tm = (t + ntau - 1) % ntau;
        for (int x = 0; x < n; ++x) {
            const int xp = (x + 1) % n, xm = (x + n - 1) % n;
            // A|R,t,x> = 1/2(|R,t-1,x+1> + |R,t+1,x+1>) + 1/2(|L,t-1,x> - |L,t+1,x>)
            at(id(0, tm, xp), id(0, t, x)) += 0.5;
            at(id(0, tp, xp), id(0, t, x)) += 0.5;
            at(id(1, tm, x), id(0, t, x)) += 0.5;
            at(id(1, tp, x), id(0, t, x)) -= 0.5;
            // A|L,t,x> = 1/2(|R,t-1,x> - |R,t+1,x>) + 1/2(|L,t-1,x-1> + |L,t+1,x-1>)
            at(id(0, tm, x), id(1, t, x)) += 0.5;
            at(id(0, tp, x), id(1, t, x)) -= 0.5;
            at(id(1, tm, xm), id(1, t, x)) += 0.5;
            at(id(1, tp, xm), id(1, t, x)) += 0.5;
        }
    }
    return a;
}

// max |(A^dag A - I)_ij|
inline double dense_unitarity_residual(const std::vector<cplx>& a, std::size_t dim) {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            cplx s(0);
            for (std::size_t r = 0; r < dim; ++r)
                s += std::conj(a[r * dim + i]) * a[r * dim + j];
            if (i == j) s -= 1.0;
            worst = std::max(worst, std::abs(s));
        }
    return worst;
}

inline std::vector<cplx> dense_apply(const std::vector<cplx>& a, const std::vector<cplx>& v) {
    const std::size_t dim = v.size();
    std::vector<cplx> out(dim, cplx(0));
    for (std::size_t r = 0; r < dim; ++r) {
        cplx s(0);
        for (std::size_t c = 0; c < dim; ++c) s += a[r * dim + c] * v[c];
        out[r] = s;
    }
    return out;
}

namespace verify_detail {

inline SpinorField random_state(Rng& rng, WalkMode mode, double mu, int n, int ntau) {
    SpinorField psi = mode == WalkMode::fixed_mass ? SpinorField::fixed_mass(mu, n)
                                                   : SpinorField::variable_mass(n, ntau);
    for (auto& a : psi.amplitudes()) a = rng.complex_normal();
    psi.normalize();
    return psi;
}

inline SpinorField shift_x(const SpinorField& psi) {
    SpinorField out = psi;
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < psi.ntau(); ++t)
            for (int x = 0; x < psi.n(); ++x)
                out.at(s, t, (x + 1) % psi.n()) = psi.at(s, t, x);
    return out;
}

inline SpinorField shift_tau(const SpinorField& psi) {
    SpinorField out = psi;
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < psi.ntau(); ++t)
            for (int x = 0; x < psi.n(); ++x)
                out.at(s, (t + 1) % psi.ntau(), x) = psi.at(s, t, x);
    return out;
}

inline double state_distance(const SpinorField& a, const SpinorField& b) {
    double r = 0.0;
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i)
        r = std::max(r, std::abs(a.amplitudes()[i] - b.amplitudes()[i]));
    return r;
}

// a random mode on the +omega band, strictly inside B0
inline Mode random_mode(Rng& rng) {
    const double k = rng.angle(pi / 2);
    const double mu = rng.angle(pi / 2);
    const auto es = eigensystem(k, mu);
    return Mode{KPoint::on_shell(k, mu), es.chi_plus};
}

inline RadialMap random_dilation(Rng& rng) {
    if (rng.uniform(0, 1) < 0.4) return appendix_dilation();
    return power_dilation(rng.uniform(0.5, 2.0), rng.uniform(1.0, 2.0));
}

}  // namespace verify_detail

// ── Per-module invariant suites ──────────────────────────────────────────────

inline std::vector<CheckResult> verify_lattice_walk(const VerifyOptions& opt) {
    using namespace verify_detail;
    std::vector<CheckResult> out;
    Rng rng(opt.seed);
    const std::string suite = "lattice-walk";

    {  // unitarity, fixed mass, both representations
        double worst = 0.0;
        const long trials = scaled(opt, 20);
        for (long i = 0; i < trials; ++i) {
            const double mu = rng.angle(pi);
            const SpinorField psi = random_state(rng, WalkMode::fixed_mass, mu, 1024, 1);
            for (auto repr : {Representation::stencil, Representation::spectral}) {
                const auto op = build_fixed_mass_walk(mu, 1024, repr);
                worst = std::max(worst, std::abs(step(op, psi).norm() - psi.norm()));
            }
        }
        out.push_back(make(suite, "unitarity (fixed mass, N=1024)", worst, 1e-12, trials));
    }
    {  // unitarity, variable mass
        double worst = 0.0;
        const long trials = scaled(opt, 4);
        for (long i = 0; i < trials; ++i) {
            const SpinorField psi = random_state(rng, WalkMode::variable_mass, 0, 64, 64);
            for (auto repr : {Representation::stencil, Representation::spectral}) {
                const auto op = build_variable_mass_walk(64, 64, repr);
                worst = std::max(worst, std::abs(step(op, psi).norm() - psi.norm()));
            }
        }
        out.push_back(make(suite, "unitarity (variable mass, 64x64)", worst, 1e-12, trials));
    }
    {  // translation covariance
        double worst = 0.0;
        const long trials = scaled(opt, 8);
        for (long i = 0; i < trials; ++i) {
            const double mu = rng.angle(pi);
            const auto opf = build_fixed_mass_walk(mu, 64);
            const SpinorField psi = random_state(rng, WalkMode::fixed_mass, mu, 64, 1);
            worst = std::max(worst, state_distance(step(opf, shift_x(psi)),
                                                   shift_x(step(opf, psi))));
            const auto opv = build_variable_mass_walk(16, 16);
            const SpinorField phi = random_state(rng, WalkMode::variable_mass, 0, 16, 16);
            worst = std::max(worst, state_distance(step(opv, shift_x(phi)),
                                                   shift_x(step(opv, phi))));
            worst = std::max(worst, state_distance(step(opv, shift_tau(phi)),
                                                   shift_tau(step(opv, phi))));
        }
        out.push_back(make(suite, "translation covariance", worst, 1e-12, trials));
    }
    {  // spectral/stencil agreement
        double worst = 0.0;
        long samples = 0;
        for (int n : {4, 16, 256}) {
            for (int rep = 0; rep < std::max<long>(2, scaled(opt, 4)); ++rep) {
                const double mu = rng.angle(pi);
                const SpinorField psi = random_state(rng, WalkMode::fixed_mass, mu, n, 1);
                worst = std::max(worst,
                                 state_distance(step(build_fixed_mass_walk(
                                                         mu, n, Representation::stencil), psi),
                                                step(build_fixed_mass_walk(
                                                         mu, n, Representation::spectral), psi)));
                ++samples;
            }
        }
        const SpinorField phi = random_state(rng, WalkMode::variable_mass, 0, 8, 8);
        worst = std::max(
            worst,
            state_distance(step(build_variable_mass_walk(8, 8, Representation::stencil), phi),
                           step(build_variable_mass_walk(8, 8, Representation::spectral), phi)));
        out.push_back(make(suite, "spectral/stencil equivalence", worst, 1e-10, samples + 1));
    }
    {  // dense oracle: unitarity of the explicit matrix and agreement with step
        double worst = 0.0;
        const double mu = 0.37;
        const int n = 16;
        const auto dense = dense_fixed_mass_matrix(mu, n);
        worst = std::max(worst, dense_unitarity_residual(dense, 2 * n));
        SpinorField psi = random_state(rng, WalkMode::fixed_mass, mu, n, 1);
        const auto got = step(build_fixed_mass_walk(mu, n), psi);
        const auto want = dense_apply(dense, psi.amplitudes());
        for (std::size_t i = 0; i < want.size(); ++i)
            worst = std::max(worst, std::abs(want[i] - got.amplitudes()[i]));

        const auto densev = dense_variable_mass_matrix(8, 8);
        worst = std::max(worst, dense_unitarity_residual(densev, 2 * 64));
        SpinorField phi = random_state(rng, WalkMode::variable_mass, 0, 8, 8);
        const auto gotv = step(build_variable_mass_walk(8, 8), phi);
        const auto wantv = dense_apply(densev, phi.amplitudes());
        for (std::size_t i = 0; i < wantv.size(); ++i)
            worst = std::max(worst, std::abs(wantv[i] - gotv.amplitudes()[i]));
        out.push_back(make(suite, "dense-matrix oracle (A^dag A = I, A psi match)", worst,
                           1e-13, 2));
    }
    {  // locality: one step moves a point mass only to the generator neighbours
        double leak = 0.0;
        SpinorField psi = SpinorField::variable_mass(8, 8);
        psi.at(0, 4, 4) = 1.0;
        const auto stepped = step(build_variable_mass_walk(8, 8), psi);
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 8; ++t)
                for (int x = 0; x < 8; ++x) {
                    const bool allowed = (s == 0 && x == 5 && (t == 3 || t == 5)) ||
                                         (s == 1 && x == 4 && (t == 3 || t == 5));
                    if (!allowed) leak = std::max(leak, std::abs(stepped.at(s, t, x)));
                }
        SpinorField loc = SpinorField::fixed_mass(0.3, 8);
        loc.at(1, 3) = 1.0;
        const auto stepped2 = step(build_fixed_mass_walk(0.3, 8), loc);
        for (int s = 0; s < 2; ++s)
            for (int x = 0; x < 8; ++x) {
                const bool allowed = (s == 0 && x == 3) || (s == 1 && x == 2);
                if (!allowed) leak = std::max(leak, std::abs(stepped2.at(s, x)));
            }
        out.push_back(make(suite, "locality (Cayley neighbour support)", leak, 1e-15, 2));
    }
    {  // long-run evolve consistency
        const double mu = 0.23;
        const SpinorField psi = random_state(rng, WalkMode::fixed_mass, mu, 256, 1);
        const auto a = evolve(build_fixed_mass_walk(mu, 256, Representation::spectral), psi, 500);
        const auto b = evolve(build_fixed_mass_walk(mu, 256, Representation::stencil), psi, 500);
        out.push_back(make(suite, "evolve: 500 spectral steps vs 500 stencil steps",
                           state_distance(a, b), 1e-9, 1));
    }
    return out;
}

inline std::vector<CheckResult> verify_spectral(const VerifyOptions& opt) {
    using namespace verify_detail;
    std::vector<CheckResult> out;
    Rng rng(opt.seed + 1);
    const std::string suite = "spectral";

    {  // eigenphases of the walk matrix vs the dispersion relation,
       // via the characteristic-polynomial root (independent algebraic route)
        double worst = 0.0;
        const int g = static_cast<int>(scaled(opt, 128));
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j) {
                const double k = -pi + 2 * pi * (i + 0.5) / g;
                const double mu = -pi + 2 * pi * (j + 0.5) / g;
                const Mat2 m = walk_matrix(k, mu);
                const cplx tr = m.a[0] + m.a[3];
                const cplx root = std::sqrt(tr * tr - 4.0 * det(m));
                const cplx lam = 0.5 * (tr + root);
                worst = std::max(worst,
                                 std::abs(std::abs(std::arg(lam)) - dispersion(k, mu)));
            }
        out.push_back(make(suite, "eigenphases = +-arccos(cos mu cos k)", worst, 1e-12,
                           static_cast<long>(g) * g));
    }
    {  // null vector identity
        double worst = 0.0;
        const long trials = scaled(opt, 10000);
        for (long i = 0; i < trials; ++i) {
            const KPoint p = KPoint::on_shell(rng.angle(pi), rng.angle(pi));
            worst = std::max(worst, std::abs(minkowski_square(n_vector(p))));
        }
        out.push_back(make(suite, "null condition n.n = 0", worst, 1e-12, trials));
    }
    {  // kernel identity and eigenvalue equation
        double worst = 0.0;
        const long trials = scaled(opt, 2000);
        for (long i = 0; i < trials; ++i) {
            const double k = rng.angle(pi / 2), mu = rng.angle(pi / 2);
            const auto es = eigensystem(k, mu);
            if (es.degenerate) continue;
            worst = std::max(worst, kernel_residual(KPoint::on_shell(k, mu), es.chi_plus));
            const Vec2 r = walk_matrix(k, mu) * es.chi_plus;
            worst = std::max(worst, std::max(std::abs(r[0] - es.phase_plus * es.chi_plus[0]),
                                             std::abs(r[1] - es.phase_plus * es.chi_plus[1])));
        }
        out.push_back(make(suite, "kernel identity (n.tau) chi+ = 0", worst, 1e-12, trials));
    }
    {  // determinant
        double worst = 0.0;
        const int g = 64;
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j)
                worst = std::max(worst, std::abs(det(walk_matrix(-pi + 2 * pi * (i + 0.5) / g,
                                                                 -pi + 2 * pi * (j + 0.5) / g)) -
                                                 1.0));
        out.push_back(make(suite, "det A(mu,k) = 1", worst, 1e-13, g * g));
    }
    {  // sigma2 bridge between the two forms of the eigenvalue equation
        double worst = 0.0;
        const long trials = scaled(opt, 1000);
        for (long i = 0; i < trials; ++i) {
            const KPoint p = KPoint::on_shell(rng.angle(pi / 2), rng.angle(pi / 2));
            const NVector n = n_vector(p);
            const Vec2 psi{rng.complex_normal(), rng.complex_normal()};
            const Vec2 e = kernel_matrix(n) * psi;
            const Mat2 proj = cplx(n.n1) * sigma3() + cplx(-n.n2) * sigma1() +
                              cplx(n.n0) * Mat2::identity();
            const Vec2 pr = proj * psi;
            worst = std::max(worst, std::abs(norm(e) - norm(pr)));
        }
        out.push_back(make(suite, "projector/kernel residual equivalence via sigma2", worst,
                           1e-13, trials));
    }
    {  // Clifford relations (fault-injectable)
        const auto rep = clifford_check(static_cast<int>(scaled(opt, 256)), opt.seed + 2,
                                        opt.clifford_tau2_fault);
        out.push_back(make(suite, "Clifford relations {tau_i,tau_j} = 2 eta_ij",
                           std::max(rep.anticommutator_residual, rep.bridge_residual), 1e-15,
                           rep.samples));
    }
    {  // rank-one structure
        double worst = 0.0;
        const long trials = scaled(opt, 1000);
        for (long i = 0; i < trials; ++i) {
            const double k = rng.angle(pi / 2), mu = rng.angle(pi / 2);
            if (dispersion(k, mu) < 1e-6) continue;
            const auto rep = rank_one_check(KPoint::on_shell(k, mu));
            if (rep.rank != 1) worst = 1.0;
            worst = std::max(worst, rep.sv_small);
        }
        out.push_back(make(suite, "sigma2 n.tau has rank one", worst, 1e-12, trials));
    }
    return out;
}

inline std::vector<CheckResult> verify_shell(const VerifyOptions& opt) {
    using namespace verify_detail;
    std::vector<CheckResult> out;
    Rng rng(opt.seed + 2);
    const std::string suite = "shell-geometry";

    {  // radial maps preserve rays
        double worst = 0.0;
        const long trials = scaled(opt, 2000);
        for (long i = 0; i < trials; ++i) {
            const RadialMap m = random_dilation(rng);
            const NVector v = n_vector(KPoint::on_shell(rng.angle(pi / 2 * 0.999),
                                                        rng.angle(pi / 2 * 0.999)));
            worst = std::max(worst, collinearity_residual(m.apply(v), v));
            worst = std::max(worst, collinearity_residual(m.inverse().apply(v), v));
        }
        out.push_back(make(suite, "radial maps preserve rays", worst, 1e-12, trials));
    }
    {  // appendix dilation maps K-interior onto the cone
        double worst = 0.0;
        const long trials = scaled(opt, 2000);
        const RadialMap d = appendix_dilation();
        for (long i = 0; i < trials; ++i) {
            const ConePoint c = n_map(KPoint::on_shell(rng.angle(pi / 2 * 0.999),
                                                       rng.angle(pi / 2 * 0.999)));
            worst = std::max(worst, cone_residual(d.apply(c.v)));
        }
        out.push_back(make(suite, "appendix dilation lands on K0", worst, 1e-10, trials));
    }
    {  // round trips on K and K0
        double worst = 0.0;
        const long trials = scaled(opt, 10000);
        const RadialMap d = appendix_dilation();
        const RadialMap di = d.inverse();
        for (long i = 0; i < trials; ++i) {
            const NVector v = n_vector(KPoint::on_shell(rng.angle(pi / 2 * 0.999),
                                                        rng.angle(pi / 2 * 0.999)));
            worst = std::max(worst, euclidean_norm(di.apply(d.apply(v)) - v));
            const NVector u = d.apply(v);  // a K0 point
            worst = std::max(worst,
                             euclidean_norm(d.apply(di.apply(u)) - u) /
                                 std::max(1.0, euclidean_norm(u)));
        }
        out.push_back(make(suite, "dilation round-trips D^-1 D = id, D D^-1 = id", worst,
                           1e-10, trials));
    }
    {  // monotonicity along rays
        double violations = 0.0;
        const long trials = scaled(opt, 500);
        const RadialMap d = appendix_dilation();
        for (long i = 0; i < trials; ++i) {
            const double phi = rng.uniform(0, 2 * pi);
            const NVector dir{1.0, std::cos(phi), std::sin(phi)};
            const double t1 = rng.uniform(0.01, 0.989), t2 = rng.uniform(t1 + 0.01, 0.999);
            if (euclidean_norm(d.apply(t2 * dir)) <= euclidean_norm(d.apply(t1 * dir)))
                violations += 1.0;
        }
        out.push_back(make(suite, "appendix map monotone along each ray", violations, 0.5,
                           trials));
    }
    {  // Jacobian formula vs finite differences
        double worst = 0.0;
        const long trials = scaled(opt, 500);
        const double h = 1e-5;
        for (long i = 0; i < trials; ++i) {
            const double k = rng.angle(pi), mu = rng.angle(pi);
            const auto fkp = nbar(k + h, mu), fkm = nbar(k - h, mu);
            const auto fmp = nbar(k, mu + h), fmm = nbar(k, mu - h);
            const double j11 = (fkp[0] - fkm[0]) / (2 * h), j12 = (fmp[0] - fmm[0]) / (2 * h);
            const double j21 = (fkp[1] - fkm[1]) / (2 * h), j22 = (fmp[1] - fmm[1]) / (2 * h);
            worst = std::max(worst, std::abs(j11 * j22 - j12 * j21 - nbar_jacobian(k, mu)));
        }
        out.push_back(make(suite, "nbar Jacobian = cos^2(mu) cos(k) (finite differences)",
                           worst, 1e-6, trials));
    }
    {  // the Brillouin zone maps into the unit disc
        double worst = 0.0;
        const long trials = scaled(opt, 5000);
        for (long i = 0; i < trials; ++i) {
            const auto nb = nbar(rng.angle(pi), rng.angle(pi));
            worst = std::max(worst, nb[0] * nb[0] + nb[1] * nb[1] - 1.0);
        }
        out.push_back(make(suite, "|nbar|^2 <= 1", worst, 1e-15, trials));
    }
    {  // n_map / n_inverse round trip
        double worst = 0.0;
        const long trials = scaled(opt, 10000);
        for (long i = 0; i < trials; ++i) {
            const KPoint p = KPoint::on_shell(rng.angle(pi / 2 * 0.9999),
                                              rng.angle(pi / 2 * 0.9999));
            const KPoint q = n_inverse(n_map(p));
            worst = std::max({worst, std::abs(q.k - p.k), std::abs(q.mu - p.mu),
                              std::abs(q.omega - p.omega)});
        }
        out.push_back(make(suite, "n_inverse . n_map = id on B0", worst, 1e-10, trials));
    }
    return out;
}

inline std::vector<CheckResult> verify_symmetry(const VerifyOptions& opt) {
    using namespace verify_detail;
    std::vector<CheckResult> out;
    Rng rng(opt.seed + 3);
    const std::string suite = "symmetry-group";

    auto random_frame = [&](double xi_range) {
        const LorentzElement l =
            so12_boost(rng.uniform(-xi_range, xi_range)) * so12_rotation(rng.angle(pi));
        return make_frame_change(l, random_dilation(rng), random_dilation(rng),
                                 PhaseFunction::linear(rng.uniform(-1, 1), rng.uniform(-1, 1),
                                                       rng.uniform(-1, 1)));
    };

    {  // the defining property: eigenvalue equation preserved
        double worst = 0.0;
        long truncated = 0, total = 0;
        const long frames = scaled(opt, 20), modes = scaled(opt, 200);
        for (long f = 0; f < frames; ++f) {
            const FrameChange fc = random_frame(1.0);
            std::vector<Mode> in;
            for (long m = 0; m < modes; ++m) in.push_back(random_mode(rng));
            const ApplyResult res = apply_frame_change(fc, in);
            truncated += res.truncated;
            total += static_cast<long>(in.size());
            for (const Mode& m : res.modes)
                worst = std::max(worst, kernel_residual(m.p, m.amplitude));
        }
        out.push_back(make(suite, "eigen-equation preservation (defining property)", worst,
                           1e-9, total));
        out.push_back(make(suite, "boundary truncation fraction at |xi| <= 1",
                           static_cast<double>(truncated) / static_cast<double>(total), 0.05,
                           total));
    }
    {  // scaling covariance: L n(k) collinear with n(k'(k))
        double worst = 0.0;
        const long trials = scaled(opt, 500);
        for (long i = 0; i < trials; ++i) {
            const FrameChange fc = random_frame(1.0);
            const Mode m = random_mode(rng);
            const auto q = fc.kprime().try_apply(m.p);
            if (!q) continue;
            worst = std::max(worst, collinearity_residual(
                                        fc.kprime().lorentz() * n_vector(m.p), n_vector(*q)));
        }
        out.push_back(make(suite, "scaling covariance: L n(k) || n(k'(k))", worst, 1e-10,
                           trials));
    }
    {  // group axioms under composition
        double worst = 0.0;
        const long trials = scaled(opt, 10);
        for (long i = 0; i < trials; ++i) {
            const FrameChange f1 = random_frame(0.7), f2 = random_frame(0.7),
                              f3 = random_frame(0.7);
            const FrameChange assoc_a = compose(compose(f3, f2), f1);
            const FrameChange assoc_b = compose(f3, compose(f2, f1));
            const FrameChange ident = compose(f1, f1.inverse());
            for (int s = 0; s < 8; ++s) {
                const Mode m = random_mode(rng);
                try {
                    const KPoint qa = assoc_a.kprime().apply(m.p);
                    const KPoint qb = assoc_b.kprime().apply(m.p);
                    worst = std::max({worst, std::abs(qa.k - qb.k), std::abs(qa.mu - qb.mu)});
                    const cplx pa = assoc_a.phase()(qa), pb = assoc_b.phase()(qb);
                    worst = std::max(worst, std::abs(pa - pb));
                    const KPoint qi = ident.kprime().apply(m.p);
                    worst = std::max({worst, std::abs(qi.k - m.p.k), std::abs(qi.mu - m.p.mu)});
                    worst = std::max(worst, std::abs(ident.phase()(m.p)));
                } catch (const truncation_error&) {
                    continue;  // mode left the chart under an intermediate map
                }
            }
            worst = std::max(worst, distance(ident.coin(), SpinElement::identity()));
        }
        out.push_back(make(suite, "group axioms: associativity, identity, inverse", worst,
                           1e-9, trials));
    }
    {  // spin cover: conjugation identity and homomorphism up to sign
        double worst_conj = 0.0, worst_hom = 0.0;
        const long trials = scaled(opt, 100);
        for (long i = 0; i < trials; ++i) {
            const LorentzElement l1 =
                so12_boost(rng.uniform(-1.5, 1.5)) * so12_rotation(rng.angle(pi));
            const LorentzElement l2 =
                so12_rotation(rng.angle(pi)) * so12_boost(rng.uniform(-1.5, 1.5),
                                                          BoostPlane::p02);
            const SpinElement m1 = spin_cover(l1), m2 = spin_cover(l2);
            worst_conj = std::max(worst_conj, conjugation_residual(m1, l1));
            const SpinElement m12 = spin_cover(l1 * l2);
            const SpinElement prod = m1 * m2;
            SpinElement neg = prod;
            for (auto& e : neg.m) e = -e;
            worst_hom = std::max(worst_hom,
                                 std::min(distance(m12, prod), distance(m12, neg)));
        }
        out.push_back(make(suite, "spin cover conjugation identity", worst_conj, 1e-11,
                           trials));
        out.push_back(make(suite, "spin cover homomorphism up to sign", worst_hom, 1e-10,
                           trials));
    }
    {  // semidirect structure: Lorentz-conjugated dilations stay radial
        double worst = 0.0;
        const long trials = scaled(opt, 50);
        for (long i = 0; i < trials; ++i) {
            const LorentzElement l =
                so12_boost(rng.uniform(-1, 1)) * so12_rotation(rng.angle(pi));
            const KPrimeMap curly_l(appendix_dilation(), l, appendix_dilation());
            const RadialMap m = random_dilation(rng);
            const NVector v = n_vector(KPoint::on_shell(rng.angle(1.4), rng.angle(1.4)));
            // evaluate curly_l . m . curly_l^-1 through the full pipelines
            try {
                const NVector w =
                    curly_l.apply_cone(m.apply(curly_l.inverse().apply_cone(v)));
                worst = std::max(worst, collinearity_residual(w, v));
            } catch (const domain_error&) {
                continue;
            }
        }
        out.push_back(make(suite, "conjugate of a dilation by SO+_f(1,2) is radial", worst,
                           1e-10, trials));
    }
    {  // phase composition rule on linear phases
        double worst = 0.0;
        const long trials = scaled(opt, 20);
        for (long i = 0; i < trials; ++i) {
            const PhaseFunction a = PhaseFunction::linear(rng.uniform(-1, 1),
                                                          rng.uniform(-1, 1),
                                                          rng.uniform(-1, 1));
            const PhaseFunction b = PhaseFunction::linear(rng.uniform(-1, 1),
                                                          rng.uniform(-1, 1),
                                                          rng.uniform(-1, 1));
            const LorentzElement l1 = so12_boost(rng.uniform(-0.8, 0.8));
            const LorentzElement l2 = so12_rotation(rng.angle(pi));
            const FrameChange f1(KPrimeMap(appendix_dilation(), l1, appendix_dilation()), a,
                                 spin_cover(l1));
            const FrameChange f2(KPrimeMap(appendix_dilation(), l2, appendix_dilation()), b,
                                 spin_cover(l2));
            const FrameChange f21 = compose(f2, f1);
            for (int s = 0; s < 8; ++s) {
                const Mode m = random_mode(rng);
                try {
                    const cplx got = f21.phase()(m.p);
                    const cplx want = b(m.p) + a(f2.kprime().inverse().apply(m.p));
                    worst = std::max(worst, std::abs(got - want));
                } catch (const truncation_error&) {
                    continue;
                }
            }
        }
        out.push_back(make(suite, "phase composition b + a . k''^-1", worst, 1e-9, trials));
    }
    {  // small-wave-vector limit of the deformed boost
        double worst = 0.0;
        for (const double xi : {0.1, 0.7, 1.5}) {
            const auto j = dsr_linear_limit(xi);
            const double c = std::cosh(xi), s = std::sinh(xi);
            worst = std::max({worst, std::abs(j[0][0] - c), std::abs(j[0][1] - s),
                              std::abs(j[1][0] - s), std::abs(j[1][1] - c)});
        }
        out.push_back(make(suite, "deformed boost linearizes to the Lorentz boost", worst,
                           1e-5, 3));
    }
    {  // dilation Jacobian at the origin
        const Mat3 j = numeric_jacobian(
            [d = appendix_dilation()](const NVector& v) { return d.apply(v); },
            NVector{0, 0, 0}, 1e-4);
        out.push_back(make(suite, "appendix dilation Jacobian at origin = identity",
                           max_abs(j - Mat3::identity()), 1e-6, 1));
    }
    return out;
}

inline std::vector<CheckResult> verify_fixed_mu(const VerifyOptions& opt) {
    using namespace verify_detail;
    std::vector<CheckResult> out;
    Rng rng(opt.seed + 4);
    const std::string suite = "fixed-mass-appendix";

    auto random_mu = [&] {
        double mu = 0.0;
        while (std::abs(mu) < 0.05) mu = rng.uniform(-1.3, 1.3);
        return mu;
    };

    {  // group membership and eigenstructure of the generators
        double worst_group = 0.0, worst_eig = 0.0;
        const long trials = scaled(opt, 100);
        for (long i = 0; i < trials; ++i) {
            const double mu = random_mu(), beta = rng.uniform(-2, 2);
            const Mat3 l = fixed_mu_L(beta, mu).matrix();
            worst_group = std::max({worst_group, metric_residual(l),
                                    std::abs(det(l) - 1.0),
                                    l(0, 0) >= 1.0 ? 0.0 : 1.0 - l(0, 0)});
            const NVector u{1, std::cos(mu), std::sin(mu)};
            const NVector v{1, -std::cos(mu), std::sin(mu)};
            const NVector w{std::sin(mu), 0, 1};
            worst_eig = std::max({worst_eig,
                                  euclidean_norm(l * u - std::exp(beta) * u),
                                  euclidean_norm(l * v - std::exp(-beta) * v),
                                  euclidean_norm(l * w - w)});
        }
        out.push_back(make(suite, "L(beta,mu) in SO+(1,2)", worst_group, 1e-12, trials));
        out.push_back(make(suite, "eigenstructure Lu = e^b u, Lv = e^-b v, Lw = w",
                           worst_eig, 1e-12, trials));
    }
    {  // one-parameter subgroup law and the Z2 square
        double worst = 0.0;
        const long trials = scaled(opt, 50);
        for (long i = 0; i < trials; ++i) {
            const double mu = random_mu();
            const double b1 = rng.uniform(-1.5, 1.5), b2 = rng.uniform(-1.5, 1.5);
            worst = std::max(worst,
                             max_abs(fixed_mu_L(b1, mu).matrix() * fixed_mu_L(b2, mu).matrix() -
                                     fixed_mu_L(b1 + b2, mu).matrix()));
            const Mat3 lp = fixed_mu_Lplus(0.0, mu).matrix();
            worst = std::max(worst, max_abs(lp * lp - Mat3::identity()));
        }
        out.push_back(make(suite, "group law: L(b1)L(b2) = L(b1+b2), L+^2 = 1", worst, 1e-12,
                           trials));
    }
    {  // closed forms of the exclusion entries
        double worst = 0.0;
        const long trials = scaled(opt, 100);
        for (long i = 0; i < trials; ++i) {
            const auto rep = exclusion_report(random_mu(), rng.uniform(-2, 2));
            worst = std::max({worst, std::abs(rep.t2_entry - rep.t2_closed_form),
                              std::abs(rep.lminus_entry - rep.lminus_closed_form),
                              std::abs(rep.lplus_entry - rep.lplus_closed_form)});
            if (rep.t2_orthochronous || rep.lminus_orthochronous || !rep.lplus_orthochronous)
                worst = std::max(worst, 1.0);
        }
        out.push_back(make(suite, "exclusion entries match closed forms; only L+ survives",
                           worst, 1e-12, trials));
    }
    {  // mass preservation and the Definition-2 residual
        double worst_mu = 0.0, worst_def = 0.0, worst_rt = 0.0;
        const long trials = scaled(opt, 200);
        for (long i = 0; i < trials; ++i) {
            const double mu = random_mu(), beta = rng.uniform(-0.6, 0.6);
            const double k = rng.angle(1.2);
            const LorentzElement t = fixed_mu_L(beta, mu);
            FixedMuImage img{};
            try {
                img = fixed_mu_transform(k, mu, t);
            } catch (const truncation_error&) {
                continue;
            }
            // mu-preservation, checked through the full n-pipeline
            const NVector np = n_vector(KPoint::on_shell(img.k, mu));
            worst_mu = std::max(worst_mu, std::abs(np.n2 - std::sin(mu)));
            const auto es = eigensystem(k, mu);
            const Vec2 psi2 = spin_cover(t) * es.chi_plus;
            worst_def =
                std::max(worst_def, kernel_residual(KPoint::on_shell(img.k, mu), psi2));
            try {
                const FixedMuImage back =
                    fixed_mu_transform(img.k, mu, fixed_mu_L(-beta, mu));
                worst_rt = std::max({worst_rt, std::abs(back.k - k),
                                     std::abs(back.omega - dispersion(k, mu))});
            } catch (const truncation_error&) {
            }
        }
        out.push_back(make(suite, "mu preserved by the fixed-mass transform", worst_mu,
                           1e-10, trials));
        out.push_back(make(suite, "transformed kernel residual with M = spin_cover(T)",
                           worst_def, 1e-9, trials));
        out.push_back(make(suite, "round trip with beta, -beta", worst_rt, 1e-9, trials));
    }
    {  // the headline negative result: no relativistic limit
        const auto probes = relativistic_limit_probe({0.1, 0.05, 0.025});
        double min_dev = 1e300;
        for (const auto& p : probes) min_dev = std::min(min_dev, p.deviation_norm);
        // residual formulation: pass iff every deviation norm exceeds 0.01
        out.push_back(make(suite, "relativistic-limit deviation bounded below (> 0.01)",
                           min_dev > 0.01 ? 0.0 : 1.0, 0.5,
                           static_cast<long>(probes.size())));
        const auto j = dsr_linear_limit(0.7);
        const double dev = std::max(
            {std::abs(j[0][0] - std::cosh(0.7)), std::abs(j[0][1] - std::sinh(0.7)),
             std::abs(j[1][0] - std::sinh(0.7)), std::abs(j[1][1] - std::cosh(0.7))});
        out.push_back(make(suite, "contrast: variable-mass boost has the Lorentz limit", dev,
                           1e-5, 1));
    }
    return out;
}

inline std::vector<CheckResult> verify_all(const VerifyOptions& opt) {
    std::vector<CheckResult> all;
    for (auto* fn : {&verify_lattice_walk, &verify_spectral, &verify_shell, &verify_symmetry,
                     &verify_fixed_mu}) {
        const auto part = fn(opt);
        all.insert(all.end(), part.begin(), part.end());
    }
    return all;
}

}  // namespace dqw
