#pragma once

#include <array>
#include <cmath>

#include "dqw/core.hpp"

namespace dqw {

// 2x2 complex matrix in row-major order; the coin-space workhorse.
struct Mat2 {
    std::array<cplx, 4> a{};  // [ a[0] a[1] ; a[2] a[3] ]

    static Mat2 identity() { return {{cplx(1), cplx(0), cplx(0), cplx(1)}}; }
    static Mat2 zero() { return {}; }

    cplx& operator()(int r, int c) { return a[2 * r + c]; }
    const cplx& operator()(int r, int c) const { return a[2 * r + c]; }
};

using Vec2 = std::array<cplx, 2>;

inline Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {{x.a[0] + y.a[0], x.a[1] + y.a[1], x.a[2] + y.a[2], x.a[3] + y.a[3]}};
}
inline Mat2 operator-(const Mat2& x, const Mat2& y) {
    return {{x.a[0] - y.a[0], x.a[1] - y.a[1], x.a[2] - y.a[2], x.a[3] - y.a[3]}};
}
inline Mat2 operator*(const cplx& s, const Mat2& x) {
    return {{s * x.a[0], s * x.a[1], s * x.a[2], s * x.a[3]}};
}
inline Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {{x.a[0] * y.a[0] + x.a[1] * y.a[2], x.a[0] * y.a[1] + x.a[1] * y.a[3],
             x.a[2] * y.a[0] + x.a[3] * y.a[2], x.a[2] * y.a[1] + x.a[3] * y.a[3]}};
}
inline Vec2 operator*(const Mat2& m, const Vec2& v) {
    return {m.a[0] * v[0] + m.a[1] * v[1], m.a[2] * v[0] + m.a[3] * v[1]};
}

inline Mat2 dagger(const Mat2& m) {
    return {{std::conj(m.a[0]), std::conj(m.a[2]), std::conj(m.a[1]), std::conj(m.a[3])}};
}

inline cplx det(const Mat2& m) { return m.a[0] * m.a[3] - m.a[1] * m.a[2]; }

inline Mat2 inverse(const Mat2& m) {
    const cplx d = det(m);
    if (std::abs(d) == 0.0) throw domain_error("Mat2 inverse: singular matrix");
    const cplx s = 1.0 / d;
    return {{s * m.a[3], -s * m.a[1], -s * m.a[2], s * m.a[0]}};
}

// max-abs entry norm
inline double max_abs(const Mat2& m) {
    double r = 0.0;
    for (const auto& e : m.a) r = std::max(r, std::abs(e));
    return r;
}

inline double norm(const Vec2& v) {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]));
}

// residual of U^dag U = I
inline double unitarity_residual(const Mat2& u) {
    return max_abs(dagger(u) * u - Mat2::identity());
}

// Frobenius-style distance
inline double distance(const Mat2& x, const Mat2& y) { return max_abs(x - y); }

// ── Pauli matrices ───────────────────────────────────────────────────────────

inline const Mat2& sigma1() {
    static const Mat2 m{{cplx(0), cplx(1), cplx(1), cplx(0)}};
    return m;
}
inline const Mat2& sigma2() {
    static const Mat2 m{{cplx(0), cplx(0, -1), cplx(0, 1), cplx(0)}};
    return m;
}
inline const Mat2& sigma3() {
    static const Mat2 m{{cplx(1), cplx(0), cplx(0), cplx(-1)}};
    return m;
}

// Singular values of a 2x2 complex matrix, descending.
// Computed from the eigenvalues of m^dag m (closed form, no iteration).
inline std::array<double, 2> singular_values(const Mat2& m) {
    const Mat2 h = dagger(m) * m;  // Hermitian PSD
    const double tr = h.a[0].real() + h.a[3].real();
    const double dt = std::max(0.0, (h.a[0] * h.a[3] - h.a[1] * h.a[2]).real());
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - dt));
    const double l1 = tr / 2.0 + disc;
    const double l2 = std::max(0.0, tr / 2.0 - disc);
    return {std::sqrt(l1), std::sqrt(l2)};
}

// Eigen-decomposition of a unitary with det = 1:  u = exp(i w H), H Hermitian
// traceless with H^2 = I, so the eigenphases are exactly +-w.
// Returns {w in [0,pi], eigenvector for e^{+iw}, eigenvector for e^{-iw}}.
struct UnitaryEig {
    double omega = 0.0;
    Vec2 plus{cplx(1), cplx(0)};
    Vec2 minus{cplx(0), cplx(1)};
    bool degenerate = false;  // sin(omega) below threshold; basis is conventional
};

inline UnitaryEig eig_unitary_det1(const Mat2& u, double degeneracy_tol = 1e-9) {
    UnitaryEig out;
    double c = 0.5 * (u.a[0] + u.a[3]).real();
    c = std::clamp(c, -1.0, 1.0);
    out.omega = std::acos(c);
    const double s = std::sin(out.omega);
    if (s < degeneracy_tol) {
        out.degenerate = true;
        return out;  // u = +-I up to noise; conventional basis
    }
    // H = (u - cos(w) I) / (i sin(w)); Hermitian with eigenvalues +-1
    const Mat2 h = (1.0 / cplx(0, s)) * (u - c * Mat2::identity());
    const double a = h.a[0].real();
    const cplx b = h.a[1];
    // v+ solves (H - I)v = 0; pick the better-conditioned kernel expression
    Vec2 vp;
    if (std::abs(1.0 - a) > std::abs(b))
        vp = {b, cplx(1.0 - a)};
    else
        vp = {cplx(1.0 + a), std::conj(b)};
    const double np = norm(vp);
    vp = {vp[0] / np, vp[1] / np};
    out.plus = vp;
    out.minus = {-std::conj(vp[1]), std::conj(vp[0])};
    return out;
}

// Deterministic phase convention: rotate so the first component with
// magnitude above tol is real and positive.
inline Vec2 canonical_phase(Vec2 v, double tol = 1e-12) {
    for (const auto& c : v) {
        if (std::abs(c) > tol) {
            const cplx ph = std::conj(c) / std::abs(c);
            return {ph * v[0], ph * v[1]};
        }
    }
    return v;
}

}  // namespace dqw
