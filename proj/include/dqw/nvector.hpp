#pragma once

#include <array>
#include <cmath>

#include "dqw/core.hpp"

namespace dqw {

// Real 3-vector in R^{1,2}: components (n0, n1, n2) = (time-like, space-like,
// mass-like), metric signature (+,-,-).
struct NVector {
    double n0 = 0.0, n1 = 0.0, n2 = 0.0;

    double& operator[](int i) { return i == 0 ? n0 : (i == 1 ? n1 : n2); }
    const double& operator[](int i) const { return i == 0 ? n0 : (i == 1 ? n1 : n2); }
};

inline NVector operator+(const NVector& a, const NVector& b) {
    return {a.n0 + b.n0, a.n1 + b.n1, a.n2 + b.n2};
}
inline NVector operator-(const NVector& a, const NVector& b) {
    return {a.n0 - b.n0, a.n1 - b.n1, a.n2 - b.n2};
}
inline NVector operator*(double s, const NVector& v) {
    return {s * v.n0, s * v.n1, s * v.n2};
}

// Minkowski square n0^2 - n1^2 - n2^2; zero on the null cone.
inline double minkowski_square(const NVector& v) {
    return v.n0 * v.n0 - v.n1 * v.n1 - v.n2 * v.n2;
}

inline double minkowski_dot(const NVector& a, const NVector& b) {
    return a.n0 * b.n0 - a.n1 * b.n1 - a.n2 * b.n2;
}

inline double euclidean_norm(const NVector& v) {
    return std::sqrt(v.n0 * v.n0 + v.n1 * v.n1 + v.n2 * v.n2);
}

inline NVector cross(const NVector& a, const NVector& b) {
    return {a.n1 * b.n2 - a.n2 * b.n1, a.n2 * b.n0 - a.n0 * b.n2,
            a.n0 * b.n1 - a.n1 * b.n0};
}

// ||a x b|| / max(eps, ||a|| ||b||): zero iff the vectors are collinear.
inline double collinearity_residual(const NVector& a, const NVector& b) {
    const double scale = euclidean_norm(a) * euclidean_norm(b);
    if (scale < 1e-300) return 0.0;
    return euclidean_norm(cross(a, b)) / scale;
}

// ── 3x3 real matrix ──────────────────────────────────────────────────────────

struct Mat3 {
    std::array<double, 9> a{};  // row-major

    static Mat3 identity() { return {{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }

    double& operator()(int r, int c) { return a[3 * r + c]; }
    const double& operator()(int r, int c) const { return a[3 * r + c]; }
};

inline Mat3 operator*(const Mat3& x, const Mat3& y) {
    Mat3 m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += x(r, k) * y(k, c);
            m(r, c) = s;
        }
    return m;
}

inline NVector operator*(const Mat3& m, const NVector& v) {
    return {m(0, 0) * v.n0 + m(0, 1) * v.n1 + m(0, 2) * v.n2,
            m(1, 0) * v.n0 + m(1, 1) * v.n1 + m(1, 2) * v.n2,
            m(2, 0) * v.n0 + m(2, 1) * v.n1 + m(2, 2) * v.n2};
}

inline Mat3 operator-(const Mat3& x, const Mat3& y) {
    Mat3 m;
    for (int i = 0; i < 9; ++i) m.a[i] = x.a[i] - y.a[i];
    return m;
}

inline Mat3 transpose(const Mat3& m) {
    Mat3 t;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) t(r, c) = m(c, r);
    return t;
}

inline double det(const Mat3& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

inline Mat3 inverse(const Mat3& m) {
    const double d = det(m);
    if (std::abs(d) < 1e-300) throw domain_error("Mat3 inverse: singular matrix");
    Mat3 inv;
    inv(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / d;
    inv(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / d;
    inv(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / d;
    inv(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / d;
    inv(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / d;
    inv(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / d;
    inv(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / d;
    inv(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / d;
    inv(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / d;
    return inv;
}

inline double max_abs(const Mat3& m) {
    double r = 0.0;
    for (double e : m.a) r = std::max(r, std::abs(e));
    return r;
}

// Central-difference Jacobian of an R^3 -> R^3 map.
template <class F>
inline Mat3 numeric_jacobian(F&& f, const NVector& at, double h) {
    Mat3 j;
    for (int c = 0; c < 3; ++c) {
        NVector p = at, m = at;
        p[c] += h;
        m[c] -= h;
        const NVector d = f(p) - f(m);
        j(0, c) = d.n0 / (2.0 * h);
        j(1, c) = d.n1 / (2.0 * h);
        j(2, c) = d.n2 / (2.0 * h);
    }
    return j;
}

// eta = diag(+1,-1,-1)
inline const Mat3& minkowski_metric() {
    static const Mat3 eta{{1, 0, 0, 0, -1, 0, 0, 0, -1}};
    return eta;
}

// max-entry residual of L^T eta L = eta
inline double metric_residual(const Mat3& l) {
    return max_abs(transpose(l) * minkowski_metric() * l - minkowski_metric());
}

}  // namespace dqw
