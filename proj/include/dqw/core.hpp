#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace dqw {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// ── Error taxonomy ───────────────────────────────────────────────────────────
// The CLI maps these onto process exit codes: config problems exit 2,
// numeric/domain problems exit 3.

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// lattice size < 2 or odd
struct invalid_lattice : error {
    using error::error;
};

// operator applied to a state of the wrong mode or shape
struct mismatch_error : error {
    using error::error;
};

// input outside the mathematical domain of the operation
// (off-shell point, singular mass angle, cone boundary, ...)
struct domain_error : error {
    using error::error;
};

// image of a map left the representable interior of the mass shell
struct truncation_error : domain_error {
    using domain_error::domain_error;
};

// no real SL(2,R) partner exists for the given 3x3 matrix
struct not_in_group : error {
    using error::error;
};

// the radial/Lorentz factorization certificate failed
struct factorization_failed : error {
    using error::error;
};

// finite-difference step too coarse (Richardson disagreement)
struct accuracy_error : error {
    using error::error;
};

// ── Small numeric helpers ────────────────────────────────────────────────────

// Reduce an angle to the principal interval (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * pi);
    if (a <= -pi) a += 2.0 * pi;
    if (a > pi) a -= 2.0 * pi;
    return a;
}

inline bool nearly_equal(double a, double b, double tol) {
    return std::abs(a - b) <= tol;
}

inline double sqr(double x) { return x * x; }

}  // namespace dqw
