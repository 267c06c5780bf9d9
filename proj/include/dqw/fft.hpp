#pragma once

#include <cstdint>
#include <vector>

#include "dqw/core.hpp"

namespace dqw {

namespace fft_detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place iterative radix-2 Cooley-Tukey; sign = -1 forward, +1 inverse.
// Unnormalized.
inline void radix2(cplx* x, std::size_t n, int sign) {
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * pi / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = x[i + j];
                const cplx v = x[i + j + len / 2] * w;
                x[i + j] = u + v;
                x[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// Bluestein chirp-z transform for arbitrary n (used for non-power-of-two
// sizes). Chirp phase pi*k^2/n is reduced with k^2 mod 2n kept in integers,
// so no precision is lost at large k.
inline void bluestein(cplx* x, std::size_t n, int sign) {
    const std::size_t m = next_pow2(2 * n - 1);
    std::vector<cplx> a(m, cplx(0)), b(m, cplx(0)), chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) % (2 * n);
        const double ang = sign * pi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = cplx(std::cos(ang), std::sin(ang));
    }
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
    b[0] = cplx(1);
    for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
    radix2(a.data(), m, -1);
    radix2(b.data(), m, -1);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    radix2(a.data(), m, +1);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k] * scale;
}

inline void transform(cplx* x, std::size_t n, int sign) {
    if (n == 1) return;
    if (is_pow2(n))
        radix2(x, n, sign);
    else
        bluestein(x, n, sign);
}

}  // namespace fft_detail

// Unitary DFT pair (1/sqrt(n) both ways), so repeated transforms preserve
// the l2 norm bit-stably.
//   forward:  X_j = 1/sqrt(n) sum_x x[x] e^{-i 2pi j x / n}
//   inverse:  x[x] = 1/sqrt(n) sum_j X_j e^{+i 2pi j x / n}
inline void fft_forward_unitary(cplx* x, std::size_t n) {
    fft_detail::transform(x, n, -1);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

inline void fft_inverse_unitary(cplx* x, std::size_t n) {
    fft_detail::transform(x, n, +1);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

}  // namespace dqw
