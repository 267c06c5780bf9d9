#pragma once

#include <memory>
#include <string>
#include <utility>

#include "dqw/core.hpp"
#include "dqw/nvector.hpp"
#include "dqw/spectral.hpp"

namespace dqw {

inline constexpr double kConeTol = 1e-10;      // cone membership tolerance
inline constexpr double kInteriorTol = 1e-12;  // 1 - n0^2 must exceed this

// ── Brillouin-zone geometry ──────────────────────────────────────────────────

// nbar(k, mu) = (cos mu sin k, sin mu); maps the Brillouin zone into the
// closed unit disc.
inline std::array<double, 2> nbar(double k, double mu) {
    return {std::cos(mu) * std::sin(k), std::sin(mu)};
}

// det of the nbar Jacobian, cos^2(mu) cos(k); vanishes on the singular lines
// k, mu = pi/2 + m pi.
inline double nbar_jacobian(double k, double mu) {
    return sqr(std::cos(mu)) * std::cos(k);
}

enum class Region { B0, B1, B2, B3, Boundary };

inline const char* to_string(Region r) {
    switch (r) {
        case Region::B0: return "B0";
        case Region::B1: return "B1";
        case Region::B2: return "B2";
        case Region::B3: return "B3";
        default: return "boundary";
    }
}

// Classification by the sign pattern of (cos k, cos mu) — the regions cut out
// by the Jacobian's singular lines. B0:(+,+) B1:(-,+) B2:(+,-) B3:(-,-).
inline Region region_of(double k, double mu, double tol = 1e-12) {
    const double ck = std::cos(k), cm = std::cos(mu);
    if (std::abs(ck) <= tol || std::abs(cm) <= tol) return Region::Boundary;
    if (ck > 0) return cm > 0 ? Region::B0 : Region::B2;
    return cm > 0 ? Region::B1 : Region::B3;
}

// ── Null cone ────────────────────────────────────────────────────────────────

enum class Cone {
    K,   // truncated: null, 0 <= n0 <= 1
    K0,  // full (future) null cone
};

inline double cone_residual(const NVector& v) { return std::abs(minkowski_square(v)); }

// An NVector validated against the null condition n0^2 = n1^2 + n2^2
// (plus 0 <= n0 <= 1 for the truncated cone K).
struct ConePoint {
    NVector v;
    Cone cone;

    ConePoint(const NVector& v_, Cone cone_) : v(v_), cone(cone_) {
        if (cone_residual(v) >= kConeTol)
            throw domain_error("ConePoint: null-cone residual too large");
        if (cone == Cone::K && (v.n0 < -kConeTol || v.n0 > 1.0 + kConeTol))
            throw domain_error("ConePoint: n0 outside [0,1], not in the truncated cone");
    }
};

// n : V -> K, k = (omega,k,mu) |-> (sin omega, cos mu sin k, sin mu).
// Defined on the closure of B0.
inline ConePoint n_map(const KPoint& p) {
    if (std::cos(p.k) < -1e-12 || std::cos(p.mu) < -1e-12)
        throw domain_error("n_map: (k, mu) outside the closure of B0");
    return ConePoint(n_vector(p), Cone::K);
}

// Inverse of n on the interior of K:
//   mu = arcsin(n2), k = arcsin(n1 / cos mu), omega back on-shell.
inline KPoint n_inverse(const ConePoint& c) {
    const NVector& v = c.v;
    if (c.cone != Cone::K) throw domain_error("n_inverse: point must lie in K");
    if (1.0 - v.n0 * v.n0 <= kInteriorTol)
        throw domain_error("n_inverse: n0 = 1 boundary, arcsin branch undefined");
    if (v.n0 < 0.0) throw domain_error("n_inverse: n0 < 0 is not in K");
    const double mu = std::asin(std::clamp(v.n2, -1.0, 1.0));
    const double cm = std::cos(mu);
    const double k = std::asin(std::clamp(v.n1 / cm, -1.0, 1.0));
    return KPoint::on_shell(k, mu);
}

// ── Radial dilations ─────────────────────────────────────────────────────────
// Maps of the form D_f : v -> f(v) v, closed under composition, inversion and
// conjugation by linear maps. Represented compositionally so inverses are
// exact compositions of inverses, never sampled tables.

namespace radial_detail {

struct Impl {
    virtual ~Impl() = default;
    virtual double factor(const NVector& v) const = 0;
    virtual std::shared_ptr<const Impl> invert() const = 0;
    virtual std::string name() const = 0;
};

using ImplPtr = std::shared_ptr<const Impl>;

struct IdentityImpl final : Impl {
    double factor(const NVector&) const override { return 1.0; }
    ImplPtr invert() const override { return std::make_shared<IdentityImpl>(); }
    std::string name() const override { return "identity"; }
};

// f(v) = 1 / (1 - v1^2 - v2^2): the closed-form K -> K0 diffeomorphism of the
// rescaling-function appendix; singular at the upper rim of K.
struct AppendixAImpl final : Impl {
    double factor(const NVector& v) const override {
        const double d = 1.0 - v.n1 * v.n1 - v.n2 * v.n2;
        if (d <= kInteriorTol)
            throw domain_error("appendix dilation: singular at the n0 = 1 boundary");
        return 1.0 / d;
    }
    ImplPtr invert() const override;
    std::string name() const override { return "appendixA"; }
};

// Closed-form inverse: u |-> lambda(u) u with lambda = 2 / (1 + sqrt(1+4r^2)),
// r^2 = u1^2 + u2^2 (the positive root of lambda^2 r^2 + lambda - 1 = 0,
// written cancellation-free).
struct AppendixAInvImpl final : Impl {
    double factor(const NVector& u) const override {
        const double r2 = u.n1 * u.n1 + u.n2 * u.n2;
        return 2.0 / (1.0 + std::sqrt(1.0 + 4.0 * r2));
    }
    ImplPtr invert() const override { return std::make_shared<AppendixAImpl>(); }
    std::string name() const override { return "appendixA^-1"; }
};

inline ImplPtr AppendixAImpl::invert() const { return std::make_shared<AppendixAInvImpl>(); }

// Two-parameter family f(v) = c (1 - v1^2 - v2^2)^{-p}, c > 0, p >= 1:
// each member is a K -> K0 diffeomorphism like the appendix map.
struct PowerImpl final : Impl {
    double c, p;
    PowerImpl(double c_, double p_) : c(c_), p(p_) {
        if (c <= 0.0 || p < 1.0)
            throw domain_error("power dilation: need c > 0 and p >= 1");
    }
    double factor(const NVector& v) const override {
        const double d = 1.0 - v.n1 * v.n1 - v.n2 * v.n2;
        if (d <= kInteriorTol)
            throw domain_error("power dilation: singular at the n0 = 1 boundary");
        return c * std::pow(d, -p);
    }
    ImplPtr invert() const override;
    std::string name() const override {
        return "power(c=" + std::to_string(c) + ",p=" + std::to_string(p) + ")";
    }
};

// Inverse of the power family by a monotone scalar solve along the ray:
// g(l) = c*l - (1 - l^2 r^2)^p is strictly increasing on (0, 1/r).
struct PowerInvImpl final : Impl {
    double c, p;
    PowerInvImpl(double c_, double p_) : c(c_), p(p_) {}
    double factor(const NVector& u) const override {
        const double r2 = u.n1 * u.n1 + u.n2 * u.n2;
        if (r2 == 0.0) return 1.0 / c;
        double lo = 0.0, hi = 1.0 / std::sqrt(r2);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double g = c * mid - std::pow(1.0 - mid * mid * r2, p);
            (g < 0.0 ? lo : hi) = mid;
            if (hi - lo <= 1e-16 * hi) break;
        }
        return 0.5 * (lo + hi);
    }
    ImplPtr invert() const override { return std::make_shared<PowerImpl>(c, p); }
    std::string name() const override { return "power^-1"; }
};

inline ImplPtr PowerImpl::invert() const { return std::make_shared<PowerInvImpl>(c, p); }

struct ComposeImpl final : Impl {
    ImplPtr outer, inner;
    ComposeImpl(ImplPtr o, ImplPtr i) : outer(std::move(o)), inner(std::move(i)) {}
    double factor(const NVector& v) const override {
        const double fi = inner->factor(v);
        return fi * outer->factor(fi * v);
    }
    ImplPtr invert() const override {
        return std::make_shared<ComposeImpl>(inner->invert(), outer->invert());
    }
    std::string name() const override {
        return outer->name() + " . " + inner->name();
    }
};

// L^-1 . m . L for a Lorentz matrix L: still radial, factor v -> m(Lv).
struct LorentzConjImpl final : Impl {
    Mat3 l;
    ImplPtr m;
    LorentzConjImpl(const Mat3& l_, ImplPtr m_) : l(l_), m(std::move(m_)) {}
    double factor(const NVector& v) const override { return m->factor(l * v); }
    ImplPtr invert() const override {
        return std::make_shared<LorentzConjImpl>(l, m->invert());
    }
    std::string name() const override { return "conj(" + m->name() + ")"; }
};

}  // namespace radial_detail

class RadialMap {
public:
    RadialMap() : impl_(std::make_shared<radial_detail::IdentityImpl>()) {}
    explicit RadialMap(radial_detail::ImplPtr impl) : impl_(std::move(impl)) {}

    double factor(const NVector& v) const { return impl_->factor(v); }
    NVector apply(const NVector& v) const { return factor(v) * v; }
    NVector operator()(const NVector& v) const { return apply(v); }

    RadialMap inverse() const { return RadialMap(impl_->invert()); }
    std::string name() const { return impl_->name(); }

    static RadialMap identity() { return RadialMap(); }

    // composition: (*this) after g
    RadialMap after(const RadialMap& g) const {
        return RadialMap(std::make_shared<radial_detail::ComposeImpl>(impl_, g.impl_));
    }

    // L^-1 . (*this) . L
    RadialMap conjugated_by(const Mat3& l) const {
        return RadialMap(std::make_shared<radial_detail::LorentzConjImpl>(l, impl_));
    }

private:
    radial_detail::ImplPtr impl_;
};

// The rescaling-function appendix map v -> v / (1 - v1^2 - v2^2), a
// diffeomorphism between the truncated cone K and the full cone K0.
inline RadialMap appendix_dilation() {
    return RadialMap(std::make_shared<radial_detail::AppendixAImpl>());
}

// Named alias: the dilation quoted in the group-decomposition lemma is the
// same map (its scaling argument uses the two space-like components).
inline RadialMap lemma_dilation() { return appendix_dilation(); }

// Two-parameter variant family of K -> K0 dilations (for exercising
// factorization and frame changes with g != f).
inline RadialMap power_dilation(double c, double p) {
    return RadialMap(std::make_shared<radial_detail::PowerImpl>(c, p));
}

}  // namespace dqw
