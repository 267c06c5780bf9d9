#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "dqw/core.hpp"
#include "dqw/mat2.hpp"
#include "dqw/nvector.hpp"
#include "dqw/rng.hpp"
#include "dqw/shell.hpp"
#include "dqw/spectral.hpp"

namespace dqw {

// image points with 1 - n0^2 at or below this are reported as truncated
inline constexpr double kTruncationTol = 1e-10;

// ── SO+(1,2) ─────────────────────────────────────────────────────────────────

// Proper orthochronous Lorentz matrix: L^T eta L = eta, det L = 1, L00 >= 1.
class LorentzElement {
public:
    static LorentzElement from_matrix(const Mat3& m, double tol = 1e-12) {
        if (metric_residual(m) > tol)
            throw not_in_group("LorentzElement: L^T eta L != eta");
        if (std::abs(det(m) - 1.0) > tol)
            throw not_in_group("LorentzElement: det != 1");
        if (m(0, 0) < 1.0 - tol)
            throw not_in_group("LorentzElement: not orthochronous (L00 < 1)");
        return LorentzElement(m);
    }

    static LorentzElement identity() { return LorentzElement(Mat3::identity()); }

    const Mat3& matrix() const { return m_; }

    // eta L^T eta, the exact inverse of a Lorentz matrix
    LorentzElement inverse() const {
        return LorentzElement(minkowski_metric() * transpose(m_) * minkowski_metric());
    }

    friend LorentzElement operator*(const LorentzElement& a, const LorentzElement& b) {
        return LorentzElement(a.m_ * b.m_);
    }

    NVector operator*(const NVector& v) const { return m_ * v; }

private:
    explicit LorentzElement(const Mat3& m) : m_(m) {}
    Mat3 m_;
};

enum class BoostPlane { p01, p02 };

// One-parameter boost subgroups; p01 is the block
//   [ cosh(xi) sinh(xi) 0 ; sinh(xi) cosh(xi) 0 ; 0 0 1 ].
inline LorentzElement so12_boost(double xi, BoostPlane plane = BoostPlane::p01) {
    if (!std::isfinite(xi)) throw domain_error("so12_boost: rapidity must be finite");
    const double c = std::cosh(xi), s = std::sinh(xi);
    Mat3 m = Mat3::identity();
    if (plane == BoostPlane::p01) {
        m(0, 0) = c; m(0, 1) = s;
        m(1, 0) = s; m(1, 1) = c;
    } else {
        m(0, 0) = c; m(0, 2) = s;
        m(2, 0) = s; m(2, 2) = c;
    }
    return LorentzElement::from_matrix(m);
}

// Rotation in the two space-like directions (n1, n2).
inline LorentzElement so12_rotation(double theta) {
    if (!std::isfinite(theta)) throw domain_error("so12_rotation: angle must be finite");
    const double c = std::cos(theta), s = std::sin(theta);
    Mat3 m = Mat3::identity();
    m(1, 1) = c; m(1, 2) = -s;
    m(2, 1) = s; m(2, 2) = c;
    return LorentzElement::from_matrix(m);
}

// ── SL(2,R) spin cover ───────────────────────────────────────────────────────

struct SpinElement {
    std::array<double, 4> m{1, 0, 0, 1};  // row-major real 2x2

    static SpinElement identity() { return {}; }

    double det() const { return m[0] * m[3] - m[1] * m[2]; }
    double trace() const { return m[0] + m[3]; }

    SpinElement inverse() const {
        const double d = det();
        if (std::abs(d) < 1e-300) throw domain_error("SpinElement: singular");
        return {{m[3] / d, -m[1] / d, -m[2] / d, m[0] / d}};
    }

    Mat2 as_complex() const { return {{cplx(m[0]), cplx(m[1]), cplx(m[2]), cplx(m[3])}}; }

    Vec2 operator*(const Vec2& v) const {
        return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
    }

    friend SpinElement operator*(const SpinElement& a, const SpinElement& b) {
        return {{a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
                 a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]}};
    }
};

inline double distance(const SpinElement& a, const SpinElement& b) {
    double r = 0.0;
    for (int i = 0; i < 4; ++i) r = std::max(r, std::abs(a.m[i] - b.m[i]));
    return r;
}

// max over basis w of | M (w.tau) M^-1 - ((Lw).tau) |
inline double conjugation_residual(const SpinElement& m, const LorentzElement& l) {
    const Mat2 mc = m.as_complex();
    const Mat2 mi = m.inverse().as_complex();
    double r = 0.0;
    for (int i = 0; i < 3; ++i) {
        NVector e{0, 0, 0};
        e[i] = 1.0;
        r = std::max(r, distance(mc * kernel_matrix(e) * mi, kernel_matrix(l * e)));
    }
    return r;
}

namespace symmetry_detail {

// smallest eigenpair of a symmetric 4x4 via cyclic Jacobi sweeps
inline void jacobi_smallest(std::array<std::array<double, 4>, 4> a,
                            std::array<double, 4>& evec, double& eval) {
    std::array<std::array<double, 4>, 4> v{};
    for (int i = 0; i < 4; ++i) v[i][i] = 1.0;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-32) break;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int i = 0; i < 4; ++i) {
                    const double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (int i = 0; i < 4; ++i) {
                    const double api = a[p][i], aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
                for (int i = 0; i < 4; ++i) {
                    const double vip = v[i][p], viq = v[i][q];
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
    }
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (a[i][i] < a[best][best]) best = i;
    eval = a[best][best];
    for (int i = 0; i < 4; ++i) evec[i] = v[i][best];
}

}  // namespace symmetry_detail

// The SL(2,R) partner of L: the unique-up-to-sign real unimodular M with
//   M (w.tau) M^-1 = (Lw).tau  for all w in R^3.
// Found as the null vector of the linear system M (e_i.tau) - ((L e_i).tau) M
// stacked over the basis, then scaled to det 1. Sign convention: trace
// positive, else the first entry above 1e-12 positive.
inline SpinElement spin_cover(const LorentzElement& l) {
    // rows of the 24x4 real system, accumulated as the 4x4 normal matrix
    std::array<std::array<double, 4>, 4> ata{};
    auto accumulate = [&](const std::array<double, 4>& row) {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) ata[i][j] += row[i] * row[j];
    };
    for (int w = 0; w < 3; ++w) {
        NVector e{0, 0, 0};
        e[w] = 1.0;
        const Mat2 tw = kernel_matrix(e);
        const Mat2 tlw = kernel_matrix(l * e);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                std::array<cplx, 4> row{};
                row[2 * a + 0] += tw(0, b);
                row[2 * a + 1] += tw(1, b);
                row[2 * 0 + b] -= tlw(a, 0);
                row[2 * 1 + b] -= tlw(a, 1);
                std::array<double, 4> re{}, im{};
                for (int i = 0; i < 4; ++i) {
                    re[i] = row[i].real();
                    im[i] = row[i].imag();
                }
                accumulate(re);
                accumulate(im);
            }
    }
    std::array<double, 4> x{};
    double eval = 0.0;
    symmetry_detail::jacobi_smallest(ata, x, eval);
    if (eval > 1e-16)
        throw not_in_group("spin_cover: no intertwiner found (residual too large)");
    SpinElement m{{x[0], x[1], x[2], x[3]}};
    const double d = m.det();
    if (d < 1e-12)
        throw not_in_group(
            "spin_cover: no real unimodular solution (input not in SO+(1,2)?)");
    const double s = 1.0 / std::sqrt(d);
    for (auto& e : m.m) e *= s;
    bool flip = false;
    if (m.trace() > 1e-12)
        flip = false;
    else if (m.trace() < -1e-12)
        flip = true;
    else
        for (const double e : m.m) {
            if (std::abs(e) > 1e-12) {
                flip = e < 0;
                break;
            }
        }
    if (flip)
        for (auto& e : m.m) e = -e;
    return m;
}

// ── The relabeling k' ────────────────────────────────────────────────────────
// k'(k) = [n^-1 . D_f^-1 . L . D_g . n](k), held compositionally so the
// inverse is the exact composition of inverses.

class KPrimeMap {
public:
    KPrimeMap()
        : g_(appendix_dilation()),
          l_(LorentzElement::identity()),
          f_(appendix_dilation()),
          f_inv_(f_.inverse()) {}

    KPrimeMap(RadialMap g_in, LorentzElement l, RadialMap f_out)
        : g_(std::move(g_in)), l_(l), f_(std::move(f_out)), f_inv_(f_.inverse()) {}

    const RadialMap& g_in() const { return g_; }
    const LorentzElement& lorentz() const { return l_; }
    const RadialMap& f_out() const { return f_; }

    // action on the cone (n-space)
    NVector apply_cone(const NVector& v) const { return f_inv_.apply(l_ * g_.apply(v)); }

    // action on the shell; nullopt when the image leaves the representable
    // interior (1 - n0^2 <= 1e-10) or the B0-interior chart
    std::optional<KPoint> try_apply(const KPoint& p) const {
        if (region_of(p.k, p.mu) != Region::B0)
            throw domain_error("KPrimeMap: point must lie in the interior of B0");
        const NVector u = apply_cone(n_vector(p));
        if (u.n0 < 0.0 || 1.0 - u.n0 * u.n0 <= kTruncationTol) return std::nullopt;
        return n_inverse(ConePoint(u, Cone::K));
    }

    KPoint apply(const KPoint& p) const {
        auto q = try_apply(p);
        if (!q)
            throw truncation_error(
                "KPrimeMap: image left the representable interior of the shell");
        return *q;
    }

    KPoint operator()(const KPoint& p) const { return apply(p); }

    // (D_f^-1 L D_g)^-1 = D_g^-1 L^-1 D_f
    KPrimeMap inverse() const { return KPrimeMap(f_, l_.inverse(), g_); }

    // (*this) after other:
    //   D_f2^-1 L2 D_g2 . D_f1^-1 L1 D_g1
    //   = D_f2^-1 (L2 L1) [L1^-1 (D_g2 D_f1^-1) L1] D_g1
    KPrimeMap after(const KPrimeMap& o) const {
        RadialMap mid = g_.after(o.f_.inverse());
        RadialMap conj = mid.conjugated_by(o.l_.matrix());
        return KPrimeMap(conj.after(o.g_), l_ * o.l_, f_);
    }

private:
    RadialMap g_;
    LorentzElement l_;
    RadialMap f_;
    RadialMap f_inv_;
};

// ── Phase functions a : V -> C ───────────────────────────────────────────────

namespace phase_detail {

struct Impl {
    virtual ~Impl() = default;
    virtual cplx eval(const KPoint& p) const = 0;
};

using ImplPtr = std::shared_ptr<const Impl>;

struct ZeroImpl final : Impl {
    cplx eval(const KPoint&) const override { return {0, 0}; }
};

// a(k) = a0 omega + a1 k + a2 mu (the translation subgroup when real)
struct LinearImpl final : Impl {
    double a0, a1, a2;
    LinearImpl(double a0_, double a1_, double a2_) : a0(a0_), a1(a1_), a2(a2_) {}
    cplx eval(const KPoint& p) const override {
        return cplx(a0 * p.omega + a1 * p.k + a2 * p.mu);
    }
};

struct ConstantImpl final : Impl {
    cplx c;
    explicit ConstantImpl(cplx c_) : c(c_) {}
    cplx eval(const KPoint&) const override { return c; }
};

// complex samples on a uniform (k, mu) grid over [-kmax,kmax] x [-mumax,mumax],
// bilinear interpolation, clamped at the edges
struct TabulatedImpl final : Impl {
    int nk, nmu;
    double kmax, mumax;
    std::vector<cplx> values;  // [im * nk + ik]
    TabulatedImpl(int nk_, int nmu_, double kmax_, double mumax_, std::vector<cplx> v)
        : nk(nk_), nmu(nmu_), kmax(kmax_), mumax(mumax_), values(std::move(v)) {
        if (nk < 2 || nmu < 2 || values.size() != static_cast<std::size_t>(nk) * nmu)
            throw domain_error("tabulated phase: bad grid");
    }
    cplx eval(const KPoint& p) const override {
        const double fk = std::clamp((p.k + kmax) / (2 * kmax), 0.0, 1.0) * (nk - 1);
        const double fm = std::clamp((p.mu + mumax) / (2 * mumax), 0.0, 1.0) * (nmu - 1);
        const int ik = std::min(static_cast<int>(fk), nk - 2);
        const int im = std::min(static_cast<int>(fm), nmu - 2);
        const double tk = fk - ik, tm = fm - im;
        auto at = [&](int i, int j) { return values[static_cast<std::size_t>(j) * nk + i]; };
        return (1 - tk) * (1 - tm) * at(ik, im) + tk * (1 - tm) * at(ik + 1, im) +
               (1 - tk) * tm * at(ik, im + 1) + tk * tm * at(ik + 1, im + 1);
    }
};

struct SumImpl final : Impl {
    ImplPtr a, b;
    SumImpl(ImplPtr a_, ImplPtr b_) : a(std::move(a_)), b(std::move(b_)) {}
    cplx eval(const KPoint& p) const override { return a->eval(p) + b->eval(p); }
};

struct NegateImpl final : Impl {
    ImplPtr a;
    explicit NegateImpl(ImplPtr a_) : a(std::move(a_)) {}
    cplx eval(const KPoint& p) const override { return -a->eval(p); }
};

struct ComposedImpl final : Impl {
    ImplPtr a;
    KPrimeMap map;
    ComposedImpl(ImplPtr a_, KPrimeMap m) : a(std::move(a_)), map(std::move(m)) {}
    cplx eval(const KPoint& p) const override { return a->eval(map.apply(p)); }
};

}  // namespace phase_detail

class PhaseFunction {
public:
    PhaseFunction() : impl_(std::make_shared<phase_detail::ZeroImpl>()) {}
    explicit PhaseFunction(phase_detail::ImplPtr impl) : impl_(std::move(impl)) {}

    cplx operator()(const KPoint& p) const { return impl_->eval(p); }

    static PhaseFunction zero() { return PhaseFunction(); }
    static PhaseFunction linear(double a0, double a1, double a2) {
        return PhaseFunction(std::make_shared<phase_detail::LinearImpl>(a0, a1, a2));
    }
    static PhaseFunction constant(cplx c) {
        return PhaseFunction(std::make_shared<phase_detail::ConstantImpl>(c));
    }
    static PhaseFunction tabulated(int nk, int nmu, double kmax, double mumax,
                                   std::vector<cplx> values) {
        return PhaseFunction(std::make_shared<phase_detail::TabulatedImpl>(
            nk, nmu, kmax, mumax, std::move(values)));
    }

    PhaseFunction operator+(const PhaseFunction& o) const {
        return PhaseFunction(std::make_shared<phase_detail::SumImpl>(impl_, o.impl_));
    }
    PhaseFunction negated() const {
        return PhaseFunction(std::make_shared<phase_detail::NegateImpl>(impl_));
    }
    // a . map
    PhaseFunction composed_with(const KPrimeMap& map) const {
        return PhaseFunction(std::make_shared<phase_detail::ComposedImpl>(impl_, map));
    }

private:
    phase_detail::ImplPtr impl_;
};

// ── FrameChange ──────────────────────────────────────────────────────────────

// a labelled shell mode: constants of motion plus coin amplitude
struct Mode {
    KPoint p;
    Vec2 amplitude;
};

// A change of inertial reference frame: the triple (k', a, M).
class FrameChange {
public:
    FrameChange() = default;
    FrameChange(KPrimeMap kmap, PhaseFunction a, SpinElement m)
        : kmap_(std::move(kmap)), a_(std::move(a)), m_(m) {}

    static FrameChange identity() { return FrameChange(); }

    const KPrimeMap& kprime() const { return kmap_; }
    const PhaseFunction& phase() const { return a_; }
    const SpinElement& coin() const { return m_; }

    // (k', a, M)^-1 = (k'^-1, -a . k', M^-1)
    FrameChange inverse() const {
        return FrameChange(kmap_.inverse(), a_.composed_with(kmap_).negated(), m_.inverse());
    }

private:
    KPrimeMap kmap_;
    PhaseFunction a_;
    SpinElement m_ = SpinElement::identity();
};

// Packages (k', a, M) from (L, D_g, D_f, a) with M = spin_cover(L).
// g_in and f_out must be radial K -> K0 diffeomorphisms (direction-preserving
// positive factor); this is spot-checked on shell samples.
inline FrameChange make_frame_change(const LorentzElement& l, const RadialMap& g_in,
                                     const RadialMap& f_out, const PhaseFunction& a) {
    for (const double k : {0.0, 0.7, -1.1}) {
        const NVector v = n_vector(KPoint::on_shell(k, 0.35));
        for (const RadialMap* m : {&g_in, &f_out}) {
            const double fac = m->factor(v);
            if (!(fac > 0.0) || !std::isfinite(fac))
                throw domain_error(
                    "make_frame_change: map is not a direction-preserving K->K0 "
                    "dilation");
        }
    }
    return FrameChange(KPrimeMap(g_in, l, f_out), a, spin_cover(l));
}

// Composition rule (k'', b, N) . (k', a, M) = (k'' . k', b + a . k''^-1, NM).
inline FrameChange compose(const FrameChange& fc2, const FrameChange& fc1) {
    return FrameChange(fc2.kprime().after(fc1.kprime()),
                       fc2.phase() + fc1.phase().composed_with(fc2.kprime().inverse()),
                       fc2.coin() * fc1.coin());
}

struct ApplyResult {
    std::vector<Mode> modes;
    int truncated = 0;            // inputs whose image left the representable shell
    bool nonunitary_phase = false;  // some |e^{ia}| != 1 was encountered
};

// Mode relabeling psi'(k') = e^{i a(k')} M psi(k); truncated modes are
// dropped and counted rather than clamped.
inline ApplyResult apply_frame_change(const FrameChange& fc, const std::vector<Mode>& in) {
    ApplyResult out;
    out.modes.reserve(in.size());
    for (const Mode& mode : in) {
        const auto q = fc.kprime().try_apply(mode.p);
        if (!q) {
            ++out.truncated;
            continue;
        }
        const cplx a = fc.phase()(*q);
        if (std::abs(a.imag()) > 1e-15) out.nonunitary_phase = true;
        const cplx factor = std::exp(cplx(0, 1) * a);
        const Vec2 mv = fc.coin() * mode.amplitude;
        out.modes.push_back(Mode{*q, {factor * mv[0], factor * mv[1]}});
    }
    return out;
}

// ── Factorization G = L . M (normal dilation factor) ────────────────────────

struct Factorization {
    KPrimeMap lorentz_part;   // L = D_f^-1 . L . D_f with the canonical f
    RadialMap dilation_part;  // M = L^-1 . G, certified radial
    double collinearity_residual = 0.0;   // max over samples
    double reconstruction_residual = 0.0;  // max over samples of |L(M v) - G v|
};

// Splits a shell diffeomorphism G = D_h^-1 . L . D_g into the canonical
// nonlinear Lorentz realization and a radial dilation. The certificate
// evaluates L^-1 . G through the full pipelines (not the algebraic
// simplification) and checks the result stays on the input ray.
inline Factorization factorize(const KPrimeMap& g, const RadialMap& canonical_f,
                               int samples = 64, std::uint64_t seed = 99,
                               double collinearity_tol = 1e-10) {
    Factorization out;
    out.lorentz_part = KPrimeMap(canonical_f, g.lorentz(), canonical_f);
    RadialMap mid = canonical_f.after(g.f_out().inverse());
    RadialMap conj = mid.conjugated_by(g.lorentz().matrix());
    out.dilation_part = canonical_f.inverse().after(conj.after(g.g_in()));

    const KPrimeMap linv = out.lorentz_part.inverse();
    Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
        const NVector v =
            n_vector(KPoint::on_shell(rng.angle(pi / 2 * 0.98), rng.angle(pi / 2 * 0.98)));
        const NVector gv = g.apply_cone(v);
        const NVector w = linv.apply_cone(gv);
        out.collinearity_residual =
            std::max(out.collinearity_residual, collinearity_residual(w, v));
        const NVector rec = out.lorentz_part.apply_cone(out.dilation_part.apply(v));
        const double scale = std::max(1.0, euclidean_norm(gv));
        out.reconstruction_residual =
            std::max(out.reconstruction_residual, euclidean_norm(rec - gv) / scale);
    }
    if (out.collinearity_residual > collinearity_tol)
        throw factorization_failed(
            "factorize: dilation factor is not radial (collinearity certificate "
            "failed)");
    return out;
}

inline Factorization factorize(const KPrimeMap& g) {
    return factorize(g, appendix_dilation());
}

// ── Small-wave-vector limit of the deformed boost ───────────────────────────

// Central-difference Jacobian at the cone tip of D_f^-1 . L . D_f (canonical
// appendix f, boost deflor(xi)), restricted to the (n0, n1) plane. Equals the
// linear boost block [[cosh xi, sinh xi], [sinh xi, cosh xi]] because the
// dilation's Jacobian at the origin is the identity.
inline std::array<std::array<double, 2>, 2> dsr_linear_limit(double xi, double step = 1e-4) {
    const RadialMap f = appendix_dilation();
    const RadialMap finv = f.inverse();
    const LorentzElement l = so12_boost(xi);
    const auto map = [&](const NVector& v) { return finv.apply(l * f.apply(v)); };
    const Mat3 j = numeric_jacobian(map, NVector{0, 0, 0}, step);
    return {{{j(0, 0), j(0, 1)}, {j(1, 0), j(1, 1)}}};
}

}  // namespace dqw
