#ifndef GALBAND_ELLIPTIC_HPP
#define GALBAND_ELLIPTIC_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>

#include "galband/core.hpp"
#include "galband/jet.hpp"

namespace galband {

/// sn, cn, dn at one point, with the argument and modulus they belong to.
struct EllipticTriple {
    complex z;
    double m;
    complex sn, cn, dn;
};

namespace detail {

inline constexpr std::size_t agm_max_iter = 32;

// Arithmetic-geometric mean of (1, sqrt(1-m)); also exposes the Landen
// scale chain needed for the amplitude descent.
struct AgmChain {
    std::array<double, agm_max_iter> a{}, c{};
    std::size_t n = 0;          // index of the last stage
    double agm = 1.0;

    explicit AgmChain(double m) {
        double ai = 1.0, bi = std::sqrt(1.0 - m), ci = std::sqrt(m);
        std::size_t i = 0;
        a[0] = ai; c[0] = ci;
        while (std::abs(ci) > 1e-17 * ai && i + 1 < agm_max_iter) {
            const double an = 0.5 * (ai + bi);
            const double cn = 0.5 * (ai - bi);
            bi = std::sqrt(ai * bi);
            ai = an; ci = cn;
            ++i;
            a[i] = ai; c[i] = ci;
        }
        n = i;
        agm = ai;
    }
};

// Real-argument Jacobi functions by the descending-Landen amplitude
// recursion (Abramowitz & Stegun 16.4).  Valid for 0 <= m <= 1.
inline void sncndn_real(double x, double m, double& sn, double& cn, double& dn) {
    if (m <= 0.0) { sn = std::sin(x); cn = std::cos(x); dn = 1.0; return; }
    if (m >= 1.0) {
        sn = std::tanh(x);
        cn = 1.0 / std::cosh(x);
        dn = cn;
        return;
    }
    const AgmChain ch(m);
    double phi = std::ldexp(1.0, static_cast<int>(ch.n)) * ch.a[ch.n] * x;
    for (std::size_t i = ch.n; i > 0; --i) {
        const double s = (ch.c[i] / ch.a[i]) * std::sin(phi);
        phi = 0.5 * (phi + std::asin(std::clamp(s, -1.0, 1.0)));
    }
    sn = std::sin(phi);
    cn = std::cos(phi);
    dn = std::sqrt(1.0 - m * sn * sn);  // no cancellation: 1 - m*sn^2 >= 1-m
}

} // namespace detail

/// Complete elliptic integral of the first kind, K(m) = pi/(2*AGM(1, sqrt(1-m))).
inline double complete_K(double m) {
    if (!(m >= 0.0) || m >= 1.0)
        throw std::domain_error("complete_K: need 0 <= m < 1 (K diverges at m = 1)");
    const detail::AgmChain ch(m);
    return std::numbers::pi / (2.0 * ch.agm);
}

/// K'(m) = K(1-m).
inline double complete_Kprime(double m) { return complete_K(1.0 - m); }

/// Nearest pole of the sn/cn/dn lattice, poles sit at 2pK + (2q+1)iK'.
inline complex nearest_pole(complex z, double m) {
    const double K = complete_K(m);
    const double Kp = complete_Kprime(m);
    const double xn = 2.0 * K * std::round(z.real() / (2.0 * K));
    const double yn = Kp * (2.0 * std::round((z.imag() / Kp - 1.0) / 2.0) + 1.0);
    return {xn, yn};
}

/// Distance to the nearest pole, in lattice units (real direction scaled by
/// 2K, imaginary by 2K').
inline double pole_distance(complex z, double m) {
    const complex p = nearest_pole(z, m);
    const double K = complete_K(m);
    const double Kp = complete_Kprime(m);
    const double dx = (z.real() - p.real()) / (2.0 * K);
    const double dy = (z.imag() - p.imag()) / (2.0 * Kp);
    return std::hypot(dx, dy);
}

namespace detail {

inline void require_off_pole(complex z, double m, double eps) {
    if (m <= 0.0 || m >= 1.0) return;  // trigonometric/hyperbolic limits
    if (pole_distance(z, m) < eps)
        throw pole_error(z, nearest_pole(z, m),
                         "jacobi: argument within pole-exclusion radius");
}

} // namespace detail

/// Jacobi sn, cn, dn for complex argument and real modulus.  The complex
/// value comes from the real-argument core at m and 1-m glued by the
/// addition theorem for z = x + iy.
inline EllipticTriple jacobi(complex z, ModulusM m, double pole_eps = default_pole_eps) {
    detail::require_off_pole(z, m, pole_eps);
    double s, c, d, s1, c1, d1;
    detail::sncndn_real(z.real(), m, s, c, d);
    if (z.imag() == 0.0)
        return {z, m, complex(s), complex(c), complex(d)};
    detail::sncndn_real(z.imag(), m.complement(), s1, c1, d1);
    const double den = c1 * c1 + m * s * s * s1 * s1;
    const complex i(0.0, 1.0);
    EllipticTriple t;
    t.z = z;
    t.m = m;
    t.sn = (s * d1 + i * (c * d * s1 * c1)) / den;
    t.cn = (c * c1 - i * (s * d * s1 * d1)) / den;
    t.dn = (d * c1 * d1 - i * (m * s * c * s1)) / den;
    return t;
}

enum class QuarterShift { K, iKp, K_iKp };

/// Triple at z + shift from the closed quarter-period identities; never
/// re-evaluates jacobi at the shifted point, so it can serve as an
/// independent route against direct evaluation.
inline EllipticTriple quarter_shift(complex z, ModulusM m, QuarterShift shift,
                                    double pole_eps = default_pole_eps) {
    const double K = complete_K(m);
    const double Kp = complete_Kprime(m);
    const complex i(0.0, 1.0);
    complex zs = z;
    switch (shift) {
        case QuarterShift::K:     zs += K; break;
        case QuarterShift::iKp:   zs += i * Kp; break;
        case QuarterShift::K_iKp: zs += K + i * Kp; break;
    }
    detail::require_off_pole(zs, m, pole_eps);
    const EllipticTriple t = jacobi(z, m, pole_eps);
    const double kp = std::sqrt(1.0 - m);
    const double rtm = std::sqrt(m.m);
    EllipticTriple r;
    r.z = zs;
    r.m = m;
    switch (shift) {
        case QuarterShift::K:
            r.sn = t.cn / t.dn;
            r.cn = -kp * t.sn / t.dn;
            r.dn = kp / t.dn;
            break;
        case QuarterShift::iKp:
            r.sn = 1.0 / (rtm * t.sn);
            r.cn = -i * t.dn / (rtm * t.sn);
            r.dn = -i * t.cn / t.sn;
            break;
        case QuarterShift::K_iKp:
            r.sn = t.dn / (rtm * t.cn);
            r.cn = -i * kp / (rtm * t.cn);
            r.dn = i * kp * t.sn / t.cn;
            break;
    }
    return r;
}

/// sn, cn, dn as 2-jets in the argument: sn' = cn dn, cn' = -sn dn,
/// dn' = -m sn cn, and the second derivatives that follow.
struct TripleJets {
    Jet2<complex> sn, cn, dn;
};

inline TripleJets triple_jets(const EllipticTriple& t) {
    const complex s = t.sn, c = t.cn, d = t.dn;
    const double m = t.m;
    TripleJets j;
    j.sn = {s, c * d, -s * (d * d + m * c * c)};
    j.cn = {c, -s * d, -c * (d * d - m * s * s)};
    j.dn = {d, -m * s * c, -m * d * (c * c - s * s)};
    return j;
}

inline TripleJets jacobi_jets(complex z, ModulusM m, double pole_eps = default_pole_eps) {
    return triple_jets(jacobi(z, m, pole_eps));
}

} // namespace galband

#endif // GALBAND_ELLIPTIC_HPP
