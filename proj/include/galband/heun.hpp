#ifndef GALBAND_HEUN_HPP
#define GALBAND_HEUN_HPP

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "galband/catalog.hpp"
#include "galband/core.hpp"
#include "galband/gal.hpp"

namespace galband {

/// Parameters of the canonical form
///   G'' + (gamma/u + delta/(u-1) + epsilon/(u-c)) G' +
///   (alpha beta u - q)/(u(u-1)(u-c)) G = 0,
/// constrained by gamma + delta + epsilon = alpha + beta + 1 and c = 1/m.
struct HeunParameters {
    complex alpha, beta;
    double gamma, delta, epsilon;
    complex q;
    double c;

    double constraint_residual() const {
        return std::abs(complex(gamma + delta + epsilon) - (alpha + beta + complex(1.0)));
    }
    bool complex_exponents() const { return alpha.imag() != 0.0; }
};

/// Dictionary from the algebraized equation to canonical Heun form:
/// epsilon = 1/2 - b, delta = 1/2 - f, gamma = 1/2 - g, alpha+beta =
/// 1/2 - (b+f+g), 4 alpha beta = Q, 4 m q = R, c = 1/m.
inline HeunParameters gal_to_heun(const GALSpec& spec, complex E) {
    HeunParameters hp;
    hp.epsilon = 0.5 - spec.b;
    hp.delta = 0.5 - spec.f;
    hp.gamma = 0.5 - spec.g;
    hp.c = 1.0 / spec.m;
    const double sum = 0.5 - (spec.b + spec.f + spec.g);   // alpha + beta
    const double prod4 = phi_equation_Q(spec);             // 4 alpha beta
    const complex disc = std::sqrt(complex(sum * sum - prod4, 0.0));
    hp.alpha = 0.5 * (complex(sum) - disc);  // root with the smaller real part
    hp.beta = 0.5 * (complex(sum) + disc);
    hp.q = phi_equation_R(spec, E) / (4.0 * spec.m.m);
    return hp;
}

/// The (b, f, g) realization a state was assembled with, recovered from its
/// prefactor exponents; closed-form rows reached through parameter reflections
/// carry a different realization than the caller's spec, and the dictionary
/// must use the state's own.
inline GALSpec state_realization(const QESState& st, const GALSpec& spec) {
    GALSpec r = spec;
    r.g = -st.rho_s;
    r.f = -st.rho_c;
    r.b = -st.rho_d;
    return r;
}

inline HeunParameters heun_for_state(const QESState& st, const GALSpec& spec) {
    return gal_to_heun(state_realization(st, spec), st.energy);
}

/// Coefficient functions of the sn^2-pulled-back Heun equation,
///   F'' + [(1-2e) m sn cn/dn + (1-2d) sn dn/cn + (2g-1) cn dn/sn] F'
///      - [4mq - 4 alpha beta m sn^2] F = 0,
/// for the round-trip comparison with the algebraized-equation coefficients.
inline PhiCoefficients heun_pullback_coeffs(const HeunParameters& hp, ModulusM m,
                                            const EllipticTriple& t) {
    PhiCoefficients pc;
    const complex sn = t.sn, cn = t.cn, dn = t.dn;
    pc.p1 = (1.0 - 2.0 * hp.epsilon) * m.m * sn * cn / dn +
            (1.0 - 2.0 * hp.delta) * sn * dn / cn +
            (2.0 * hp.gamma - 1.0) * cn * dn / sn;
    pc.p0 = -(4.0 * m.m * hp.q - 4.0 * hp.alpha * hp.beta * m.m * sn * sn);
    return pc;
}

/// Normalized max residual of the canonical Heun operator on G(u) = phi(y),
/// u = sn^2(y), with derivatives pulled back through the substitution so no
/// branch of the inverse map is ever chosen.  Grid points mapping onto the
/// singular points u ∈ {0, 1, c} are skipped.
inline double heun_residual(const HeunParameters& hp, const QESState& st,
                            const GALSpec& spec, std::span<const double> grid) {
    spec.validate();
    const PotentialOnLine V(spec);
    double worst = 0.0, scale = 0.0;
    std::size_t used = 0;
    for (double x : grid) {
        const TripleJets tj = triple_jets(V.triple(x));
        const Jet2<complex> u = tj.sn * tj.sn;
        if (std::abs(u.f) < 1e-10 || std::abs(u.f - 1.0) < 1e-10 ||
            std::abs(u.f - hp.c) < 1e-10 || std::abs(u.d1) < 1e-10)
            continue;  // removable singular point of the canonical form
        const Jet2<complex> phi = eval_phi_jets(st, spec, tj);
        const complex G = phi.f;
        const complex Gp = phi.d1 / u.d1;
        const complex Gpp = (phi.d2 - Gp * u.d2) / (u.d1 * u.d1);
        const complex pole = u.f * (u.f - 1.0) * (u.f - hp.c);
        const complex r = Gpp +
                          (hp.gamma / u.f + hp.delta / (u.f - 1.0) +
                           hp.epsilon / (u.f - hp.c)) * Gp +
                          (hp.alpha * hp.beta * u.f - hp.q) / pole * G;
        worst = std::max(worst, std::abs(r));
        scale = std::max(scale, std::abs(G));
        ++used;
    }
    if (used == 0 || scale == 0.0) return 0.0;
    return worst / scale;
}

inline double heun_residual(const HeunParameters& hp, const QESState& st,
                            const GALSpec& spec, std::size_t grid_points = 192) {
    const std::vector<double> grid = period_grid(spec, grid_points);
    return heun_residual(hp, st, spec, std::span<const double>(grid));
}

} // namespace galband

#endif // GALBAND_HEUN_HPP
