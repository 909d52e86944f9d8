#ifndef GALBAND_GAL_HPP
#define GALBAND_GAL_HPP

#include <cmath>
#include <complex>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "galband/core.hpp"
#include "galband/elliptic.hpp"

namespace galband {

/// One potential of the family
///   V(x) = -A m sn^2(y) - B m cn^2(y)/dn^2(y) - F dn^2(y)/cn^2(y) - G/sn^2(y),
/// with y = i x + beta and A = a(a+1), B = b(b+1), F = f(f+1), G = g(g+1).
/// The real line Re y = beta must avoid every zero and pole of sn, cn, dn;
/// those sit on Re y = 0 and Re y = K (mod 2K), so beta = K/2 is the safe
/// default.
struct GALSpec {
    double a = 0.0, b = 0.0, f = 0.0, g = 0.0;
    ModulusM m{0.5};
    double beta = 0.0;

    double A() const noexcept { return a * (a + 1.0); }
    double B() const noexcept { return b * (b + 1.0); }
    double F() const noexcept { return f * (f + 1.0); }
    double G() const noexcept { return g * (g + 1.0); }
    double coefficient_sum() const noexcept { return A() + B() + F() + G(); }

    /// Real period of the potential along the x axis.
    double period() const { return 2.0 * complete_Kprime(m); }

    std::string bracket() const {
        std::ostringstream os;
        os << '[' << A() << ',' << B() << ',' << F() << ',' << G() << ']';
        return os.str();
    }

    void validate() const {
        if (!m.spectral())
            throw std::invalid_argument("GALSpec: modulus must satisfy 0 < m < 1");
        const double K = complete_K(m);
        double r = std::fmod(beta, K);
        if (r < 0.0) r += K;
        if (std::min(r, K - r) < default_pole_eps * K)
            throw std::invalid_argument(
                "GALSpec: beta = " + std::to_string(beta) +
                " puts the evaluation line on zeros/poles of the Jacobi functions");
    }
};

inline GALSpec make_spec(double a, double b, double f, double g, double m) {
    GALSpec s{a, b, f, g, ModulusM(m), 0.0};
    s.beta = complete_K(m) / 2.0;
    s.validate();
    return s;
}

inline GALSpec lame_spec(double a, double m) { return make_spec(a, 0, 0, 0, m); }

/// Bracket-form evaluation at an arbitrary complex point y.
inline complex eval_gal_bracket(double A, double B, double F, double G,
                                ModulusM m, complex y) {
    const EllipticTriple t = jacobi(y, m);
    const complex sn2 = t.sn * t.sn, cn2 = t.cn * t.cn, dn2 = t.dn * t.dn;
    complex v = -A * m.m * sn2;
    if (B != 0.0) v -= B * m.m * cn2 / dn2;
    if (F != 0.0) v -= F * dn2 / cn2;
    if (G != 0.0) v -= G / sn2;
    return v;
}

inline complex eval_potential(const GALSpec& spec, double x) {
    spec.validate();
    const complex y(spec.beta, x);
    return eval_gal_bracket(spec.A(), spec.B(), spec.F(), spec.G(), spec.m, y);
}

/// Potential evaluator fixed to the line y = i x + beta.  The beta-dependent
/// factors are cached so one evaluation costs a single real-argument Jacobi
/// call at the complementary modulus.
class PotentialOnLine {
public:
    explicit PotentialOnLine(const GALSpec& spec) : spec_(spec) {
        spec.validate();
        detail::sncndn_real(spec.beta, spec.m, sb_, cb_, db_);
        mc_ = spec.m.complement();
        A_ = spec.A(); B_ = spec.B(); F_ = spec.F(); G_ = spec.G();
    }

    EllipticTriple triple(double x) const {
        double s1, c1, d1;
        detail::sncndn_real(x, mc_, s1, c1, d1);
        const double den = c1 * c1 + spec_.m.m * sb_ * sb_ * s1 * s1;
        const complex i(0.0, 1.0);
        EllipticTriple t;
        t.z = complex(spec_.beta, x);
        t.m = spec_.m;
        t.sn = (sb_ * d1 + i * (cb_ * db_ * s1 * c1)) / den;
        t.cn = (cb_ * c1 - i * (sb_ * db_ * s1 * d1)) / den;
        t.dn = (db_ * c1 * d1 - i * (spec_.m.m * sb_ * cb_ * s1)) / den;
        return t;
    }

    complex operator()(double x) const {
        const EllipticTriple t = triple(x);
        const complex sn2 = t.sn * t.sn, cn2 = t.cn * t.cn, dn2 = t.dn * t.dn;
        const double m = spec_.m;
        complex v = -A_ * m * sn2;
        if (B_ != 0.0) v -= B_ * m * cn2 / dn2;
        if (F_ != 0.0) v -= F_ * dn2 / cn2;
        if (G_ != 0.0) v -= G_ / sn2;
        return v;
    }

    const GALSpec& spec() const noexcept { return spec_; }

private:
    GALSpec spec_;
    double sb_, cb_, db_, mc_;
    double A_, B_, F_, G_;
};

enum class GalTransform {
    shift_K,
    shift_iKp,
    shift_K_iKp,
    reflect_a,
    reflect_b,
    reflect_f,
    reflect_g,
    dual
};

/// A parameter transform together with the induced affine energy map
/// E -> sigma*E + offset and the substitution relating eigenfunctions.
struct TransformResult {
    GALSpec new_spec;
    double sigma = 1.0;
    double offset = 0.0;
    std::string argument_map;

    double map_energy(double E) const noexcept { return sigma * E + offset; }
    complex map_energy(complex E) const noexcept { return sigma * E + offset; }
};

inline TransformResult transform_spec(const GALSpec& spec, GalTransform op) {
    spec.validate();
    TransformResult r;
    r.new_spec = spec;
    switch (op) {
        case GalTransform::shift_K:
            r.new_spec.a = spec.b; r.new_spec.b = spec.a;
            r.new_spec.f = spec.g; r.new_spec.g = spec.f;
            r.argument_map = "y -> y + K(m)";
            break;
        case GalTransform::shift_K_iKp:
            r.new_spec.a = spec.f; r.new_spec.b = spec.g;
            r.new_spec.f = spec.a; r.new_spec.g = spec.b;
            r.argument_map = "y -> y + K(m) + iK'(m)";
            break;
        case GalTransform::shift_iKp:
            r.new_spec.a = spec.g; r.new_spec.b = spec.f;
            r.new_spec.f = spec.b; r.new_spec.g = spec.a;
            r.argument_map = "y -> y + iK'(m)";
            break;
        case GalTransform::reflect_a:
            r.new_spec.a = -spec.a - 1.0;
            r.argument_map = "identity";
            break;
        case GalTransform::reflect_b:
            r.new_spec.b = -spec.b - 1.0;
            r.argument_map = "identity";
            break;
        case GalTransform::reflect_f:
            r.new_spec.f = -spec.f - 1.0;
            r.argument_map = "identity";
            break;
        case GalTransform::reflect_g:
            r.new_spec.g = -spec.g - 1.0;
            r.argument_map = "identity";
            break;
        case GalTransform::dual:
            // E(a,b,f,g; m) = -[A+B+F+G] - E(a,g,f,b; 1-m); the coefficient
            // sum is invariant under b<->g, so applying dual twice composes
            // to the identity.
            r.new_spec.b = spec.g;
            r.new_spec.g = spec.b;
            r.new_spec.m = ModulusM(spec.m.complement());
            r.new_spec.beta = complete_K(r.new_spec.m) / 2.0;
            r.sigma = -1.0;
            r.offset = -spec.coefficient_sum();
            r.argument_map = "y -> i y + K'(m) + i K(m), m -> 1-m";
            break;
    }
    r.new_spec.validate();
    return r;
}

/// Max over the grid of |V(-x) - conj(V(x))|; small values certify that the
/// realized potential is PT symmetric.
inline double pt_symmetry_residual(const GALSpec& spec, std::span<const double> grid) {
    const PotentialOnLine V(spec);
    double worst = 0.0;
    for (double x : grid)
        worst = std::max(worst, std::abs(V(-x) - std::conj(V(x))));
    return worst;
}

/// Same check with the line offset overridden by an arbitrary complex beta;
/// a non-real beta breaks PT symmetry and shows the check's sensitivity.
inline double pt_symmetry_residual_at(const GALSpec& spec, std::span<const double> grid,
                                      complex beta) {
    double worst = 0.0;
    for (double x : grid) {
        const complex vp = eval_gal_bracket(spec.A(), spec.B(), spec.F(), spec.G(),
                                            spec.m, beta + complex(0.0, x));
        const complex vm = eval_gal_bracket(spec.A(), spec.B(), spec.F(), spec.G(),
                                            spec.m, beta + complex(0.0, -x));
        worst = std::max(worst, std::abs(vm - std::conj(vp)));
    }
    return worst;
}

/// Uniform sampling of one real period [0, 2K'(m)).
inline std::vector<double> period_grid(const GALSpec& spec, std::size_t count = 512) {
    const double L = spec.period();
    std::vector<double> xs(count);
    for (std::size_t i = 0; i < count; ++i)
        xs[i] = L * static_cast<double>(i) / static_cast<double>(count);
    return xs;
}

} // namespace galband

#endif // GALBAND_GAL_HPP
