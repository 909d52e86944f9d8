#ifndef GALBAND_SPECTRAL_HPP
#define GALBAND_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "galband/core.hpp"
#include "galband/gal.hpp"
#include "galband/ode.hpp"
#include "galband/parallel.hpp"

namespace galband {

/// One Floquet-discriminant sample: Delta(E) = trace of the one-period
/// monodromy matrix.  For PT potentials in the unbroken phase Im Delta
/// stays at integrator-noise level.
struct DiscriminantSample {
    double E = 0.0;
    complex delta{};
};

struct SpectralOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double edge_tol = 1e-10;       // bisection window on E
    double merge_tol = 1e-8;       // duplicate edges closer than this coalesce
    double tangency_tol = 1e-12;   // (Delta -+ 2)^2 below this flags a closed gap
    double broken_im_tol = 1e-6;   // |Im Delta| beyond this flags broken PT
    std::size_t points_per_unit = 2000;
    std::size_t max_points = 20000;
    std::size_t min_points = 100;

    std::size_t auto_points(double E_min, double E_max) const {
        const double units = std::max(E_max - E_min, 0.0);
        const auto n = static_cast<std::size_t>(units * static_cast<double>(points_per_unit));
        return std::clamp(n, min_points, max_points);
    }
};

/// Real associated-Lame potential a(a+1) mu sn^2(x,mu) + b(b+1) mu cn^2/dn^2
/// on the real axis; the duality identities compare PT discriminants
/// against this family at the complementary modulus.
struct RealALPotential {
    double a = 0.0, b = 0.0;
    double mu = 0.5;
    double period() const { return 2.0 * complete_K(mu); }
    complex operator()(double x) const {
        double s, c, d;
        detail::sncndn_real(x, mu, s, c, d);
        double v = a * (a + 1.0) * mu * s * s;
        if (b != 0.0) v += b * (b + 1.0) * mu * c * c / (d * d);
        return complex(v, 0.0);
    }
};

template <typename Pot>
DiscriminantSample discriminant(const Pot& V, double L, double E,
                                const SpectralOptions& opt = {}, double x0 = 0.0) {
    const Monodromy M = integrate_monodromy(V, complex(E, 0.0), L, opt.rtol, opt.atol, x0);
    return {E, M.trace()};
}

inline DiscriminantSample discriminant(const GALSpec& spec, double E,
                                       const SpectralOptions& opt = {}, double x0 = 0.0) {
    const PotentialOnLine V(spec);
    return discriminant(V, spec.period(), E, opt, x0);
}

/// Sorted band edges together with band/gap intervals from a discriminant
/// scan.  gaps may contain zero-width entries where two bands touch
/// (closed gap); gap_count counts only gaps of positive width strictly
/// inside the scanned range above the lowest edge.
struct BandStructure {
    std::vector<double> edges;
    std::vector<std::pair<double, double>> bands;
    std::vector<std::pair<double, double>> gaps;
    int gap_count = 0;
    bool broken_pt = false;
    std::vector<DiscriminantSample> scan;  // the raw curve, for export
};

namespace detail {

template <typename PotFn>
std::vector<DiscriminantSample> scan_discriminant(const PotFn& V, double L,
                                                  double E_min, double E_max,
                                                  std::size_t n,
                                                  const SpectralOptions& opt) {
    std::vector<DiscriminantSample> samples(n);
    parallel_for(n, [&](std::size_t i) {
        const double E =
            E_min + (E_max - E_min) * static_cast<double>(i) / static_cast<double>(n - 1);
        samples[i] = discriminant(V, L, E, opt);
    });
    return samples;
}

// Bisection on Re Delta - target across a sign-change bracket.
template <typename PotFn>
double refine_edge(const PotFn& V, double L, double lo, double hi, double f_lo,
                   double target, const SpectralOptions& opt) {
    for (int it = 0; it < 128 && hi - lo > opt.edge_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = discriminant(V, L, mid, opt).delta.real() - target;
        if ((f_lo <= 0.0) == (f_mid <= 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Iterated three-point parabola fit around a tangency of Delta with +-2.
template <typename PotFn>
double refine_tangency(const PotFn& V, double L, double E0, double d,
                       double target, const SpectralOptions& opt) {
    double E = E0;
    for (int it = 0; it < 4; ++it) {
        const double fm = discriminant(V, L, E - d, opt).delta.real() - target;
        const double f0 = discriminant(V, L, E, opt).delta.real() - target;
        const double fp = discriminant(V, L, E + d, opt).delta.real() - target;
        const double curv = fp - 2.0 * f0 + fm;
        if (curv == 0.0) break;
        E += -0.5 * d * (fp - fm) / curv;
        d *= 0.1;
    }
    return E;
}

struct EdgeScan {
    std::vector<double> edges;
    std::vector<double> tangencies;  // subset of edges where bands touch
    bool broken = false;
    std::vector<DiscriminantSample> samples;
};

template <typename PotFn>
EdgeScan find_edges(const PotFn& V, double L, double E_min, double E_max,
                    std::size_t scan_points, const SpectralOptions& opt) {
    const std::size_t n = scan_points == 0 ? opt.auto_points(E_min, E_max)
                                           : std::max<std::size_t>(scan_points, 3);
    EdgeScan out;
    out.samples = scan_discriminant(V, L, E_min, E_max, n, opt);

    for (const auto& s : out.samples)
        if (std::abs(s.delta.imag()) > opt.broken_im_tol) out.broken = true;

    const double dE = (E_max - E_min) / static_cast<double>(n - 1);
    for (double target : {2.0, -2.0}) {
        std::vector<double> f(n);
        for (std::size_t i = 0; i < n; ++i)
            f[i] = out.samples[i].delta.real() - target;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (f[i] == 0.0) {
                out.edges.push_back(out.samples[i].E);
                continue;
            }
            if ((f[i] < 0.0) != (f[i + 1] < 0.0))
                out.edges.push_back(refine_edge(V, L, out.samples[i].E,
                                                out.samples[i + 1].E, f[i], target, opt));
        }
        // closed-gap heuristic: local minimum of f^2 without sign change
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double q = f[i] * f[i];
            if (q >= opt.tangency_tol) continue;
            if (q > f[i - 1] * f[i - 1] || q > f[i + 1] * f[i + 1]) continue;
            if ((f[i - 1] < 0.0) != (f[i] < 0.0) || (f[i] < 0.0) != (f[i + 1] < 0.0))
                continue;  // a sign change handles it
            const double e = refine_tangency(V, L, out.samples[i].E, dE, target, opt);
            out.edges.push_back(e);
            out.tangencies.push_back(e);
        }
    }

    std::sort(out.edges.begin(), out.edges.end());
    std::vector<double> merged;
    for (double e : out.edges)
        if (merged.empty() || e - merged.back() > opt.merge_tol) merged.push_back(e);
    out.edges = std::move(merged);
    return out;
}

} // namespace detail

/// Band edges of an arbitrary one-period potential callable.
template <typename PotFn>
std::vector<double> band_edges_numeric(const PotFn& V, double L, double E_min,
                                       double E_max, std::size_t scan_points = 0,
                                       const SpectralOptions& opt = {}) {
    return detail::find_edges(V, L, E_min, E_max, scan_points, opt).edges;
}

inline std::vector<double> band_edges_numeric(const GALSpec& spec, double E_min,
                                              double E_max, std::size_t scan_points = 0,
                                              const SpectralOptions& opt = {}) {
    const PotentialOnLine V(spec);
    return band_edges_numeric(V, spec.period(), E_min, E_max, scan_points, opt);
}

template <typename PotFn>
BandStructure classify_bands(const PotFn& V, double L, double E_min, double E_max,
                             std::size_t scan_points = 0, const SpectralOptions& opt = {}) {
    const detail::EdgeScan scan = detail::find_edges(V, L, E_min, E_max, scan_points, opt);
    BandStructure bs;
    bs.edges = scan.edges;
    bs.broken_pt = scan.broken;
    bs.scan = scan.samples;
    if (bs.edges.empty()) return bs;

    auto in_band = [&](double E) {
        return std::abs(discriminant(V, L, E, opt).delta.real()) <= 2.0;
    };
    std::vector<double> nodes;
    if (E_min < bs.edges.front() - opt.merge_tol) nodes.push_back(E_min);
    nodes.insert(nodes.end(), bs.edges.begin(), bs.edges.end());
    if (E_max > nodes.back() + opt.merge_tol) nodes.push_back(E_max);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double lo = nodes[i], hi = nodes[i + 1];
        if (in_band(0.5 * (lo + hi)))
            bs.bands.emplace_back(lo, hi);
        else
            bs.gaps.emplace_back(lo, hi);
    }
    for (double t : scan.tangencies) bs.gaps.emplace_back(t, t);  // closed gaps
    std::sort(bs.gaps.begin(), bs.gaps.end());

    // gaps of positive width, strictly inside the scan, above the lowest edge
    for (const auto& [lo, hi] : bs.gaps)
        if (hi - lo > opt.merge_tol && hi < E_max && lo >= bs.edges.front()) ++bs.gap_count;
    return bs;
}

inline BandStructure classify_bands(const GALSpec& spec, double E_min, double E_max,
                                    std::size_t scan_points = 0,
                                    const SpectralOptions& opt = {}) {
    const PotentialOnLine V(spec);
    return classify_bands(V, spec.period(), E_min, E_max, scan_points, opt);
}

} // namespace galband

#endif // GALBAND_SPECTRAL_HPP
