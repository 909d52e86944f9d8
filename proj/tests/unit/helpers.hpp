#ifndef GALBAND_TEST_HELPERS_HPP
#define GALBAND_TEST_HELPERS_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "galband/core.hpp"
#include "galband/elliptic.hpp"

namespace galband::testing {

inline std::mt19937& rng() {
    static std::mt19937 gen(0x9e3779b9u);  // fixed seed, deterministic suite
    return gen;
}

/// Random complex points inside one period cell, rejected when too close to
/// the pole lattice or to the zero lines Re z = 0, K (mod K) where the
/// quarter-shift identities hit vanishing denominators.
inline std::vector<complex> random_points(double m, std::size_t count,
                                          double margin = 5e-2) {
    const double K = complete_K(m);
    const double Kp = complete_Kprime(m);
    std::uniform_real_distribution<double> ux(-2.0 * K, 2.0 * K);
    std::uniform_real_distribution<double> uy(-2.0 * Kp, 2.0 * Kp);
    std::vector<complex> out;
    out.reserve(count);
    while (out.size() < count) {
        const complex z(ux(rng()), uy(rng()));
        if (pole_distance(z, m) < margin) continue;
        double rx = std::fmod(std::abs(z.real()), K);
        if (std::min(rx, K - rx) < margin * K) continue;
        double ry = std::fmod(std::abs(z.imag()), Kp);
        if (std::min(ry, Kp - ry) < margin * Kp) continue;
        out.push_back(z);
    }
    return out;
}

/// Adaptive Simpson quadrature; independent oracle for the complete
/// elliptic integral's defining theta-integral.
inline double adaptive_simpson(const std::function<double(double)>& fn,
                               double lo, double hi, double tol = 1e-15,
                               int depth = 30) {
    const double mid = 0.5 * (lo + hi);
    const double flo = fn(lo), fmid = fn(mid), fhi = fn(hi);
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double a, double b, double fa, double fm, double fb, double whole,
            int d) -> double {
        const double c = 0.5 * (a + b);
        const double lm = 0.5 * (a + c), rm = 0.5 * (c + b);
        const double flm = fn(lm), frm = fn(rm);
        const double left = (c - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - c) / 6.0 * (fm + 4.0 * frm + fb);
        if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol)
            return left + right + (left + right - whole) / 15.0;
        return rec(a, c, fa, flm, fm, left, d - 1) +
               rec(c, b, fm, frm, fb, right, d - 1);
    };
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    return rec(lo, hi, flo, fmid, fhi, whole, depth);
}

/// Plain textbook AGM loop (kept separate from the library's chain class).
inline double agm(double x, double y) {
    for (int i = 0; i < 64 && std::abs(x - y) > 1e-17 * x; ++i) {
        const double a = 0.5 * (x + y);
        y = std::sqrt(x * y);
        x = a;
    }
    return 0.5 * (x + y);
}

template <typename F>
complex central_diff(F&& fn, complex z, double h = 1e-5) {
    return (fn(z + complex(h, 0)) - fn(z - complex(h, 0))) / (2.0 * h);
}

} // namespace galband::testing

#endif
