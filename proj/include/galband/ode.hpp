#ifndef GALBAND_ODE_HPP
#define GALBAND_ODE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "galband/core.hpp"

namespace galband {

/// 2x2 complex fundamental matrix of the Hill system psi'' = (V - E) psi.
/// Columns are the canonical solutions with (psi, psi') = (1,0) and (0,1).
struct Monodromy {
    complex u1{1.0}, v1{0.0};  // first column:  psi, psi'
    complex u2{0.0}, v2{1.0};  // second column
    complex trace() const { return u1 + v2; }
};

namespace detail {

struct MonoState {
    std::array<complex, 4> y;  // u1, v1, u2, v2
};

// One Dormand-Prince 5(4) stage evaluation: y' = f(x, y) with
// u' = v, v' = (V(x) - E) u for both columns; V is evaluated once per stage.
template <typename Pot>
inline MonoState mono_rhs(const Pot& V, double x, complex E, const MonoState& s) {
    const complex w = V(x) - E;
    return {{s.y[1], w * s.y[0], s.y[3], w * s.y[2]}};
}

inline MonoState axpy(const MonoState& base, double h,
                      std::initializer_list<std::pair<double, const MonoState*>> terms) {
    MonoState r = base;
    for (const auto& [c, k] : terms)
        for (std::size_t i = 0; i < 4; ++i) r.y[i] += h * c * k->y[i];
    return r;
}

} // namespace detail

/// Adaptive Dormand-Prince 5(4) propagation of the fundamental matrix from
/// x0 to x0 + L.  Error is controlled per component against
/// atol + rtol * |y|; a step failure raises integration_error with the
/// location.
template <typename Pot>
Monodromy integrate_monodromy(const Pot& V, complex E, double L,
                              double rtol = 1e-10, double atol = 1e-12,
                              double x0 = 0.0) {
    using detail::MonoState;
    using detail::axpy;
    using detail::mono_rhs;

    MonoState y{{complex(1.0), complex(0.0), complex(0.0), complex(1.0)}};
    double x = x0;
    const double x_end = x0 + L;
    double h = L / 64.0;
    const double h_min = L * 1e-14;
    MonoState k1 = mono_rhs(V, x, E, y);
    bool have_k1 = true;

    constexpr int max_steps = 2'000'000;
    for (int step = 0; step < max_steps; ++step) {
        if (x >= x_end) break;
        h = std::min(h, x_end - x);
        if (h < h_min)
            throw integration_error(x, "integrate_monodromy: step size underflow near x = " +
                                           std::to_string(x));
        if (!have_k1) { k1 = mono_rhs(V, x, E, y); have_k1 = true; }

        const MonoState s2 = axpy(y, h, {{1.0 / 5, &k1}});
        const MonoState k2 = mono_rhs(V, x + h / 5, E, s2);
        const MonoState s3 = axpy(y, h, {{3.0 / 40, &k1}, {9.0 / 40, &k2}});
        const MonoState k3 = mono_rhs(V, x + 3 * h / 10, E, s3);
        const MonoState s4 = axpy(y, h, {{44.0 / 45, &k1}, {-56.0 / 15, &k2}, {32.0 / 9, &k3}});
        const MonoState k4 = mono_rhs(V, x + 4 * h / 5, E, s4);
        const MonoState s5 = axpy(y, h,
                                  {{19372.0 / 6561, &k1},
                                   {-25360.0 / 2187, &k2},
                                   {64448.0 / 6561, &k3},
                                   {-212.0 / 729, &k4}});
        const MonoState k5 = mono_rhs(V, x + 8 * h / 9, E, s5);
        const MonoState s6 = axpy(y, h,
                                  {{9017.0 / 3168, &k1},
                                   {-355.0 / 33, &k2},
                                   {46732.0 / 5247, &k3},
                                   {49.0 / 176, &k4},
                                   {-5103.0 / 18656, &k5}});
        const MonoState k6 = mono_rhs(V, x + h, E, s6);
        const MonoState y5 = axpy(y, h,
                                  {{35.0 / 384, &k1},
                                   {500.0 / 1113, &k3},
                                   {125.0 / 192, &k4},
                                   {-2187.0 / 6784, &k5},
                                   {11.0 / 84, &k6}});
        const MonoState k7 = mono_rhs(V, x + h, E, y5);
        const MonoState y4 = axpy(y, h,
                                  {{5179.0 / 57600, &k1},
                                   {7571.0 / 16695, &k3},
                                   {393.0 / 640, &k4},
                                   {-92097.0 / 339200, &k5},
                                   {187.0 / 2100, &k6},
                                   {1.0 / 40, &k7}});

        double err = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            const double scale =
                atol + rtol * std::max(std::abs(y.y[i]), std::abs(y5.y[i]));
            const double e = std::abs(y5.y[i] - y4.y[i]) / scale;
            err = std::max(err, e);
        }

        if (err <= 1.0) {
            x += h;
            y = y5;
            k1 = k7;  // first-same-as-last
        } else {
            have_k1 = true;  // k1 still valid at unchanged x
        }
        const double factor =
            std::clamp(0.9 * std::pow(err > 0 ? err : 1e-16, -0.2), 0.2, 5.0);
        h *= factor;
    }
    if (x < x_end)
        throw integration_error(x, "integrate_monodromy: step budget exhausted");
    return {y.y[0], y.y[1], y.y[2], y.y[3]};
}

} // namespace galband

#endif // GALBAND_ODE_HPP
