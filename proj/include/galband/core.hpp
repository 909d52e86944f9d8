#ifndef GALBAND_CORE_HPP
#define GALBAND_CORE_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace galband {

using complex = std::complex<double>;

inline constexpr double default_pole_eps = 1e-8;   // lattice-distance units
inline constexpr double default_identity_tol = 1e-12;

/// Thrown when an argument lands too close to a lattice pole of the Jacobi
/// functions. Carries the offending point and the nearest pole.
class pole_error : public std::runtime_error {
public:
    pole_error(complex z, complex nearest, const std::string& what_arg)
        : std::runtime_error(what_arg), point_(z), nearest_pole_(nearest) {}
    complex point() const noexcept { return point_; }
    complex nearest_pole() const noexcept { return nearest_pole_; }
private:
    complex point_;
    complex nearest_pole_;
};

/// Requested closed-form family does not cover the given parameters.
class unsupported_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Collocation (or fit) matrix too ill-conditioned to trust.
class ill_conditioned_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive integrator failed to advance.
class integration_error : public std::runtime_error {
public:
    integration_error(double x, const std::string& what_arg)
        : std::runtime_error(what_arg), location_(x) {}
    double location() const noexcept { return location_; }
private:
    double location_;
};

/// Elliptic parameter m (the square of the modulus k).  Spectral
/// computations require 0 < m < 1; the limits m = 0, 1 are admitted only
/// for trigonometric/hyperbolic identity checks.
struct ModulusM {
    double m;

    ModulusM(double value) : m(value) {  // NOLINT: implicit on purpose
        if (!(m >= 0.0) || !(m <= 1.0))
            throw std::domain_error("ModulusM: m must lie in [0, 1], got " +
                                    std::to_string(value));
    }
    operator double() const noexcept { return m; }
    double complement() const noexcept { return 1.0 - m; }
    bool spectral() const noexcept { return m > 0.0 && m < 1.0; }
};

inline bool near(double x, double y, double tol = 1e-12) {
    return std::abs(x - y) <= tol;
}

inline bool near(complex x, complex y, double tol = 1e-12) {
    return std::abs(x - y) <= tol;
}

} // namespace galband

#endif // GALBAND_CORE_HPP
