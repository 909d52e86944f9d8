#ifndef GALBAND_JET_HPP
#define GALBAND_JET_HPP

#include <cmath>
#include <complex>

namespace galband {

/// Second-order Taylor jet: carries a value together with the first and
/// second derivative along one curve parameter.  Products of Jacobi
/// functions, their powers and the assembled eigenfunctions all need exact
/// first/second derivatives; propagating jets avoids hand-derived chain
/// rules for every ansatz.
template <typename T>
struct Jet2 {
    T f{};   // value
    T d1{};  // first derivative
    T d2{};  // second derivative

    Jet2() = default;
    Jet2(T value) : f(value) {}
    Jet2(T value, T first, T second) : f(value), d1(first), d2(second) {}

    static Jet2 constant(T value) { return {value, T(0), T(0)}; }

    Jet2 operator-() const { return {-f, -d1, -d2}; }

    Jet2& operator+=(const Jet2& o) { f += o.f; d1 += o.d1; d2 += o.d2; return *this; }
    Jet2& operator-=(const Jet2& o) { f -= o.f; d1 -= o.d1; d2 -= o.d2; return *this; }
};

template <typename T>
Jet2<T> operator+(Jet2<T> a, const Jet2<T>& b) { return a += b; }

template <typename T>
Jet2<T> operator-(Jet2<T> a, const Jet2<T>& b) { return a -= b; }

template <typename T>
Jet2<T> operator*(const Jet2<T>& a, const Jet2<T>& b) {
    return {a.f * b.f,
            a.d1 * b.f + a.f * b.d1,
            a.d2 * b.f + T(2) * a.d1 * b.d1 + a.f * b.d2};
}

template <typename T>
Jet2<T> operator*(const T& s, Jet2<T> a) { a.f *= s; a.d1 *= s; a.d2 *= s; return a; }

template <typename T>
Jet2<T> operator*(Jet2<T> a, const T& s) { return s * a; }

template <typename T>
Jet2<T> operator/(const Jet2<T>& a, const Jet2<T>& b) {
    const T w = a.f / b.f;
    const T w1 = (a.d1 - w * b.d1) / b.f;
    const T w2 = (a.d2 - T(2) * w1 * b.d1 - w * b.d2) / b.f;
    return {w, w1, w2};
}

template <typename T>
Jet2<T> inv(const Jet2<T>& b) { return Jet2<T>::constant(T(1)) / b; }

/// b^alpha for a real exponent; uses the principal branch of the complex
/// power.  Branch jumps between neighbouring grid points are harmless for
/// pointwise residuals (value and derivatives stay mutually consistent).
template <typename T>
Jet2<T> pow(const Jet2<T>& b, double alpha) {
    using std::pow;
    if (alpha == 0.0) return Jet2<T>::constant(T(1));
    if (alpha == 1.0) return b;
    const T p = pow(b.f, alpha);
    const T pm1 = pow(b.f, alpha - 1.0);
    const T pm2 = pow(b.f, alpha - 2.0);
    return {p,
            alpha * pm1 * b.d1,
            alpha * (alpha - 1.0) * pm2 * b.d1 * b.d1 + alpha * pm1 * b.d2};
}

/// Integer power by repeated squaring of jets; exact for negative n too.
template <typename T>
Jet2<T> powi(Jet2<T> b, long n) {
    if (n < 0) return powi(inv(b), -n);
    Jet2<T> r = Jet2<T>::constant(T(1));
    while (n > 0) {
        if (n & 1) r = r * b;
        b = b * b;
        n >>= 1;
    }
    return r;
}

} // namespace galband

#endif // GALBAND_JET_HPP
