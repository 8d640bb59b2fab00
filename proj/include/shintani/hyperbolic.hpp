#pragma once

#include "shintani/qforms.hpp"

#include <cmath>
#include <complex>

namespace shintani::hyperbolic {

using Moebius = Mat2;

template <class T>
struct FormPolynomials {
    T p;                   // -(a|z|^2 + b x + c)/y, vanishing on the geodesic
    std::complex<T> qz;    // Q(z, 1)
    T r;                   // |Q(z,1)|^2 / y^2 = p^2 + disc
};

template <class T>
FormPolynomials<T> form_polynomials(const QForm& Q, const std::complex<T>& z) {
    const T x = z.real(), y = z.imag();
    const T a(Q.a), b(Q.b), c(Q.c);
    FormPolynomials<T> out;
    out.p = -(a * (x * x + y * y) + b * x + c) / y;
    out.qz = (z * a + b) * z + c;
    out.r = (out.qz.real() * out.qz.real() + out.qz.imag() * out.qz.imag()) / (y * y);
    return out;
}

template <class T>
std::complex<T> eval_form(const QForm& Q, const std::complex<T>& z) {
    return (z * T(Q.a) + T(Q.b)) * z + T(Q.c);
}

template <class T>
std::complex<T> apply_moebius(const Moebius& g, const std::complex<T>& z) {
    return (z * T(g(0, 0)) + T(g(0, 1))) / (z * T(g(1, 0)) + T(g(1, 1)));
}

// j(g, z) = c z + d
template <class T>
std::complex<T> automorphy(const Moebius& g, const std::complex<T>& z) {
    return z * T(g(1, 0)) + T(g(1, 1));
}

inline QForm act_on_form(const Moebius& g, const QForm& Q) { return act(g, Q); }

struct CMPoint {
    Complex z;
    QForm source;
};
CMPoint cm_point(const QForm& Q);

// A boundary point of the upper half-plane: a real number or i*infinity.
struct BoundaryPoint {
    Real x;
    bool infinite = false;
};

struct Geodesic {
    QForm source;
    bool vertical = false;
    BoundaryPoint start, end;  // oriented from start to end
};

// Semicircles run from (-b - sqrt disc)/2a to (-b + sqrt disc)/2a. A vertical line
// (a = 0) is the limit of that rule: it runs down from i*infinity to -c/b when b > 0
// and up from -c/b when b < 0, which keeps the orientation SL2(Z)-equivariant.
Geodesic geodesic_of(const QForm& Q);

BoundaryPoint apply_moebius(const Moebius& g, const BoundaryPoint& w);

template <class T>
struct FundamentalReduction {
    std::complex<T> z;
    Moebius gamma;  // gamma z_in = z
};

// Reduces into {|x| <= 1/2, |z| >= 1} with ties sent to x = -1/2 and, on |z| = 1, to Re z <= 0.
template <class T>
FundamentalReduction<T> reduce_to_fundamental(std::complex<T> z) {
    using std::floor;
    if (!(z.imag() > 0)) throw DomainError("reduce_to_fundamental: Im(z) must be positive");
    Moebius g = Moebius::Identity();
    const Moebius S = mat2(0, -1, 1, 0);
    for (int it = 0; it < 100000; ++it) {
        T shift = floor(z.real() + T(0.5));
        long long n = static_cast<long long>(shift);
        if (n != 0) {
            z = std::complex<T>(z.real() - shift, z.imag());
            g = mat2(1, -n, 0, 1) * g;
        }
        T n2 = z.real() * z.real() + z.imag() * z.imag();
        if (n2 < T(1) || (n2 == T(1) && z.real() > 0)) {
            z = std::complex<T>(-z.real(), z.imag()) / n2;  // -1/z
            g = S * g;
            continue;
        }
        return {z, g};
    }
    throw std::runtime_error("reduce_to_fundamental: iteration limit");
}

}  // namespace shintani::hyperbolic
