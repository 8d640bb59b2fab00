#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace shintani {

namespace mp = boost::multiprecision;

// 50 decimal digits of storage; working accuracy is governed by Precision.
using Real = mp::number<mp::mpfr_float_backend<50>, mp::et_off>;
using Complex = std::complex<Real>;
using BigInt = mp::cpp_int;
using Rational = mp::cpp_rational;

struct Precision {
    int working_digits = 30;
    double tail_tolerance = 1e-30;  // truncation target for q-series and Fourier tails
    // Crossover from the power series of Ei to its asymptotic expansion (y > 0),
    // and from the series to the E1 continued fraction (y < 0).
    double ei_series_max_pos = 0.0;  // 0 means derive from working_digits
    double ei_series_max_neg = 4.0;
    int genus_search_radius = 50;

    Real eps() const;  // 10^{-working_digits}
    double ei_pos_crossover() const;
    void validate() const {
        if (working_digits < 15 || working_digits > 45)
            throw std::invalid_argument("working_digits must lie in [15, 45]");
        if (!(tail_tolerance > 0)) throw std::invalid_argument("tail_tolerance must be positive");
    }
};

template <class T>
struct SpecialValue {
    T value;
    Real error_bound;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

Real pi();
Real euler_gamma();
Real to_real(const BigInt& n);
Real to_real(const Rational& q);
inline Complex to_complex(const Rational& q) { return Complex(to_real(q), Real(0)); }
inline double to_double(const Real& x) { return x.convert_to<double>(); }
inline std::complex<double> to_cdouble(const Complex& z) {
    return {to_double(z.real()), to_double(z.imag())};
}
inline Complex to_complex(std::complex<double> z) { return Complex(Real(z.real()), Real(z.imag())); }

// Exact integer powers; std::pow on complex<UDT> promotes through double on some library versions.
template <class T>
T ipow(T base, long long e) {
    if (e < 0) return T(1) / ipow(base, -e);
    T r(1);
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline Real abs(const Complex& z) {
    return boost::multiprecision::sqrt(z.real() * z.real() + z.imag() * z.imag());
}

std::string to_string(const Real& x, int digits = 17);
std::string to_string(const Rational& q);

}  // namespace shintani
