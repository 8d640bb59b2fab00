#pragma once

#include "shintani/hyperbolic.hpp"
#include "shintani/numeric.hpp"

#include <functional>
#include <map>
#include <vector>

namespace shintani::forms {

// Exact Laurent q-series sum_{n >= n_min} c_n q^n truncated after q^order.
struct QExpansion {
    int weight = 0;
    int n_min = 0;
    int order = 0;
    std::vector<Rational> coeffs;  // coeffs[n - n_min]

    Rational coeff(int n) const {
        if (n < n_min || n > order) return Rational(0);
        return coeffs[n - n_min];
    }
    static QExpansion zero(int weight, int n_min, int order);
};

QExpansion multiply(const QExpansion& f, const QExpansion& g);
QExpansion inverse(const QExpansion& f);  // leading coefficient must be nonzero
QExpansion add(const QExpansion& f, const QExpansion& g);
QExpansion scale(const QExpansion& f, const Rational& s);

struct StandardForms {
    QExpansion E4, E6, DeltaCusp, j, J;
};
StandardForms build_standard_forms(int order = 64);

// sum c_n q^n with a geometric tail estimate from the last terms; throws when the
// estimate exceeds tail_tolerance (reduce to the fundamental domain first).
SpecialValue<Complex> eval_qexp(const QExpansion& f, const Complex& z, const Precision& p = {});

// Gamma-invariant evaluation of J = j - 744 (and j) after fundamental-domain reduction.
SpecialValue<Complex> eval_J(const Complex& z, int order = 128, const Precision& p = {});

// Completed weight-2 Eisenstein series 1 - 24 sum sigma_1(n) q^n - 3/(pi y), evaluated directly.
template <class T>
std::complex<T> e2_star_series(const std::complex<T>& z);
// Same, routed through the fundamental domain and the weight-2 cocycle.
template <class T>
std::complex<T> e2_star(const std::complex<T>& z);

// Harmonic Maass form Fourier data of weight kappa:
//   G+ = sum a_plus(n) q^n,  G- = a_minus(0) y^{1-kappa} (log y if kappa = 1) + sum a_minus(n) E_kappa(4 pi n y) q^n
struct HarmonicFourierData {
    int kappa = 0;
    std::map<int, Complex> a_plus;   // finitely many n < 0
    std::map<int, Complex> a_minus;  // finitely many n > 0
    int order = 0;
    // optional Gamma-equivariant evaluator (reduction + cocycle); falls back to the raw series
    std::function<Complex(const Complex&)> evaluator;

    Complex plus(int n) const;
    Complex minus(int n) const;
};

Complex eval_harmonic(const HarmonicFourierData& G, const Complex& z, const Precision& p = {});
// Uses G.evaluator when present.
Complex evaluate(const HarmonicFourierData& G, const Complex& z, const Precision& p = {});

HarmonicFourierData e2_star_data(int order = 60);

// Numeric (complex-coefficient) q-series, e.g. xi-images.
struct NumericSeries {
    int weight = 0;
    std::map<int, Complex> coeffs;
    Complex eval(const Complex& z) const;
};

// xi_kappa G = (1-kappa) conj(a_minus(0)) - sum_{n != 0} (4 pi n)^{1-kappa} conj(a_minus(-n)) q^n
// (for kappa = 1 the log y term gives conj(a_minus(0))).
NumericSeries xi_symbolic(const HarmonicFourierData& G);

struct E32Star {
    std::map<int, Rational> holomorphic;  // H(D), D <= D_max
    // (1/(16 pi)) sum_{|n| <= n_max} v^{-1/2} beta_{3/2}(4 pi n^2 v) e^{-2 pi i n^2 tau}
    std::function<Complex(const Complex& tau, int n_max)> nonholomorphic;
};
E32Star e32_star_coeffs(int D_max);

}  // namespace shintani::forms
