#pragma once

#include "shintani/numeric.hpp"

#include <vector>

namespace shintani::specfun {

// Upper incomplete gamma Gamma(s, y) for integer s >= 1 and any real y
// (closed form (s-1)! e^{-y} sum_{j<s} y^j/j!).
SpecialValue<Real> gamma_upper(int s, const Real& y, const Precision& p = {});

// Gamma(a, x) for real a and x > 0: continued fraction for x >= 1, downward
// recurrence from Gamma(a+n, x) otherwise. Accepts a <= 0.
SpecialValue<Real> gamma_upper_real(const Real& a, const Real& x, const Precision& p = {});

// Exponential integral Ei(y), y != 0 (principal value for y > 0).
SpecialValue<Real> exp_integral_ei(const Real& y, const Precision& p = {});

// E1(x) = -Ei(-x) for x > 0.
SpecialValue<Real> exp_integral_e1(const Real& x, const Precision& p = {});

// The incomplete-gamma type function entering non-holomorphic Fourier terms:
//   kappa <= 0: Gamma(1 - kappa, -y)
//   kappa >  0: (-1)^{kappa+1}/(kappa-1)! * (e^y sum_{j<=kappa-2} j!/y^{j+1} - Ei(y))
SpecialValue<Real> e_kappa(int kappa, const Real& y, const Precision& p = {});

Real erfc(const Real& x);

enum class BetaVariant { tail, complementary };
// tail:          beta_{3/2+k}(v) = v^{1/2+k} Gamma(-1/2-k, v), with value 1/(1/2+k) at v = 0
// complementary: sum_m (-v)^m / (m! (m-k-1/2))
SpecialValue<Real> beta_fn(int k, const Real& v, BetaVariant which, const Precision& p = {});

// (sqrt(pi)/2) w^{-1/2} e^w erfc(sqrt w) - sqrt(pi) int_0^{sqrt w} e^{t^2} erfc(t) dt
//   + (1/2) log w + log 2 + gamma/2, for w > 0.
SpecialValue<Real> cal_F(const Real& w, const Precision& p = {});

// Hurwitz zeta zeta(s, rho), rho in (0, 1]. Euler-Maclaurin for s != 1; integers
// s <= 0 go through Bernoulli polynomials.
SpecialValue<Real> hurwitz_zeta(const Real& s, const Real& rho, const Precision& p = {});
// Exact: zeta(-m, rho) = -B_{m+1}(rho)/(m+1).
Rational hurwitz_zeta_nonpositive(int s, const Rational& rho);

// k-th derivative of the digamma function at complex x (not a non-positive integer).
SpecialValue<Complex> polygamma(int k, const Complex& x, const Precision& p = {});

const Rational& bernoulli_number(int n);
Rational bernoulli_poly(int n, const Rational& x);
Complex bernoulli_poly(int n, const Complex& x);
Real bernoulli_poly(int n, const Real& x);

// Physicists' Hermite polynomial H_n(x).
Real hermite_poly(int n, const Real& x);

int kronecker_symbol(long long d, long long n);
bool is_fundamental_discriminant(long long d);

// L(s, (Delta/.)) for s in {0, 1} (and other integers s <= 0 exactly).
SpecialValue<Real> dirichlet_L(long long delta, int s, const Precision& p = {});
Rational dirichlet_L_nonpositive(long long delta, int s);

Rational binomial(int n, int k);
BigInt factorial(int n);

}  // namespace shintani::specfun
