#pragma once

#include "shintani/forms.hpp"
#include "shintani/qforms.hpp"

#include <functional>

namespace shintani::cycles {

enum class Method { closed_quadrature, regularized_definition, regularized_alternative };

struct CycleIntegralResult {
    Complex value;
    Method method = Method::closed_quadrature;
    Real quadrature_error;
    Real T_used;
    int nodes = 0;
    bool converged = true;
};

using Evaluator = std::function<Complex(const Complex&)>;

struct ClosedOptions {
    int nodes = 128;
    int max_nodes = 2048;
    double tol = 1e-12;
    Real start_offset = 0;  // shifts the base point along the geodesic (in the log-height parameter)
};

// Integral of G(z) Q(z,1)^k dz over one period of the closed geodesic of Q
// (disc > 0, non-square), by Gauss-Legendre with node doubling.
CycleIntegralResult closed_cycle_integral(const Evaluator& G, const QForm& Q, int k, const ClosedOptions& opt = {});

struct RegOptions {
    Real c_plus = 1;
    double tol = 1e-22;  // absolute tolerance of each quadrature
    Precision precision;
};

// One cusp contribution: int_c^T G(r+iy) y^k dy minus the divergent growth, per the
// regularization counterterms (k = 0 uses -log T for the constant non-holomorphic term).
Complex regularized_ray(const forms::HarmonicFourierData& G, const Real& r, const Real& c, const Real& T, int k,
                        const RegOptions& opt, Real* err = nullptr);
// The same quantity through the representation with horizontal line integrals against
// Bernoulli polynomials and polygamma functions at height T.
Complex regularized_ray_alt(const forms::HarmonicFourierData& G, const Real& r, const Real& c, const Real& T, int k,
                            const RegOptions& opt, Real* err = nullptr);

// Regularized integral along the infinite geodesic of a square-discriminant form.
// Q is taken to its representative (0, f, c) first (valid for Gamma-invariant G).
CycleIntegralResult reg_cycle_integral(const forms::HarmonicFourierData& G, const QForm& Q, int k, const Real& T,
                                       const RegOptions& opt = {});
CycleIntegralResult reg_cycle_integral_alt(const forms::HarmonicFourierData& G, const QForm& Q, int k, const Real& T,
                                           const RegOptions& opt = {});

struct LemmaReport {
    int index = 0;  // j for the Bernoulli lemma, k for the polygamma lemma
    int n = 0;
    Real y;
    Complex bernoulli_quadrature, bernoulli_closed;        // int_0^1 B_j(x) e^{2 pi i n x} dx
    Complex bernoulli_line_quadrature, bernoulli_line_closed;  // int_{iy}^{iy+1} B_j(z) e^{2 pi i n z} dz
    Complex psi_quadrature, psi_closed;
    Real bernoulli_abs_error, bernoulli_line_abs_error, psi_abs_error;
};
LemmaReport lemma_integral_checks(int index, int n, const Real& y, const Precision& p = {});

struct TraceOptions {
    int threads = 1;
    Real T = 2;
    ClosedOptions closed;
    RegOptions reg;
};

struct TraceResult {
    Complex value;
    int class_count = 0;
    Real error;
};

// sum over Q in the classes of discriminant |delta| D of chi_delta(Q) times the cycle integral
TraceResult trace_cycle(const forms::HarmonicFourierData& G, long long delta, long long D, int k,
                        const TraceOptions& opt = {});

// L*_delta(G, k+1) = sqrt|delta| tr_delta(G, -delta) (all classes regularized)
TraceResult l_star_value(const forms::HarmonicFourierData& G, long long delta, int k, const TraceOptions& opt = {});

// (2 sqrt|delta| / pi) sum_n (delta/n) (sigma_1(n)/n) e^{-2 pi n / |delta|}; equals
// L*(E2*, 1) / (12 sqrt|delta|) = H(|delta|)^2
Real l_value_exponential_sum(long long delta, const Precision& p = {});

// sum over reps (0, f, c), f = |delta| d, of chi_delta times sum_{n<0} a(n) (4 pi n)^k e^{2 pi i r n}, r = -c/f
Complex complementary_trace(const forms::QExpansion& F, long long delta, const Rational& d, int k);

struct CombinatorialCheck {
    Rational lhs, rhs;
    bool holds() const { return lhs == rhs; }
};
CombinatorialCheck combinatorial_identity(int d, int k);

}  // namespace shintani::cycles
