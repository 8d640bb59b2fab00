#pragma once

#include "shintani/fd.hpp"
#include "shintani/qforms.hpp"

#include <map>
#include <string>

namespace shintani::theta {

using shintani::fd_operators;

struct ThetaContext {
    long long delta = -3;
    int k = 0;
    Complex tau = Complex(Real(0), Real(1));
    int truncation_radius = 25;
    int threads = 1;

    // fundamental delta, (-1)^{k+1} delta > 0, Im(tau) > 0, radius >= 1
    void validate() const;
};

// 2 v^{1/2} Q(zbar,1)^{k+1} / (|delta|^{(k+1)/2} y^{2k+2}) exp(-4 pi v (|Q(z,1)|^2/(|delta| y^2) - D)),
// D = disc(Q)/|delta|
Complex phi_sh0(const ThetaContext& ctx, const QForm& Q, const Complex& z);

// lattice normalization v^{1/2} y^{-2k-2} (Q(zbar,1)/sqrt|delta|)^{k+1} exp(-pi v p_z^2/|delta|).
// Related by phi_sh0(v) = phi_sh0_lattice(4v).
Complex phi_sh0_lattice(const ThetaContext& ctx, const QForm& Q, const Complex& z);

enum class EtaPath { automatic, recursion, quadrature };

// -(1 / 2 Q(z,1)^{k+1}) int_{|p_z|/sqrt|delta|}^inf (t^2 + D)^k erfc(sqrt(pi v) t) dt
SpecialValue<Complex> eta(const ThetaContext& ctx, const QForm& Q, const Complex& z, EtaPath path = EtaPath::automatic);

// |delta|^{(k+1)/2} eta: the preimage of phi_sh0_lattice under Delta_{2k+2}
Complex eta_lattice(const ThetaContext& ctx, const QForm& Q, const Complex& z);

// Q(z,1)^k / (2 |delta|^{k+1/2}) sgn(p_z) erfc(sqrt(pi v) |p_z| / sqrt|delta|); p_z = 0 is rejected
Complex xi_eta_closed(const ThetaContext& ctx, const QForm& Q, const Complex& z);

struct ThetaSum {
    Complex value;
    std::map<long long, Complex> by_D;  // value = sum_D by_D[D] e^{-2 pi i D u}
    Real tail_bound;
    int radius = 0;
    long terms = 0;
    bool tail_ok = true;
    std::string recommendation;
};

// Truncated theta sum over |a|, |b|, |c| <= radius.
ThetaSum theta_truncated(const ThetaContext& ctx, const Complex& z, double tolerance = 1e-10);

// Coefficient of e^{-2 pi i D u} recovered by integrating theta over u in [0, 1].
Complex theta_coefficient_by_integration(const ThetaContext& ctx, const Complex& z, long long D, int nodes = 64);

struct LiftOptions {
    double v = 1.0;
    double T = 8.0;
    int grid = 96;    // x nodes; y uses twice as many
    int radius = 40;  // bound on |a|, |c| of the contributing forms
    int threads = 1;
};

struct LiftResult {
    double value = 0;  // real part; the imaginary part is reported separately
    double imag = 0;
    double error_estimate = 0;  // |grid - grid/2| plus the outermost-shell contribution
    int forms = 0;
    double T = 0;
};

// D-th Fourier coefficient of the regularized lift of E2* (k = 0) by 2D quadrature over the
// truncated fundamental domain. Square |delta| D is rejected (needs boundary counterterms).
LiftResult lift_coefficient_quadrature(long long delta, long long D, const LiftOptions& opt = {});

// (-1)^{k+1} |delta|^{-k/2} a_plus_0 L_delta(-k) / |delta|^{(k+1)/2}
Complex lift_constant_term(long long delta, int k, const Complex& a_plus_0);

}  // namespace shintani::theta
