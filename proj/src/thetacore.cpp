#include "shintani/thetacore.hpp"

#include "shintani/forms.hpp"
#include "shintani/hyperbolic.hpp"
#include "shintani/quadrature.hpp"
#include "shintani/specfun.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <thread>
#include <vector>

namespace shintani::theta {

namespace {

Real abs_delta(const ThetaContext& ctx) { return Real(ctx.delta < 0 ? -ctx.delta : ctx.delta); }

// split the work over `threads` workers, each handling indices i = t, t + threads, ...
template <class F>
void parallel_for(int count, int threads, F&& body) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            try {
                for (int i = t; i < count; i += threads) body(i);
            } catch (...) {
                failures[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
}

void check_point(const Complex& z) {
    if (!(z.imag() > 0)) throw DomainError("point must lie in the upper half-plane");
}

void check_off_locus(const QForm& Q, const Complex& z) {
    const Real y = z.imag();
    if (abs(hyperbolic::eval_form(Q, z)) / (y * y) < Real("1e-8"))
        throw DomainError("eta: z lies on the zero locus of Q(z,1)");
}

}  // namespace

void ThetaContext::validate() const {
    if (!specfun::is_fundamental_discriminant(delta)) throw DomainError("theta: delta must be a fundamental discriminant");
    if (k < 0) throw DomainError("theta: k must be >= 0");
    if ((k % 2 == 0 ? -delta : delta) <= 0) throw DomainError("theta: requires (-1)^{k+1} delta > 0");
    if (!(tau.imag() > 0)) throw DomainError("theta: Im(tau) must be positive");
    if (truncation_radius < 1) throw DomainError("theta: truncation radius must be >= 1");
}

Complex phi_sh0(const ThetaContext& ctx, const QForm& Q, const Complex& z) {
    check_point(z);
    const Real v = ctx.tau.imag(), y = z.imag(), ad = abs_delta(ctx);
    const Complex qzb = hyperbolic::eval_form(Q, std::conj(z));
    const Real qz_abs2 = std::norm(hyperbolic::eval_form(Q, z));
    const Real D = Real(Q.disc()) / ad;
    const Real pref = 2 * sqrt(v) / (pow(ad, Real(ctx.k + 1) / 2) * pow(y, 2 * ctx.k + 2));
    return pref * ipow(qzb, ctx.k + 1) * exp(-4 * pi() * v * (qz_abs2 / (ad * y * y) - D));
}

Complex phi_sh0_lattice(const ThetaContext& ctx, const QForm& Q, const Complex& z) {
    check_point(z);
    const Real v = ctx.tau.imag(), y = z.imag(), ad = abs_delta(ctx);
    const auto fp = hyperbolic::form_polynomials(Q, z);
    const Complex qzb = hyperbolic::eval_form(Q, std::conj(z));
    return sqrt(v) * pow(y, -2 * ctx.k - 2) * ipow(qzb / sqrt(ad), ctx.k + 1) * exp(-pi() * v * fp.p * fp.p / ad);
}

SpecialValue<Complex> eta(const ThetaContext& ctx, const QForm& Q, const Complex& z, EtaPath path) {
    check_point(z);
    check_off_locus(Q, z);
    const int k = ctx.k;
    const Real v = ctx.tau.imag(), ad = abs_delta(ctx);
    const auto fp = hyperbolic::form_polynomials(Q, z);
    const Real P = abs(fp.p) / sqrt(ad);
    const Real Dq = Real(Q.disc()) / ad;
    const Real alpha = sqrt(pi() * v);
    if (path == EtaPath::automatic) path = k <= 6 ? EtaPath::recursion : EtaPath::quadrature;

    Real integral, err(0);
    if (path == EtaPath::recursion) {
        // int_P^inf t^{2j} erfc(alpha t) dt by parts, with the Gaussian moments
        // G_m = int_P^inf t^m e^{-alpha^2 t^2} dt built up from G_1
        const Real a2 = alpha * alpha;
        const Real gauss = exp(-a2 * P * P);
        const Real erfc_p = specfun::erfc(alpha * P);
        Real G = gauss / (2 * a2);  // G_1
        for (int j = 0; j <= k; ++j) {
            const int n = 2 * j, m = n + 1;
            if (j > 0) G = pow(P, m - 1) * gauss / (2 * a2) + Real(m - 1) / (2 * a2) * G;
            Real moment = -pow(P, n + 1) * erfc_p / Real(n + 1) + 2 * alpha / (sqrt(pi()) * Real(n + 1)) * G;
            integral += to_real(specfun::binomial(k, j)) * pow(Dq, k - j) * moment;
        }
        err = abs(integral) * Real("1e-45");
    } else {
        const Real a2 = alpha * alpha;
        const Real upper = sqrt(P * P + Real(120) / a2);
        auto f = [&](const Real& t) {
            Real base = t * t + Dq;
            return pow(base, k) * specfun::erfc(alpha * t);
        };
        quad::Options o;
        o.abs_tol = 1e-34;
        o.initial_panels = 4;
        auto res = quad::adaptive(f, P, upper, o);
        integral = res.value;
        // beyond `upper`: erfc(alpha t) <= e^{-alpha^2 t^2}
        err = Real(res.error_estimate) + pow(upper * upper + abs(Dq), k) * exp(-a2 * upper * upper) / (a2 * upper);
    }
    const Complex qz = fp.qz;
    Complex value = -Complex(integral) / (Real(2) * ipow(qz, k + 1));
    return {value, err / (2 * pow(abs(qz), k + 1))};
}


Complex eta_lattice(const ThetaContext& ctx, const QForm& Q, const Complex& z) {
    return pow(abs_delta(ctx), Real(ctx.k + 1) / 2) * eta(ctx, Q, z).value;
}

Complex xi_eta_closed(const ThetaContext& ctx, const QForm& Q, const Complex& z) {
    check_point(z);
    check_off_locus(Q, z);
    const Real v = ctx.tau.imag(), ad = abs_delta(ctx);
    const auto fp = hyperbolic::form_polynomials(Q, z);
    // the jump across the geodesic is not a value; anything within rounding of p_z = 0 counts as on it
    if (abs(fp.p) < Real("1e-30")) throw DomainError("xi_eta_closed: z lies on the geodesic (p_z = 0)");
    const Real sgn = fp.p > 0 ? Real(1) : Real(-1);
    const Real scale = 2 * pow(ad, Real(ctx.k) + Real(1) / 2);
    return ipow(fp.qz, ctx.k) / scale * sgn * specfun::erfc(sqrt(pi() * v) * abs(fp.p) / sqrt(ad));
}

ThetaSum theta_truncated(const ThetaContext& ctx, const Complex& z, double tolerance) {
    ctx.validate();
    check_point(z);
    const int R = ctx.truncation_radius, k = ctx.k;
    const Real v = ctx.tau.imag(), u = ctx.tau.real(), y = z.imag(), x = z.real(), ad = abs_delta(ctx);
    const long long adl = ctx.delta < 0 ? -ctx.delta : ctx.delta;
    const Real pref = 2 * sqrt(v) / (pow(ad, Real(k + 1) / 2) * pow(y, 2 * k + 2));
    const Complex zb = std::conj(z);

    // each term has size pref |Q(zbar,1)|^{k+1} exp(-(2 pi v/|delta|) M(Q)) with the positive
    // definite majorant M = p_z^2 + |Q(z,1)|^2 / y^2
    const double xd = to_double(x), yd = to_double(y), vd = to_double(v);
    const double rate = 2 * M_PI * vd / static_cast<double>(adl);
    auto majorant = [&](long long a, long long b, long long c) {
        double p = (a * (xd * xd + yd * yd) + b * xd + c) / yd;
        double re = a * (xd * xd - yd * yd) + b * xd + c, im = (2 * a * xd + b) * yd;
        return p * p + (re * re + im * im) / (yd * yd);
    };
    const double cutoff = 120.0;  // e^{-120} is far below 30-digit working precision

    const int width = 2 * R + 1;
    std::vector<std::map<long long, Complex>> partial(width);
    std::vector<long> counts(width, 0);
    parallel_for(width, ctx.threads, [&](int ia) {
        const long long a = ia - R;
        for (long long b = -R; b <= R; ++b)
            for (long long c = -R; c <= R; ++c) {
                if (a == 0 && b == 0 && c == 0) continue;
                const long long disc = b * b - 4 * a * c;
                if (disc % adl != 0) continue;
                const long long D = disc / adl;
                const long long sD = ctx.delta > 0 ? D : -D;
                if (((sD % 4) + 4) % 4 > 1) continue;
                if (rate * majorant(a, b, c) > cutoff) continue;
                const QForm Q{a, b, c};
                const int chi = qforms::genus_char(ctx.delta, Q);
                if (chi == 0) continue;
                const Real qz_abs2 = std::norm(hyperbolic::eval_form(Q, z));
                const Real expo = -4 * pi() * v * qz_abs2 / (ad * y * y) + 2 * pi() * v * Real(D);
                partial[ia][D] += Real(chi) * pref * ipow(hyperbolic::eval_form(Q, zb), k + 1) * exp(expo);
                ++counts[ia];
            }
    });

    ThetaSum out;
    out.radius = R;
    for (int ia = 0; ia < width; ++ia) {
        for (const auto& [D, c] : partial[ia]) out.by_D[D] += c;
        out.terms += counts[ia];
    }
    for (const auto& [D, c] : out.by_D) {
        const Real phase = -2 * pi() * Real(D) * u;
        out.value += c * Complex(cos(phase), sin(phase));
    }

    // tail over |n|_2 > R: at most 8 pi (r+1)^2 lattice points per unit shell, each bounded by
    // pref (r |(zbar^2, zbar, 1)|)^{k+1} exp(-rate lambda_min r^2)
    Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
    {
        Eigen::Vector3d v1(xd * xd + yd * yd, xd, 1), v2(xd * xd - yd * yd, xd, 1), v3(2 * xd * yd, yd, 0);
        M = (v1 * v1.transpose() + v2 * v2.transpose() + v3 * v3.transpose()) / (yd * yd);
    }
    const double lambda = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(M).eigenvalues().minCoeff();
    const double zabs = std::hypot(xd, yd);
    const double reach = std::sqrt(std::pow(zabs, 4) + zabs * zabs + 1);
    const double pref_d = to_double(pref);
    double tail = 0;
    for (int r = R; r < R + 2000; ++r) {
        double term = 8 * M_PI * (r + 1.0) * (r + 1.0) * pref_d * std::pow(r * reach, k + 1) *
                      std::exp(-rate * lambda * double(r) * double(r));
        tail += term;
        if (term < 1e-300 || term < tail * 1e-17) break;
    }
    out.tail_bound = Real(tail);
    out.tail_ok = tail <= tolerance;
    if (!out.tail_ok)
        out.recommendation = "tail bound " + std::to_string(tail) + " exceeds tolerance; increase the truncation radius beyond " +
                             std::to_string(R);
    return out;
}

Complex theta_coefficient_by_integration(const ThetaContext& ctx, const Complex& z, long long D, int nodes) {
    if (nodes < 2) throw DomainError("theta_coefficient_by_integration: need at least 2 nodes");
    // trapezoidal rule is exact on trigonometric polynomials of degree < nodes; larger |D|
    // terms are negligible under the Gaussian cutoff
    Complex acc;
    for (int i = 0; i < nodes; ++i) {
        const Real u = Real(i) / Real(nodes);
        ThetaContext c = ctx;
        c.tau = Complex(u, ctx.tau.imag());
        const Real phase = 2 * pi() * Real(D) * u;
        acc += theta_truncated(c, z).value * Complex(cos(phase), sin(phase));
    }
    return acc / Real(nodes);
}

namespace {

struct LiftForm {
    double a, b, c;
    int chi;
    bool outer;
};

std::complex<double> lift_integral(const std::vector<LiftForm>& fs, double ad, const LiftOptions& opt, int nx,
                                   std::complex<double>* outer_sum) {
    const auto& rx = quad::gauss_legendre<double>(nx);
    const auto& ry = quad::gauss_legendre<double>(2 * nx);
    const double v = opt.v, T = opt.T;
    const double pref = 2 * std::sqrt(v) / std::sqrt(ad);  // k = 0
    std::vector<std::complex<double>> col(nx), col_outer(nx);
    parallel_for(nx, opt.threads, [&](int ix) {
        const double x = 0.5 * rx.nodes[ix], wx = 0.5 * rx.weights[ix];
        const double y0 = std::sqrt(1 - x * x);
        // two y panels: near the arc and up to the cap
        const double split = std::min(T, y0 + 1.0);
        std::complex<double> s(0), so(0);
        for (auto [lo, hi] : {std::pair{y0, split}, std::pair{split, T}}) {
            if (hi <= lo) continue;
            const double half = (hi - lo) / 2, mid = (hi + lo) / 2;
            for (int iy = 0; iy < 2 * nx; ++iy) {
                const double y = mid + half * ry.nodes[iy], w = wx * half * ry.weights[iy];
                const std::complex<double> z(x, y);
                std::complex<double> sum(0), sum_outer(0);
                for (const auto& f : fs) {
                    const double p = -(f.a * (x * x + y * y) + f.b * x + f.c) / y;
                    const double g = std::exp(-4 * M_PI * v * p * p / ad);
                    if (g == 0) continue;
                    std::complex<double> t = double(f.chi) * ((f.a * z + f.b) * z + f.c) * g;
                    sum += t;
                    if (f.outer) sum_outer += std::abs(t);
                }
                const std::complex<double> weight = forms::e2_star_series(z) * pref / (y * y) * w;
                s += weight * sum;
                so += std::abs(weight) * sum_outer;
            }
        }
        col[ix] = s;
        col_outer[ix] = so;
    });
    std::complex<double> total(0), outer(0);
    for (int i = 0; i < nx; ++i) {
        total += col[i];
        outer += col_outer[i];
    }
    if (outer_sum) *outer_sum = outer;
    return total;
}

}  // namespace

LiftResult lift_coefficient_quadrature(long long delta, long long D, const LiftOptions& opt) {
    if (!specfun::is_fundamental_discriminant(delta) || delta >= 0)
        throw DomainError("lift_coefficient_quadrature: k = 0 requires a negative fundamental delta");
    if (D <= 0) throw DomainError("lift_coefficient_quadrature: D must be positive");
    if ((((-D) % 4) + 4) % 4 > 1) throw DomainError("lift_coefficient_quadrature: -D must be 0, 1 mod 4");
    const long long disc = -delta * D;
    if (qforms::is_square(disc))
        throw DomainError("lift_coefficient_quadrature: square |delta| D needs boundary counterterms (unsupported)");
    if (opt.grid < 64) throw DomainError("lift_coefficient_quadrature: grid must be >= 64");
    if (!(opt.T > 1) || !(opt.v > 0)) throw DomainError("lift_coefficient_quadrature: need T > 1 and v > 0");

    std::vector<LiftForm> fs;
    const long long R = opt.radius;
    for (long long a = -R; a <= R; ++a)
        for (long long c = -R; c <= R; ++c) {
            const long long b2 = disc + 4 * a * c;
            if (b2 < 0 || !qforms::is_square(b2)) continue;
            const long long b = qforms::isqrt(b2);
            for (int side = 0; side < (b == 0 ? 1 : 2); ++side) {
                const long long bb = side == 0 ? b : -b;
                const int chi = qforms::genus_char(delta, QForm{a, bb, c});
                if (chi == 0) continue;
                fs.push_back({double(a), double(bb), double(c), chi, std::max(std::llabs(a), std::llabs(c)) == R});
            }
        }

    const double ad = double(-delta);
    std::complex<double> outer;
    const auto fine = lift_integral(fs, ad, opt, opt.grid, &outer);
    const auto coarse = lift_integral(fs, ad, opt, opt.grid / 2, nullptr);
    LiftResult out;
    out.value = fine.real();
    out.imag = fine.imag();
    out.error_estimate = std::abs(fine - coarse) + std::abs(outer);
    out.forms = static_cast<int>(fs.size());
    out.T = opt.T;
    return out;
}

Complex lift_constant_term(long long delta, int k, const Complex& a_plus_0) {
    if (!specfun::is_fundamental_discriminant(delta)) throw DomainError("lift_constant_term: delta must be fundamental");
    if (k < 0) throw DomainError("lift_constant_term: k must be >= 0");
    if ((k % 2 == 0 ? -delta : delta) <= 0) throw DomainError("lift_constant_term: requires (-1)^{k+1} delta > 0");
    if (a_plus_0 == Complex()) return Complex();
    const Real ad = Real(delta < 0 ? -delta : delta);
    const Real L = to_real(specfun::dirichlet_L_nonpositive(delta, -k));
    const Real sign = k % 2 == 0 ? Real(-1) : Real(1);
    return sign * pow(ad, -Real(k) / 2) * a_plus_0 * L / pow(ad, Real(k + 1) / 2);
}

}  // namespace shintani::theta
