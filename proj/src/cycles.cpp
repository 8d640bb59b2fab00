#include "shintani/cycles.hpp"

#include "shintani/hyperbolic.hpp"
#include "shintani/quadrature.hpp"
#include "shintani/specfun.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

namespace shintani::cycles {

namespace {

const Complex I_unit(Real(0), Real(1));

Complex expi(const Real& t) { return Complex(cos(t), sin(t)); }

Complex i_pow(int e) {
    switch (((e % 4) + 4) % 4) {
        case 0: return Complex(1);
        case 1: return I_unit;
        case 2: return Complex(-1);
        default: return -I_unit;
    }
}

Real sign_pow(int e) { return e % 2 == 0 ? Real(1) : Real(-1); }

Real fact(int n) { return to_real(specfun::factorial(n)); }

int weight_index(const forms::HarmonicFourierData& G, int k) {
    if (k < 0) throw DomainError("cycle integrals require k >= 0");
    if (G.kappa != 2 * k + 2) throw DomainError("HarmonicFourierData kappa must equal 2k + 2");
    return k;
}

quad::Options quad_options(double tol, int panels) {
    quad::Options o;
    o.abs_tol = tol;
    o.nodes = 24;
    o.initial_panels = panels;
    return o;
}

// int_c^T G(r + iy) y^k dy, integrated in log y
Complex ray_integral(const forms::HarmonicFourierData& G, const Real& r, const Real& c, const Real& T, int k,
                     const RegOptions& opt, Real& err) {
    auto f = [&](const Real& s) {
        Real y = exp(s);
        return forms::evaluate(G, Complex(r, y), opt.precision) * pow(y, k + 1);
    };
    auto res = quad::adaptive(f, log(c), log(T), quad_options(opt.tol, 4));
    err += Real(res.error_estimate);
    return res.value;
}

// a^-(0) counterterm: the y^{-1-2k} growth integrated against y^k
Complex constant_minus_counterterm(const forms::HarmonicFourierData& G, const Real& T, int k) {
    Complex a0 = G.minus(0);
    if (a0 == Complex()) return Complex();
    return a0 * (k == 0 ? Complex(-log(T)) : Complex(pow(T, -k) / Real(k)));
}

// horizontal integral int_0^1 f(x + iT) dx
template <class F>
Complex segment(F&& f, const Real& T, double tol, Real& err) {
    auto g = [&](const Real& x) { return f(Real(x), Complex(x, T)); };
    auto res = quad::adaptive(g, Real(0), Real(1), quad_options(tol, 4));
    err += Real(res.error_estimate);
    return res.value;
}

struct SquareGeometry {
    QForm canonical;
    Real r, r_prime, c_minus;
};

SquareGeometry square_geometry(const QForm& Q, const Real& c_plus) {
    const long long D = Q.disc();
    if (D <= 0 || !qforms::is_square(D)) throw DomainError("regularized cycle integral requires a positive square discriminant");
    SquareGeometry g;
    g.canonical = (Q.a == 0 && Q.b > 0) ? Q : qforms::reduce_square(Q).form;
    const long long f = g.canonical.b;
    // r = -c/f = num/den in lowest terms
    long long num = -g.canonical.c, den = f;
    long long h = std::gcd(num, den);
    num /= h;
    den /= h;
    // sigma = [[num, beta], [den, delta]] with num*delta - beta*den = 1
    long long x0 = 1, y0 = 0, x1 = 0, y1 = 1, r0 = num, r1 = den;
    while (r1 != 0) {
        long long t = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - t * r1);
        std::tie(x0, x1) = std::make_pair(x1, x0 - t * x1);
        std::tie(y0, y1) = std::make_pair(y1, y0 - t * y1);
    }
    // num*x0 + den*y0 = r0 = +-1
    long long delta = x0 * r0;
    g.r = Real(num) / Real(den);
    g.r_prime = Real(-delta) / Real(den);
    g.c_minus = 1 / (c_plus * Real(den) * Real(den));
    return g;
}

using RayFn = Complex (*)(const forms::HarmonicFourierData&, const Real&, const Real&, const Real&, int,
                          const RegOptions&, Real*);

CycleIntegralResult assemble_square(const forms::HarmonicFourierData& G, const QForm& Q, int k, const Real& T,
                                    const RegOptions& opt, RayFn ray, Method method) {
    weight_index(G, k);
    if (T <= 0) throw DomainError("regularized cycle integral requires T > 0");
    if (opt.c_plus <= 0) throw DomainError("c_plus must be positive");
    auto geo = square_geometry(Q, opt.c_plus);
    Real err(0);
    Complex plus = ray(G, geo.r, opt.c_plus, T, k, opt, &err);
    Complex minus = ray(G, geo.r_prime, geo.c_minus, T, k, opt, &err);
    const Real f = Real(geo.canonical.b);
    Complex U = i_pow(k + 1) * pow(f, k) * (plus + sign_pow(k + 1) * minus);
    CycleIntegralResult out;
    // the geodesic of (0, f, c) runs downward from the cusp
    out.value = -U;
    out.method = method;
    out.quadrature_error = err * pow(f, k);
    out.T_used = T;
    return out;
}

}  // namespace

CycleIntegralResult closed_cycle_integral(const Evaluator& G, const QForm& Q, int k, const ClosedOptions& opt) {
    const long long D = Q.disc();
    if (D <= 0) throw DomainError("closed_cycle_integral requires disc > 0");
    if (qforms::is_square(D)) throw DomainError("closed_cycle_integral: square discriminant, use reg_cycle_integral");
    if (k < 0) throw DomainError("closed_cycle_integral requires k >= 0");
    if (opt.nodes < 2 || opt.max_nodes < opt.nodes) throw DomainError("closed_cycle_integral: invalid node counts");

    const Real sqrtD = sqrt(Real(D));
    const Real w1 = (-Real(Q.b) - sqrtD) / (2 * Real(Q.a));
    const Real w2 = (-Real(Q.b) + sqrtD) / (2 * Real(Q.a));
    const Real sg = w2 > w1 ? Real(1) : Real(-1);
    auto [t, u] = qforms::pell_fundamental(D);
    const Real eps = (to_real(t) + to_real(u) * sqrtD) / 2;
    const Real length = 2 * log(eps);
    const Real lo = opt.start_offset, hi = opt.start_offset + length;

    auto integrand = [&](const Real& s) {
        Complex tau = I_unit * exp(s);
        Complex den = tau + sg;
        Complex z = (w2 * tau + sg * w1) / den;
        Complex dz = sg * (w2 - w1) / (den * den) * tau;
        Complex qz = hyperbolic::eval_form(Q, z);
        return G(z) * ipow(qz, k) * dz;
    };

    CycleIntegralResult out;
    out.method = Method::closed_quadrature;
    int n = opt.nodes;
    Complex prev = quad::fixed_gl(integrand, lo, hi, n);
    for (;;) {
        int next = 2 * n;
        if (next > opt.max_nodes) {
            out.value = prev;
            out.nodes = n;
            out.converged = false;
            if (out.quadrature_error == 0) out.quadrature_error = Real(1);
            return out;
        }
        Complex cur = quad::fixed_gl(integrand, lo, hi, next);
        Real diff = abs(cur - prev);
        out.value = cur;
        out.nodes = next;
        out.quadrature_error = diff;
        if (diff <= Real(opt.tol) * std::max(Real(1), Real(abs(cur)))) return out;
        prev = cur;
        n = next;
    }
}

Complex regularized_ray(const forms::HarmonicFourierData& G, const Real& r, const Real& c, const Real& T, int k,
                        const RegOptions& opt, Real* err) {
    weight_index(G, k);
    Real e(0);
    Complex v = ray_integral(G, r, c, T, k, opt, e);
    const Real two_pi = 2 * pi();
    v -= G.plus(0) * pow(T, k + 1) / Real(k + 1);
    for (const auto& [n, a] : G.a_plus) {
        if (n == 0 || a == Complex()) continue;
        Real x = two_pi * n;
        v += a * expi(x * r) * specfun::gamma_upper(k + 1, x * T, opt.precision).value / pow(x, k + 1);
    }
    v += constant_minus_counterterm(G, T, k);
    const Real lead = fact(k) / pow(Real(2), 2 * k + 1);
    for (const auto& [n, a] : G.a_minus) {
        if (n == 0 || a == Complex()) continue;
        Real x = two_pi * n;
        Real xk = pow(x, k + 1);
        Real term = specfun::e_kappa(2 * k + 2, 2 * x * T, opt.precision).value *
                    specfun::gamma_upper(k + 1, x * T, opt.precision).value / xk;
        Real tail(0);
        for (int j = 0; j <= k; ++j)
            tail += sign_pow(j) / fact(j) * specfun::e_kappa(2 * k + 2 - j, x * T, opt.precision).value;
        term -= lead / xk * tail;
        v += a * expi(x * r) * term;
    }
    if (err) *err += e;
    return v;
}

Complex regularized_ray_alt(const forms::HarmonicFourierData& G, const Real& r, const Real& c, const Real& T, int k,
                            const RegOptions& opt, Real* err) {
    weight_index(G, k);
    Real e(0);
    Complex v = ray_integral(G, r, c, T, k, opt, e);
    const Complex a0 = G.minus(0);
    const Real Tpow = pow(T, -1 - 2 * k);

    Complex I1 = segment(
        [&](const Real&, const Complex& z) {
            return (forms::evaluate(G, r + z, opt.precision) - a0 * Tpow) * specfun::bernoulli_poly(k + 1, z);
        },
        T, opt.tol, e);
    v += sign_pow(k) * i_pow(k + 1) / Real(k + 1) * I1;

    const auto xi = forms::xi_symbolic(G);
    const bool xi_constant = std::all_of(xi.coeffs.begin(), xi.coeffs.end(),
                                         [](const auto& kv) { return kv.first == 0 || kv.second == Complex(); });
    if (!xi_constant) {
        auto it0 = xi.coeffs.find(0);
        const Complex axi = it0 == xi.coeffs.end() ? Complex() : it0->second;
        auto xi_shifted = [&](const Complex& z) { return xi.eval(r + z) - axi; };
        const Real norm = fact(k) / fact(2 * k + 1);

        Complex I2 = segment(
            [&](const Real&, const Complex& z) {
                Complex psi = specfun::polygamma(k, z, opt.precision).value +
                              sign_pow(k) * specfun::polygamma(k, Complex(1) - z, opt.precision).value;
                return xi_shifted(z) * psi;
            },
            T, opt.tol, e);
        v -= sign_pow(k) * i_pow(-k) * pow(Real(2), 2 * k - 1) * norm * std::conj(I2);

        for (int d = 0; d <= k; ++d) {
            Real binsum(0);
            for (int j = 0; j <= k - d; ++j) binsum += to_real(specfun::binomial(2 * k + 1, j));
            Real co = fact(d + k) / fact(d + 1) * binsum;
            Complex I3 = segment(
                [&](const Real& x, const Complex& z) { return xi_shifted(z) * specfun::bernoulli_poly(d + 1, x); },
                T, opt.tol, e);
            I3 *= ipow(Complex(Real(0), -T), -k - d - 1);
            v -= sign_pow(k) * i_pow(-k) * norm * co * std::conj(I3);
        }
    }
    v += constant_minus_counterterm(G, T, k);
    if (err) *err += e;
    return v;
}

CycleIntegralResult reg_cycle_integral(const forms::HarmonicFourierData& G, const QForm& Q, int k, const Real& T,
                                       const RegOptions& opt) {
    return assemble_square(G, Q, k, T, opt, &regularized_ray, Method::regularized_definition);
}

CycleIntegralResult reg_cycle_integral_alt(const forms::HarmonicFourierData& G, const QForm& Q, int k, const Real& T,
                                           const RegOptions& opt) {
    return assemble_square(G, Q, k, T, opt, &regularized_ray_alt, Method::regularized_alternative);
}

LemmaReport lemma_integral_checks(int index, int n, const Real& y, const Precision& p) {
    if (index < 0 || index > 6) throw DomainError("lemma_integral_checks: index must be in [0, 6]");
    if (n < -4 || n > 4) throw DomainError("lemma_integral_checks: |n| <= 4 required");
    if (y < Real("0.1") || y > 5) throw DomainError("lemma_integral_checks: y must lie in [0.1, 5]");
    LemmaReport rep;
    rep.index = index;
    rep.n = n;
    rep.y = y;
    const int j = index, k = index;
    const Real two_pi_n = 2 * pi() * n;
    // tolerance relative to the size of the integrand, which grows like e^{2 pi |n| y}
    const auto opt = quad_options(1e-28 * std::max(1.0, std::exp(2 * 3.14159 * std::abs(n) * to_double(y))), 2);

    // Bernoulli polynomial on the unit interval
    rep.bernoulli_quadrature =
        quad::adaptive([&](const Real& x) { return Complex(specfun::bernoulli_poly(j, x)) * expi(two_pi_n * x); },
                       Real(0), Real(1), opt)
            .value;
    if (n == 0 || j == 0) rep.bernoulli_closed = Complex(n == 0 && j == 0 ? 1 : 0);
    else rep.bernoulli_closed = sign_pow(j + 1) * fact(j) / ipow(Complex(Real(0), two_pi_n), j);

    // Bernoulli polynomial on the horizontal line at height y
    auto line = [&](auto&& f) {
        return quad::adaptive([&](const Real& x) { return f(Complex(x, y)); }, Real(0), Real(1), opt).value;
    };
    auto wave = [&](const Complex& z) { return exp(Complex(Real(0), two_pi_n) * z); };
    rep.bernoulli_line_quadrature = line([&](const Complex& z) { return specfun::bernoulli_poly(j, z) * wave(z); });
    if (n == 0) rep.bernoulli_line_closed = ipow(Complex(Real(0), y), j);
    else if (j == 0) rep.bernoulli_line_closed = Complex();
    else
        rep.bernoulli_line_closed = -Real(j) * i_pow(j) * specfun::gamma_upper(j, two_pi_n * y, p).value /
                                    pow(two_pi_n, j);

    // polygamma combination on the same line
    rep.psi_quadrature = line([&](const Complex& z) {
        return (specfun::polygamma(k, z, p).value + sign_pow(k) * specfun::polygamma(k, Complex(1) - z, p).value) *
               wave(z);
    });
    if (n == 0) {
        if (k == 0) rep.psi_closed = Complex(2 * log(y));
        else rep.psi_closed = Real(2) * sign_pow(k + 1) * fact(k - 1) * ipow(Complex(Real(0), y), -k);
    } else {
        rep.psi_closed = Real(-2) * ipow(Complex(Real(0), two_pi_n), k) * fact(k) *
                         specfun::e_kappa(k + 1, -two_pi_n * y, p).value;
    }
    rep.bernoulli_abs_error = abs(rep.bernoulli_quadrature - rep.bernoulli_closed);
    rep.bernoulli_line_abs_error = abs(rep.bernoulli_line_quadrature - rep.bernoulli_line_closed);
    rep.psi_abs_error = abs(rep.psi_quadrature - rep.psi_closed);
    return rep;
}

TraceResult trace_cycle(const forms::HarmonicFourierData& G, long long delta, long long D, int k,
                        const TraceOptions& opt) {
    if (!specfun::is_fundamental_discriminant(delta)) throw DomainError("trace_cycle: delta must be a fundamental discriminant");
    if (k < 0) throw DomainError("trace_cycle requires k >= 0");
    if ((k % 2 == 0 ? -delta : delta) <= 0) throw DomainError("trace_cycle requires (-1)^{k+1} delta > 0");
    if (D <= 0) throw DomainError("trace_cycle requires D > 0");
    const long long sD = delta > 0 ? D : -D;
    const long long m = ((sD % 4) + 4) % 4;
    if (m != 0 && m != 1) throw DomainError("trace_cycle requires sgn(delta) D = 0, 1 mod 4");
    weight_index(G, k);

    const long long disc = (delta < 0 ? -delta : delta) * D;
    auto reps = qforms::class_reps(disc).reps;
    std::sort(reps.begin(), reps.end());
    const bool square = qforms::is_square(disc);

    std::vector<Complex> values(reps.size());
    std::vector<Real> errors(reps.size());
    auto work = [&](size_t i) {
        const QForm& Q = reps[i];
        int chi = qforms::genus_char(delta, Q);
        if (chi == 0) return;
        CycleIntegralResult r;
        if (square) {
            r = reg_cycle_integral(G, Q, k, opt.T, opt.reg);
        } else {
            auto eval = [&](const Complex& z) { return forms::evaluate(G, z, opt.reg.precision); };
            r = closed_cycle_integral(eval, Q, k, opt.closed);
            if (!r.converged) throw std::runtime_error("trace_cycle: closed cycle quadrature did not converge");
        }
        values[i] = Real(chi) * r.value;
        errors[i] = r.quadrature_error;
    };

    const size_t nthreads = std::max(1, opt.threads);
    if (nthreads == 1 || reps.size() < 2) {
        for (size_t i = 0; i < reps.size(); ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> failures(nthreads);
        for (size_t t = 0; t < nthreads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (size_t i = t; i < reps.size(); i += nthreads) work(i);
                } catch (...) {
                    failures[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& f : failures)
            if (f) std::rethrow_exception(f);
    }
    TraceResult out;
    out.class_count = static_cast<int>(reps.size());
    out.error = Real(0);
    for (size_t i = 0; i < reps.size(); ++i) {
        out.value += values[i];
        out.error += errors[i];
    }
    return out;
}

TraceResult l_star_value(const forms::HarmonicFourierData& G, long long delta, int k, const TraceOptions& opt) {
    const long long ad = delta < 0 ? -delta : delta;
    auto tr = trace_cycle(G, delta, ad, k, opt);
    Real s = sqrt(Real(ad));
    tr.value *= s;
    tr.error *= s;
    return tr;
}

Real l_value_exponential_sum(long long delta, const Precision&) {
    if (!specfun::is_fundamental_discriminant(delta)) throw DomainError("l_value_exponential_sum: delta must be fundamental");
    const Real ad = Real(delta < 0 ? -delta : delta);
    const Real decay = exp(-2 * pi() / ad);
    const Real cutoff("1e-40");
    Real sum(0), wave(1);
    for (long long n = 1;; ++n) {
        wave *= decay;
        int chi = specfun::kronecker_symbol(delta, n);
        if (chi != 0) sum += Real(chi) * to_real(qforms::divisor_sigma1(n)) / Real(n) * wave;
        // sigma_1(n)/n <= 1 + log n
        if ((1 + log(Real(n))) * wave / (1 - decay) < cutoff) break;
    }
    return 2 * sqrt(ad) / pi() * sum;
}

Complex complementary_trace(const forms::QExpansion& F, long long delta, const Rational& d, int k) {
    if (!specfun::is_fundamental_discriminant(delta)) throw DomainError("complementary_trace: delta must be fundamental");
    if (d <= 0) throw DomainError("complementary_trace requires d > 0");
    const Rational fr = Rational(delta < 0 ? -delta : delta) * d;
    if (denominator(fr) != 1) throw DomainError("complementary_trace requires |delta| d to be an integer");
    const long long f = static_cast<long long>(numerator(fr));
    if (F.n_min >= 0) return Complex();
    Complex total;
    for (long long c = 0; c < f; ++c) {
        int chi = qforms::genus_char(delta, QForm{0, f, c});
        if (chi == 0) continue;
        const Real r = Real(-c) / Real(f);
        Complex inner;
        for (int n = F.n_min; n < 0; ++n) {
            Rational a = F.coeff(n);
            if (a == 0) continue;
            inner += to_real(a) * pow(4 * pi() * Real(n), k) * expi(2 * pi() * r * Real(n));
        }
        total += Real(chi) * inner;
    }
    return total;
}

CombinatorialCheck combinatorial_identity(int d, int k) {
    if (d < 0 || k < d) throw DomainError("combinatorial_identity requires 0 <= d <= k");
    using specfun::binomial;
    CombinatorialCheck out;
    for (int j = (k + 1) / 2; j <= k; ++j) {
        Rational term = binomial(k, j) * binomial(2 * j - d, k) / Rational(2 * j + 1);
        out.lhs += j % 2 == 0 ? term : Rational(-term);
    }
    Rational binsum = 0;
    for (int j = 0; j <= k - d; ++j) binsum += binomial(2 * k + 1, j);
    Rational scale = Rational(specfun::factorial(k) * specfun::factorial(d + k)) /
                     Rational(specfun::factorial(2 * k + 1) * specfun::factorial(d));
    out.rhs = (k % 2 == 0 ? scale : Rational(-scale)) * binsum;
    return out;
}

}  // namespace shintani::cycles
