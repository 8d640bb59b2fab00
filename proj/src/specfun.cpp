#include "shintani/specfun.hpp"

#include "shintani/quadrature.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hermite.hpp>

#include <cstdlib>
#include <mutex>

namespace shintani::specfun {

namespace {

// unit roundoff of the 50-digit storage type
Real storage_eps() { return Real("1e-48"); }

Real tiny() { return Real("1e-300"); }

bool is_integer(const Real& x) { return x == floor(x); }

}  // namespace

BigInt factorial(int n) {
    if (n < 0) throw DomainError("factorial of negative integer");
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

Rational binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return Rational(0);
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return Rational(r);
}

SpecialValue<Real> gamma_upper(int s, const Real& y, const Precision& p) {
    if (s <= 0) {
        if (y <= 0) throw DomainError("gamma_upper: s <= 0 requires y > 0");
        return gamma_upper_real(Real(s), y, p);
    }
    Real sum(0), term(1);
    for (int j = 0; j < s; ++j) {
        if (j > 0) term *= y / j;
        sum += term;
    }
    Real v = to_real(factorial(s - 1)) * exp(-y) * sum;
    Real scale(0);
    term = 1;
    for (int j = 0; j < s; ++j) {
        if (j > 0) term *= abs(y) / j;
        scale += term;
    }
    return {v, storage_eps() * s * to_real(factorial(s - 1)) * exp(-y) * scale};
}

SpecialValue<Real> exp_integral_e1(const Real& x, const Precision& p) {
    if (x <= 0) throw DomainError("E1 requires x > 0");
    const Real eps = p.eps() * Real("1e-3");
    if (x <= Real(p.ei_series_max_neg)) {
        // -gamma - log x - sum (-x)^n/(n n!)
        Real sum(0), term(1);
        for (int n = 1; n < 10000; ++n) {
            term *= -x / n;
            Real t = term / n;
            sum += t;
            if (abs(t) < eps * abs(sum)) break;
        }
        Real v = -euler_gamma() - log(x) - sum;
        return {v, eps * abs(v) + storage_eps() * exp(x)};
    }
    return gamma_upper_real(Real(0), x, p);
}

SpecialValue<Real> gamma_upper_real(const Real& a, const Real& x, const Precision& p) {
    if (x <= 0) throw DomainError("gamma_upper_real requires x > 0");
    const Real eps = p.eps() * Real("1e-3");
    if (x >= 1) {
        // Legendre continued fraction, modified Lentz
        Real b = x + 1 - a, c = 1 / tiny(), d = 1 / b, h = d;
        int i = 1;
        for (; i < 20000; ++i) {
            Real an = -Real(i) * (Real(i) - a);
            b += 2;
            d = an * d + b;
            if (abs(d) < tiny()) d = tiny();
            c = b + an / c;
            if (abs(c) < tiny()) c = tiny();
            d = 1 / d;
            Real del = d * c;
            h *= del;
            if (abs(del - 1) < eps) break;
        }
        Real v = exp(-x + a * log(x)) * h;
        return {v, (eps + storage_eps() * i) * abs(v)};
    }
    // x < 1: start at a + m in (0, 1] (or at 0 for integer a) and recur downward
    Real start;
    int m;
    Real g;
    if (is_integer(a) && a <= 0) {
        m = static_cast<int>(-a.convert_to<long>());
        start = 0;
        g = exp_integral_e1(x, p).value;
    } else {
        m = a > 0 ? 0 : static_cast<int>(ceil(-a).convert_to<long>());
        if (a + m <= 0) ++m;
        start = a + m;
        // Gamma(s) - gamma(s, x), lower series x^s e^{-x} sum x^n / (s (s+1) ... (s+n))
        Real term = 1 / start, sum = term;
        for (int n = 1; n < 10000; ++n) {
            term *= x / (start + n);
            sum += term;
            if (abs(term) < eps * abs(sum)) break;
        }
        g = boost::math::tgamma(start) - exp(-x + start * log(x)) * sum;
    }
    Real s = start;
    for (int i = 0; i < m; ++i) {
        s -= 1;
        g = (g - exp(-x + s * log(x))) / s;
    }
    return {g, (eps + storage_eps() * (m + 1)) * abs(g)};
}

SpecialValue<Real> exp_integral_ei(const Real& y, const Precision& p) {
    if (y == 0) throw DomainError("Ei(0) is undefined");
    if (y < 0) {
        auto e1 = exp_integral_e1(-y, p);
        return {-e1.value, e1.error_bound};
    }
    const Real eps = p.eps() * Real("1e-3");
    if (y <= Real(p.ei_pos_crossover())) {
        Real sum(0), term(1);
        for (int n = 1; n < 100000; ++n) {
            term *= y / n;
            Real t = term / n;
            sum += t;
            if (t < eps * sum) break;
        }
        Real v = euler_gamma() + log(y) + sum;
        return {v, eps * abs(v) + storage_eps() * sum};
    }
    // asymptotic e^y/y sum n!/y^n, truncated at the smallest term
    Real sum(1), term(1), last(1);
    for (int n = 1; n < 100000; ++n) {
        term *= Real(n) / y;
        if (term > last) break;
        sum += term;
        last = term;
        if (term < eps * sum) break;
    }
    Real v = exp(y) / y * sum;
    return {v, (last + eps) * abs(v)};
}

SpecialValue<Real> e_kappa(int kappa, const Real& y, const Precision& p) {
    if (kappa <= 0) return gamma_upper(1 - kappa, -y, p);
    if (y == 0) throw DomainError("e_kappa: y = 0 with kappa > 0");
    Real sum(0), jfact(1), ypow = 1 / y;
    for (int j = 0; j <= kappa - 2; ++j) {
        if (j > 0) jfact *= j;
        sum += jfact * ypow;
        ypow /= y;
    }
    // the bracket cancels to about |y|^{1-kappa}; evaluate Ei at full storage accuracy
    Precision tight = p;
    tight.working_digits = 44;
    auto ei = exp_integral_ei(y, tight);
    Real lead = exp(y) * sum;
    Real scale = to_real(factorial(kappa - 1));
    Real sign = (kappa + 1) % 2 == 0 ? Real(1) : Real(-1);
    Real v = sign / scale * (lead - ei.value);
    Real err = (ei.error_bound + storage_eps() * (abs(lead) + abs(ei.value)) * kappa) / scale;
    return {v, err};
}

Real erfc(const Real& x) { return boost::math::erfc(x); }

SpecialValue<Real> beta_fn(int k, const Real& v, BetaVariant which, const Precision& p) {
    if (k < 0) throw DomainError("beta_fn requires k >= 0");
    Real half_k = Real(k) + Real(1) / 2;
    if (which == BetaVariant::tail) {
        if (v < 0) throw DomainError("beta tail requires v >= 0");
        if (v == 0) return {1 / half_k, Real(0)};
        auto g = gamma_upper_real(-half_k, v, p);
        Real scale = exp(half_k * log(v));
        return {scale * g.value, scale * g.error_bound};
    }
    const Real eps = p.eps() * Real("1e-3");
    Real sum(0), pw(1), biggest(0), term(0);
    for (int m = 0; m < 100000; ++m) {
        if (m > 0) pw *= -v / m;
        term = pw / (Real(m) - half_k);
        sum += term;
        if (abs(term) > biggest) biggest = abs(term);
        if (m > abs(v) && abs(term) < eps * abs(sum)) break;
    }
    return {sum, abs(term) + storage_eps() * biggest * 10};
}

SpecialValue<Real> cal_F(const Real& w, const Precision& p) {
    if (w <= 0) throw DomainError("cal_F requires w > 0");
    Real rt = sqrt(w);
    Real sqpi = sqrt(pi());
    Real first = sqpi / 2 / rt * exp(w) * erfc(rt);
    quad::Options opt;
    opt.abs_tol = to_double(p.eps()) * 1e-2;
    opt.initial_panels = 1 + static_cast<int>(to_double(rt));
    auto integrand = [](const Real& t) { return exp(t * t) * erfc(t); };
    auto q = quad::adaptive(integrand, Real(0), rt, opt);
    if (!q.converged) throw std::runtime_error("cal_F: quadrature did not converge");
    Real v = first - sqpi * q.value + log(w) / 2 + log(Real(2)) + euler_gamma() / 2;
    return {v, Real(q.error_estimate) * sqpi + storage_eps() * abs(first) * 10};
}

const Rational& bernoulli_number(int n) {
    static std::mutex mu;
    static std::vector<Rational> cache{Rational(1)};
    if (n < 0) throw DomainError("bernoulli_number: negative index");
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(cache.size()) <= n) {
        int m = static_cast<int>(cache.size());
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        Rational acc(0);
        for (int j = 0; j < m; ++j) acc += binomial(m + 1, j) * cache[j];
        cache.push_back(-acc / Rational(m + 1));
    }
    return cache[n];
}

Rational bernoulli_poly(int n, const Rational& x) {
    Rational sum(0), xp(1);
    // Horner in x from the constant end is awkward with binomials; accumulate powers instead
    std::vector<Rational> pw(n + 1);
    for (int i = 0; i <= n; ++i) {
        pw[i] = xp;
        xp *= x;
    }
    for (int j = 0; j <= n; ++j) sum += binomial(n, j) * bernoulli_number(j) * pw[n - j];
    return sum;
}

Complex bernoulli_poly(int n, const Complex& x) {
    Complex sum(0);
    for (int m = n; m >= 0; --m) {
        // coefficient of x^m is C(n, m) B_{n-m}
        sum = sum * x + to_complex(binomial(n, m) * bernoulli_number(n - m));
    }
    return sum;
}

Real bernoulli_poly(int n, const Real& x) {
    Real sum(0);
    for (int m = n; m >= 0; --m) sum = sum * x + to_real(binomial(n, m) * bernoulli_number(n - m));
    return sum;
}

Rational hurwitz_zeta_nonpositive(int s, const Rational& rho) {
    if (s > 0) throw DomainError("hurwitz_zeta_nonpositive requires s <= 0");
    return -bernoulli_poly(1 - s, rho) / Rational(1 - s);
}

SpecialValue<Real> hurwitz_zeta(const Real& s, const Real& rho, const Precision& p) {
    if (rho <= 0) throw DomainError("hurwitz_zeta requires rho > 0");
    if (s == 1) throw DomainError("hurwitz_zeta has a pole at s = 1");
    if (is_integer(s) && s <= 0) {
        int m = static_cast<int>(s.convert_to<long>());
        Real v = -bernoulli_poly(1 - m, rho) / Real(1 - m);
        return {v, storage_eps() * (1 + abs(v))};
    }
    const Real eps = p.eps() * Real("1e-3");
    int N = std::max(20, p.working_digits);
    Real sum(0);
    for (int n = 0; n < N; ++n) sum += pow(Real(n) + rho, -s);
    Real x = Real(N) + rho;
    sum += pow(x, 1 - s) / (s - 1) + pow(x, -s) / 2;
    Real poch = s, xp = pow(x, -s - 1), last(0);
    for (int j = 1; j < 200; ++j) {
        if (j > 1) {
            poch *= (s + 2 * j - 3) * (s + 2 * j - 2);
            xp /= x * x;
        }
        Real t = to_real(bernoulli_number(2 * j)) / to_real(factorial(2 * j)) * poch * xp;
        sum += t;
        last = abs(t);
        if (last < eps * abs(sum)) break;
    }
    return {sum, last + storage_eps() * N * abs(sum)};
}

SpecialValue<Complex> polygamma(int k, const Complex& x, const Precision& p) {
    if (k < 0) throw DomainError("polygamma requires k >= 0");
    if (x.imag() == 0 && x.real() <= 0 && is_integer(x.real()))
        throw DomainError("polygamma pole at non-positive integer");
    const Real eps = p.eps() * Real("1e-3");
    const double radius = p.working_digits + 10.0;
    int N = 0;
    if (to_double(x.real()) < radius) N = static_cast<int>(std::ceil(radius - to_double(x.real())));
    Complex w = x + Real(N);
    Complex sum;
    Real last(0);
    if (k == 0) {
        sum = log(w) - Real(1) / (Real(2) * w);
        Complex w2 = w * w, wp = w2;
        for (int j = 1; j < 200; ++j) {
            Complex t = to_real(bernoulli_number(2 * j)) / (Real(2 * j) * wp);
            sum -= t;
            last = shintani::abs(t);
            if (last < eps * shintani::abs(sum)) break;
            wp *= w2;
        }
    } else {
        Complex wk = ipow(w, k);
        sum = to_real(factorial(k - 1)) / wk + to_real(factorial(k)) / (Real(2) * wk * w);
        Complex w2 = w * w, wp = wk * w2;
        for (int j = 1; j < 200; ++j) {
            Complex t = to_real(bernoulli_number(2 * j)) * to_real(factorial(2 * j + k - 1)) /
                        to_real(factorial(2 * j)) / wp;
            sum += t;
            last = shintani::abs(t);
            if (last < eps * shintani::abs(sum)) break;
            wp *= w2;
        }
        if (k % 2 == 0) sum = -sum;
    }
    // psi^{(k)}(x) = psi^{(k)}(x+N) - (-1)^k k! sum_{n<N} (x+n)^{-k-1}
    Complex corr;
    for (int n = 0; n < N; ++n) corr += Real(1) / ipow(Complex(x + Real(n)), k + 1);
    Real kf = to_real(factorial(k));
    if (k % 2 == 0) sum -= kf * corr;
    else sum += kf * corr;
    return {sum, last + storage_eps() * N * (1 + shintani::abs(sum))};
}

Real hermite_poly(int n, const Real& x) {
    if (n < 0) throw DomainError("hermite_poly requires n >= 0");
    return boost::math::hermite(static_cast<unsigned>(n), x);
}

namespace {
int jacobi(long long a, long long n) {
    // n odd positive
    a %= n;
    if (a < 0) a += n;
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            long long r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

bool squarefree(long long m) {
    m = std::llabs(m);
    for (long long q = 2; q * q <= m; ++q)
        if (m % (q * q) == 0) return false;
    return true;
}
}  // namespace

int kronecker_symbol(long long d, long long n) {
    if (n == 0) return std::llabs(d) == 1 ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (d < 0) result = -result;
    }
    int twos = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++twos;
    }
    if (twos > 0) {
        if (d % 2 == 0) return 0;
        long long r = ((d % 8) + 8) % 8;
        if ((r == 3 || r == 5) && (twos % 2 == 1)) result = -result;
    }
    if (n == 1) return result;
    return result * jacobi(d, n);
}

bool is_fundamental_discriminant(long long d) {
    if (d == 1) return true;
    if (d == 0) return false;
    long long r = ((d % 4) + 4) % 4;
    if (r == 1) return squarefree(d);
    if (r == 0) {
        long long m = d / 4;
        long long mr = ((m % 4) + 4) % 4;
        return (mr == 2 || mr == 3) && squarefree(m);
    }
    return false;
}

Rational dirichlet_L_nonpositive(long long delta, int s) {
    if (!is_fundamental_discriminant(delta)) throw DomainError("dirichlet_L: delta not fundamental");
    if (s > 0) throw DomainError("dirichlet_L_nonpositive requires s <= 0");
    long long m = std::llabs(delta);
    Rational sum(0);
    for (long long r = 1; r <= m; ++r) {
        int chi = kronecker_symbol(delta, r);
        if (chi == 0) continue;
        sum += Rational(chi) * hurwitz_zeta_nonpositive(s, Rational(r, m));
    }
    return sum * Rational(ipow(BigInt(m), -s));
}

SpecialValue<Real> dirichlet_L(long long delta, int s, const Precision& p) {
    if (s <= 0) return {to_real(dirichlet_L_nonpositive(delta, s)), Real(0)};
    if (s != 1) throw DomainError("dirichlet_L implemented for integer s <= 1 only");
    if (!is_fundamental_discriminant(delta)) throw DomainError("dirichlet_L: delta not fundamental");
    if (delta == 1) throw DomainError("zeta has a pole at s = 1");
    long long m = std::llabs(delta);
    Real sum(0), err(0);
    for (long long r = 1; r <= m; ++r) {
        int chi = kronecker_symbol(delta, r);
        if (chi == 0) continue;
        auto psi = polygamma(0, Complex(Real(r) / Real(m), Real(0)), p);
        sum += chi * psi.value.real();
        err += psi.error_bound;
    }
    return {-sum / Real(m), err / Real(m)};
}

}  // namespace shintani::specfun
