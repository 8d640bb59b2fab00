#include "shintani/forms.hpp"

#include "shintani/qforms.hpp"
#include "shintani/specfun.hpp"

#include <algorithm>
#include <mutex>

namespace shintani::forms {

namespace {

template <class T>
T pi_v() {
    if constexpr (std::is_same_v<T, double>) return 3.14159265358979323846;
    else return pi();
}

template <class T>
T eps_v() {
    if constexpr (std::is_same_v<T, double>) return 1e-18;
    else return T("1e-48");
}

const std::vector<long long>& sigma1_table() {
    static const std::vector<long long> table = [] {
        const int N = 200000;
        std::vector<long long> s(N + 1, 0);
        for (int dv = 1; dv <= N; ++dv)
            for (int m = dv; m <= N; m += dv) s[m] += dv;
        return s;
    }();
    return table;
}

Complex q_of(const Complex& z) {
    Real r = exp(-2 * pi() * z.imag()), th = 2 * pi() * z.real();
    return Complex(r * cos(th), r * sin(th));
}

}  // namespace

QExpansion QExpansion::zero(int weight, int n_min, int order) {
    QExpansion f;
    f.weight = weight;
    f.n_min = n_min;
    f.order = order;
    f.coeffs.assign(std::max(0, order - n_min + 1), Rational(0));
    return f;
}

QExpansion multiply(const QExpansion& f, const QExpansion& g) {
    int n_min = f.n_min + g.n_min;
    int order = std::min(f.order + g.n_min, g.order + f.n_min);
    QExpansion h = QExpansion::zero(f.weight + g.weight, n_min, order);
    for (int i = f.n_min; i <= f.order; ++i) {
        const Rational& a = f.coeffs[i - f.n_min];
        if (a == 0) continue;
        for (int j = g.n_min; i + j <= order && j <= g.order; ++j)
            h.coeffs[i + j - n_min] += a * g.coeffs[j - g.n_min];
    }
    return h;
}

QExpansion inverse(const QExpansion& f) {
    const Rational& c0 = f.coeffs.at(0);
    if (c0 == 0) throw DomainError("inverse: leading coefficient must be nonzero");
    const int K = f.order - f.n_min;
    QExpansion g = QExpansion::zero(-f.weight, -f.n_min, -f.n_min + K);
    for (int k = 0; k <= K; ++k) {
        Rational acc = k == 0 ? Rational(1) : Rational(0);
        for (int i = 1; i <= k; ++i) acc -= f.coeffs[i] * g.coeffs[k - i];
        g.coeffs[k] = acc / c0;
    }
    return g;
}

QExpansion add(const QExpansion& f, const QExpansion& g) {
    int n_min = std::min(f.n_min, g.n_min), order = std::min(f.order, g.order);
    QExpansion h = QExpansion::zero(f.weight, n_min, order);
    for (int n = n_min; n <= order; ++n) h.coeffs[n - n_min] = f.coeff(n) + g.coeff(n);
    return h;
}

QExpansion scale(const QExpansion& f, const Rational& s) {
    QExpansion h = f;
    for (auto& c : h.coeffs) c *= s;
    return h;
}

namespace {
QExpansion truncate(const QExpansion& f, int order) {
    QExpansion h = QExpansion::zero(f.weight, f.n_min, order);
    for (int n = f.n_min; n <= order; ++n) h.coeffs[n - f.n_min] = f.coeff(n);
    return h;
}

QExpansion eisenstein(int weight, const Rational& factor, int order) {
    QExpansion f = QExpansion::zero(weight, 0, order);
    f.coeffs[0] = 1;
    for (int n = 1; n <= order; ++n) f.coeffs[n] = factor * Rational(qforms::divisor_sigma(weight - 1, n));
    return f;
}
}  // namespace

StandardForms build_standard_forms(int order) {
    if (order < 2) throw DomainError("build_standard_forms requires order >= 2");
    const int work = order + 2;
    QExpansion E4 = eisenstein(4, Rational(240), work), E6 = eisenstein(6, Rational(-504), work);
    QExpansion E4cubed = multiply(multiply(E4, E4), E4);
    QExpansion diff = add(E4cubed, scale(multiply(E6, E6), Rational(-1)));
    // the constant term cancels: shift to start at q^1
    QExpansion Delta = QExpansion::zero(12, 1, work);
    for (int n = 1; n <= work; ++n) Delta.coeffs[n - 1] = diff.coeff(n) / 1728;
    QExpansion j = multiply(E4cubed, inverse(Delta));
    j.weight = 0;
    QExpansion J = j;
    J.coeffs[0 - J.n_min] -= 744;
    return {truncate(E4, order), truncate(E6, order), truncate(Delta, order), truncate(j, order), truncate(J, order)};
}

SpecialValue<Complex> eval_qexp(const QExpansion& f, const Complex& z, const Precision& p) {
    if (z.imag() <= 0) throw DomainError("eval_qexp: Im(z) must be positive");
    const Complex q = q_of(z);
    Complex qn = ipow(q, f.n_min), sum;
    std::vector<Real> mags;
    for (int n = f.n_min; n <= f.order; ++n) {
        Complex t = to_real(f.coeffs[n - f.n_min]) * qn;
        sum += t;
        mags.push_back(shintani::abs(t));
        qn *= q;
    }
    // geometric tail from the largest ratio among the last few consecutive nonzero terms
    Real ratio(0), last(0);
    int seen = 0;
    for (int i = static_cast<int>(mags.size()) - 1; i > 0 && seen < 4; --i) {
        if (mags[i] == 0 || mags[i - 1] == 0) continue;
        if (seen == 0) last = mags[i];
        ratio = std::max(ratio, mags[i] / mags[i - 1]);
        ++seen;
    }
    Real tail;
    if (seen == 0) tail = 0;  // finite (polynomial) expansion
    else if (ratio >= 1) tail = Real("1e300");
    else tail = last * ratio / (1 - ratio);
    Real tol = Real(p.tail_tolerance) * std::max(Real(1), shintani::abs(sum));
    if (tail > tol)
        throw std::runtime_error("eval_qexp: tail bound above tolerance; reduce z to the fundamental domain first");
    return {sum, tail};
}

SpecialValue<Complex> eval_J(const Complex& z, int order, const Precision& p) {
    static std::mutex mu;
    static std::map<int, QExpansion> cache;
    const QExpansion* J;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(order);
        if (it == cache.end()) it = cache.emplace(order, build_standard_forms(order).J).first;
        J = &it->second;
    }
    auto red = hyperbolic::reduce_to_fundamental(z);
    return eval_qexp(*J, red.z, p);
}

template <class T>
std::complex<T> e2_star_series(const std::complex<T>& z) {
    using std::exp;
    using std::cos;
    using std::sin;
    const T y = z.imag();
    if (!(y > 0)) throw DomainError("e2_star: Im(z) must be positive");
    const T tp = 2 * pi_v<T>();
    const T mag = exp(-tp * y);
    const std::complex<T> q(mag * cos(tp * z.real()), mag * sin(tp * z.real()));
    const auto& sig = sigma1_table();
    std::complex<T> sum(0), qn(1);
    T qabs(1);
    for (size_t n = 1;; ++n) {
        if (n >= sig.size()) throw std::runtime_error("e2_star: Im(z) too small for the direct series");
        qn *= q;
        qabs *= mag;
        sum += T(sig[n]) * qn;
        if (qabs * T(n) * T(n) < eps_v<T>()) break;
    }
    return std::complex<T>(1) - T(24) * sum - std::complex<T>(T(3) / (pi_v<T>() * y));
}

template <class T>
std::complex<T> e2_star(const std::complex<T>& z) {
    auto red = hyperbolic::reduce_to_fundamental(z);
    std::complex<T> jj = hyperbolic::automorphy(red.gamma, z);
    return e2_star_series(red.z) / (jj * jj);
}

template std::complex<double> e2_star_series(const std::complex<double>&);
template Complex e2_star_series(const Complex&);
template std::complex<double> e2_star(const std::complex<double>&);
template Complex e2_star(const Complex&);

Complex HarmonicFourierData::plus(int n) const {
    auto it = a_plus.find(n);
    return it == a_plus.end() ? Complex() : it->second;
}

Complex HarmonicFourierData::minus(int n) const {
    auto it = a_minus.find(n);
    return it == a_minus.end() ? Complex() : it->second;
}

Complex eval_harmonic(const HarmonicFourierData& G, const Complex& z, const Precision& p) {
    const Real y = z.imag();
    if (y <= 0) throw DomainError("eval_harmonic: Im(z) must be positive");
    const Complex q = q_of(z);
    Complex sum;
    for (const auto& [n, c] : G.a_plus) sum += c * ipow(q, n);
    for (const auto& [n, c] : G.a_minus) {
        if (n == 0) sum += c * (G.kappa == 1 ? log(y) : pow(y, 1 - G.kappa));
        else sum += c * specfun::e_kappa(G.kappa, 4 * pi() * n * y, p).value * ipow(q, n);
    }
    return sum;
}

Complex evaluate(const HarmonicFourierData& G, const Complex& z, const Precision& p) {
    return G.evaluator ? G.evaluator(z) : eval_harmonic(G, z, p);
}

HarmonicFourierData e2_star_data(int order) {
    HarmonicFourierData G;
    G.kappa = 2;
    G.order = order;
    G.a_plus[0] = Complex(1);
    for (int n = 1; n <= order; ++n) G.a_plus[n] = Complex(Real(-24) * to_real(qforms::divisor_sigma1(n)));
    G.a_minus[0] = Complex(Real(-3) / pi());
    G.evaluator = [](const Complex& z) { return e2_star(z); };
    return G;
}

Complex NumericSeries::eval(const Complex& z) const {
    const Complex q = q_of(z);
    Complex sum;
    for (const auto& [n, c] : coeffs) sum += c * ipow(q, n);
    return sum;
}

NumericSeries xi_symbolic(const HarmonicFourierData& G) {
    NumericSeries out;
    out.weight = 2 - G.kappa;
    for (const auto& [n, c] : G.a_minus) {
        if (n == 0) {
            Complex v = std::conj(c) * Real(G.kappa == 1 ? 1 : 1 - G.kappa);
            if (v != Complex()) out.coeffs[0] += v;
            continue;
        }
        // a_minus(n) feeds the coefficient at index -n
        const int m = -n;
        out.coeffs[m] -= pow(4 * pi() * Real(m), 1 - G.kappa) * std::conj(c);
    }
    return out;
}

E32Star e32_star_coeffs(int D_max) {
    if (D_max < 0) throw DomainError("e32_star_coeffs requires D_max >= 0");
    E32Star out;
    for (int D = 0; D <= D_max; ++D) out.holomorphic[D] = qforms::hurwitz_class_number(D);
    out.nonholomorphic = [](const Complex& tau, int n_max) {
        const Real v = tau.imag();
        Complex sum;
        for (int n = -n_max; n <= n_max; ++n) {
            Real n2 = Real(n) * n;
            Real beta = specfun::beta_fn(0, 4 * pi() * n2 * v, specfun::BetaVariant::tail).value;
            Real ph = -2 * pi() * n2 * tau.real();
            Real damp = exp(2 * pi() * n2 * v);  // |e^{-2 pi i n^2 tau}|
            sum += beta * damp * Complex(cos(ph), sin(ph));
        }
        return sum / (16 * pi() * sqrt(v));
    };
    return out;
}

}  // namespace shintani::forms
