#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shintani/cmtraces.hpp"
#include "shintani/hyperbolic.hpp"
#include "shintani/specfun.hpp"

#include <random>

using namespace shintani;
using namespace shintani::cmtraces;

namespace {
double d(const Real& x) { return to_double(x); }
const Complex I(Real(0), Real(1));
Complex one(const Complex&) { return Complex(1); }

// second path for J: E4^3 / Delta - 744 from separately evaluated series
Complex j_via_quotient(const Complex& z) {
    static const auto sf = forms::build_standard_forms(96);
    auto red = hyperbolic::reduce_to_fundamental(z);
    Complex e4 = forms::eval_qexp(sf.E4, red.z).value;
    Complex dl = forms::eval_qexp(sf.DeltaCusp, red.z).value;
    return e4 * e4 * e4 / dl - Real(744);
}
}  // namespace

TEST_CASE("trace of 1 with trivial character is the Hurwitz class number") {
    CHECK(d(abs(trace_cm(one, 1, -23).value - Complex(3))) < 1e-40);
    for (long long D = 3; D <= 100; ++D) {
        if (D % 4 == 1 || D % 4 == 2) continue;
        auto tr = trace_cm(one, 1, -D);
        CHECK(d(abs(tr.value - Complex(to_real(qforms::hurwitz_class_number(D))))) < 1e-12);
    }
}

TEST_CASE("trace of J at i") {
    auto tr = trace_cm(j_evaluator(), 1, -4, "J");
    CHECK(tr.class_count == 1);
    CHECK(d(abs(tr.value - Complex(492))) < 1e-20);
}

TEST_CASE("square-trace remark values") {
    CHECK_THROWS_AS(trace_cm(one, -3, -3), DomainError);  // 3 is not 0, 1 mod 4
    CHECK(d(abs(trace_cm(one, -3, -4).value / Real(2) - Complex(Real(1) / 3))) < 1e-40);
    for (long long delta : {-3LL, -4LL, -7LL})
        for (long long n = 1; n <= 25; ++n) {
            if (n % 4 == 2 || n % 4 == 3) continue;
            Real target = qforms::is_square(n) ? to_real(qforms::hurwitz_class_number(-delta)) : Real(0);
            Complex v = trace_cm(one, delta, -n).value / sqrt(Real(n));
            INFO("delta=" << delta << " |D|=" << n);
            CHECK(d(abs(v - Complex(target))) < 1e-10);
        }
    CHECK_THROWS_AS(trace_cm(one, -3, 4), DomainError);
    CHECK_THROWS_AS(trace_cm(one, -12, -4), DomainError);
}

TEST_CASE("trace_cm is independent of class representatives") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> pick(-4, 4);
    auto J = j_evaluator();
    for (long long n : {1LL, 4LL, 5LL, 8LL, 9LL, 12LL}) {
        long long disc = -3 * n;
        Complex a, b;
        for (const auto& Q : qforms::class_reps(disc).reps) {
            int chi = qforms::genus_char(-3, Q);
            Mat2 g = mat2(1, pick(rng), 0, 1) * mat2(0, -1, 1, 0) * mat2(1, pick(rng), 0, 1);
            QForm P = act(g, Q);
            a += Real(chi) * J(hyperbolic::cm_point(Q).z) / Real(qforms::stabilizer_order(Q));
            b += Real(qforms::genus_char(-3, P)) * J(hyperbolic::cm_point(P).z) / Real(qforms::stabilizer_order(P));
        }
        CHECK(d(abs(a - b)) < 1e-9);
    }
}

TEST_CASE("f-series for delta = -3") {
    auto f = f_series_complex(-3, 24);
    CHECK(f.at(-3) == Complex(1));
    // single class (1,1,1) of disc -3, chi = 1, weight 1/3, J(rho) = -744
    CHECK(d(abs(f.at(1) - Complex(-248))) < 1e-20);
    for (const auto& [n, c] : f) CHECK(d(abs(c.imag())) < 1e-8);
    auto doubled = f_series_complex(-3, 24, 256);
    for (const auto& [n, c] : f) CHECK(d(abs(c - doubled.at(n))) < 1e-8);
    // second evaluation path for J
    for (int n = 1; n <= 24; ++n) {
        if (n % 4 == 2 || n % 4 == 3) continue;
        Complex alt = trace_cm(j_via_quotient, -3, -n).value / sqrt(Real(n));
        INFO("n=" << n);
        CHECK(d(abs(alt - f.at(n)) / std::max(Real(1), Real(abs(alt)))) < 1e-20);
    }
    auto real = f_series(-3, 24);
    CHECK(real.size() == f.size());
    CHECK_THROWS_AS(f_series(5, 10), DomainError);
}

TEST_CASE("identity suite") {
    auto hecke = run_identity("hecke", -4, 3);
    CHECK(hecke.pass);
    CHECK(d(hecke.target) == doctest::Approx(2.0));
    auto cn = run_identity("class-number", -7, 0);
    CHECK(cn.pass);
    CHECK(d(cn.target) == doctest::Approx(1.0));
    auto sg = run_identity("sigma", -8, 0);
    CHECK(sg.pass);
    CHECK(d(sg.target) == doctest::Approx(1.0));
    auto bad = run_identity("nonsense", -4, 3);
    CHECK(!bad.pass);
    CHECK(!bad.error.empty());
    auto suite = identity_suite({-3, -4}, {3, 4, 7});
    CHECK(!suite.empty());
    for (const auto& r : suite) {
        INFO(r.identity_id << " delta=" << r.params.at("delta") << " err=" << d(r.abs_error) << " " << r.error);
        CHECK(r.pass);
    }
}
