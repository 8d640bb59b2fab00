#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shintani/hyperbolic.hpp"

#include <random>

using namespace shintani;
using namespace shintani::hyperbolic;

namespace {
double d(const Real& x) { return to_double(x); }

Moebius random_sl2(std::mt19937& rng) {
    std::uniform_int_distribution<int> U(-3, 3);
    Moebius m = Moebius::Identity();
    for (int i = 0; i < 3; ++i) m = mat2(0, -1, 1, 0) * mat2(1, U(rng), 0, 1) * m;
    return m;
}

QForm random_form(std::mt19937& rng) {
    std::uniform_int_distribution<int> U(-9, 9);
    QForm Q;
    do Q = {U(rng), U(rng), U(rng)};
    while (Q.disc() == 0);
    return Q;
}

Complex random_point(std::mt19937& rng) {
    std::uniform_real_distribution<double> X(-2, 2), Y(0.2, 3);
    return Complex(Real(X(rng)), Real(Y(rng)));
}

bool same_boundary(const BoundaryPoint& u, const BoundaryPoint& v) {
    if (u.infinite || v.infinite) return u.infinite == v.infinite;
    return d(abs(u.x - v.x)) < 1e-30;
}
}  // namespace

TEST_CASE("form polynomials") {
    auto f1 = form_polynomials(QForm{0, 1, 0}, Complex(Real(0), Real(2)));
    CHECK(f1.p == 0);
    auto f2 = form_polynomials(QForm{1, 0, 1}, Complex(Real(0), Real(1)));
    CHECK(f2.p == -2);
    CHECK(d(shintani::abs(f2.qz)) < 1e-40);
    CHECK(d(f2.r) < 1e-40);
    // r - p^2 = disc
    std::mt19937 rng(3);
    for (int i = 0; i < 1000; ++i) {
        QForm Q = random_form(rng);
        Complex z = random_point(rng);
        auto f = form_polynomials(Q, z);
        Real lhs = f.r - f.p * f.p;
        CHECK(d(abs(lhs - Real(Q.disc()))) < 1e-9 * std::max(1.0, d(abs(f.r))));
    }
}

TEST_CASE("cm points") {
    CHECK(d(shintani::abs(cm_point({1, 0, 1}).z - Complex(Real(0), Real(1)))) < 1e-40);
    CHECK(d(shintani::abs(cm_point({1, 1, 1}).z - Complex(Real(-1) / 2, sqrt(Real(3)) / 2))) < 1e-40);
    CHECK(d(shintani::abs(cm_point({2, 1, 1}).z - Complex(Real(-1) / 4, sqrt(Real(7)) / 4))) < 1e-40);
    CHECK_THROWS_AS(cm_point({1, 0, -1}), DomainError);
    std::mt19937 rng(8);
    int n = 0;
    while (n < 100) {
        QForm Q = random_form(rng);
        if (Q.disc() >= 0 || Q.a <= 0) continue;
        Moebius g = random_sl2(rng);
        QForm P = act_on_form(g, Q);
        Complex lhs = cm_point(P).z, rhs = apply_moebius(g, cm_point(Q).z);
        CHECK(d(shintani::abs(lhs - rhs)) < 1e-10);
        CHECK(d(shintani::abs(eval_form(Q, cm_point(Q).z))) < 1e-30);
        ++n;
    }
}

TEST_CASE("geodesics") {
    auto g1 = geodesic_of({1, 0, -1});
    CHECK_FALSE(g1.vertical);
    CHECK(g1.start.x == -1);
    CHECK(g1.end.x == 1);
    // vertical lines: the a -> 0 limit of the semicircle rule
    auto g2 = geodesic_of({0, 3, 1});
    CHECK(g2.vertical);
    CHECK(g2.start.infinite);
    CHECK(d(abs(g2.end.x + Real(1) / 3)) < 1e-40);
    auto g3 = geodesic_of({0, -3, 1});
    CHECK(g3.end.infinite);
    CHECK(d(abs(g3.start.x - Real(1) / 3)) < 1e-40);
    CHECK_THROWS_AS(geodesic_of({1, 0, 1}), DomainError);
    // membership: p_z vanishes on the semicircle
    for (int k = 1; k < 10; ++k) {
        Real th = pi() * k / 10;
        Complex z(cos(th), sin(th));
        CHECK(d(abs(form_polynomials(QForm{1, 0, -1}, z).p)) < 1e-12);
    }
    // orientation is equivariant, including for the vertical representatives
    std::mt19937 rng(21);
    int n = 0;
    while (n < 200) {
        QForm Q = random_form(rng);
        if (Q.disc() <= 0) continue;
        Moebius g = random_sl2(rng);
        auto G = geodesic_of(Q);
        auto H = geodesic_of(act_on_form(g, Q));
        CHECK(same_boundary(H.start, apply_moebius(g, G.start)));
        CHECK(same_boundary(H.end, apply_moebius(g, G.end)));
        ++n;
    }
}

TEST_CASE("transformation rules") {
    std::mt19937 rng(17);
    for (int i = 0; i < 100; ++i) {
        QForm Q = random_form(rng);
        Moebius g = random_sl2(rng);
        Complex z = random_point(rng);
        Complex gz = apply_moebius(g, z);
        QForm Qi = act_on_form(mat2_inverse(g), Q);
        auto lhs = form_polynomials(Q, gz), rhs = form_polynomials(Qi, z);
        CHECK(d(abs(lhs.p - rhs.p)) < 1e-10);
        CHECK(d(abs(lhs.r - rhs.r)) < 1e-9);
        // Q(gz, 1) = j(g, z)^{-2} (g^{-1}Q)(z, 1)
        Complex jj = automorphy(g, z);
        CHECK(d(shintani::abs(lhs.qz - rhs.qz / (jj * jj))) < 1e-9);
    }
    Complex z(Real("0.3"), Real("0.7"));
    CHECK(apply_moebius(Moebius(Moebius::Identity()), z) == z);
}

TEST_CASE("fundamental domain reduction") {
    auto r1 = reduce_to_fundamental(Complex(Real(0), Real(1)));
    CHECK(r1.z == Complex(Real(0), Real(1)));
    CHECK(r1.gamma == Moebius::Identity());
    auto r2 = reduce_to_fundamental(Complex(Real("0.5"), Real(2)));
    CHECK(r2.z == Complex(Real("-0.5"), Real(2)));
    CHECK(r2.gamma == mat2(1, -1, 0, 1));
    auto r3 = reduce_to_fundamental(Complex(Real("0.1"), Real("0.1")));
    CHECK(d(shintani::abs(r3.z)) >= 1 - 1e-30);
    CHECK(d(abs(r3.z.real())) <= 0.5);
    CHECK(d(shintani::abs(apply_moebius(r3.gamma, Complex(Real("0.1"), Real("0.1"))) - r3.z)) < 1e-12);
    // double path agrees
    auto r4 = reduce_to_fundamental(std::complex<double>(0.1, 0.1));
    CHECK(r4.gamma == r3.gamma);
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> X(-5, 5), Y(0.001, 0.5);
    for (int i = 0; i < 200; ++i) {
        Complex z(Real(X(rng)), Real(Y(rng)));
        auto r = reduce_to_fundamental(z);
        CHECK(d(abs(r.z.real())) <= 0.5);
        CHECK(d(shintani::abs(r.z)) >= 1 - 1e-30);
        CHECK(d(shintani::abs(apply_moebius(r.gamma, z) - r.z)) < 1e-25);
        CHECK(r.gamma.determinant() == 1);
    }
}
