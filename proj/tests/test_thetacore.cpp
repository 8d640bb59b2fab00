#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shintani/hyperbolic.hpp"
#include "shintani/specfun.hpp"
#include "shintani/thetacore.hpp"

#include <random>

using namespace shintani;
using namespace shintani::theta;

namespace {
double d(const Real& x) { return to_double(x); }

struct Config {
    ThetaContext ctx;
    QForm Q;
    Complex z;
};

// random (delta, Q, tau, z) with disc(Q) divisible by |delta| and z away from the zero
// locus and the geodesic of Q
Config random_config(std::mt19937& rng, int k) {
    std::uniform_int_distribution<int> coef(-4, 4);
    std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.6, 1.6), uv(0.3, 1.2);
    const std::vector<long long> deltas = k % 2 == 0 ? std::vector<long long>{-3, -4, -7, -8}
                                                     : std::vector<long long>{5, 8, 12, 13};
    for (;;) {
        Config c;
        c.ctx.delta = deltas[rng() % deltas.size()];
        c.ctx.k = k;
        c.ctx.tau = Complex(Real(ux(rng)), Real(uv(rng)));
        c.Q = QForm{coef(rng), coef(rng), coef(rng)};
        const long long disc = c.Q.disc();
        const long long ad = c.ctx.delta < 0 ? -c.ctx.delta : c.ctx.delta;
        if (disc == 0 || disc % ad != 0) continue;
        c.z = Complex(Real(ux(rng)), Real(uy(rng)));
        auto fp = hyperbolic::form_polynomials(c.Q, c.z);
        const Real y = c.z.imag();
        if (abs(fp.qz) / (y * y) < Real("0.05") || abs(fp.p) < Real("0.05")) continue;
        return c;
    }
}
}  // namespace

TEST_CASE("context validation") {
    ThetaContext ctx;
    CHECK_NOTHROW(ctx.validate());
    ctx.k = 1;
    CHECK_THROWS_AS(ctx.validate(), DomainError);  // needs delta > 0 for odd k
    ctx.delta = 5;
    CHECK_NOTHROW(ctx.validate());
    ctx.delta = 6;
    CHECK_THROWS_AS(ctx.validate(), DomainError);
}

TEST_CASE("finite-difference operators on simple functions") {
    const Complex z(Real("0.3"), Real("1.2"));
    auto cube = [](const Complex& w) { return w * w * w; };
    CHECK(d(abs(fd_operators(cube, 4, z).xi)) < 1e-8);
    auto im = [](const Complex& w) { return Complex(w.imag()); };
    CHECK(d(abs(fd_operators(im, 0, z).laplace)) < 1e-8);
}

TEST_CASE("eta is a preimage: xi and Laplacian against closed forms") {
    std::mt19937 rng(2024);
    for (int k = 0; k <= 2; ++k)
        for (int i = 0; i < 20; ++i) {
            auto c = random_config(rng, k);
            auto f = [&](const Complex& w) { return eta(c.ctx, c.Q, w).value; };
            auto fl = [&](const Complex& w) { return eta_lattice(c.ctx, c.Q, w); };
            auto r = fd_operators(f, 2 * k + 2, c.z);
            auto rl = fd_operators(fl, 2 * k + 2, c.z);
            INFO("k=" << k << " Q=(" << c.Q.a << "," << c.Q.b << "," << c.Q.c << ") delta=" << c.ctx.delta);
            CHECK(d(abs(r.xi - xi_eta_closed(c.ctx, c.Q, c.z))) < 1e-6);
            CHECK(d(abs(rl.laplace - phi_sh0_lattice(c.ctx, c.Q, c.z))) < 1e-4);
        }
}

TEST_CASE("eta: recursion and quadrature paths agree") {
    std::mt19937 rng(11);
    for (int i = 0; i < 50; ++i) {
        int k = i % 4;
        auto c = random_config(rng, k);
        auto rec = eta(c.ctx, c.Q, c.z, EtaPath::recursion);
        auto qd = eta(c.ctx, c.Q, c.z, EtaPath::quadrature);
        CHECK(d(abs(rec.value - qd.value)) < 1e-10);
    }
}

TEST_CASE("eta: singular locus, continuity across the geodesic, growth") {
    ThetaContext ctx;
    ctx.tau = Complex(Real(0), Real("0.8"));
    // CM point of a definite form is a zero of Q(z,1)
    const QForm defin{1, 1, 1};
    CHECK_THROWS_AS(eta(ctx, defin, hyperbolic::cm_point(defin).z), DomainError);

    // probes on both sides of the geodesic |z| = sqrt(3) of (1, 0, -3)
    const QForm ind{1, 0, -3};
    for (const char* t : {"0.4", "1.0", "1.3"}) {
        const Real th(t);
        const Real rad = sqrt(Real(3));
        const Complex inside = std::polar(rad - Real("1e-9"), th), outside = std::polar(rad + Real("1e-9"), th);
        CHECK(d(abs(eta(ctx, ind, inside).value - eta(ctx, ind, outside).value)) < 1e-8);
        // xi jumps by Q(z,1)^k |delta|^{-k-1/2} (k = 0: 1/sqrt 3)
        const Complex in6 = std::polar(rad - Real("1e-6"), th), out6 = std::polar(rad + Real("1e-6"), th);
        Real jump = abs(xi_eta_closed(ctx, ind, out6) - xi_eta_closed(ctx, ind, in6));
        CHECK(d(abs(jump - 1 / sqrt(Real(3)))) < 1e-5);
        CHECK_THROWS_AS(xi_eta_closed(ctx, ind, std::polar(rad, th)), DomainError);
    }

    // square-exponential decay along vertical lines for definite forms
    for (const QForm& Q : {QForm{1, 1, 1}, QForm{1, 0, 1}, QForm{2, 1, 1}, QForm{1, 1, 4}, QForm{3, 3, 1}}) {
        auto logmag = [&](double y) { return d(log(abs(eta(ctx, Q, Complex(Real("0.37"), Real(y))).value))); };
        double slope_hi = (logmag(6.0) - logmag(4.0)) / (36.0 - 16.0);
        CHECK(slope_hi < 0);
        // and towards the real line, in 1/y^2
        double slope_lo = (logmag(0.1) - logmag(0.15)) / (100.0 - 1 / 0.0225);
        CHECK(slope_lo < 0);
    }

    // k = 0, far from the geodesic: bounded by the erfc envelope
    const Complex far(Real("0.1"), Real(5));
    auto fp = hyperbolic::form_polynomials(ind, far);
    Real envelope = exp(-pi() * ctx.tau.imag() * fp.p * fp.p / 3);
    CHECK(d(abs(eta(ctx, ind, far).value)) < d(envelope));
}

TEST_CASE("phi_sh0 normalizations") {
    std::mt19937 rng(5);
    for (int i = 0; i < 20; ++i) {
        auto c = random_config(rng, i % 3);
        ThetaContext quad = c.ctx;
        quad.tau = Complex(c.ctx.tau.real(), 4 * c.ctx.tau.imag());
        Complex a = phi_sh0(c.ctx, c.Q, c.z), b = phi_sh0_lattice(quad, c.Q, c.z);
        CHECK(d(abs(a - b) / std::max(Real(1), Real(abs(a)))) < 1e-25);
    }
    // at a CM point Q(zbar,1) = conj Q(z,1) = 0 for real coefficients, so phi vanishes there
    ThetaContext ctx;
    const QForm Q{1, 1, 1};
    const Complex zq = hyperbolic::cm_point(Q).z;
    CHECK(d(abs(phi_sh0(ctx, Q, zq))) < 1e-40);
    CHECK(d(abs(phi_sh0(ctx, Q, zq + Complex(Real(0), Real("0.1"))))) > 1e-10);
    // decay far from the geodesic
    const QForm ind{1, 0, -3};
    for (int j = 0; j < 10; ++j) {
        Complex z(Real(j) / 10, Real(30 + 5 * j));
        CHECK(d(abs(phi_sh0(ctx, ind, z))) < 1e-30);
    }
}

TEST_CASE("truncated theta sum") {
    ThetaContext ctx;
    ctx.delta = -3;
    ctx.k = 0;
    ctx.tau = Complex(Real("0.1"), Real("0.9"));
    const Complex z(Real("0.2"), Real("1.3"));
    auto a = theta_truncated(ctx, z);
    CHECK(a.tail_ok);
    CHECK(a.terms > 0);
    // weight 2k+2 in z
    auto b = theta_truncated(ctx, Real(-1) / z);
    CHECK(d(abs(b.value - z * z * a.value)) <= d(a.tail_bound + b.tail_bound) + 1e-40);
    // radius growth stays within the tail bound
    ThetaContext wide = ctx;
    wide.truncation_radius = 35;
    CHECK(d(abs(theta_truncated(wide, z).value - a.value)) <= d(a.tail_bound) + 1e-40);
    // tau -> tau + 1 multiplies each D block by e^{-2 pi i D}
    ThetaContext shifted = ctx;
    shifted.tau += Real(1);
    auto s = theta_truncated(shifted, z);
    for (const auto& [D, c] : a.by_D) CHECK(d(abs(s.by_D.at(D) - c)) == 0.0);
    CHECK(d(abs(s.value - a.value)) < 1e-40);
    // coefficient extraction by u-integration
    for (long long D : {0LL, 1LL, 3LL, -1LL}) {
        Complex direct = a.by_D.count(D) ? a.by_D.at(D) : Complex();
        CHECK(d(abs(theta_coefficient_by_integration(ctx, z, D) - direct)) < 1e-10);
    }
    // a tiny radius cannot meet the tolerance and says so
    ThetaContext tiny = ctx;
    tiny.truncation_radius = 1;
    ThetaContext lowv = tiny;
    lowv.tau = Complex(Real(0), Real("0.05"));
    auto t = theta_truncated(lowv, z);
    CHECK_FALSE(t.tail_ok);
    CHECK(!t.recommendation.empty());
}

TEST_CASE("lift constant term") {
    Complex c = lift_constant_term(-3, 0, Complex(1));
    CHECK(d(abs(c - Complex(Real(-1) / (3 * sqrt(Real(3)))))) < 1e-40);
    CHECK(d(abs(lift_constant_term(-3, 0, Complex()))) == 0.0);
    // sqrt|delta| times the constant is -H(|delta|)
    for (long long delta : {-3LL, -4LL, -7LL, -8LL}) {
        Real H = to_real(qforms::hurwitz_class_number(-delta));
        CHECK(d(abs(sqrt(Real(-delta)) * lift_constant_term(delta, 0, Complex(1)) + H)) < 1e-10);
    }
    CHECK_THROWS_AS(lift_constant_term(-3, 1, Complex(1)), DomainError);
}

TEST_CASE("lift coefficient quadrature: self-consistency and input checks") {
    LiftOptions o;
    o.grid = 64;
    auto r = lift_coefficient_quadrature(-3, 4, o);
    LiftOptions o2 = o;
    o2.grid = 128;
    auto r2 = lift_coefficient_quadrature(-3, 4, o2);
    CHECK(std::abs(r.value - r2.value) <= std::max(r.error_estimate, 1e-12));
    CHECK(std::abs(r.imag) < 1e-10);
    // independent of v (holomorphic coefficient)
    LiftOptions ov = o;
    ov.v = 0.5;
    CHECK(std::abs(lift_coefficient_quadrature(-3, 4, ov).value - r.value) < 1e-8);
    CHECK_THROWS_AS(lift_coefficient_quadrature(-3, 3, o), DomainError);  // 9 is a square
    CHECK_THROWS_AS(lift_coefficient_quadrature(-3, 2, o), DomainError);  // -2 is not 0,1 mod 4
    o.grid = 32;
    CHECK_THROWS_AS(lift_coefficient_quadrature(-3, 4, o), DomainError);
}
