#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shintani/qforms.hpp"
#include "shintani/specfun.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <random>

using namespace shintani;
using namespace shintani::qforms;

namespace {

Mat2 random_sl2(std::mt19937& rng, int len = 6) {
    std::uniform_int_distribution<int> U(-3, 3);
    Mat2 m = Mat2::Identity();
    for (int i = 0; i < len; ++i) {
        m = mat2(1, U(rng), 0, 1) * m;
        m = mat2(0, -1, 1, 0) * m;
    }
    return m;
}

// number of elements of PSL2(Z) with entries bounded by 3 fixing Q
int brute_stabilizer(const QForm& Q) {
    int count = 0;
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b)
            for (int c = -3; c <= 3; ++c)
                for (int d = -3; d <= 3; ++d) {
                    if (a * d - b * c != 1) continue;
                    if (c < 0 || (c == 0 && a < 0) || (c == 0 && a == 0 && b < 0)) continue;  // mod +-1
                    if (act(mat2(a, b, c, d), Q) == Q) ++count;
                }
    return count;
}

// weighted count of reduced positive definite forms found by an exhaustive box search
Rational brute_hurwitz(long long D) {
    if (D == 0) return Rational(-1, 12);
    Rational h(0);
    for (long long a = 1; a <= D; ++a)
        for (long long b = -a; b <= a; ++b)
            for (long long c = a; c <= D; ++c) {
                if (b * b - 4 * a * c != -D) continue;
                if (b == -a) continue;
                if (a == c && b < 0) continue;
                h += Rational(1, brute_stabilizer({a, b, c}));
            }
    return h;
}

}  // namespace

TEST_CASE("action composes as a left action and moves roots") {
    QForm Q{3, 5, -7};
    Mat2 g1 = mat2(2, 1, 1, 1), g2 = mat2(1, -2, 0, 1);
    CHECK(act(g2, act(g1, Q)) == act(g2 * g1, Q));
    CHECK(act(g1, Q).disc() == Q.disc());
    // T translates roots by +1
    QForm R{1, 0, -2};  // roots +-sqrt 2
    QForm TR = act(mat2(1, 1, 0, 1), R);
    CHECK(TR == QForm{1, -2, -1});  // roots 1 +- sqrt 2
}

TEST_CASE("reduce examples") {
    auto r1 = reduce({1, 0, 1});
    CHECK(r1.form == QForm{1, 0, 1});
    CHECK(r1.transform == Mat2::Identity());
    auto r2 = reduce({1, 1, 1});
    CHECK(r2.form == QForm{1, 1, 1});
    CHECK(r2.transform == Mat2::Identity());
    auto r3 = reduce({3, 10, 9});
    CHECK(r3.form == QForm{1, 0, 2});
    CHECK(act(r3.transform, QForm{3, 10, 9}) == r3.form);
    CHECK(r3.transform.determinant() == 1);
    CHECK_THROWS_AS(reduce({1, 2, 1}), DomainError);
}

TEST_CASE("class_reps examples") {
    CHECK(class_reps(-3).reps == std::vector<QForm>{{1, 1, 1}});
    auto sq = class_reps(9);
    CHECK(sq.regime == Regime::square);
    CHECK(sq.reps == std::vector<QForm>{{0, 3, 0}, {0, 3, 1}, {0, 3, 2}});
    auto c23 = class_reps(-23).reps;
    std::vector<QForm> expect{{1, 1, 6}, {2, 1, 3}, {2, -1, 3}};
    std::sort(expect.begin(), expect.end());
    CHECK(c23 == expect);
    CHECK_THROWS_AS(class_reps(6), DomainError);
    CHECK_THROWS_AS(class_reps(0), DomainError);
}

TEST_CASE("indefinite classes: reps inequivalent and the union covers sampled forms") {
    for (long long D : {5LL, 8LL, 12LL, 13LL, 17LL, 21LL, 28LL, 40LL, 60LL, 85LL, 148LL}) {
        auto cl = class_reps(D);
        CHECK(cl.regime == Regime::indefinite_nonsquare);
        for (size_t i = 0; i < cl.reps.size(); ++i)
            for (size_t j = i + 1; j < cl.reps.size(); ++j) CHECK_FALSE(equivalent(cl.reps[i], cl.reps[j]));
        // every form (a,b,c) of disc D in a box is equivalent to exactly one rep
        for (long long a = -6; a <= 6; ++a)
            for (long long b = -8; b <= 8; ++b) {
                if (a == 0) continue;
                long long num = b * b - D;
                if (num % (4 * a) != 0) continue;
                QForm F{a, b, num / (4 * a)};
                int hits = 0;
                for (const auto& R : cl.reps) hits += equivalent(F, R);
                CHECK(hits == 1);
            }
    }
    // h(12) = 2 with both signs: (1,2,-2) and (-1,2,2)
    CHECK(class_reps(12).reps.size() == 2);
}

TEST_CASE("random SL2 action lands in the same class") {
    std::mt19937 rng(1234);
    std::uniform_int_distribution<int> U(-9, 9);
    int def = 0, ind = 0, sq = 0;
    while (def < 200 || ind < 200 || sq < 200) {
        QForm Q{U(rng), U(rng), U(rng)};
        long long D = Q.disc();
        if (D == 0 || Q.a == 0 || Q.c == 0) continue;
        Mat2 g = random_sl2(rng, 3);
        QForm P = act(g, Q);
        if (std::llabs(P.a) > 1000000 || std::llabs(P.c) > 1000000) continue;
        if (D < 0) {
            if (def >= 200) continue;
            if (Q.a < 0) {
                Q = {-Q.a, -Q.b, -Q.c};
                P = {-P.a, -P.b, -P.c};
            }
            CHECK(reduce(Q).form == reduce(P).form);
            ++def;
        } else if (is_square(D)) {
            if (sq >= 200) continue;
            CHECK(reduce_square(Q).form == reduce_square(P).form);
            auto r = reduce_square(P);
            CHECK(act(r.transform, P) == r.form);
            ++sq;
        } else {
            if (ind >= 200) continue;
            auto cyc = cycle(reduce(Q).form);
            CHECK(std::find(cyc.begin(), cyc.end(), reduce(P).form) != cyc.end());
            auto r = reduce(P);
            CHECK(act(r.transform, P) == r.form);
            ++ind;
        }
    }
}

TEST_CASE("square regime reps are pairwise inequivalent") {
    for (long long f : {1, 2, 3, 4, 7, 8}) {
        auto cl = class_reps(f * f);
        CHECK(cl.reps.size() == static_cast<size_t>(f));
        std::map<long long, int> seen;
        for (const auto& R : cl.reps) ++seen[reduce_square(R).form.c];
        CHECK(seen.size() == static_cast<size_t>(f));
    }
    // the form (0,-3,1) has its first root at -c/b = 1/3
    auto r = reduce_square({0, -3, 1});
    CHECK(r.form.a == 0);
    CHECK(r.form.b == 3);
}

TEST_CASE("automorph generator") {
    CHECK(automorph_generator({1, 0, -3}).matrix == mat2(2, 3, 1, 2));
    CHECK(automorph_generator({1, 1, -1}).matrix == mat2(1, 1, 1, 2));
    CHECK_THROWS_AS(automorph_generator({0, 3, 1}), DomainError);
    CHECK_THROWS_AS(automorph_generator({1, 0, 1}), DomainError);
    // brute-force oracle: minimal trace > 2 among fixing matrices with entries <= 10
    for (QForm Q : {QForm{1, 0, -3}, QForm{1, 1, -1}, QForm{1, 1, -3}, QForm{1, 2, -2}}) {
        long long best = 1 << 30;
        for (int a = -10; a <= 10; ++a)
            for (int b = -10; b <= 10; ++b)
                for (int c = -10; c <= 10; ++c)
                    for (int d = -10; d <= 10; ++d)
                        if (a * d - b * c == 1 && a + d > 2 && act(mat2(a, b, c, d), Q) == Q)
                            best = std::min<long long>(best, a + d);
        CHECK(automorph_generator(Q).matrix.trace() == best);
    }
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> U(-12, 12);
    int n = 0;
    while (n < 50) {
        QForm Q{U(rng), U(rng), U(rng)};
        long long D = Q.disc();
        if (D <= 0 || D > 200 || is_square(D)) continue;
        auto A = automorph_generator(Q);
        CHECK(act(A.matrix, Q) == Q);
        CHECK(A.matrix.determinant() == 1);
        CHECK(A.matrix.trace() > 2);
        std::vector<Mat2> powers{A.matrix};
        for (int e = 2; e <= 5; ++e) powers.push_back(powers.back() * A.matrix);
        for (size_t i = 0; i < powers.size(); ++i)
            for (size_t j = i + 1; j < powers.size(); ++j) CHECK(powers[i] != powers[j]);
        ++n;
    }
}

TEST_CASE("pell fundamental solution against brute force") {
    for (long long D = 5; D <= 200; ++D) {
        if (D % 4 == 2 || D % 4 == 3 || is_square(D)) continue;
        auto [t, u] = pell_fundamental(D);
        CHECK(t * t - D * u * u == 4);
        // brute force where the fundamental solution is small; otherwise confirm no smaller one below the cap
        long long uu = 1;
        while (uu < 2000000 && !is_square(D * uu * uu + 4)) ++uu;
        if (uu < 2000000) CHECK(u == uu);
        else CHECK(u >= uu);
    }
}

TEST_CASE("genus character") {
    CHECK(genus_char(1, {3, 7, -2}) == 1);
    CHECK(genus_char(-3, {1, 0, 3}) == 1);
    CHECK(genus_char(-4, {2, 0, 2}) == 0);  // content 2 shares a factor with -4
    // well-definedness over the first ten coprime represented values
    int tested = 0;
    for (long long D : {5LL, 8LL, 9LL, 12LL, 13LL, 17LL, 20LL, 21LL})
        for (const auto& Q : class_reps(-4 * D).reps) {
            if (tested >= 20) break;
            if (std::gcd(gcd3(Q.a, Q.b, Q.c), 4LL) != 1) continue;
            std::vector<int> vals;
            for (int x = -6; x <= 6 && vals.size() < 10; ++x)
                for (int y = 0; y <= 6 && vals.size() < 10; ++y) {
                    long long n = Q(x, y);
                    if (n != 0 && std::gcd(n, 4LL) == 1) vals.push_back(specfun::kronecker_symbol(-4, n));
                }
            CHECK(vals.size() == 10);
            CHECK(std::all_of(vals.begin(), vals.end(), [&](int v) { return v == vals.front(); }));
            CHECK(genus_char(-4, Q) == vals.front());
            ++tested;
        }
    CHECK(tested == 20);
    // orbit invariance
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> U(-6, 6);
    int n = 0;
    while (n < 100) {
        QForm Q{U(rng), U(rng), U(rng)};
        long long D = Q.disc();
        if (D == 0) continue;
        // admissible: disc = |delta| D' with sgn(delta) D' = 0, 1 mod 4
        long long delta = 0;
        for (long long cand : {-3LL, -4LL, 5LL, -7LL, 8LL, -8LL}) {
            if (D % cand != 0) continue;
            long long m = ((D / cand) % 4 + 4) % 4;
            if (m == 0 || m == 1) {
                delta = cand;
                break;
            }
        }
        if (delta == 0) continue;
        Mat2 g = random_sl2(rng, 2);
        QForm P = act(g, Q);
        CHECK(genus_char(delta, P) == genus_char(delta, Q));
        ++n;
    }
}

TEST_CASE("hurwitz class numbers") {
    CHECK(hurwitz_class_number(0) == Rational(-1, 12));
    CHECK(hurwitz_class_number(3) == Rational(1, 3));
    CHECK(hurwitz_class_number(4) == Rational(1, 2));
    CHECK(hurwitz_class_number(23) == 3);
    CHECK(hurwitz_class_number(1) == 0);
    CHECK(hurwitz_class_number(2) == 0);
    for (long long D = 0; D <= 60; ++D)
        if (D % 4 == 0 || D % 4 == 3) CHECK(hurwitz_class_number(D) == brute_hurwitz(D));
    for (long long D = 3; D <= 200; ++D) {
        if (D % 4 == 1 || D % 4 == 2) continue;
        Rational h(0);
        for (const auto& Q : class_reps(-D).reps) h += Rational(1, stabilizer_order(Q));
        CHECK(h == hurwitz_class_number(D));
    }
}

TEST_CASE("stabilizer order") {
    CHECK(stabilizer_order({1, 0, 1}) == 2);
    CHECK(stabilizer_order({1, 1, 1}) == 3);
    CHECK(stabilizer_order({1, 1, 6}) == 1);
    CHECK(stabilizer_order({3, 0, 3}) == 2);
    CHECK(brute_stabilizer({1, 1, 6}) == 1);
    CHECK(brute_stabilizer({1, 1, 1}) == 3);
    CHECK_THROWS_AS(stabilizer_order({1, 0, -1}), DomainError);
}

TEST_CASE("divisor sums") {
    CHECK(divisor_sigma1(1) == 1);
    CHECK(divisor_sigma1(6) == 12);
    CHECK(divisor_sigma1(100) == 217);
    CHECK(divisor_sigma(3, 2) == 9);
    CHECK_THROWS_AS(divisor_sigma1(0), DomainError);
}
