#include "shintani/qforms.hpp"

#include "shintani/specfun.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace shintani {

Mat2 mat2(long long a, long long b, long long c, long long d) {
    Mat2 m;
    m << a, b, c, d;
    return m;
}

Mat2 mat2_inverse(const Mat2& m) { return mat2(m(1, 1), -m(0, 1), -m(1, 0), m(0, 0)); }

QForm act(const Mat2& g, const QForm& Q) {
    const long long al = g(0, 0), be = g(0, 1), ga = g(1, 0), de = g(1, 1);
    return {Q.a * de * de - Q.b * de * ga + Q.c * ga * ga,
            -2 * Q.a * de * be + Q.b * (de * al + be * ga) - 2 * Q.c * ga * al,
            Q.a * be * be - Q.b * al * be + Q.c * al * al};
}

}  // namespace shintani

namespace shintani::qforms {

namespace {

long long floor_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

long long mod_pos(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

const Mat2 S_mat = mat2(0, -1, 1, 0);
Mat2 T_pow(long long n) { return mat2(1, n, 0, 1); }

void check_disc(long long disc) {
    if (disc == 0) throw DomainError("discriminant 0 is not supported");
    long long r = mod_pos(disc, 4);
    if (r != 0 && r != 1) throw DomainError("discriminant must be 0 or 1 mod 4");
}

}  // namespace

bool is_square(long long n) {
    if (n < 0) return false;
    long long s = isqrt(n);
    return s * s == n;
}

long long isqrt(long long n) {
    if (n < 0) throw DomainError("isqrt of negative");
    long long s = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (s * s > n) --s;
    while ((s + 1) * (s + 1) <= n) ++s;
    return s;
}

long long gcd3(long long a, long long b, long long c) { return std::gcd(std::gcd(a, b), c); }

bool is_reduced_indefinite(const QForm& Q) {
    const long long D = Q.disc();
    if (D <= 0 || is_square(D)) return false;
    const long long b = Q.b, A = 2 * std::llabs(Q.a);
    if (b <= 0 || b * b >= D) return false;  // 0 < b < sqrt D
    if ((b + A) * (b + A) <= D) return false;  // sqrt D - 2|a| < b
    if (A - b > 0 && (A - b) * (A - b) >= D) return false;  // 2|a| - sqrt D < b
    return true;
}

Reduced rho(const QForm& Q) {
    const long long D = Q.disc();
    if (Q.c == 0) throw DomainError("rho undefined for c = 0");
    const long long s = isqrt(D), m = 2 * std::llabs(Q.c);
    long long bp;
    if (std::llabs(Q.c) > s) {
        bp = mod_pos(-Q.b, m);
        if (bp > m / 2) bp -= m;  // into (-|c|, |c|]
    } else {
        bp = s - mod_pos(s + Q.b, m);  // largest b' < sqrt D with b' = -b mod 2|c|
    }
    // S then T^n: (c, -b, a) -> (c, -b - 2cn, ...)
    const long long n = (-Q.b - bp) / (2 * Q.c);
    Mat2 g = T_pow(n) * S_mat;
    return {act(g, Q), g};
}

Reduced reduce(const QForm& Q) {
    const long long D = Q.disc();
    if (D == 0) throw DomainError("reduce: discriminant 0 rejected");
    Mat2 M = Mat2::Identity();
    QForm F = Q;
    if (D < 0) {
        if (F.a < 0) throw DomainError("reduce: negative definite input; negate first");
        while (true) {
            // b into (-a, a]
            long long n = -floor_div(F.a - F.b, 2 * F.a);
            if (n != 0) {
                Mat2 g = T_pow(n);
                F = act(g, F);
                M = g * M;
            }
            if (F.a > F.c) {
                F = act(S_mat, F);
                M = S_mat * M;
                continue;
            }
            if (F.a == F.c && F.b < 0) {
                F = act(S_mat, F);
                M = S_mat * M;
            }
            break;
        }
        return {F, M};
    }
    if (is_square(D)) throw DomainError("reduce: square discriminant; use reduce_square");
    if (F.c == 0 || F.a == 0) throw DomainError("reduce: degenerate coefficients for non-square discriminant");
    for (int it = 0; it < 100000 && !is_reduced_indefinite(F); ++it) {
        auto r = rho(F);
        F = r.form;
        M = r.transform * M;
    }
    if (!is_reduced_indefinite(F)) throw std::runtime_error("reduce: rho iteration did not terminate");
    return {F, M};
}

Reduced reduce_square(const QForm& Q) {
    const long long D = Q.disc();
    if (D <= 0 || !is_square(D)) throw DomainError("reduce_square: discriminant must be a positive square");
    const long long f = isqrt(D);
    Mat2 M = Mat2::Identity();
    // first root w1 = (-b - f)/(2a) (infinity when a = 0, b > 0); send it to infinity
    if (!(Q.a == 0 && Q.b > 0)) {
        long long p, q;
        if (Q.a == 0) {
            p = -Q.c;
            q = Q.b;
        } else {
            p = -Q.b - f;
            q = 2 * Q.a;
        }
        long long g = std::gcd(p, q);
        p /= g;
        q /= g;
        if (q < 0) {
            p = -p;
            q = -q;
        }
        // row 2 = (q, -p); row 1 = (x, y) with -p x - q y = 1
        long long x0 = 1, y0 = 0, x1 = 0, y1 = 1, r0 = -p, r1 = -q;
        while (r1 != 0) {
            long long t = r0 / r1;
            std::tie(r0, r1) = std::make_pair(r1, r0 - t * r1);
            std::tie(x0, x1) = std::make_pair(x1, x0 - t * x1);
            std::tie(y0, y1) = std::make_pair(y1, y0 - t * y1);
        }
        if (r0 < 0) {
            x0 = -x0;
            y0 = -y0;
        }
        M = mat2(x0, y0, q, -p);
    }
    QForm F = act(M, Q);
    if (F.a != 0 || F.b != f) throw std::logic_error("reduce_square: root not sent to infinity");
    // translation (0, f, c) -> (0, f, c - f n)
    long long n = floor_div(F.c, f);
    Mat2 g = T_pow(n);
    F = act(g, F);
    M = g * M;
    return {F, M};
}

std::vector<QForm> cycle(const QForm& reduced) {
    if (!is_reduced_indefinite(reduced)) throw DomainError("cycle: form is not reduced");
    std::vector<QForm> out{reduced};
    QForm F = rho(reduced).form;
    while (F != reduced) {
        out.push_back(F);
        F = rho(F).form;
        if (out.size() > 1000000) throw std::runtime_error("cycle: runaway");
    }
    return out;
}

bool equivalent(const QForm& P, const QForm& Q) {
    if (P.disc() != Q.disc()) return false;
    const long long D = P.disc();
    if (D < 0) {
        if ((P.a > 0) != (Q.a > 0)) return false;
        if (P.a < 0) return reduce({-P.a, -P.b, -P.c}).form == reduce({-Q.a, -Q.b, -Q.c}).form;
        return reduce(P).form == reduce(Q).form;
    }
    if (is_square(D)) return reduce_square(P).form == reduce_square(Q).form;
    auto cyc = cycle(reduce(P).form);
    QForm q = reduce(Q).form;
    return std::find(cyc.begin(), cyc.end(), q) != cyc.end();
}

ClassList class_reps(long long disc) {
    check_disc(disc);
    ClassList out;
    out.disc = disc;
    if (disc < 0) {
        out.regime = Regime::definite;
        const long long D = -disc;
        for (long long a = 1; 3 * a * a <= D; ++a)
            for (long long b = -a + 1; b <= a; ++b) {
                long long num = b * b + D;
                if (num % (4 * a) != 0) continue;
                long long c = num / (4 * a);
                if (c < a || (c == a && b < 0)) continue;
                out.reps.push_back({a, b, c});
            }
        std::sort(out.reps.begin(), out.reps.end());
        return out;
    }
    if (is_square(disc)) {
        out.regime = Regime::square;
        const long long f = isqrt(disc);
        for (long long c = 0; c < f; ++c) out.reps.push_back({0, f, c});
        return out;
    }
    out.regime = Regime::indefinite_nonsquare;
    const long long s = isqrt(disc);
    std::vector<QForm> reduced;
    for (long long b = 1; b <= s; ++b) {
        if (mod_pos(b - disc, 2) != 0) continue;
        long long ac = (b * b - disc) / 4;  // negative
        for (long long a = 1; a <= -ac; ++a) {
            if ((-ac) % a != 0) continue;
            long long c = ac / a;
            for (long long sa : {a, -a}) {
                QForm F{sa, b, sa == a ? c : -c};
                if (is_reduced_indefinite(F)) reduced.push_back(F);
            }
        }
    }
    std::sort(reduced.begin(), reduced.end());
    std::vector<bool> used(reduced.size(), false);
    for (size_t i = 0; i < reduced.size(); ++i) {
        if (used[i]) continue;
        auto cyc = cycle(reduced[i]);
        for (const auto& F : cyc) {
            auto it = std::lower_bound(reduced.begin(), reduced.end(), F);
            if (it == reduced.end() || *it != F) throw std::logic_error("class_reps: cycle left reduced set");
            used[it - reduced.begin()] = true;
        }
        // canonical rotation: smallest form of the cycle, which is reduced[i] by sort order
        out.reps.push_back(reduced[i]);
    }
    return out;
}

std::pair<BigInt, BigInt> pell_fundamental(long long disc) {
    if (disc <= 0 || is_square(disc)) throw DomainError("pell_fundamental: need positive non-square discriminant");
    // x^2 - disc y^2 = 1 by the continued fraction of sqrt(disc)
    const long long a0 = isqrt(disc);
    long long m = 0, dd = 1, a = a0;
    BigInt hp = 1, h = a0, kp = 0, k = 1;
    while (h * h - BigInt(disc) * k * k != 1) {
        m = dd * a - m;
        dd = (disc - m * m) / dd;
        a = (a0 + m) / dd;
        BigInt hn = a * h + hp, kn = a * k + kp;
        hp = h;
        h = hn;
        kp = k;
        k = kn;
    }
    // the fundamental solution of t^2 - disc u^2 = 4 satisfies ((t + u sqrt disc)/2)^j = h + k sqrt disc, j in {1,2,3}
    auto valid = [&](const BigInt& t, const BigInt& u) { return t > 0 && u > 0 && t * t - BigInt(disc) * u * u == 4; };
    for (int j : {3, 2}) {
        BigInt t;
        if (j == 3) {
            // integer root of t^3 - 3t - 2h = 0 near cbrt(2h)
            Real guess = cbrt(to_real(BigInt(2 * h)));
            t = guess.convert_to<BigInt>();
            for (BigInt cand = t - 2; cand <= t + 2; ++cand) {
                if (cand * cand * cand - 3 * cand == 2 * h) {
                    t = cand;
                    break;
                }
            }
            if (t * t * t - 3 * t != 2 * h) continue;
        } else {
            BigInt sq = 2 * h + 2;
            t = mp::sqrt(sq);
            if (t * t != sq) continue;
        }
        BigInt u2 = t * t - 4;
        if (u2 % disc != 0) continue;
        BigInt u = mp::sqrt(BigInt(u2 / disc));
        if (valid(t, u)) return {t, u};
    }
    return {2 * h, 2 * k};
}

Automorph automorph_generator(const QForm& Q) {
    const long long D = Q.disc();
    if (D <= 0 || is_square(D)) throw DomainError("automorph_generator: need positive non-square discriminant");
    auto [t, u] = pell_fundamental(D);
    BigInt e00 = (t - BigInt(Q.b) * u) / 2, e01 = -BigInt(Q.c) * u, e10 = BigInt(Q.a) * u,
           e11 = (t + BigInt(Q.b) * u) / 2;
    const BigInt lim = BigInt(1) << 62;
    for (const BigInt* e : {&e00, &e01, &e10, &e11})
        if (abs(*e) >= lim) throw std::overflow_error("automorph_generator: entries exceed 64-bit range");
    Automorph out;
    out.matrix = mat2(static_cast<long long>(e00), static_cast<long long>(e01), static_cast<long long>(e10),
                      static_cast<long long>(e11));
    out.t = t;
    out.u = u;
    return out;
}

int genus_char(long long delta, const QForm& Q, GenusOptions opt) {
    if (!specfun::is_fundamental_discriminant(delta)) throw DomainError("genus_char: delta not fundamental");
    if (Q.disc() % delta != 0) throw DomainError("genus_char: disc(Q) not divisible by delta");
    if (delta == 1) return 1;
    if (std::gcd(gcd3(Q.a, Q.b, Q.c), delta) != 1) return 0;
    for (int r = 0; r <= opt.search_radius; ++r) {
        // shell max(|x|, |y|) = r
        for (long long x = -r; x <= r; ++x)
            for (long long y = -r; y <= r; ++y) {
                if (std::max(std::llabs(x), std::llabs(y)) != r) continue;
                long long n = Q(x, y);
                if (n == 0 || std::gcd(n, delta) != 1) continue;
                return specfun::kronecker_symbol(delta, n);
            }
    }
    throw std::runtime_error("genus_char: no represented value coprime to delta within search radius");
}

Rational hurwitz_class_number(long long D) {
    if (D < 0) throw DomainError("hurwitz_class_number requires D >= 0");
    if (D == 0) return Rational(-1, 12);
    if (D % 4 == 1 || D % 4 == 2) return Rational(0);
    Rational h(0);
    for (const auto& F : class_reps(-D).reps) h += Rational(1, stabilizer_order(F));
    return h;
}

int stabilizer_order(const QForm& Q) {
    if (Q.disc() >= 0 || Q.a <= 0) throw DomainError("stabilizer_order requires a positive definite form");
    QForm F = reduce(Q).form;
    if (F.a == F.b && F.b == F.c) return 3;
    if (F.b == 0 && F.a == F.c) return 2;
    return 1;
}

BigInt divisor_sigma(int k, long long n) {
    if (n <= 0) throw DomainError("divisor_sigma requires n >= 1");
    BigInt s = 0;
    for (long long dv = 1; dv * dv <= n; ++dv) {
        if (n % dv) continue;
        s += ipow(BigInt(dv), k);
        long long other = n / dv;
        if (other != dv) s += ipow(BigInt(other), k);
    }
    return s;
}

}  // namespace shintani::qforms
