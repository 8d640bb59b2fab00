#pragma once

#include "shintani/numeric.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <compare>
#include <vector>

namespace shintani {

using Mat2 = Eigen::Matrix<long long, 2, 2>;

Mat2 mat2(long long a, long long b, long long c, long long d);
Mat2 mat2_inverse(const Mat2& m);  // det 1 assumed

struct QForm {
    long long a = 0, b = 0, c = 0;
    long long disc() const { return b * b - 4 * a * c; }
    long long operator()(long long x, long long y) const { return a * x * x + b * x * y + c * y * y; }
    auto operator<=>(const QForm&) const = default;
};

// Left action with roots transforming by Moebius: (g.Q)(x, y) = Q(g^{-1}(x, y)).
QForm act(const Mat2& g, const QForm& Q);

}  // namespace shintani

namespace shintani::qforms {

enum class Regime { definite, indefinite_nonsquare, square };

struct ClassList {
    long long disc = 0;
    std::vector<QForm> reps;
    Regime regime = Regime::definite;
};

struct Reduced {
    QForm form;
    Mat2 transform;  // act(transform, input) == form
};

struct Automorph {
    Mat2 matrix;
    BigInt t, u;  // fundamental solution of t^2 - disc u^2 = 4
};

bool is_square(long long n);
long long isqrt(long long n);
long long gcd3(long long a, long long b, long long c);

bool is_reduced_indefinite(const QForm& Q);
// one step of the reduction operator rho; returns the matrix achieving it
Reduced rho(const QForm& Q);

// Definite (a > 0) or indefinite non-square reduction.
Reduced reduce(const QForm& Q);
// Square discriminant f^2: maps Q to its canonical representative (0, f, c), 0 <= c < f.
Reduced reduce_square(const QForm& Q);

// The full rho-cycle of a reduced indefinite form, starting with Q.
std::vector<QForm> cycle(const QForm& reduced);
bool equivalent(const QForm& P, const QForm& Q);

ClassList class_reps(long long disc);

std::pair<BigInt, BigInt> pell_fundamental(long long disc);
Automorph automorph_generator(const QForm& Q);

struct GenusOptions {
    int search_radius = 50;
};
int genus_char(long long delta, const QForm& Q, GenusOptions opt = {});

Rational hurwitz_class_number(long long D);
int stabilizer_order(const QForm& Q);
BigInt divisor_sigma(int k, long long n);
inline BigInt divisor_sigma1(long long n) { return divisor_sigma(1, n); }

}  // namespace shintani::qforms
