#include "shintani/hyperbolic.hpp"

namespace shintani::hyperbolic {

CMPoint cm_point(const QForm& Q) {
    const long long D = Q.disc();
    if (D >= 0 || Q.a <= 0) throw DomainError("cm_point requires a positive definite form");
    Real den = 2 * Real(Q.a);
    return {Complex(Real(-Q.b) / den, sqrt(Real(-D)) / den), Q};
}

Geodesic geodesic_of(const QForm& Q) {
    const long long D = Q.disc();
    if (D <= 0) throw DomainError("geodesic_of requires a positive discriminant");
    Geodesic g;
    g.source = Q;
    if (Q.a == 0) {
        g.vertical = true;
        BoundaryPoint foot{Real(-Q.c) / Real(Q.b), false};
        BoundaryPoint top{Real(0), true};
        if (Q.b > 0) {
            g.start = top;
            g.end = foot;
        } else {
            g.start = foot;
            g.end = top;
        }
        return g;
    }
    Real s = sqrt(Real(D)), den = 2 * Real(Q.a);
    g.start = {(-Real(Q.b) - s) / den, false};
    g.end = {(-Real(Q.b) + s) / den, false};
    return g;
}

BoundaryPoint apply_moebius(const Moebius& g, const BoundaryPoint& w) {
    const Real a(g(0, 0)), b(g(0, 1)), c(g(1, 0)), d(g(1, 1));
    if (w.infinite) {
        if (c == 0) return {Real(0), true};
        return {a / c, false};
    }
    Real den = c * w.x + d;
    if (den == 0) return {Real(0), true};
    return {(a * w.x + b) / den, false};
}

}  // namespace shintani::hyperbolic
