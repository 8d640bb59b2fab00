#include "shintani/fd.hpp"

#include <boost/math/special_functions/fpclassify.hpp>

namespace shintani {

namespace {
void require_finite(const Complex& v) {
    if (!boost::math::isfinite(v.real()) || !boost::math::isfinite(v.imag()))
        throw DomainError("fd_operators: non-finite sample");
}
}  // namespace

FdResult fd_operators(const std::function<Complex(const Complex&)>& f, int kappa, const Complex& z,
                      const Real& step) {
    const Complex f0 = f(z);
    require_finite(f0);
    struct Diffs { Complex dx, dy, dxx, dyy; };
    auto diffs = [&](const Real& h) {
        Complex px = f(z + Complex(h, 0)), mx = f(z - Complex(h, 0));
        Complex py = f(z + Complex(0, h)), my = f(z - Complex(0, h));
        for (const auto& v : {px, mx, py, my}) require_finite(v);
        return Diffs{(px - mx) / (2 * h), (py - my) / (2 * h), (px - Real(2) * f0 + mx) / (h * h),
                     (py - Real(2) * f0 + my) / (h * h)};
    };
    Diffs a = diffs(step), b = diffs(step / 2);
    auto rich = [](const Complex& coarse, const Complex& fine) { return (Real(4) * fine - coarse) / Real(3); };
    Complex fx = rich(a.dx, b.dx), fy = rich(a.dy, b.dy), fxx = rich(a.dxx, b.dxx), fyy = rich(a.dyy, b.dyy);
    const Real y = z.imag();
    const Complex I(0, 1);
    Complex dzbar = (fx + I * fy) / Real(2);
    FdResult out;
    out.xi = Real(2) * I * pow(y, kappa) * std::conj(dzbar);
    out.laplace = -y * y * (fxx + fyy) + I * Real(kappa) * y * (fx + I * fy);
    return out;
}

}  // namespace shintani
