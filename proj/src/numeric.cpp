#include "shintani/numeric.hpp"

#include <boost/math/constants/constants.hpp>

namespace shintani {

Real Precision::eps() const { return pow(Real(10), -working_digits); }

double Precision::ei_pos_crossover() const {
    if (ei_series_max_pos > 0) return ei_series_max_pos;
    // the asymptotic series' smallest term is about sqrt(2 pi y) e^{-y}
    return (working_digits + 3) * std::log(10.0) + 5.0;
}

Real pi() { return boost::math::constants::pi<Real>(); }
Real euler_gamma() { return boost::math::constants::euler<Real>(); }

Real to_real(const BigInt& n) { return Real(n.str()); }
Real to_real(const Rational& q) {
    return to_real(BigInt(numerator(q))) / to_real(BigInt(denominator(q)));
}

std::string to_string(const Real& x, int digits) {
    return x.str(digits, std::ios_base::fmtflags(0));
}

std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace shintani
