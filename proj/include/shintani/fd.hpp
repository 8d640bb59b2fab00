#pragma once

#include "shintani/numeric.hpp"

#include <functional>

namespace shintani {

struct FdResult {
    Complex xi;       // xi_kappa f = 2 i y^kappa conj(d f / d zbar)
    Complex laplace;  // Delta_kappa f = -y^2 (f_xx + f_yy) + i kappa y (f_x + i f_y)
};

// Central differences at steps h and h/2 combined by Richardson extrapolation.
FdResult fd_operators(const std::function<Complex(const Complex&)>& f, int kappa, const Complex& z,
                      const Real& step = Real("1e-3"));

}  // namespace shintani
