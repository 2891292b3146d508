/*
   Copyright 2026 The expfunc Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include "expfunc/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace expfunc {

inline constexpr double kQuadratureRelTol = 1e-10;

/// Adaptive Gauss-Kronrod over [a, b]; either bound may be infinite.
/// Throws QuadratureError when the error estimate exceeds rel_tol * L1 norm.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = kQuadratureRelTol) {
    if (a == b) return 0.0;
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, 25, rel_tol, &error, &l1);
    if (!std::isfinite(value) || error > rel_tol * l1 + std::numeric_limits<double>::min()) {
        std::ostringstream msg;
        msg << "quadrature on [" << a << ", " << b << "] missed tolerance " << rel_tol
            << " (value " << value << ", error estimate " << error << ")";
        throw QuadratureError(msg.str());
    }
    return value;
}

}  // namespace expfunc
