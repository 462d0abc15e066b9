#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "mmudn/errors.hpp"

namespace mmudn {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature on [a, b]; infinite limits are
/// allowed. A single-panel pass sizes the relative tolerance handed to the
/// adaptive pass so that it stops near `abs_tol`. Throws NumericError when
/// the error estimate exceeds `abs_tol`.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double abs_tol, const std::string& what) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  QuadratureResult r;
  double l1 = 0.0;
  r.value = GK::integrate(f, a, b, 0, 0.0, &r.error_estimate, &l1);
  if (l1 > 0.0) {
    const double rel = std::clamp(0.1 * abs_tol / l1, 1e-13, 1e-2);
    r.value = GK::integrate(f, a, b, 25, rel, &r.error_estimate, &l1);
  }
  if (!std::isfinite(r.value) || !(r.error_estimate <= abs_tol)) {
    std::ostringstream msg;
    msg << "quadrature did not converge for " << what << " on [" << a << ", " << b
        << "]: value=" << r.value << " error estimate=" << r.error_estimate << " tolerance=" << abs_tol;
    throw NumericError(msg.str());
  }
  return r;
}

}  // namespace mmudn
