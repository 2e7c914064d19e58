#include "nongauss/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

namespace nongauss {

double normal_cdf(double x) { return 0.5 * boost::math::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  p = std::clamp(p, 1e-300, 1.0 - 1e-16);
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double student_t_cdf(double x, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("t distribution: nu must be > 0");
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  return boost::math::cdf(boost::math::students_t_distribution<double>(nu), x);
}

double student_t_quantile(double p, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("t distribution: nu must be > 0");
  p = std::clamp(p, 1e-300, 1.0 - 1e-16);
  return boost::math::quantile(boost::math::students_t_distribution<double>(nu), p);
}

double debye1(double x) {
  if (x == 0.0 || !std::isfinite(x)) throw std::invalid_argument("debye1: x must be finite and nonzero");
  if (x < 0.0) return debye1(-x) - 0.5 * x;
  auto f = [](double s) { return s < 1e-8 ? 1.0 - 0.5 * s : s / std::expm1(s); };
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, x, 15, 1e-14);
  return integral / x;
}

}  // namespace nongauss
