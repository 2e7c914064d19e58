#include "nongauss/stable_quantile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace nongauss {

namespace {
double kanter_a(double alpha, double phi) {
  const double sa = std::sin(alpha * phi);
  return std::pow(sa / std::sin(phi), 1.0 / (1.0 - alpha)) * std::sin((1.0 - alpha) * phi) / sa;
}
}  // namespace

PositiveStableQuantile::PositiveStableQuantile(double alpha, std::size_t grid) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("stable quantile: alpha must be in (0,1]");
  if (alpha_ == 1.0) return;
  if (grid < 16) throw std::invalid_argument("stable quantile: grid too small");

  double lo = -1.0, hi = 1.0;
  while (cdf(std::exp(lo)) > 1e-14 && lo > -700.0) lo *= 2.0;
  while (cdf(std::exp(hi)) < 1.0 - 1e-10 && hi < 700.0) hi *= 2.0;

  logx_.resize(grid);
  f_.resize(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    logx_[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid - 1);
    f_[i] = cdf(std::exp(logx_[i]));
  }
  // Quadrature noise must not break monotonicity.
  for (std::size_t i = 1; i < grid; ++i) f_[i] = std::max(f_[i], f_[i - 1]);
}

double PositiveStableQuantile::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (alpha_ == 1.0) return x >= 1.0 ? 1.0 : 0.0;
  const double p = std::pow(x, -alpha_ / (1.0 - alpha_));
  auto f = [&](double phi) {
    if (phi <= 0.0) return std::exp(-std::pow(alpha_, alpha_ / (1.0 - alpha_)) * (1.0 - alpha_) * p);
    if (phi >= std::numbers::pi) return 0.0;
    return std::exp(-kanter_a(alpha_, phi) * p);
  };
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, std::numbers::pi, 12, 1e-12);
  return std::clamp(v / std::numbers::pi, 0.0, 1.0);
}

double PositiveStableQuantile::operator()(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("stable quantile: u must be in (0,1)");
  if (alpha_ == 1.0) return 1.0;
  if (u >= f_.back()) {
    // P(S > x) ~ x^-alpha / Gamma(1 - alpha)
    const double tail = (1.0 - u) * boost::math::tgamma(1.0 - alpha_);
    return std::max(std::pow(tail, -1.0 / alpha_), std::exp(logx_.back()));
  }
  if (u <= f_.front()) return std::exp(logx_.front());
  const auto it = std::upper_bound(f_.begin(), f_.end(), u);
  const std::size_t j = static_cast<std::size_t>(it - f_.begin());
  const double f0 = f_[j - 1], f1 = f_[j];
  const double w = f1 > f0 ? (u - f0) / (f1 - f0) : 0.5;
  return std::exp(logx_[j - 1] + w * (logx_[j] - logx_[j - 1]));
}

}  // namespace nongauss
