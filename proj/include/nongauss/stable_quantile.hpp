#ifndef NONGAUSS_STABLE_QUANTILE_HPP
#define NONGAUSS_STABLE_QUANTILE_HPP

#include <vector>

namespace nongauss {

/**
 * Quantile of the positive stable law with Laplace transform exp(-s^alpha),
 * 0 < alpha <= 1. The CDF comes from Kanter's integral representation
 *   F(x) = (1/pi) int_0^pi exp(-A(phi) x^(-alpha/(1-alpha))) dphi
 * tabulated on a log-x grid; quantiles interpolate the table and fall back to
 * the Pareto-type asymptote beyond its upper end.
 */
class PositiveStableQuantile {
public:
  explicit PositiveStableQuantile(double alpha, std::size_t grid = 4096);

  double alpha() const { return alpha_; }
  double cdf(double x) const;
  double operator()(double u) const;

private:
  double alpha_;
  std::vector<double> logx_;
  std::vector<double> f_;
};

}  // namespace nongauss

#endif  // NONGAUSS_STABLE_QUANTILE_HPP
