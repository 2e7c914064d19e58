#ifndef NONGAUSS_SPECIAL_HPP
#define NONGAUSS_SPECIAL_HPP

namespace nongauss {

double normal_cdf(double x);
/// Quantile of N(0,1); p is clamped to [1e-300, 1 - 1e-16].
double normal_quantile(double p);
double student_t_cdf(double x, double nu);
double student_t_quantile(double p, double nu);
/// Debye function D1(x) = (1/x) * int_0^x s / (e^s - 1) ds, x != 0.
double debye1(double x);

}  // namespace nongauss

#endif  // NONGAUSS_SPECIAL_HPP
