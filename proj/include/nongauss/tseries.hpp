#ifndef NONGAUSS_TSERIES_HPP
#define NONGAUSS_TSERIES_HPP

#include <cstddef>
#include <span>

namespace nongauss {

enum class Detrend { linear, mean };

/**
 * Multifractal DFA Hurst exponent. For i = 1..N the series is cut into i
 * windows of length ceil(t/i) (the last one shifted back to end at t), each
 * window is detrended, and Delta(tau) = mean over windows of mean((res^2)^q).
 * H(q) is the OLS slope of log Delta against log tau over i = 2..N, over 2q.
 */
double dfa_hurst(std::span<const double> y, double q, std::size_t n_max, Detrend model = Detrend::linear);

/// Lag-tau autocovariance of the centred series, (1/(t-tau)) sum z_i z_{i+tau}.
double acf(std::span<const double> z, std::size_t tau);
/// Third order: (1/(t-m)) sum z_i z_{i+tau1} z_{i+tau2}, m = max lag.
double acf3(std::span<const double> z, std::size_t tau1, std::size_t tau2);
/// Fourth order: raw 4-lag average minus the three pair-product corrections over the same range.
double acf4(std::span<const double> z, std::size_t tau1, std::size_t tau2, std::size_t tau3);

/// Normalised cross correlation sum z_i w_{i+tau} / (sigma_z sigma_w (t-tau)),
/// mean and sigma taken over the overlapping segments.
double cross_acc(std::span<const double> z, std::span<const double> w, std::size_t tau);
double cross_acc3(std::span<const double> z, std::span<const double> w, std::span<const double> v,
                  std::size_t tau1, std::size_t tau2);

}  // namespace nongauss

#endif  // NONGAUSS_TSERIES_HPP
