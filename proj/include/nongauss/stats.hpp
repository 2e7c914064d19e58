#ifndef NONGAUSS_STATS_HPP
#define NONGAUSS_STATS_HPP

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nongauss {

/// Kendall tau-b, O(t log t) (Knight's merge-sort algorithm).
double kendall_tau(std::span<const double> x, std::span<const double> y);
/// Pearson correlation of mid-ranks.
double spearman_rho(std::span<const double> x, std::span<const double> y);
double pearson(std::span<const double> x, std::span<const double> y);

/// Mid-ranks (1-based, ties averaged).
std::vector<double> ranks(std::span<const double> x);

/// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
double ks_statistic(std::span<const double> x, const std::function<double(double)>& cdf);
double ks_uniform(std::span<const double> x);
double ks_normal(std::span<const double> x);

double median(std::vector<double> v);
double mean(std::span<const double> x);

/// Covariance with 1/t normalisation.
Eigen::MatrixXd covariance(const Eigen::MatrixXd& x);
Eigen::MatrixXd correlation(const Eigen::MatrixXd& x);
Eigen::MatrixXd spearman_matrix(const Eigen::MatrixXd& x);

inline std::span<const double> column(const Eigen::MatrixXd& x, Eigen::Index j) {
  return {x.data() + j * x.rows(), static_cast<std::size_t>(x.rows())};
}

}  // namespace nongauss

#endif  // NONGAUSS_STATS_HPP
