#ifndef NONGAUSS_CORMAT_HPP
#define NONGAUSS_CORMAT_HPP

#include <cstddef>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "nongauss/randsource.hpp"

namespace nongauss {

enum class CorMethod { constant, constant_noised, random, toeplitz };

CorMethod parse_cor_method(const std::string& name);

struct CorParams {
  double alpha = 0.5;               // constant, constant_noised
  std::optional<double> epsilon;    // constant_noised; default (1 - alpha) / 2
  double rho = 0.5;                 // toeplitz
};

Eigen::MatrixXd cormat_constant(std::size_t n, double alpha);
Eigen::MatrixXd cormat_constant_noised(std::size_t n, double alpha, std::optional<double> epsilon,
                                       RngStream& rng);
Eigen::MatrixXd cormat_random(std::size_t n, RngStream& rng);
Eigen::MatrixXd cormat_toeplitz(std::size_t n, double rho);

Eigen::MatrixXd cormatgen(CorMethod method, std::size_t n, const CorParams& params, RngStream& rng);

/// Symmetric, unit diagonal, |off-diagonal| < 1, smallest eigenvalue > tol.
bool is_correlation_matrix(const Eigen::MatrixXd& r, double tol = 1e-10);

}  // namespace nongauss

#endif  // NONGAUSS_CORMAT_HPP
