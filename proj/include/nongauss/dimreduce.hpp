#ifndef NONGAUSS_DIMREDUCE_HPP
#define NONGAUSS_DIMREDUCE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nongauss/cumulants.hpp"
#include "nongauss/symtensor.hpp"

namespace nongauss {

/// det(C2), the MEV target.
double mev_target(const Eigen::MatrixXd& c2);

/// det(contract_self(C_d)) / det(C2)^d.
double hdet_target(const BlockSymTensor& c2, const BlockSymTensor& cd);
/// log of hdet_target; -inf when the numerator determinant vanishes.
double log_hdet_target(const BlockSymTensor& c2, const BlockSymTensor& cd);

enum class Target { mev, hnorm, hdet };
Target parse_target(const std::string& name);
std::string target_name(Target t);

struct SelectionStep {
  std::size_t removed = 0;         // original index
  double target = 0.0;             // target on the remainder (log scale for mev and hdet)
  std::vector<std::size_t> remaining;
};

struct SelectionResult {
  std::vector<std::size_t> retained;  // original indices, ascending
  std::vector<SelectionStep> steps;
};

/// Greedy elimination down to s features. order is the cumulant order d used by hnorm/hdet.
SelectionResult select_features(const CumulantSet& cums, Target target, std::size_t order, std::size_t s);

struct EigenFactor {
  Eigen::MatrixXd factor;       // columns are unit eigenvectors
  Eigen::VectorXd eigenvalues;  // descending
};

/// Eigenvectors of contract_self(C_d), eigenvalues descending.
EigenFactor hosvd_factor(const BlockSymTensor& cd);
/// Covariance eigen decomposition (the SVD baseline), eigenvalues descending.
EigenFactor svd_factor(const Eigen::MatrixXd& c2);

struct AlsResult {
  Eigen::MatrixXd factor;   // n x n'
  std::vector<double> xi;   // objective after each iteration
  std::size_t iterations = 0;
  bool converged = false;
  bool monotone = true;     // xi never decreased beyond 1e-12 relative
};

AlsResult als_factor(const CumulantSet& cums, std::size_t order, std::size_t nprime, std::size_t max_iters = 100,
                     double tol = 1e-10);

/// ALS objective for a factor with orthonormal columns.
double als_objective(const CumulantSet& cums, std::size_t order, const Eigen::MatrixXd& a);

/// sqrt(sum_{i<k} a_{i,last}^2) / ||a_last||.
double nongauss_weight(const Eigen::MatrixXd& a, std::size_t k);

}  // namespace nongauss

#endif  // NONGAUSS_DIMREDUCE_HPP
