#ifndef NONGAUSS_SUBSETINJECT_HPP
#define NONGAUSS_SUBSETINJECT_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nongauss/copulas.hpp"
#include "nongauss/randsource.hpp"

namespace nongauss {

/**
 * Maps approximately Gaussian columns to independent uniforms. Columns are
 * standardised, rotated onto the eigenvectors of their empirical correlation
 * (eigenvalues ascending) and pushed through N(0, lambda_i) CDFs. The last
 * output column belongs to the largest eigenvalue.
 */
SampleMatrix norm2unif(const SampleMatrix& x);

/// With probability alpha per row, copies the last column into all others.
SampleMatrix unif_to_frechet(const SampleMatrix& u, double alpha, RngStream& rng);

/// Subset rows scaled by sqrt(nu / v0), v0 ~ chi2(nu), then mapped back to N(0,1) marginals.
SampleMatrix inject_tstudent(const SampleMatrix& x, std::span<const std::size_t> subset, int nu, RngStream& rng);

/// Frechet injection; alpha is the mean pairwise Spearman rho of the subset.
SampleMatrix inject_frechet(const SampleMatrix& x, std::span<const std::size_t> subset, RngStream& rng);

struct InjectionReport {
  double theta = 0.0;                // flat case, or parent parameter when nested
  std::vector<std::vector<std::size_t>> children;  // nested only, indices into the subset
  std::vector<double> child_thetas;
  double acceptance = 1.0;           // nested Clayton rejection acceptance rate
  bool clustering_fallback = false;
};

/// Archimedean injection. theta defaults to the value matching the subset's mean Spearman rho.
SampleMatrix inject_archimedean(const SampleMatrix& x, std::span<const std::size_t> subset, Family family,
                                std::optional<double> theta, RngStream& rng, InjectionReport* report = nullptr);

/// Nested Archimedean injection (Gumbel or Clayton); structure comes from getcors on the Spearman matrix.
SampleMatrix inject_nested_archimedean(const SampleMatrix& x, std::span<const std::size_t> subset, Family family,
                                       RngStream& rng, InjectionReport* report = nullptr);

/// Naive baseline: subset replaced by a fresh N(0, R_sub) draw independent of the other columns.
SampleMatrix naive_resample(const SampleMatrix& x, std::span<const std::size_t> subset, RngStream& rng);

struct CorPartition {
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<double> rho;
  double rho0 = 0.0;
  double penalty = 0.0;
  bool fallback = false;  // found by average-linkage clustering instead of exhaustive search
};

inline constexpr std::size_t kGetcorsExhaustiveMax = 8;

/// Block partition (all blocks >= 2, at least two blocks) minimising ||C - C_theor||_F
/// subject to every in-block mean exceeding the between-block mean.
CorPartition getcors(const Eigen::MatrixXd& c);

/// ||cov(X) - cov(X')||_F / ||cov(X)||_F.
double cov_change_delta(const SampleMatrix& x, const SampleMatrix& x2);

/// Mean off-diagonal entry.
double mean_offdiagonal(const Eigen::MatrixXd& c);

}  // namespace nongauss

#endif  // NONGAUSS_SUBSETINJECT_HPP
