#ifndef NONGAUSS_COPULAS_HPP
#define NONGAUSS_COPULAS_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nongauss/randsource.hpp"

namespace nongauss {

enum class Family { gaussian, tstudent, frechet1, frechet2, gumbel, clayton, frank, amh };

Family parse_family(const std::string& name);
std::string family_name(Family f);
bool is_archimedean(Family f);

struct NestedChild {
  std::vector<std::size_t> indices;  // 0-based marginals driven by this child
  double theta = 1.0;
};

struct CopulaSpec {
  Family family = Family::gaussian;
  std::size_t n = 2;          // ignored for elliptical families (taken from r)
  Eigen::MatrixXd r;          // gaussian, tstudent
  int nu = 1;                 // tstudent
  double alpha = 0.0;         // frechet1, frechet2
  double beta = 0.0;          // frechet2
  double theta = 1.0;         // archimedean (parent when nested)
  std::vector<NestedChild> children;
};

/// Archimedean generator and its inverse, closed forms.
double psi(Family f, double theta, double v);
double psi_inv(Family f, double theta, double x);

/// Bivariate copula CDF C(u, v) for the one-parameter families.
double copula_cdf(Family f, double theta, double u, double v);

/// Throws unless theta lies in the bivariate (n == 2) or Marshall-Olkin (n > 2) range.
void check_theta(Family f, double theta, std::size_t n);
bool theta_in_mo_range(Family f, double theta);

/// Latent variable of the Marshall-Olkin construction: the law whose Laplace transform is psi.
double sample_latent(Family f, double theta, RngStream& rng);
/// Quantile of that latent law.
class LatentQuantile {
public:
  LatentQuantile(Family f, double theta);
  ~LatentQuantile();
  LatentQuantile(LatentQuantile&&) noexcept;
  LatentQuantile& operator=(LatentQuantile&&) noexcept;
  double operator()(double u) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SampleMatrix sample_copula(const CopulaSpec& spec, std::size_t t, RngStream& rng);
SampleMatrix sample_archimedean(Family f, double theta, std::size_t n, std::size_t t, RngStream& rng);
SampleMatrix sample_bivariate_archimedean(Family f, double theta, std::size_t t, RngStream& rng);
SampleMatrix sample_frechet(double alpha, std::size_t n, std::size_t t, RngStream& rng);
SampleMatrix sample_frechet2(double alpha, double beta, std::size_t t, RngStream& rng);
SampleMatrix sample_gaussian_copula(const Eigen::MatrixXd& r, std::size_t t, RngStream& rng);
SampleMatrix sample_tstudent_copula(const Eigen::MatrixXd& r, int nu, std::size_t t, RngStream& rng);

/// u2 drawn from C(u2 | u1) = w.
double conditional_quantile(Family f, double theta, double u1, double w);

struct NestedStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  double acceptance() const { return proposals ? static_cast<double>(accepted) / proposals : 1.0; }
};

/**
 * Nested Archimedean sampler (Gumbel or Clayton). Child i drives `sizes[i]`
 * consecutive marginals with parameter thetas[i]; theta0 is the parent.
 */
SampleMatrix sample_nested_archimedean(Family f, std::span<const std::size_t> sizes,
                                       std::span<const double> thetas, double theta0, std::size_t t,
                                       RngStream& rng, NestedStats* stats = nullptr);

/// Child latent v_i given parent latent v0.
double sample_nested_child_latent(Family f, double theta0, double theta_child, double v0, RngStream& rng,
                                  NestedStats* stats = nullptr);
/// Inner transform x -> psi_{v0,theta0,theta_i}(-ln(x) / v_i).
double nested_child_transform(Family f, double theta0, double theta_child, double v0, double vi, double x);

// Dependence measures.
double tau_from_theta(Family f, double theta);
double theta_from_tau(Family f, double tau);
/// Spearman rho: 12 * int int C - 3 by adaptive quadrature.
double rho_from_theta(Family f, double theta);
double theta_from_rho(Family f, double rho);
double elliptical_tau(double r);
double elliptical_r_from_tau(double tau);
double gaussian_rho(double r);

/// (lower, upper) tail dependence.
std::pair<double, double> tail_dependence(const CopulaSpec& spec);
std::pair<double, double> tstudent_tail(int nu, double r);

}  // namespace nongauss

#endif  // NONGAUSS_COPULAS_HPP
