#include "nongauss/cormat.hpp"

#include <cmath>
#include <stdexcept>

namespace nongauss {

namespace {
void check_n(std::size_t n) {
  if (n < 2) throw std::invalid_argument("correlation matrix needs n >= 2");
}
void check_open_unit(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument(std::string(what) + " must be in (0,1)");
}

Eigen::MatrixXd unit_diagonal(const Eigen::MatrixXd& m) {
  const Eigen::VectorXd inv = m.diagonal().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd r = inv.asDiagonal() * m * inv.asDiagonal();
  r.diagonal().setOnes();
  return 0.5 * (r + r.transpose());
}
}  // namespace

CorMethod parse_cor_method(const std::string& name) {
  if (name == "constant") return CorMethod::constant;
  if (name == "constant_noised" || name == "constant-noised") return CorMethod::constant_noised;
  if (name == "random") return CorMethod::random;
  if (name == "toeplitz") return CorMethod::toeplitz;
  throw std::invalid_argument("unknown correlation method: " + name);
}

Eigen::MatrixXd cormat_constant(std::size_t n, double alpha) {
  check_n(n);
  check_open_unit(alpha, "alpha");
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd r = Eigen::MatrixXd::Constant(m, m, alpha);
  r.diagonal().setOnes();
  return r;
}

Eigen::MatrixXd cormat_constant_noised(std::size_t n, double alpha, std::optional<double> epsilon,
                                       RngStream& rng) {
  Eigen::MatrixXd r = cormat_constant(n, alpha);
  const double eps = epsilon.value_or(0.5 * (1.0 - alpha));
  if (!(eps >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
  const auto m = r.rows();
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double v = alpha + eps * (2.0 * rng.uniform() - 1.0);
      r(i, j) = r(j, i) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
  if (es.eigenvalues().minCoeff() >= 1e-6) return r;
  // Noise broke definiteness: clip the spectrum and rescale to unit diagonal.
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(1e-6);
  const Eigen::MatrixXd fixed = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
  return unit_diagonal(fixed);
}

Eigen::MatrixXd cormat_random(std::size_t n, RngStream& rng) {
  check_n(n);
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) a(i, j) = rng.uniform();
  return unit_diagonal(a * a.transpose());
}

Eigen::MatrixXd cormat_toeplitz(std::size_t n, double rho) {
  check_n(n);
  check_open_unit(rho, "rho");
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd r(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) r(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
  return r;
}

Eigen::MatrixXd cormatgen(CorMethod method, std::size_t n, const CorParams& params, RngStream& rng) {
  switch (method) {
    case CorMethod::constant:
      return cormat_constant(n, params.alpha);
    case CorMethod::constant_noised:
      return cormat_constant_noised(n, params.alpha, params.epsilon, rng);
    case CorMethod::random:
      return cormat_random(n, rng);
    case CorMethod::toeplitz:
      return cormat_toeplitz(n, params.rho);
  }
  throw std::invalid_argument("unknown correlation method");
}

bool is_correlation_matrix(const Eigen::MatrixXd& r, double tol) {
  if (r.rows() != r.cols() || r.rows() < 1) return false;
  const auto n = r.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(r(i, i) - 1.0) > tol) return false;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(r(i, j) - r(j, i)) > tol) return false;
      if (i != j && !(std::abs(r(i, j)) < 1.0)) return false;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > tol;
}

}  // namespace nongauss
