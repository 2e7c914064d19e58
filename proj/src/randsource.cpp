#include "nongauss/randsource.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nongauss {

namespace {
std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x6e67u};
  return std::mt19937_64(seq);
}
}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(make_engine(seed, stream)) {}

double RngStream::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal(double mu, double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("normal: sigma must be >= 0");
  return std::normal_distribution<double>(mu, sigma)(engine_);
}

double RngStream::exponential() { return -std::log(uniform()); }

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
  return std::gamma_distribution<double>(shape, 1.0)(engine_);
}

double RngStream::chi_square(double nu) {
  if (!(nu >= 1.0)) throw std::invalid_argument("chi_square: nu must be >= 1");
  return 2.0 * gamma(0.5 * nu);
}

long RngStream::negative_binomial(double r, double p) {
  if (!(r > 0.0) || !(p > 0.0 && p < 1.0))
    throw std::invalid_argument("negative_binomial: need r > 0 and 0 < p < 1");
  // Gamma-Poisson mixture, valid for non-integer r.
  const double lambda = gamma(r) * (1.0 - p) / p;
  return static_cast<long>(std::poisson_distribution<long>(lambda)(engine_));
}

long RngStream::logarithmic(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("logarithmic: need 0 < p < 1");
  return logarithmic_log1mp(std::log1p(-p));
}

long RngStream::logarithmic_log1mp(double h) {
  if (!(h < 0.0)) throw std::invalid_argument("logarithmic: ln(1-p) must be < 0");
  // Kemp's LK algorithm.
  const double p = -std::expm1(h);
  const double u2 = uniform();
  if (u2 > p) return 1;
  const double q = -std::expm1(uniform() * h);
  if (u2 < q * q) {
    const double k = std::floor(1.0 + std::log(u2) / std::log(q));
    return k > 9.0e18 ? static_cast<long>(9.0e18) : static_cast<long>(k);
  }
  return u2 > q ? 1 : 2;
}

long RngStream::geometric(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("geometric: need 0 < p <= 1");
  if (p == 1.0) return 1;
  return 1 + static_cast<long>(std::floor(std::log(uniform()) / std::log1p(-p)));
}

double sample_levy(double alpha, double beta, RngStream& rng) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("levy: alpha must be in (0,2]");
  if (!(beta >= -1.0 && beta <= 1.0)) throw std::invalid_argument("levy: beta must be in [-1,1]");
  constexpr double half_pi = std::numbers::pi / 2.0;
  const double theta = std::numbers::pi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  if (alpha == 1.0) {
    return (2.0 / std::numbers::pi) *
           ((half_pi + beta * theta) * std::tan(theta) -
            beta * std::log(half_pi * w * std::cos(theta) / (half_pi + beta * theta)));
  }
  const double theta0 = std::atan(beta * std::tan(half_pi * alpha)) / alpha;
  return std::sin(alpha * (theta0 + theta)) /
         std::pow(std::cos(alpha * theta0) * std::cos(theta), 1.0 / alpha) *
         std::pow(std::cos(alpha * theta0 + (alpha - 1.0) * theta) / w, (1.0 - alpha) / alpha);
}

double sample_qgauss(double q, RngStream& rng) {
  if (!(q < 3.0)) throw std::invalid_argument("qgauss: q must be < 3");
  double u1 = rng.uniform();
  const double u2 = rng.uniform();
  const double qp = (q + 1.0) / (3.0 - q);
  if (std::abs(1.0 - qp) < 1e-12) {
    u1 = std::log(u1);
  } else {
    u1 = (std::pow(u1, 1.0 - qp) - 1.0) / (1.0 - qp);
  }
  const double beta = 3.0 - q;
  return std::sqrt(-2.0 * u1) * std::cos(2.0 * std::numbers::pi * u2) / std::sqrt(beta);
}

Eigen::MatrixXd symmetric_factor(const Eigen::MatrixXd& r) {
  if (r.rows() != r.cols() || r.rows() == 0) throw std::invalid_argument("matrix must be square");
  if (!r.isApprox(r.transpose(), 1e-10)) throw std::invalid_argument("matrix must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(r);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigen decomposition failed");
  Eigen::VectorXd lam = es.eigenvalues();
  if (lam.minCoeff() < -1e-8 * std::max(1.0, lam.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("matrix is not positive definite");
  lam = lam.cwiseMax(1e-12);
  return es.eigenvectors() * lam.cwiseSqrt().asDiagonal();
}

SampleMatrix mvnormal_sample(std::size_t t, const Eigen::MatrixXd& r, RngStream& rng) {
  const Eigen::MatrixXd l = symmetric_factor(r);
  const auto n = r.rows();
  Eigen::MatrixXd z(static_cast<Eigen::Index>(t), n);
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = 0; j < n; ++j) z(i, j) = rng.normal();
  return z * l.transpose();
}

}  // namespace nongauss
