#ifndef NONGAUSS_RANDSOURCE_HPP
#define NONGAUSS_RANDSOURCE_HPP

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace nongauss {

/// Sample matrix: t rows (realisations) by n columns (marginals).
using SampleMatrix = Eigen::MatrixXd;

/**
 * Seeded random stream. Equal (seed, stream) pairs give equal sequences; the
 * engine is seeded through std::seed_seq over both words so distinct stream
 * ids from one seed start from unrelated states.
 */
class RngStream {
public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::mt19937_64& engine() { return engine_; }

  /// Uniform on the open interval (0,1), 53-bit resolution.
  double uniform();
  double normal(double mu = 0.0, double sigma = 1.0);
  double exponential();
  /// Gamma(shape, scale 1), any shape > 0.
  double gamma(double shape);
  double chi_square(double nu);
  /// Failures before the r-th success, success probability p; real r > 0.
  long negative_binomial(double r, double p);
  /// Logarithmic series, P(k) = -p^k / (k ln(1-p)), k >= 1.
  long logarithmic(double p);
  /// Same law parameterised by h = ln(1-p), which stays exact when p rounds to 1.
  long logarithmic_log1mp(double h);
  /// Trials until the first success, success probability p; support k >= 1.
  long geometric(double p);

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

/// Standard stable law S(alpha, beta, 1, 0) via the Chambers-Mallows-Stuck construction.
double sample_levy(double alpha, double beta, RngStream& rng);

/// q-Gaussian deviate (generalised Box-Muller), q < 3.
double sample_qgauss(double q, RngStream& rng);

/// t i.i.d. rows of N(0, R).
SampleMatrix mvnormal_sample(std::size_t t, const Eigen::MatrixXd& r, RngStream& rng);

/// Lower factor L with L L^T = R. Cholesky first, eigen fallback with a 1e-12 floor.
Eigen::MatrixXd symmetric_factor(const Eigen::MatrixXd& r);

}  // namespace nongauss

#endif  // NONGAUSS_RANDSOURCE_HPP
