#include "nongauss/subsetinject.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nongauss/special.hpp"
#include "nongauss/stats.hpp"

namespace nongauss {

namespace {

void check_subset(const SampleMatrix& x, std::span<const std::size_t> subset, std::size_t min_size) {
  if (subset.size() < min_size)
    throw std::invalid_argument("subset needs at least " + std::to_string(min_size) + " columns");
  std::vector<bool> seen(static_cast<std::size_t>(x.cols()), false);
  for (auto i : subset) {
    if (i >= seen.size()) throw std::out_of_range("subset index out of range");
    if (seen[i]) throw std::invalid_argument("subset indices must be distinct");
    seen[i] = true;
  }
}

SampleMatrix take_columns(const SampleMatrix& x, std::span<const std::size_t> subset, Eigen::Index extra = 0) {
  SampleMatrix out(x.rows(), static_cast<Eigen::Index>(subset.size()) + extra);
  for (std::size_t k = 0; k < subset.size(); ++k)
    out.col(static_cast<Eigen::Index>(k)) = x.col(static_cast<Eigen::Index>(subset[k]));
  return out;
}

void put_columns(SampleMatrix& x, std::span<const std::size_t> subset, const SampleMatrix& cols) {
  for (std::size_t k = 0; k < subset.size(); ++k)
    x.col(static_cast<Eigen::Index>(subset[k])) = cols.col(static_cast<Eigen::Index>(k));
}

// Phi^-1 of a uniform without losing the upper tail.
double to_normal(double u) { return normal_quantile(u); }

double t_to_normal(double v, double nu) {
  return v >= 0.0 ? -normal_quantile(student_t_cdf(-v, nu)) : normal_quantile(student_t_cdf(v, nu));
}

double partition_penalty(const Eigen::MatrixXd& c, const std::vector<int>& label, const std::vector<double>& rho,
                         double rho0) {
  double s = 0.0;
  const auto k = c.rows();
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      const double th = a == b ? 1.0 : (label[static_cast<std::size_t>(a)] == label[static_cast<std::size_t>(b)]
                                            ? rho[static_cast<std::size_t>(label[static_cast<std::size_t>(a)])]
                                            : rho0);
      s += (c(a, b) - th) * (c(a, b) - th);
    }
  }
  return std::sqrt(s);
}

// Evaluates one labelling; returns false when blocks are too small or nesting fails.
bool evaluate_partition(const Eigen::MatrixXd& c, const std::vector<int>& label, int nblocks, CorPartition& out) {
  if (nblocks < 2) return false;
  const auto k = static_cast<std::size_t>(c.rows());
  std::vector<double> sum(static_cast<std::size_t>(nblocks), 0.0);
  std::vector<std::size_t> cnt(static_cast<std::size_t>(nblocks), 0), size(static_cast<std::size_t>(nblocks), 0);
  double sum0 = 0.0;
  std::size_t cnt0 = 0;
  for (std::size_t a = 0; a < k; ++a) {
    ++size[static_cast<std::size_t>(label[a])];
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      const double v = c(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (label[a] == label[b]) {
        sum[static_cast<std::size_t>(label[a])] += v;
        ++cnt[static_cast<std::size_t>(label[a])];
      } else {
        sum0 += v;
        ++cnt0;
      }
    }
  }
  for (auto s : size)
    if (s < 2) return false;
  std::vector<double> rho(static_cast<std::size_t>(nblocks));
  const double rho0 = sum0 / static_cast<double>(cnt0);
  for (std::size_t i = 0; i < rho.size(); ++i) {
    rho[i] = sum[i] / static_cast<double>(cnt[i]);
    if (!(rho[i] > rho0)) return false;
  }
  out.blocks.assign(static_cast<std::size_t>(nblocks), {});
  for (std::size_t a = 0; a < k; ++a) out.blocks[static_cast<std::size_t>(label[a])].push_back(a);
  out.rho = std::move(rho);
  out.rho0 = rho0;
  out.penalty = partition_penalty(c, label, out.rho, rho0);
  return true;
}

CorPartition getcors_exhaustive(const Eigen::MatrixXd& c) {
  const auto k = static_cast<std::size_t>(c.rows());
  CorPartition best;
  best.penalty = std::numeric_limits<double>::infinity();
  // Restricted growth strings enumerate each set partition once.
  std::vector<int> label(k, 0), maxp(k, 0);
  while (true) {
    const int nblocks = *std::max_element(label.begin(), label.end()) + 1;
    CorPartition cand;
    if (evaluate_partition(c, label, nblocks, cand) && cand.penalty < best.penalty) best = std::move(cand);
    std::size_t i = k;
    while (i-- > 1) {
      if (label[i] <= maxp[i - 1]) break;
    }
    if (i == 0) break;
    ++label[i];
    for (std::size_t j = i + 1; j < k; ++j) {
      label[j] = 0;
    }
    for (std::size_t j = i; j < k; ++j) maxp[j] = std::max(maxp[j - 1], label[j]);
  }
  if (!std::isfinite(best.penalty)) throw std::invalid_argument("getcors: no admissible partition");
  return best;
}

CorPartition getcors_linkage(const Eigen::MatrixXd& c) {
  const auto k = static_cast<std::size_t>(c.rows());
  std::vector<std::vector<std::size_t>> clusters(k);
  for (std::size_t i = 0; i < k; ++i) clusters[i] = {i};
  CorPartition best;
  best.penalty = std::numeric_limits<double>::infinity();
  while (clusters.size() > 2) {
    double top = -std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 1;
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double s = 0.0;
        for (auto i : clusters[a])
          for (auto j : clusters[b]) s += c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        s /= static_cast<double>(clusters[a].size() * clusters[b].size());
        if (s > top) {
          top = s;
          ba = a;
          bb = b;
        }
      }
    }
    clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
    std::vector<int> label(k);
    for (std::size_t g = 0; g < clusters.size(); ++g)
      for (auto i : clusters[g]) label[i] = static_cast<int>(g);
    CorPartition cand;
    if (evaluate_partition(c, label, static_cast<int>(clusters.size()), cand) && cand.penalty < best.penalty)
      best = std::move(cand);
  }
  if (!std::isfinite(best.penalty)) throw std::invalid_argument("getcors: no admissible partition");
  for (auto& b : best.blocks) std::sort(b.begin(), b.end());
  std::sort(best.blocks.begin(), best.blocks.end());
  // rho follows block order; recompute after sorting.
  std::vector<int> label(k);
  for (std::size_t g = 0; g < best.blocks.size(); ++g)
    for (auto i : best.blocks[g]) label[i] = static_cast<int>(g);
  CorPartition sorted;
  evaluate_partition(c, label, static_cast<int>(best.blocks.size()), sorted);
  sorted.fallback = true;
  return sorted;
}

}  // namespace

SampleMatrix norm2unif(const SampleMatrix& x) {
  if (x.rows() < 2 || x.cols() < 1) throw std::invalid_argument("norm2unif: need at least two rows");
  const Eigen::RowVectorXd mu = x.colwise().mean();
  SampleMatrix z = x.rowwise() - mu;
  const Eigen::RowVectorXd sd = (z.colwise().squaredNorm() / static_cast<double>(x.rows())).cwiseSqrt();
  if (sd.minCoeff() <= 0.0) throw std::invalid_argument("norm2unif: zero-variance column");
  z = z.array().rowwise() / sd.array();
  const Eigen::MatrixXd r = (z.transpose() * z) / static_cast<double>(x.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
  if (es.info() != Eigen::Success) throw std::runtime_error("norm2unif: eigen decomposition failed");
  const Eigen::VectorXd lam = es.eigenvalues();
  if (lam.minCoeff() < 1e-12) throw std::invalid_argument("norm2unif: degenerate correlation matrix");
  SampleMatrix y = z * es.eigenvectors();
  for (Eigen::Index i = 0; i < y.cols(); ++i) {
    const double s = std::sqrt(lam(i));
    y.col(i) = y.col(i).unaryExpr([s](double v) { return normal_cdf(v / s); });
  }
  return y;
}

SampleMatrix unif_to_frechet(const SampleMatrix& u, double alpha, RngStream& rng) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("unif_to_frechet: alpha must be in [0,1]");
  SampleMatrix out = u;
  const Eigen::Index last = u.cols() - 1;
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    if (rng.uniform() <= alpha) out.row(j).setConstant(u(j, last));
  }
  return out;
}

SampleMatrix inject_tstudent(const SampleMatrix& x, std::span<const std::size_t> subset, int nu, RngStream& rng) {
  if (nu < 1) throw std::invalid_argument("inject_tstudent: nu must be >= 1");
  check_subset(x, subset, 1);
  SampleMatrix out = x;
  const double dnu = static_cast<double>(nu);
  for (Eigen::Index j = 0; j < x.rows(); ++j) {
    const double scale = std::sqrt(dnu / rng.chi_square(dnu));
    for (auto i : subset) {
      const auto c = static_cast<Eigen::Index>(i);
      out(j, c) = t_to_normal(x(j, c) * scale, dnu);
    }
  }
  return out;
}

SampleMatrix inject_frechet(const SampleMatrix& x, std::span<const std::size_t> subset, RngStream& rng) {
  check_subset(x, subset, 2);
  const SampleMatrix xs = take_columns(x, subset);
  const double alpha = std::clamp(mean_offdiagonal(spearman_matrix(xs)), 0.0, 1.0);
  const SampleMatrix u = unif_to_frechet(norm2unif(xs), alpha, rng);
  SampleMatrix out = x;
  put_columns(out, subset, u.unaryExpr([](double v) { return to_normal(v); }));
  return out;
}

SampleMatrix inject_archimedean(const SampleMatrix& x, std::span<const std::size_t> subset, Family family,
                                std::optional<double> theta, RngStream& rng, InjectionReport* report) {
  if (!is_archimedean(family)) throw std::invalid_argument("inject_archimedean: not an Archimedean family");
  check_subset(x, subset, 2);
  const auto k = static_cast<Eigen::Index>(subset.size());
  SampleMatrix xs = take_columns(x, subset, 1);
  const double th =
      theta ? *theta : theta_from_rho(family, mean_offdiagonal(spearman_matrix(xs.leftCols(k))));
  check_theta(family, th, 3);
  for (Eigen::Index j = 0; j < xs.rows(); ++j) xs(j, k) = rng.normal();
  const SampleMatrix u = norm2unif(xs);
  const LatentQuantile quantile(family, th);
  SampleMatrix res(x.rows(), k);
  for (Eigen::Index j = 0; j < x.rows(); ++j) {
    const double v = quantile(u(j, k));
    for (Eigen::Index i = 0; i < k; ++i) res(j, i) = to_normal(psi(family, th, -std::log(u(j, i)) / v));
  }
  SampleMatrix out = x;
  put_columns(out, subset, res);
  if (report) report->theta = th;
  return out;
}

SampleMatrix inject_nested_archimedean(const SampleMatrix& x, std::span<const std::size_t> subset, Family family,
                                       RngStream& rng, InjectionReport* report) {
  if (family != Family::gumbel && family != Family::clayton)
    throw std::invalid_argument("nested injection supports gumbel and clayton only");
  check_subset(x, subset, 4);
  const auto k = static_cast<Eigen::Index>(subset.size());
  SampleMatrix xs = take_columns(x, subset, 1);
  const CorPartition part = getcors(spearman_matrix(xs.leftCols(k)));
  const double theta0 = theta_from_rho(family, part.rho0);
  std::vector<double> thetas;
  for (double r : part.rho) thetas.push_back(theta_from_rho(family, r));
  check_theta(family, theta0, 3);

  for (Eigen::Index j = 0; j < xs.rows(); ++j) xs(j, k) = rng.normal();
  const SampleMatrix u = norm2unif(xs);
  const LatentQuantile quantile(family, theta0);
  NestedStats stats;
  SampleMatrix res(x.rows(), k);
  for (Eigen::Index j = 0; j < x.rows(); ++j) {
    const double v0 = quantile(u(j, k));
    for (std::size_t c = 0; c < part.blocks.size(); ++c) {
      const double vi = sample_nested_child_latent(family, theta0, thetas[c], v0, rng, &stats);
      for (auto i : part.blocks[c]) {
        const auto col = static_cast<Eigen::Index>(i);
        const double xi = nested_child_transform(family, theta0, thetas[c], v0, vi, u(j, col));
        res(j, col) = to_normal(psi(family, theta0, -std::log(xi) / v0));
      }
    }
  }
  SampleMatrix out = x;
  put_columns(out, subset, res);
  if (report) {
    report->theta = theta0;
    report->children = part.blocks;
    report->child_thetas = thetas;
    report->acceptance = stats.acceptance();
    report->clustering_fallback = part.fallback;
  }
  return out;
}

SampleMatrix naive_resample(const SampleMatrix& x, std::span<const std::size_t> subset, RngStream& rng) {
  check_subset(x, subset, 1);
  const SampleMatrix xs = take_columns(x, subset);
  const Eigen::MatrixXd r = subset.size() == 1 ? Eigen::MatrixXd::Identity(1, 1) : correlation(xs);
  SampleMatrix out = x;
  put_columns(out, subset, mvnormal_sample(static_cast<std::size_t>(x.rows()), r, rng));
  return out;
}

CorPartition getcors(const Eigen::MatrixXd& c) {
  if (c.rows() != c.cols()) throw std::invalid_argument("getcors: matrix must be square");
  if (c.rows() < 4) throw std::invalid_argument("getcors: need at least 4 marginals for two blocks of two");
  if (static_cast<std::size_t>(c.rows()) <= kGetcorsExhaustiveMax) return getcors_exhaustive(c);
  return getcors_linkage(c);
}

double cov_change_delta(const SampleMatrix& x, const SampleMatrix& x2) {
  if (x.rows() != x2.rows() || x.cols() != x2.cols()) throw std::invalid_argument("delta: shape mismatch");
  const Eigen::MatrixXd c = covariance(x);
  const double den = c.norm();
  if (den == 0.0) throw std::invalid_argument("delta: zero covariance");
  return (c - covariance(x2)).norm() / den;
}

double mean_offdiagonal(const Eigen::MatrixXd& c) {
  const auto k = c.rows();
  if (k < 2) throw std::invalid_argument("mean_offdiagonal: need k >= 2");
  return (c.sum() - c.trace()) / static_cast<double>(k * (k - 1));
}

}  // namespace nongauss
