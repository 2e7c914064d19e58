#include "nongauss/dimreduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nongauss {

namespace {

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigen decomposition failed");
  return es.eigenvalues();
}

double log_det_psd(const Eigen::MatrixXd& m) {
  const Eigen::VectorXd lam = symmetric_eigenvalues(m);
  double s = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (!(lam(i) > 0.0)) return -std::numeric_limits<double>::infinity();
    s += std::log(lam(i));
  }
  return s;
}

void check_square(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("matrix must be square and non-empty");
}

Eigen::MatrixXd drop_index(const Eigen::MatrixXd& m, Eigen::Index r) {
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd out(n - 1, n - 1);
  for (Eigen::Index i = 0, a = 0; i < n; ++i) {
    if (i == r) continue;
    for (Eigen::Index j = 0, b = 0; j < n; ++j) {
      if (j == r) continue;
      out(a, b++) = m(i, j);
    }
    ++a;
  }
  return out;
}

EigenFactor descending_eigen(const Eigen::MatrixXd& b) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigen decomposition failed");
  EigenFactor out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.factor = es.eigenvectors().rowwise().reverse();
  return out;
}

// sum over modes 2..k of T_k T_k with T_k = A'^T x_{2..k} C_k, as an n x n matrix.
Eigen::MatrixXd projected_contraction(const BlockSymTensor& ck, const Eigen::MatrixXd& at) {
  const auto n = static_cast<Eigen::Index>(ck.dim());
  if (ck.order() == 2) {
    const Eigen::MatrixXd c = ck.to_matrix();
    return c * at.transpose() * at * c;
  }
  std::vector<BlockSymTensor> rows(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index i = 0; i < n; ++i)
    rows[static_cast<std::size_t>(i)] = mode_multiply(first_index_slice(ck, static_cast<std::size_t>(i)), at);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j)
      g(i, j) = g(j, i) = inner_product(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
  return g;
}

double factorial(std::size_t k) {
  double f = 1.0;
  for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
  return f;
}

}  // namespace

double mev_target(const Eigen::MatrixXd& c2) {
  check_square(c2);
  return c2.determinant();
}

double log_hdet_target(const BlockSymTensor& c2, const BlockSymTensor& cd) {
  if (c2.order() != 2) throw std::invalid_argument("hdet: first tensor must be order 2");
  if (c2.dim() != cd.dim()) throw std::invalid_argument("hdet: dimension mismatch");
  const double ld2 = log_det_psd(c2.to_matrix());
  if (!std::isfinite(ld2)) throw std::invalid_argument("hdet: singular covariance");
  return log_det_psd(contract_self(cd)) - static_cast<double>(cd.order()) * ld2;
}

double hdet_target(const BlockSymTensor& c2, const BlockSymTensor& cd) {
  const Eigen::MatrixXd m2 = c2.to_matrix();
  const double det2 = m2.determinant();
  if (det2 == 0.0) throw std::invalid_argument("hdet: singular covariance");
  if (std::abs(det2) < 1e-300) return std::exp(log_hdet_target(c2, cd));
  return contract_self(cd).determinant() / std::pow(det2, static_cast<double>(cd.order()));
}

Target parse_target(const std::string& name) {
  if (name == "mev") return Target::mev;
  if (name == "hnorm") return Target::hnorm;
  if (name == "hdet") return Target::hdet;
  throw std::invalid_argument("unknown selection target: " + name);
}

std::string target_name(Target t) {
  switch (t) {
    case Target::mev: return "mev";
    case Target::hnorm: return "hnorm";
    case Target::hdet: return "hdet";
  }
  return "unknown";
}

SelectionResult select_features(const CumulantSet& cums, Target target, std::size_t order, std::size_t s) {
  const std::size_t n = cums.n;
  if (s >= n) {
    if (s == n) {
      SelectionResult all;
      for (std::size_t i = 0; i < n; ++i) all.retained.push_back(i);
      return all;
    }
    throw std::invalid_argument("select_features: s must not exceed n");
  }
  if (s == 0) throw std::invalid_argument("select_features: s must be >= 1");
  if (target != Target::mev && (order < 3 || order > cums.max_order()))
    throw std::invalid_argument("select_features: cumulant order not available in the set");

  BlockSymTensor c2 = cums[2];
  BlockSymTensor cd = target == Target::mev ? BlockSymTensor() : cums[order];
  std::vector<std::size_t> alive(n);
  for (std::size_t i = 0; i < n; ++i) alive[i] = i;

  SelectionResult out;
  while (alive.size() > s) {
    const auto m = static_cast<std::ptrdiff_t>(alive.size());
    std::vector<double> value(alive.size());
    const Eigen::MatrixXd c2m = c2.to_matrix();
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t r = 0; r < m; ++r) {
      const auto ru = static_cast<std::size_t>(r);
      switch (target) {
        case Target::mev:
          value[ru] = log_det_psd(drop_index(c2m, r));
          break;
        case Target::hnorm:
          value[ru] = h_norm(fiber_cut(c2, ru), fiber_cut(cd, ru));
          break;
        case Target::hdet: {
          const Eigen::MatrixXd c2cut = drop_index(c2m, r);
          const double ld2 = log_det_psd(c2cut);
          const double ldb = log_det_psd(contract_self(fiber_cut(cd, ru)));
          value[ru] = std::isfinite(ld2) ? ldb - static_cast<double>(order) * ld2
                                         : std::numeric_limits<double>::quiet_NaN();
          break;
        }
      }
    }
    std::size_t best = 0;
    for (std::size_t r = 1; r < value.size(); ++r) {
      if (std::isnan(value[best]) || value[r] > value[best] + 1e-12) best = r;
    }
    if (std::isnan(value[best])) throw std::invalid_argument("select_features: singular covariance on every remainder");
    SelectionStep step;
    step.removed = alive[best];
    step.target = value[best];
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(best));
    step.remaining = alive;
    out.steps.push_back(std::move(step));
    c2 = fiber_cut(c2, best);
    if (target != Target::mev) cd = fiber_cut(cd, best);
  }
  out.retained = alive;
  return out;
}

EigenFactor hosvd_factor(const BlockSymTensor& cd) {
  if (cd.order() < 2) throw std::invalid_argument("hosvd needs order >= 2");
  const Eigen::MatrixXd b = contract_self(cd);
  EigenFactor f = descending_eigen(b);
  const double scale = std::max(1.0, f.eigenvalues.cwiseAbs().maxCoeff());
  if (f.eigenvalues.minCoeff() < -1e-8 * scale) throw std::runtime_error("hosvd: contraction is not positive semi-definite");
  return f;
}

EigenFactor svd_factor(const Eigen::MatrixXd& c2) {
  check_square(c2);
  return descending_eigen(0.5 * (c2 + c2.transpose()));
}

double als_objective(const CumulantSet& cums, std::size_t order, const Eigen::MatrixXd& a) {
  const Eigen::MatrixXd at = a.transpose();
  double xi = 0.0;
  for (std::size_t k = 2; k <= order; ++k) {
    const Eigen::MatrixXd g = projected_contraction(cums[k], at);
    xi += std::sqrt(std::max(0.0, (at * g * a).trace())) / factorial(k);
  }
  return xi;
}

AlsResult als_factor(const CumulantSet& cums, std::size_t order, std::size_t nprime, std::size_t max_iters,
                     double tol) {
  const std::size_t n = cums.n;
  if (order < 2 || order > cums.max_order() || order > kMaxCumulantOrder)
    throw std::invalid_argument("als: order must be in 2..max order of the set");
  if (nprime < 1 || nprime > n) throw std::invalid_argument("als: n' must be in 1..n");
  if (max_iters < 1) throw std::invalid_argument("als: max_iters must be >= 1");
  const auto np = static_cast<Eigen::Index>(nprime);

  auto fix_sign = [](Eigen::MatrixXd& a) {
    if (a.determinant() < 0.0) a.col(a.cols() - 1) *= -1.0;
  };

  // First step: no projection.
  const Eigen::MatrixXd c2 = cums[2].to_matrix();
  Eigen::MatrixXd t = 0.5 * c2 * c2;
  for (std::size_t k = 3; k <= order; ++k) t += contract_self(cums[k]) / factorial(k);
  Eigen::MatrixXd full = descending_eigen(t).factor;
  fix_sign(full);
  Eigen::MatrixXd a = full.leftCols(np);

  AlsResult res;
  res.xi.push_back(als_objective(cums, order, a));
  res.iterations = 1;
  while (res.iterations < max_iters) {
    const Eigen::MatrixXd at = a.transpose();
    t.setZero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 2; k <= order; ++k) t += projected_contraction(cums[k], at) / factorial(k);
    full = descending_eigen(t).factor;
    fix_sign(full);
    a = full.leftCols(np);
    const double xi = als_objective(cums, order, a);
    const double prev = res.xi.back();
    res.xi.push_back(xi);
    ++res.iterations;
    if (xi < prev - 1e-12 * std::max(1.0, std::abs(prev))) res.monotone = false;
    if (std::abs(xi - prev) < tol) {
      res.converged = true;
      break;
    }
  }
  res.factor = a;
  return res;
}

double nongauss_weight(const Eigen::MatrixXd& a, std::size_t k) {
  if (a.cols() < 1) throw std::invalid_argument("nongauss_weight: empty factor");
  if (k >= static_cast<std::size_t>(a.rows())) throw std::invalid_argument("nongauss_weight: k must be < rows");
  const Eigen::VectorXd last = a.col(a.cols() - 1);
  const double norm = last.norm();
  if (norm == 0.0) throw std::invalid_argument("nongauss_weight: zero last column");
  return last.head(static_cast<Eigen::Index>(k)).norm() / norm;
}

}  // namespace nongauss
