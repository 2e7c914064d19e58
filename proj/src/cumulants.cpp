#include "nongauss/cumulants.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nongauss/kernels.hpp"

namespace nongauss {

namespace {
void check_sample(const SampleMatrix& x, std::size_t order) {
  if (x.rows() == 0 || x.cols() == 0) throw std::invalid_argument("empty sample matrix");
  if (order < 1 || order > kMaxCumulantOrder)
    throw std::invalid_argument("moment order must be in 1.." + std::to_string(kMaxCumulantOrder));
}

std::size_t layout_block(std::size_t n, std::size_t order, std::size_t block_size) {
  if (order <= 2 || block_size == 0) return BlockSymTensor::default_block_size(n, order);
  return std::min(block_size, n);
}
}  // namespace

BlockSymTensor moment_tensor(const SampleMatrix& x, std::size_t order, std::size_t block_size) {
  check_sample(x, order);
  return kernels::moment_tensor_omp(x, order, layout_block(static_cast<std::size_t>(x.cols()), order, block_size));
}

BlockSymTensor central_moment_tensor(const SampleMatrix& x, std::size_t order, std::size_t block_size) {
  check_sample(x, order);
  const SampleMatrix c = x.rowwise() - x.colwise().mean();
  return moment_tensor(c, order, block_size);
}

const BlockSymTensor& CumulantSet::operator[](std::size_t order) const {
  if (order < 1 || order > tensors.size())
    throw std::out_of_range("cumulant of order " + std::to_string(order) + " not in set");
  return tensors[order - 1];
}

CumulantSet cumulants_from_central_moments(std::vector<BlockSymTensor> m, const Eigen::VectorXd& mean,
                                           std::size_t t, std::size_t block_size) {
  const std::size_t dmax = m.size();
  if (dmax < 2 || dmax > kMaxCumulantOrder) throw std::invalid_argument("dmax must be in 2..6");
  const std::size_t n = m[1].dim();
  CumulantSet out;
  out.t = t;
  out.n = n;
  out.tensors.resize(dmax);
  BlockSymTensor c1(n, 1);
  for (std::size_t i = 0; i < n; ++i) c1.set_sym({i}, mean(static_cast<Eigen::Index>(i)));
  out.tensors[0] = std::move(c1);
  out.tensors[1] = std::move(m[1]);
  if (dmax >= 3) out.tensors[2] = std::move(m[2]);
  const auto& c2 = out.tensors[1];
  if (dmax >= 4) {
    m[3] -= sym_outer(c2, c2, layout_block(n, 4, block_size));
    out.tensors[3] = std::move(m[3]);
  }
  if (dmax >= 5) {
    m[4] -= sym_outer(c2, out.tensors[2], layout_block(n, 5, block_size));
    out.tensors[4] = std::move(m[4]);
  }
  if (dmax >= 6) {
    const std::size_t b = layout_block(n, 6, block_size);
    m[5] -= sym_outer(out.tensors[3], c2, b);
    m[5] -= sym_outer(out.tensors[2], out.tensors[2], b);
    m[5] -= sym_outer(c2, c2, c2, b);
    out.tensors[5] = std::move(m[5]);
  }
  return out;
}

CumulantSet cumulant_tensors(const SampleMatrix& x, std::size_t dmax, std::size_t block_size) {
  if (dmax < 2 || dmax > kMaxCumulantOrder) throw std::invalid_argument("dmax must be in 2..6");
  check_sample(x, dmax);
  const Eigen::VectorXd mean = x.colwise().mean().transpose();
  const SampleMatrix c = x.rowwise() - mean.transpose();
  std::vector<BlockSymTensor> m(dmax);
  for (std::size_t k = 2; k <= dmax; ++k) m[k - 1] = moment_tensor(c, k, block_size);
  return cumulants_from_central_moments(std::move(m), mean, static_cast<std::size_t>(x.rows()), block_size);
}

double h_norm(const BlockSymTensor& c2, const BlockSymTensor& cd) {
  if (c2.order() != 2) throw std::invalid_argument("h_norm: first argument must be order 2");
  if (c2.dim() != cd.dim()) throw std::invalid_argument("h_norm: dimension mismatch");
  const double n2 = frobenius_norm(c2);
  if (n2 == 0.0) throw std::invalid_argument("h_norm: zero covariance");
  return frobenius_norm(cd) / std::pow(n2, static_cast<double>(cd.order()) / 2.0);
}

}  // namespace nongauss
