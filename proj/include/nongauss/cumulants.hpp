#ifndef NONGAUSS_CUMULANTS_HPP
#define NONGAUSS_CUMULANTS_HPP

#include <cstddef>
#include <vector>

#include "nongauss/randsource.hpp"
#include "nongauss/symtensor.hpp"

namespace nongauss {

inline constexpr std::size_t kMaxCumulantOrder = 6;

/// m_i = (1/t) sum_rows prod_k x[row, i_k]. block_size == 0 picks the default.
BlockSymTensor moment_tensor(const SampleMatrix& x, std::size_t order, std::size_t block_size = 0);
/// Moment tensor of the column-centred sample.
BlockSymTensor central_moment_tensor(const SampleMatrix& x, std::size_t order, std::size_t block_size = 0);

struct CumulantSet {
  std::size_t t = 0;
  std::size_t n = 0;
  std::vector<BlockSymTensor> tensors;  // tensors[k - 1] has order k

  std::size_t max_order() const { return tensors.size(); }
  const BlockSymTensor& operator[](std::size_t order) const;
};

/// Cumulant tensors of orders 1..dmax (2 <= dmax <= 6), 1/t normalisation.
/// block_size applies to orders >= 3; matrices are always stored whole.
CumulantSet cumulant_tensors(const SampleMatrix& x, std::size_t dmax, std::size_t block_size = 0);

/// Combines central moments m[k-1] (orders 1..dmax) into cumulants.
CumulantSet cumulants_from_central_moments(std::vector<BlockSymTensor> central, const Eigen::VectorXd& mean,
                                           std::size_t t, std::size_t block_size = 0);

/// ||C_d|| / ||C_2||^(d/2).
double h_norm(const BlockSymTensor& c2, const BlockSymTensor& cd);

}  // namespace nongauss

#endif  // NONGAUSS_CUMULANTS_HPP
