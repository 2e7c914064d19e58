#include <stdexcept>

#include "nongauss/kernels.hpp"

namespace nongauss::kernels {

BlockSymTensor moment_tensor_serial(const SampleMatrix& x, std::size_t order, std::size_t block_size) {
  if (x.rows() == 0 || x.cols() == 0) throw std::invalid_argument("moment tensor of empty sample");
  BlockSymTensor out(static_cast<std::size_t>(x.cols()), order, block_size);
  const double inv_t = 1.0 / static_cast<double>(x.rows());
  IndexBuffer idx{};
  for (std::size_t blk = 0; blk < out.block_count(); ++blk) {
    const auto key = out.block_key(blk);
    auto data = out.block_data(blk);
    IndexBuffer edge{}, off{};
    for (std::size_t k = 0; k < order; ++k) edge[k] = out.block_edge(key[k]);
    for (std::size_t pos = 0; pos < data.size(); ++pos) {
      for (std::size_t k = 0; k < order; ++k) idx[k] = key[k] * out.block_size() + off[k];
      double sum = 0.0;
      for (Eigen::Index r = 0; r < x.rows(); ++r) {
        double p = 1.0;
        for (std::size_t k = 0; k < order; ++k) p *= x(r, static_cast<Eigen::Index>(idx[k]));
        sum += p;
      }
      data[pos] = sum * inv_t;
      for (std::size_t k = order; k-- > 0;) {
        if (++off[k] < edge[k]) break;
        off[k] = 0;
      }
    }
  }
  return out;
}

}  // namespace nongauss::kernels
