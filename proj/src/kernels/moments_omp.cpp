#include <algorithm>
#include <stdexcept>
#include <vector>

#include "nongauss/kernels.hpp"

namespace nongauss::kernels {

namespace {

constexpr Eigen::Index kChunk = 512;

struct BlockWalk {
  const double* x;       // column-major data
  Eigen::Index ld;       // rows of x
  Eigen::Index r0, len;  // current chunk
  std::size_t order;
  IndexBuffer start, edge, stride;
  std::array<bool, kMaxOrder> tied;  // block coordinate equals the previous one
  std::vector<double>* levels;       // order-1 scratch rows of length kChunk
  double* acc;

  void descend(std::size_t k, const double* prev, std::size_t lo, std::size_t pos) const {
    for (std::size_t o = lo; o < edge[k]; ++o) {
      const double* col = x + static_cast<Eigen::Index>(start[k] + o) * ld + r0;
      const std::size_t p = pos + o * stride[k];
      const std::size_t next_lo = k + 1 < order && tied[k + 1] ? o : 0;
      if (k + 1 == order) {
        double s = 0.0;
        if (prev == nullptr) {
          for (Eigen::Index i = 0; i < len; ++i) s += col[i];
        } else {
#pragma omp simd reduction(+ : s)
          for (Eigen::Index i = 0; i < len; ++i) s += prev[i] * col[i];
        }
        acc[p] += s;
      } else if (prev == nullptr) {
        descend(k + 1, col, next_lo, p);
      } else {
        double* buf = levels[k].data();
#pragma omp simd
        for (Eigen::Index i = 0; i < len; ++i) buf[i] = prev[i] * col[i];
        descend(k + 1, buf, next_lo, p);
      }
    }
  }
};

}  // namespace

BlockSymTensor moment_tensor_omp(const SampleMatrix& x, std::size_t order, std::size_t block_size) {
  if (x.rows() == 0 || x.cols() == 0) throw std::invalid_argument("moment tensor of empty sample");
  BlockSymTensor out(static_cast<std::size_t>(x.cols()), order, block_size);
  const auto nblocks = static_cast<std::ptrdiff_t>(out.block_count());
  const Eigen::Index t = x.rows();

#pragma omp parallel
  {
    std::vector<std::vector<double>> levels(order, std::vector<double>(kChunk));
    for (Eigen::Index r0 = 0; r0 < t; r0 += kChunk) {
      // Static schedule keeps each block on one thread across chunks, so no barrier is needed.
#pragma omp for schedule(static) nowait
      for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
        const auto blk = static_cast<std::size_t>(b);
        const auto key = out.block_key(blk);
        BlockWalk w{};
        w.x = x.data();
        w.ld = t;
        w.r0 = r0;
        w.len = std::min(kChunk, t - r0);
        w.order = order;
        w.levels = levels.data();
        w.acc = out.block_data(blk).data();
        std::size_t s = 1;
        for (std::size_t k = order; k-- > 0;) {
          w.start[k] = key[k] * out.block_size();
          w.edge[k] = out.block_edge(key[k]);
          w.stride[k] = s;
          s *= w.edge[k];
          w.tied[k] = k > 0 && key[k] == key[k - 1];
        }
        w.descend(0, nullptr, 0, 0);
      }
    }
#pragma omp barrier
    const double inv_t = 1.0 / static_cast<double>(t);
#pragma omp for schedule(static)
    for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
      const auto blk = static_cast<std::size_t>(b);
      for (double& v : out.block_data(blk)) v *= inv_t;
      out.symmetrise_block(blk);
    }
  }
  return out;
}

}  // namespace nongauss::kernels
