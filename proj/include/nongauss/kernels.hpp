#ifndef NONGAUSS_KERNELS_HPP
#define NONGAUSS_KERNELS_HPP

#include <cstddef>

#include "nongauss/randsource.hpp"
#include "nongauss/symtensor.hpp"

namespace nongauss::kernels {

/// Raw moment tensor (1/t) sum_rows prod_k x[row, i_k].
/// OpenMP over blocks, rows streamed in cache-sized chunks with shared prefix products.
BlockSymTensor moment_tensor_omp(const SampleMatrix& x, std::size_t order, std::size_t block_size = 0);

/// Same quantity, one entry at a time with no sharing. Kept as the reference for tests and benchmarks.
BlockSymTensor moment_tensor_serial(const SampleMatrix& x, std::size_t order, std::size_t block_size = 0);

}  // namespace nongauss::kernels

#endif  // NONGAUSS_KERNELS_HPP
