#ifndef NONGAUSS_SYMTENSOR_HPP
#define NONGAUSS_SYMTENSOR_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nongauss {

/// Upper bound on the number of modes of a stored tensor. Cumulants stop at
/// order 6; symmetrised outer products of three matrices need the same.
inline constexpr std::size_t kMaxOrder = 12;

using IndexBuffer = std::array<std::size_t, kMaxOrder>;

/**
 * Super-symmetric d-mode tensor of dimension n stored in blocks.
 *
 * The index space is tiled by blocks of edge b (the last block along a mode
 * is ragged when b does not divide n). Only blocks whose block multi-index is
 * non-decreasing are kept, which is one hyper-pyramid of the full tensor.
 * Every kept block is stored densely, including the redundant entries of
 * diagonal blocks, so that per-block kernels can run without index
 * canonicalisation.
 *
 * Indices are 0-based. Element reads are permutation invariant.
 */
class BlockSymTensor {
public:
  BlockSymTensor() = default;

  /// Zero tensor. block_size == 0 picks the default (n for d <= 2, else 2).
  BlockSymTensor(std::size_t dim, std::size_t order, std::size_t block_size = 0);

  static std::size_t default_block_size(std::size_t dim, std::size_t order);

  static BlockSymTensor identity(std::size_t dim, std::size_t order,
                                 std::size_t block_size = 0);

  /// Reads canonical (sorted) entries of a row-major dense n^d array. The
  /// input is assumed super-symmetric; other entries are ignored.
  static BlockSymTensor from_dense(std::span<const double> dense, std::size_t dim,
                                   std::size_t order, std::size_t block_size = 0);

  /// Symmetric matrix as an order-2 tensor.
  static BlockSymTensor from_matrix(const Eigen::MatrixXd& m, std::size_t block_size = 0);

  /**
   * Fills every stored entry with fn(sorted_index), where sorted_index is a
   * std::span<const std::size_t> of length order in non-decreasing order.
   * Blocks are filled in parallel; fn must be safe to call concurrently.
   */
  template <class Fn>
  static BlockSymTensor generate(std::size_t dim, std::size_t order, std::size_t block_size,
                                 Fn&& fn);

  std::vector<double> to_dense() const;
  Eigen::MatrixXd to_matrix() const;  // order 2 only

  std::size_t order() const { return order_; }
  std::size_t dim() const { return dim_; }
  std::size_t block_size() const { return block_size_; }
  std::size_t blocks_per_mode() const { return blocks_per_mode_; }
  std::size_t block_count() const { return offsets_.size(); }
  std::size_t stored_elements() const { return data_.size(); }

  double get(std::span<const std::size_t> index) const;
  double get(std::initializer_list<std::size_t> index) const {
    return get(std::span<const std::size_t>(index.begin(), index.size()));
  }
  /// Writes v at every permutation of index.
  void set_sym(std::span<const std::size_t> index, double v);
  void set_sym(std::initializer_list<std::size_t> index, double v) {
    set_sym(std::span<const std::size_t>(index.begin(), index.size()), v);
  }

  // Block-level access for kernels.
  std::span<const std::uint32_t> block_key(std::size_t block) const;
  std::span<double> block_data(std::size_t block);
  std::span<const double> block_data(std::size_t block) const;
  std::size_t block_edge(std::size_t block_coord) const;
  /// Number of distinct permutations of the block multi-index.
  std::size_t block_multiplicity(std::size_t block) const;

  /// Restores in-block symmetry of diagonal blocks from the entries whose
  /// offsets are non-decreasing along runs of equal block coordinates.
  void symmetrise_block(std::size_t block);

  BlockSymTensor& operator+=(const BlockSymTensor& other);
  BlockSymTensor& operator-=(const BlockSymTensor& other);
  BlockSymTensor& operator*=(double s);

private:
  std::size_t locate(const IndexBuffer& sorted) const;
  std::size_t block_rank(const std::uint32_t* key) const;
  void check_index(std::span<const std::size_t> index) const;

  std::size_t order_ = 0;
  std::size_t dim_ = 0;
  std::size_t block_size_ = 1;
  std::size_t blocks_per_mode_ = 0;
  std::vector<std::uint32_t> keys_;      // order_ entries per block, rank order
  std::vector<std::size_t> offsets_;     // start of each block in data_
  std::vector<double> data_;
  std::vector<std::vector<std::size_t>> binom_;  // binom_[m][k]
};

// Free operations.

double frobenius_norm(const BlockSymTensor& t);

/// Sum over all n^d entries of a * b (equal layouts).
double inner_product(const BlockSymTensor& a, const BlockSymTensor& b);

/// Order d-1 tensor t[i, ...] with the first index fixed (d >= 2).
BlockSymTensor first_index_slice(const BlockSymTensor& t, std::size_t i);

/// Removes every entry that touches index r (0-based); indices above r shift down.
BlockSymTensor fiber_cut(const BlockSymTensor& t, std::size_t r);

/// t'_{i1..id} = sum_j a_{i1 j1} ... a_{id jd} t_{j1..jd}; a is n' x n.
BlockSymTensor mode_multiply(const BlockSymTensor& t, const Eigen::MatrixXd& a);

/// b_{j1 j2} = sum over the remaining d-1 indices of t_{j1,..} t_{j2,..}.
Eigen::MatrixXd contract_self(const BlockSymTensor& t);

/// Symmetrising sum of outer products of two or three super-symmetric tensors.
/// Factors of equal order are treated as one unordered group, so
/// sym_outer(A, A) has 3 terms for matrices. block_size applies to the result.
BlockSymTensor sym_outer(const BlockSymTensor& a, const BlockSymTensor& b,
                         std::size_t block_size = 0);
BlockSymTensor sym_outer(const BlockSymTensor& a, const BlockSymTensor& b,
                         const BlockSymTensor& c, std::size_t block_size = 0);

/// Number of terms in the symmetrising sum for factor orders `orders`.
std::size_t sym_outer_term_count(std::span<const std::size_t> orders);

/// First-mode unfold transposed: rows indexed by (i2..id), columns by i1.
Eigen::MatrixXd unfold_transposed(const BlockSymTensor& t);

// ---------------------------------------------------------------------------

template <class Fn>
BlockSymTensor BlockSymTensor::generate(std::size_t dim, std::size_t order,
                                        std::size_t block_size, Fn&& fn) {
  BlockSymTensor out(dim, order, block_size);
  const std::size_t d = out.order_;
  const auto nblocks = static_cast<std::ptrdiff_t>(out.block_count());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t blk = 0; blk < nblocks; ++blk) {
    const auto key = out.block_key(static_cast<std::size_t>(blk));
    auto data = out.block_data(static_cast<std::size_t>(blk));
    IndexBuffer start{}, edge{}, off{}, idx{};
    for (std::size_t k = 0; k < d; ++k) {
      start[k] = key[k] * out.block_size_;
      edge[k] = out.block_edge(key[k]);
    }
    // Visit entries in row-major order; only canonical ones call fn.
    for (std::size_t pos = 0; pos < data.size(); ++pos) {
      bool canonical = true;
      for (std::size_t k = 1; k < d; ++k) {
        if (key[k] == key[k - 1] && off[k] < off[k - 1]) {
          canonical = false;
          break;
        }
      }
      if (canonical) {
        for (std::size_t k = 0; k < d; ++k) idx[k] = start[k] + off[k];
        data[pos] = fn(std::span<const std::size_t>(idx.data(), d));
      }
      for (std::size_t k = d; k-- > 0;) {
        if (++off[k] < edge[k]) break;
        off[k] = 0;
      }
    }
    out.symmetrise_block(static_cast<std::size_t>(blk));
  }
  return out;
}

}  // namespace nongauss

#endif  // NONGAUSS_SYMTENSOR_HPP
