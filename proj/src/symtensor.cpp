#include "nongauss/symtensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nongauss {

namespace {

std::size_t factorial(std::size_t k) {
  std::size_t f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= i;
  return f;
}

std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) {
      throw std::length_error("dense tensor too large (" + std::to_string(base) + "^" +
                              std::to_string(exp) + " entries)");
    }
    r *= base;
  }
  return r;
}

// Dense row-major tensors are capped to keep intermediates in memory.
constexpr std::size_t kDenseCap = std::size_t{1} << 26;

}  // namespace

std::size_t BlockSymTensor::default_block_size(std::size_t dim, std::size_t order) {
  if (order <= 2) return std::max<std::size_t>(dim, 1);
  return std::min<std::size_t>(2, std::max<std::size_t>(dim, 1));
}

BlockSymTensor::BlockSymTensor(std::size_t dim, std::size_t order, std::size_t block_size)
    : order_(order), dim_(dim) {
  if (dim == 0 || order == 0) throw std::invalid_argument("tensor dim and order must be >= 1");
  if (order > kMaxOrder) throw std::invalid_argument("tensor order exceeds kMaxOrder");
  block_size_ = block_size == 0 ? default_block_size(dim, order) : block_size;
  if (block_size_ > dim) throw std::invalid_argument("block size must be in 1..dim");
  blocks_per_mode_ = (dim + block_size_ - 1) / block_size_;

  const std::size_t m = blocks_per_mode_ + order - 1;
  binom_.assign(m + 1, std::vector<std::size_t>(order + 2, 0));
  for (std::size_t i = 0; i <= m; ++i) {
    binom_[i][0] = 1;
    for (std::size_t k = 1; k <= std::min(i, order + 1); ++k) {
      binom_[i][k] = binom_[i - 1][k - 1] + (k <= i - 1 ? binom_[i - 1][k] : 0);
    }
  }
  const std::size_t nblocks = binom_[m][order];
  keys_.assign(nblocks * order, 0);

  // Enumerate non-decreasing block multi-indices and place them by rank.
  std::vector<std::uint32_t> key(order, 0);
  while (true) {
    const std::size_t r = block_rank(key.data());
    std::copy(key.begin(), key.end(), keys_.begin() + static_cast<std::ptrdiff_t>(r * order));
    std::size_t k = order;
    while (k > 0 && key[k - 1] + 1 == blocks_per_mode_) --k;
    if (k == 0) break;
    ++key[k - 1];
    for (std::size_t j = k; j < order; ++j) key[j] = key[k - 1];
  }

  offsets_.resize(nblocks);
  std::size_t total = 0;
  for (std::size_t b = 0; b < nblocks; ++b) {
    offsets_[b] = total;
    std::size_t sz = 1;
    for (std::size_t k = 0; k < order; ++k) sz *= block_edge(keys_[b * order + k]);
    total += sz;
  }
  data_.assign(total, 0.0);
}

std::size_t BlockSymTensor::block_rank(const std::uint32_t* key) const {
  std::size_t r = 0;
  for (std::size_t k = 0; k < order_; ++k) r += binom_[key[k] + k][k + 1];
  return r;
}

std::size_t BlockSymTensor::block_edge(std::size_t c) const {
  return std::min(block_size_, dim_ - c * block_size_);
}

std::span<const std::uint32_t> BlockSymTensor::block_key(std::size_t block) const {
  return {keys_.data() + block * order_, order_};
}

std::span<double> BlockSymTensor::block_data(std::size_t block) {
  const std::size_t end = block + 1 < offsets_.size() ? offsets_[block + 1] : data_.size();
  return {data_.data() + offsets_[block], end - offsets_[block]};
}

std::span<const double> BlockSymTensor::block_data(std::size_t block) const {
  const std::size_t end = block + 1 < offsets_.size() ? offsets_[block + 1] : data_.size();
  return {data_.data() + offsets_[block], end - offsets_[block]};
}

std::size_t BlockSymTensor::block_multiplicity(std::size_t block) const {
  const auto key = block_key(block);
  std::size_t denom = 1, run = 1;
  for (std::size_t k = 1; k <= order_; ++k) {
    if (k < order_ && key[k] == key[k - 1]) {
      ++run;
    } else {
      denom *= factorial(run);
      run = 1;
    }
  }
  return factorial(order_) / denom;
}

void BlockSymTensor::check_index(std::span<const std::size_t> index) const {
  if (index.size() != order_) throw std::invalid_argument("index length differs from tensor order");
  for (auto i : index) {
    if (i >= dim_) throw std::out_of_range("tensor index out of range");
  }
}

std::size_t BlockSymTensor::locate(const IndexBuffer& sorted) const {
  std::array<std::uint32_t, kMaxOrder> key{};
  for (std::size_t k = 0; k < order_; ++k) key[k] = static_cast<std::uint32_t>(sorted[k] / block_size_);
  const std::size_t blk = block_rank(key.data());
  std::size_t pos = 0;
  for (std::size_t k = 0; k < order_; ++k) {
    pos = pos * block_edge(key[k]) + sorted[k] % block_size_;
  }
  return offsets_[blk] + pos;
}

double BlockSymTensor::get(std::span<const std::size_t> index) const {
  check_index(index);
  IndexBuffer s{};
  std::copy(index.begin(), index.end(), s.begin());
  std::sort(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(order_));
  return data_[locate(s)];
}

void BlockSymTensor::set_sym(std::span<const std::size_t> index, double v) {
  check_index(index);
  IndexBuffer s{};
  std::copy(index.begin(), index.end(), s.begin());
  std::sort(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(order_));
  const std::size_t at = locate(s);
  // Inside a diagonal block the same value sits at every in-block permutation.
  const std::size_t blk = static_cast<std::size_t>(
      std::upper_bound(offsets_.begin(), offsets_.end(), at) - offsets_.begin() - 1);
  data_[at] = v;
  const auto key = block_key(blk);
  IndexBuffer p = s;
  const auto first = p.begin(), last = p.begin() + static_cast<std::ptrdiff_t>(order_);
  while (std::next_permutation(first, last)) {
    bool same_block = true;
    for (std::size_t k = 0; k < order_; ++k) {
      if (p[k] / block_size_ != key[k]) {
        same_block = false;
        break;
      }
    }
    if (!same_block) continue;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < order_; ++k) pos = pos * block_edge(key[k]) + p[k] % block_size_;
    data_[offsets_[blk] + pos] = v;
  }
}

void BlockSymTensor::symmetrise_block(std::size_t block) {
  const auto key = block_key(block);
  bool diagonal = false;
  for (std::size_t k = 1; k < order_; ++k) diagonal |= key[k] == key[k - 1];
  if (!diagonal) return;
  auto data = block_data(block);
  IndexBuffer edge{}, off{}, canon{};
  for (std::size_t k = 0; k < order_; ++k) edge[k] = block_edge(key[k]);
  for (std::size_t pos = 0; pos < data.size(); ++pos) {
    canon = off;
    std::size_t k = 0;
    while (k < order_) {
      std::size_t e = k + 1;
      while (e < order_ && key[e] == key[k]) ++e;
      std::sort(canon.begin() + static_cast<std::ptrdiff_t>(k),
                canon.begin() + static_cast<std::ptrdiff_t>(e));
      k = e;
    }
    std::size_t cpos = 0;
    for (std::size_t j = 0; j < order_; ++j) cpos = cpos * edge[j] + canon[j];
    if (cpos != pos) data[pos] = data[cpos];
    for (std::size_t j = order_; j-- > 0;) {
      if (++off[j] < edge[j]) break;
      off[j] = 0;
    }
  }
}

BlockSymTensor BlockSymTensor::identity(std::size_t dim, std::size_t order, std::size_t block_size) {
  BlockSymTensor t(dim, order, block_size);
  std::vector<std::size_t> idx(order);
  for (std::size_t i = 0; i < dim; ++i) {
    std::fill(idx.begin(), idx.end(), i);
    t.set_sym(idx, 1.0);
  }
  return t;
}

BlockSymTensor BlockSymTensor::from_dense(std::span<const double> dense, std::size_t dim,
                                          std::size_t order, std::size_t block_size) {
  const std::size_t total = checked_power(dim, order, kDenseCap);
  if (dense.size() != total) throw std::invalid_argument("dense size differs from dim^order");
  return generate(dim, order, block_size, [&](std::span<const std::size_t> idx) {
    std::size_t pos = 0;
    for (auto i : idx) pos = pos * dim + i;
    return dense[pos];
  });
}

BlockSymTensor BlockSymTensor::from_matrix(const Eigen::MatrixXd& m, std::size_t block_size) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("matrix must be square");
  const auto n = static_cast<std::size_t>(m.rows());
  return generate(n, 2, block_size, [&](std::span<const std::size_t> idx) {
    return 0.5 * (m(static_cast<Eigen::Index>(idx[0]), static_cast<Eigen::Index>(idx[1])) +
                  m(static_cast<Eigen::Index>(idx[1]), static_cast<Eigen::Index>(idx[0])));
  });
}

std::vector<double> BlockSymTensor::to_dense() const {
  const std::size_t total = checked_power(dim_, order_, kDenseCap);
  std::vector<double> out(total);
  IndexBuffer idx{};
  for (std::size_t pos = 0; pos < total; ++pos) {
    std::size_t rem = pos;
    for (std::size_t k = order_; k-- > 0;) {
      idx[k] = rem % dim_;
      rem /= dim_;
    }
    IndexBuffer s = idx;
    std::sort(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(order_));
    out[pos] = data_[locate(s)];
  }
  return out;
}

Eigen::MatrixXd BlockSymTensor::to_matrix() const {
  if (order_ != 2) throw std::invalid_argument("to_matrix requires an order-2 tensor");
  const auto n = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = get({static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
  return m;
}

namespace {
void require_same_layout(const BlockSymTensor& a, const BlockSymTensor& b) {
  if (a.dim() != b.dim() || a.order() != b.order() || a.block_size() != b.block_size())
    throw std::invalid_argument("tensor layouts differ");
}
}  // namespace

BlockSymTensor& BlockSymTensor::operator+=(const BlockSymTensor& other) {
  require_same_layout(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

BlockSymTensor& BlockSymTensor::operator-=(const BlockSymTensor& other) {
  require_same_layout(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

BlockSymTensor& BlockSymTensor::operator*=(double s) {
  for (auto& v : data_) v *= s;
  return *this;
}

double frobenius_norm(const BlockSymTensor& t) {
  double sum = 0.0;
  for (std::size_t b = 0; b < t.block_count(); ++b) {
    double s = 0.0;
    for (double v : t.block_data(b)) s += v * v;
    sum += static_cast<double>(t.block_multiplicity(b)) * s;
  }
  return std::sqrt(sum);
}

double inner_product(const BlockSymTensor& a, const BlockSymTensor& b) {
  require_same_layout(a, b);
  double sum = 0.0;
  for (std::size_t blk = 0; blk < a.block_count(); ++blk) {
    const auto x = a.block_data(blk);
    const auto y = b.block_data(blk);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    sum += static_cast<double>(a.block_multiplicity(blk)) * s;
  }
  return sum;
}

BlockSymTensor first_index_slice(const BlockSymTensor& t, std::size_t i) {
  if (t.order() < 2) throw std::invalid_argument("first_index_slice needs order >= 2");
  if (i >= t.dim()) throw std::out_of_range("slice index out of range");
  const std::size_t d = t.order() - 1;
  const std::size_t b = d <= 2 ? 0 : std::min(t.block_size(), t.dim());
  return BlockSymTensor::generate(t.dim(), d, b, [&](std::span<const std::size_t> idx) {
    IndexBuffer full{};
    full[0] = i;
    std::copy(idx.begin(), idx.end(), full.begin() + 1);
    return t.get(std::span<const std::size_t>(full.data(), d + 1));
  });
}

BlockSymTensor fiber_cut(const BlockSymTensor& t, std::size_t r) {
  if (t.dim() < 2) throw std::invalid_argument("fiber_cut needs dim >= 2");
  if (r >= t.dim()) throw std::out_of_range("fiber_cut index out of range");
  const std::size_t n = t.dim() - 1;
  const std::size_t b = std::min(t.block_size(), n);
  return BlockSymTensor::generate(n, t.order(), b, [&](std::span<const std::size_t> idx) {
    IndexBuffer src{};
    for (std::size_t k = 0; k < idx.size(); ++k) src[k] = idx[k] < r ? idx[k] : idx[k] + 1;
    return t.get(std::span<const std::size_t>(src.data(), idx.size()));
  });
}

BlockSymTensor mode_multiply(const BlockSymTensor& t, const Eigen::MatrixXd& a) {
  if (static_cast<std::size_t>(a.cols()) != t.dim() || a.rows() == 0)
    throw std::invalid_argument("mode_multiply: matrix columns must equal tensor dim");
  const std::size_t n = t.dim(), np = static_cast<std::size_t>(a.rows()), d = t.order();
  checked_power(std::max(n, np), d, kDenseCap);
  std::vector<double> cur = t.to_dense();
  // Mode k of a row-major array with shape (L, n_k, R).
  std::size_t left = 1;
  std::size_t right = 1;
  for (std::size_t k = 1; k < d; ++k) right *= n;
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<double> next(left * np * right, 0.0);
    for (std::size_t l = 0; l < left; ++l) {
      for (std::size_t i = 0; i < np; ++i) {
        double* dst = next.data() + (l * np + i) * right;
        for (std::size_t j = 0; j < n; ++j) {
          const double w = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          if (w == 0.0) continue;
          const double* src = cur.data() + (l * n + j) * right;
          for (std::size_t r = 0; r < right; ++r) dst[r] += w * src[r];
        }
      }
    }
    cur.swap(next);
    left *= np;
    if (k + 1 < d) right /= n;
  }
  const std::size_t b = d <= 2 ? 0 : std::min(t.block_size(), np);
  return BlockSymTensor::from_dense(cur, np, d, b);
}

Eigen::MatrixXd contract_self(const BlockSymTensor& t) {
  const std::size_t d = t.order(), n = t.dim();
  if (d < 2) throw std::invalid_argument("contract_self needs order >= 2");
  const std::size_t m = d - 1;
  // Sorted (i2..id) tuples, each weighted by its number of distinct permutations.
  std::vector<std::size_t> tuples;
  std::vector<double> weights;
  {
    std::vector<std::size_t> cur(m, 0);
    while (true) {
      tuples.insert(tuples.end(), cur.begin(), cur.end());
      std::size_t denom = 1, run = 1;
      for (std::size_t k = 1; k <= m; ++k) {
        if (k < m && cur[k] == cur[k - 1]) {
          ++run;
        } else {
          denom *= factorial(run);
          run = 1;
        }
      }
      weights.push_back(static_cast<double>(factorial(m) / denom));
      std::size_t k = m;
      while (k > 0 && cur[k - 1] + 1 == n) --k;
      if (k == 0) break;
      ++cur[k - 1];
      for (std::size_t j = k; j < m; ++j) cur[j] = cur[k - 1];
    }
  }
  const auto count = static_cast<std::ptrdiff_t>(weights.size());
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(nn, nn);
#pragma omp parallel
  {
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nn, nn);
    Eigen::VectorXd fiber(nn);
    IndexBuffer idx{};
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < count; ++c) {
      const std::size_t* tup = tuples.data() + static_cast<std::size_t>(c) * m;
      std::copy(tup, tup + m, idx.begin() + 1);
      for (std::size_t j = 0; j < n; ++j) {
        idx[0] = j;
        fiber(static_cast<Eigen::Index>(j)) = t.get(std::span<const std::size_t>(idx.data(), d));
      }
      local.noalias() += weights[static_cast<std::size_t>(c)] * fiber * fiber.transpose();
    }
#pragma omp critical
    total += local;
  }
  return total;
}

Eigen::MatrixXd unfold_transposed(const BlockSymTensor& t) {
  const std::size_t d = t.order(), n = t.dim();
  const std::size_t rows = checked_power(n, d - 1, kDenseCap);
  Eigen::MatrixXd v(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n));
  IndexBuffer idx{};
  for (std::size_t j = 0; j < rows; ++j) {
    // i2 is the fastest-varying index.
    std::size_t rem = j;
    for (std::size_t k = 1; k < d; ++k) {
      idx[k] = rem % n;
      rem /= n;
    }
    for (std::size_t i1 = 0; i1 < n; ++i1) {
      idx[0] = i1;
      v(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i1)) =
          t.get(std::span<const std::size_t>(idx.data(), d));
    }
  }
  return v;
}

namespace {

// Every ordered assignment of output slots to factors with the requested
// per-factor slot counts. labels[a * D + slot] = factor.
struct Labelings {
  std::size_t slots = 0;
  std::vector<std::uint8_t> labels;
  std::size_t count = 0;
  double inv_sym = 1.0;  // 1 / prod over equal-order classes of (class size)!
};

Labelings make_labelings(std::span<const std::size_t> orders) {
  Labelings l;
  l.slots = std::accumulate(orders.begin(), orders.end(), std::size_t{0});
  if (l.slots > kMaxOrder) throw std::invalid_argument("sym_outer: output order too large");
  std::vector<std::uint8_t> cur;
  for (std::size_t f = 0; f < orders.size(); ++f) cur.insert(cur.end(), orders[f], static_cast<std::uint8_t>(f));
  std::sort(cur.begin(), cur.end());
  do {
    l.labels.insert(l.labels.end(), cur.begin(), cur.end());
    ++l.count;
  } while (std::next_permutation(cur.begin(), cur.end()));
  std::vector<std::size_t> sorted(orders.begin(), orders.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t sym = 1, run = 1;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
      ++run;
    } else {
      sym *= factorial(run);
      run = 1;
    }
  }
  l.inv_sym = 1.0 / static_cast<double>(sym);
  return l;
}

BlockSymTensor sym_outer_impl(std::span<const BlockSymTensor* const> factors, std::size_t block_size) {
  const std::size_t n = factors[0]->dim();
  std::vector<std::size_t> orders;
  for (const auto* f : factors) {
    if (f->dim() != n) throw std::invalid_argument("sym_outer: dimension mismatch");
    orders.push_back(f->order());
  }
  const Labelings lab = make_labelings(orders);
  const std::size_t out_order = lab.slots;
  const std::size_t b = std::min(block_size, n);
  return BlockSymTensor::generate(n, out_order, b, [&](std::span<const std::size_t> idx) {
    double sum = 0.0;
    std::array<IndexBuffer, 3> parts{};
    std::array<std::size_t, 3> fill{};
    for (std::size_t a = 0; a < lab.count; ++a) {
      fill = {0, 0, 0};
      const std::uint8_t* row = lab.labels.data() + a * out_order;
      for (std::size_t s = 0; s < out_order; ++s) parts[row[s]][fill[row[s]]++] = idx[s];
      double prod = 1.0;
      for (std::size_t f = 0; f < factors.size(); ++f) {
        prod *= factors[f]->get(std::span<const std::size_t>(parts[f].data(), orders[f]));
      }
      sum += prod;
    }
    return sum * lab.inv_sym;
  });
}

}  // namespace

std::size_t sym_outer_term_count(std::span<const std::size_t> orders) {
  const Labelings l = make_labelings(orders);
  return static_cast<std::size_t>(std::llround(static_cast<double>(l.count) * l.inv_sym));
}

BlockSymTensor sym_outer(const BlockSymTensor& a, const BlockSymTensor& b, std::size_t block_size) {
  const std::array<const BlockSymTensor*, 2> f{&a, &b};
  return sym_outer_impl(f, block_size);
}

BlockSymTensor sym_outer(const BlockSymTensor& a, const BlockSymTensor& b, const BlockSymTensor& c,
                         std::size_t block_size) {
  const std::array<const BlockSymTensor*, 3> f{&a, &b, &c};
  return sym_outer_impl(f, block_size);
}

}  // namespace nongauss
