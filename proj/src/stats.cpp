#include "nongauss/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nongauss/special.hpp"

namespace nongauss {

namespace {
void require_same(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("series lengths differ");
  if (x.size() < 2) throw std::invalid_argument("need at least two observations");
}

// Merge sort counting swaps (inversions).
std::uint64_t merge_count(std::vector<double>& a, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = merge_count(a, buf, lo, mid) + merge_count(a, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (a[j] < a[i]) {
      swaps += mid - i;
      buf[k++] = a[j++];
    } else {
      buf[k++] = a[i++];
    }
  }
  while (i < mid) buf[k++] = a[i++];
  while (j < hi) buf[k++] = a[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            a.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

std::uint64_t tied_pairs(const std::vector<double>& sorted) {
  std::uint64_t ties = 0, run = 1;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
      ++run;
    } else {
      ties += run * (run - 1) / 2;
      run = 1;
    }
  }
  return ties;
}
}  // namespace

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  require_same(x, y);
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x[order[i]];
    ys[i] = y[order[i]];
  }
  // Pairs tied in x, and pairs tied jointly.
  std::uint64_t tx = 0, txy = 0;
  {
    std::uint64_t run = 1, jrun = 1;
    for (std::size_t i = 1; i <= n; ++i) {
      if (i < n && xs[i] == xs[i - 1]) {
        ++run;
        if (ys[i] == ys[i - 1]) {
          ++jrun;
        } else {
          txy += jrun * (jrun - 1) / 2;
          jrun = 1;
        }
      } else {
        tx += run * (run - 1) / 2;
        txy += jrun * (jrun - 1) / 2;
        run = 1;
        jrun = 1;
      }
    }
  }
  std::vector<double> buf(n);
  const std::uint64_t swaps = merge_count(ys, buf, 0, n);
  const std::uint64_t ty = tied_pairs(ys);
  const double n0 = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double num = n0 - static_cast<double>(tx) - static_cast<double>(ty) + static_cast<double>(txy) -
                     2.0 * static_cast<double>(swaps);
  const double den = std::sqrt((n0 - static_cast<double>(tx)) * (n0 - static_cast<double>(ty)));
  if (den == 0.0) return 0.0;
  return num / den;
}

std::vector<double> ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && x[order[j]] == x[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j + 1);
    for (std::size_t k = i; k < j; ++k) r[order[k]] = avg;
    i = j;
  }
  return r;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  require_same(x, y);
  const double mx = mean(x), my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = x[i] - mx, b = y[i] - my;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  require_same(x, y);
  const auto rx = ranks(x), ry = ranks(y);
  return pearson(rx, ry);
}

double ks_statistic(std::span<const double> x, const std::function<double(double)>& cdf) {
  if (x.empty()) throw std::invalid_argument("ks: empty sample");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_uniform(std::span<const double> x) {
  return ks_statistic(x, [](double v) { return std::clamp(v, 0.0, 1.0); });
}

double ks_normal(std::span<const double> x) { return ks_statistic(x, normal_cdf); }

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty set");
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
  const double hi = v[m];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m));
  return 0.5 * (lo + hi);
}

double mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean of empty set");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

Eigen::MatrixXd covariance(const Eigen::MatrixXd& x) {
  if (x.rows() < 1) throw std::invalid_argument("covariance of empty sample");
  const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
  return (c.transpose() * c) / static_cast<double>(x.rows());
}

Eigen::MatrixXd correlation(const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd c = covariance(x);
  const Eigen::VectorXd s = c.diagonal().cwiseSqrt();
  if (s.minCoeff() <= 0.0) throw std::invalid_argument("correlation: zero-variance column");
  const Eigen::VectorXd inv = s.cwiseInverse();
  return inv.asDiagonal() * c * inv.asDiagonal();
}

Eigen::MatrixXd spearman_matrix(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd r(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const auto rk = ranks(column(x, j));
    r.col(j) = Eigen::Map<const Eigen::VectorXd>(rk.data(), x.rows());
  }
  return correlation(r);
}

}  // namespace nongauss
