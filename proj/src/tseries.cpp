#include "nongauss/tseries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace nongauss {

namespace {

// sum of squared residuals^q / len for one window
double window_fluct(const double* y, std::size_t len, double q, Detrend model, double& ss_res) {
  const double n = static_cast<double>(len);
  double my = 0.0;
  for (std::size_t j = 0; j < len; ++j) my += y[j];
  my /= n;
  double slope = 0.0;
  double mx = 0.0;
  if (model == Detrend::linear) {
    mx = (n - 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
      const double dx = static_cast<double>(j) - mx;
      sxy += dx * (y[j] - my);
      sxx += dx * dx;
    }
    slope = sxy / sxx;
  }
  double acc = 0.0;
  ss_res = 0.0;
  for (std::size_t j = 0; j < len; ++j) {
    const double r = y[j] - my - slope * (static_cast<double>(j) - mx);
    const double r2 = r * r;
    ss_res += r2;
    acc += std::pow(r2, q);
  }
  return acc / n;
}

std::vector<double> centred(std::span<const double> z) {
  double m = 0.0;
  for (double v : z) m += v;
  m /= static_cast<double>(z.size());
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] - m;
  return out;
}

void check_lag(std::size_t t, std::size_t lag) {
  if (t == 0) throw std::invalid_argument("acf: empty series");
  if (lag >= t) throw std::invalid_argument("acf: lag must be smaller than the series length");
}

// standardised copy of z[off, off+len)
std::vector<double> standardised(std::span<const double> z, std::size_t off, std::size_t len) {
  std::vector<double> out = centred(z.subspan(off, len));
  double s = 0.0;
  for (double v : out) s += v * v;
  s = std::sqrt(s / static_cast<double>(len));
  if (!(s > 0.0)) throw std::invalid_argument("cross_acc: zero variance input");
  for (double& v : out) v /= s;
  return out;
}

}  // namespace

double dfa_hurst(std::span<const double> y, double q, std::size_t n_max, Detrend model) {
  const std::size_t t = y.size();
  if (q == 0.0 || !std::isfinite(q)) throw std::invalid_argument("dfa: q must be finite and non-zero");
  if (n_max < 3) throw std::invalid_argument("dfa: N must be >= 3");
  const std::size_t min_len = (t + n_max - 1) / n_max;
  if (min_len < 4) throw std::invalid_argument("dfa: series too short for N");

  double total_ss = 0.0;
  {
    const std::vector<double> c = centred(y);
    for (double v : c) total_ss += v * v;
  }

  std::vector<double> lx, ly;
  bool any_signal = false;
  for (std::size_t i = 2; i <= n_max; ++i) {
    const std::size_t tau = (t + i - 1) / i;
    std::vector<double> delta(i), ss(i);
    const auto ii = static_cast<std::ptrdiff_t>(i);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < ii; ++k) {
      const std::size_t start = std::min(static_cast<std::size_t>(k) * tau, t - tau);
      delta[static_cast<std::size_t>(k)] = window_fluct(y.data() + start, tau, q, model, ss[static_cast<std::size_t>(k)]);
    }
    double d = 0.0, s = 0.0;
    for (std::size_t k = 0; k < i; ++k) {
      d += delta[k];
      s += ss[k];
    }
    d /= static_cast<double>(i);
    if (s > 1e-20 * total_ss && d > 0.0 && std::isfinite(d)) any_signal = true;
    else continue;
    lx.push_back(std::log(static_cast<double>(tau)));
    ly.push_back(std::log(d));
  }
  if (!any_signal || lx.size() < 2) throw std::runtime_error("dfa: degenerate regression (no residual fluctuation)");

  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t j = 0; j < lx.size(); ++j) {
    mx += lx[j];
    my += ly[j];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t j = 0; j < lx.size(); ++j) {
    sxy += (lx[j] - mx) * (ly[j] - my);
    sxx += (lx[j] - mx) * (lx[j] - mx);
  }
  if (!(sxx > 0.0)) throw std::runtime_error("dfa: degenerate regression (single segment length)");
  return sxy / sxx / (2.0 * q);
}

double acf(std::span<const double> z, std::size_t tau) {
  check_lag(z.size(), tau);
  const std::vector<double> c = centred(z);
  const std::size_t m = z.size() - tau;
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) s += c[i] * c[i + tau];
  return s / static_cast<double>(m);
}

double acf3(std::span<const double> z, std::size_t tau1, std::size_t tau2) {
  const std::size_t lag = std::max(tau1, tau2);
  check_lag(z.size(), lag);
  const std::vector<double> c = centred(z);
  const std::size_t m = z.size() - lag;
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) s += c[i] * c[i + tau1] * c[i + tau2];
  return s / static_cast<double>(m);
}

double acf4(std::span<const double> z, std::size_t tau1, std::size_t tau2, std::size_t tau3) {
  const std::size_t lag = std::max({tau1, tau2, tau3});
  check_lag(z.size(), lag);
  const std::vector<double> c = centred(z);
  const std::size_t m = z.size() - lag;
  double raw = 0.0;
  double s01 = 0.0, s23 = 0.0, s02 = 0.0, s13 = 0.0, s03 = 0.0, s12 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double a = c[i], b1 = c[i + tau1], b2 = c[i + tau2], b3 = c[i + tau3];
    raw += a * b1 * b2 * b3;
    s01 += a * b1;
    s23 += b2 * b3;
    s02 += a * b2;
    s13 += b1 * b3;
    s03 += a * b3;
    s12 += b1 * b2;
  }
  const double inv = 1.0 / static_cast<double>(m);
  return raw * inv - inv * inv * (s01 * s23 + s02 * s13 + s03 * s12);
}

double cross_acc(std::span<const double> z, std::span<const double> w, std::size_t tau) {
  if (z.size() != w.size()) throw std::invalid_argument("cross_acc: series lengths differ");
  check_lag(z.size(), tau);
  const std::size_t m = z.size() - tau;
  const std::vector<double> a = standardised(z, 0, m);
  const std::vector<double> b = standardised(w, tau, m);
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) s += a[i] * b[i];
  return s / static_cast<double>(m);
}

double cross_acc3(std::span<const double> z, std::span<const double> w, std::span<const double> v,
                  std::size_t tau1, std::size_t tau2) {
  if (z.size() != w.size() || z.size() != v.size()) throw std::invalid_argument("cross_acc3: series lengths differ");
  const std::size_t lag = std::max(tau1, tau2);
  check_lag(z.size(), lag);
  const std::size_t m = z.size() - lag;
  const std::vector<double> a = standardised(z, 0, m);
  const std::vector<double> b = standardised(w, tau1, m);
  const std::vector<double> c = standardised(v, tau2, m);
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) s += a[i] * b[i] * c[i];
  return s / static_cast<double>(m);
}

}  // namespace nongauss
