#include <cmath>
#include <vector>

#include "doctest.h"
#include "nongauss/randsource.hpp"
#include "nongauss/stats.hpp"
#include "nongauss/tseries.hpp"

using namespace nongauss;

namespace {

std::vector<double> white(std::size_t t, RngStream& rng) {
  std::vector<double> v(t);
  for (auto& x : v) x = rng.normal();
  return v;
}

std::vector<double> cumsum(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s += v[i];
  return out;
}

}  // namespace

TEST_SUITE("tseries") {

TEST_CASE("dfa on integrated white noise") {
  std::vector<double> h;
  for (std::uint64_t s = 0; s < 20; ++s) {
    RngStream rng(1, s);
    h.push_back(dfa_hurst(cumsum(white(1 << 14, rng)), 1.0, 20));
  }
  const double m = median(h);
  CHECK(m >= 0.45);
  CHECK(m <= 0.55);
}

TEST_CASE("dfa on fully correlated increments") {
  const std::vector<double> y = cumsum(std::vector<double>(4096, 0.3));
  const double h = dfa_hurst(y, 1.0, 20, Detrend::mean);
  CHECK(h >= 0.9);
  CHECK(h <= 1.05);
  // the same ramp leaves nothing after a linear fit
  CHECK_THROWS(dfa_hurst(y, 1.0, 20, Detrend::linear));
}

TEST_CASE("dfa is affine invariant") {
  RngStream rng(2);
  const std::vector<double> y = cumsum(white(5000, rng));
  std::vector<double> z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) z[i] = 3.5 * y[i] - 12.0;
  for (double q : {0.5, 1.0, 2.0}) CHECK(std::abs(dfa_hurst(y, q, 15) - dfa_hurst(z, q, 15)) < 1e-10);
}

TEST_CASE("dfa validation") {
  RngStream rng(3);
  const std::vector<double> y = white(100, rng);
  CHECK_THROWS(dfa_hurst(y, 0.0, 10));
  CHECK_THROWS(dfa_hurst(y, 1.0, 2));
  CHECK_THROWS(dfa_hurst(y, 1.0, 50));
}

TEST_CASE("autocorrelations") {
  const std::vector<double> zero(100, 0.0);
  CHECK(acf(zero, 1) == 0.0);
  CHECK(acf3(zero, 1, 2) == 0.0);
  CHECK(acf4(zero, 1, 2, 3) == 0.0);

  RngStream rng(4);
  const std::vector<double> w = white(1000000, rng);
  CHECK(std::abs(acf(w, 1)) < 0.005);
  CHECK(std::abs(acf3(w, 1, 2)) < 0.01);

  const std::vector<double> s = white(500, rng);
  const double m = mean(s);
  double var = 0.0;
  for (double v : s) var += (v - m) * (v - m);
  CHECK(acf(s, 0) == doctest::Approx(var / 500.0));

  std::vector<double> neg(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) neg[i] = -s[i];
  CHECK(acf(neg, 3) == doctest::Approx(acf(s, 3)));
  CHECK(acf3(neg, 1, 4) == doctest::Approx(-acf3(s, 1, 4)));
  CHECK(acf4(neg, 1, 2, 5) == doctest::Approx(acf4(s, 1, 2, 5)));
  CHECK_THROWS(acf(s, 500));
  CHECK_THROWS(acf3(s, 1, 600));
}

TEST_CASE("acf4 against the printed formula") {
  RngStream rng(5);
  const std::vector<double> z = white(200, rng);
  const std::size_t t1 = 1, t2 = 3, t3 = 4, tau = 4;
  const double m = mean(z);
  std::vector<double> c(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) c[i] = z[i] - m;
  const std::size_t n = z.size() - tau;
  auto sum = [&](std::size_t a, std::size_t b) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += c[i + a] * c[i + b];
    return s;
  };
  double raw = 0.0;
  for (std::size_t i = 0; i < n; ++i) raw += c[i] * c[i + t1] * c[i + t2] * c[i + t3];
  const double expect = raw / n - (sum(0, t1) * sum(t2, t3) + sum(0, t2) * sum(t1, t3) + sum(0, t3) * sum(t1, t2)) /
                                      (static_cast<double>(n) * n);
  CHECK(acf4(z, t1, t2, t3) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("cross correlations") {
  RngStream rng(6);
  const std::vector<double> z = white(1000, rng);
  CHECK(cross_acc(z, z, 0) == doctest::Approx(1.0).epsilon(1e-12));

  const std::size_t tau = 7;
  std::vector<double> w(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) w[i] = i >= tau ? z[i - tau] : rng.normal();
  CHECK(std::abs(cross_acc(z, w, tau) - 1.0) < 1e-12);

  const std::vector<double> a = white(1000000, rng), b = white(1000000, rng);
  CHECK(std::abs(cross_acc(a, b, 3)) < 0.01);

  std::vector<double> v(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) v[i] = i >= 2 ? z[i - 2] : 0.0;
  const std::vector<double> sq = [&] {
    std::vector<double> o(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) o[i] = z[i] * z[i];
    return o;
  }();
  CHECK(std::isfinite(cross_acc3(z, w, v, tau, 2)));
  CHECK(std::abs(cross_acc3(z, z, z, 0, 0)) < 0.3);
  CHECK(cross_acc3(sq, sq, sq, 0, 0) > 1.0);  // chi-square skewness
  CHECK_THROWS(cross_acc(z, std::vector<double>(999, 1.0), 0));
  CHECK_THROWS(cross_acc(z, std::vector<double>(1000, 1.0), 0));
}

}  // TEST_SUITE
