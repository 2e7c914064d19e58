#include <cmath>
#include <vector>

#include "doctest.h"
#include "nongauss/copulas.hpp"
#include "nongauss/cormat.hpp"
#include "nongauss/stable_quantile.hpp"
#include "nongauss/stats.hpp"

using namespace nongauss;

namespace {

double tau_of(const SampleMatrix& u, Eigen::Index a = 0, Eigen::Index b = 1) {
  return kendall_tau(column(u, a), column(u, b));
}

bool all_in_unit(const SampleMatrix& u) { return u.minCoeff() >= 0.0 && u.maxCoeff() <= 1.0; }

void check_uniform_marginals(const SampleMatrix& u) {
  for (Eigen::Index j = 0; j < u.cols(); ++j) CHECK(ks_uniform(column(u, j)) < 0.006);
}

}  // namespace

TEST_SUITE("cormat") {

TEST_CASE("fixed generators") {
  const Eigen::MatrixXd c = cormat_constant(3, 0.5);
  Eigen::Matrix3d expect;
  expect << 1, .5, .5, .5, 1, .5, .5, .5, 1;
  CHECK(c.isApprox(expect));
  const Eigen::MatrixXd t = cormat_toeplitz(3, 0.5);
  expect << 1, .5, .25, .5, 1, .5, .25, .5, 1;
  CHECK(t.isApprox(expect));
  const Eigen::MatrixXd t6 = cormat_toeplitz(6, 0.7);
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = 0; j < 6; ++j) CHECK(t6(i, j) == doctest::Approx(t6(0, std::abs(i - j))));
}

TEST_CASE("random generators give correlation matrices") {
  RngStream rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::MatrixXd r = cormat_random(8, rng);
    CHECK(is_correlation_matrix(r));
    for (Eigen::Index i = 0; i < 8; ++i) {
      CHECK(r(i, i) == 1.0);
      for (Eigen::Index j = 0; j < 8; ++j)
        if (i != j) CHECK((r(i, j) > 0.0 && r(i, j) < 1.0));
    }
    CHECK(is_correlation_matrix(cormat_constant_noised(10, 0.5, std::nullopt, rng)));
    CHECK(is_correlation_matrix(cormat_constant_noised(10, 0.1, 0.9, rng)));  // needs the eigenvalue clip
  }
}

TEST_CASE("parameter validation") {
  RngStream rng(2);
  CHECK_THROWS(cormat_constant(1, 0.5));
  CHECK_THROWS(cormat_constant(3, 1.0));
  CHECK_THROWS(cormat_toeplitz(3, 0.0));
  CHECK_THROWS(parse_cor_method("banded"));
  CHECK(parse_cor_method("toeplitz") == CorMethod::toeplitz);
}

}  // TEST_SUITE

TEST_SUITE("copulas") {

TEST_CASE("generators") {
  CHECK(psi(Family::gumbel, 1.0, 0.7) == doctest::Approx(std::exp(-0.7)));
  CHECK(psi(Family::gumbel, 1.0, psi_inv(Family::gumbel, 1.0, 0.37)) == doctest::Approx(0.37));
  CHECK(psi_inv(Family::clayton, 2.0, 0.5) == doctest::Approx(1.5));
  const std::pair<Family, double> cases[] = {
      {Family::gumbel, 2.5}, {Family::clayton, 1.3}, {Family::frank, 4.0}, {Family::amh, 0.6}};
  for (auto [f, th] : cases) {
    for (int i = 1; i <= 99; ++i) {
      const double x = i / 100.0;
      CHECK(std::abs(psi(f, th, psi_inv(f, th, x)) - x) < 1e-12);
    }
  }
  CHECK_THROWS(check_theta(Family::gumbel, 0.5, 2));
  CHECK_THROWS(check_theta(Family::clayton, -0.5, 3));
  CHECK_NOTHROW(check_theta(Family::clayton, -0.5, 2));
  CHECK_THROWS(check_theta(Family::frank, 0.0, 2));
  CHECK_THROWS(check_theta(Family::amh, -0.5, 3));
  CHECK_NOTHROW(check_theta(Family::amh, -1.0, 2));
}

TEST_CASE("dependence conversions") {
  CHECK(elliptical_tau(1.0) == doctest::Approx(1.0));
  CHECK(tau_from_theta(Family::gumbel, 3.0) == doctest::Approx(2.0 / 3.0));
  CHECK(tau_from_theta(Family::clayton, 2.0) == doctest::Approx(0.5));
  for (double th : {0.5, 2.0, 8.0}) CHECK(std::abs(theta_from_tau(Family::frank, tau_from_theta(Family::frank, th)) - th) < 1e-6);
  for (double th : {-0.7, 0.3, 0.9}) CHECK(std::abs(theta_from_tau(Family::amh, tau_from_theta(Family::amh, th)) - th) < 1e-6);
  CHECK_THROWS(theta_from_tau(Family::amh, 0.5));  // beyond 1/3
  CHECK(elliptical_r_from_tau(elliptical_tau(0.3)) == doctest::Approx(0.3));
  // rho by quadrature against the closed forms: Gaussian 6/pi asin(r/2), FGM-free check on Clayton via theta round trip
  for (double th : {1.5, 4.0}) CHECK(theta_from_rho(Family::gumbel, rho_from_theta(Family::gumbel, th)) == doctest::Approx(th).epsilon(1e-6));
  CHECK(gaussian_rho(0.5) == doctest::Approx(6.0 / M_PI * std::asin(0.25)));
}

TEST_CASE("printed Spearman identity agrees with samples") {
  RngStream rng(3);
  for (auto [f, th] : {std::pair{Family::clayton, 2.0}, std::pair{Family::frank, 5.0}, std::pair{Family::gumbel, 1.8}}) {
    const SampleMatrix u = sample_archimedean(f, th, 2, 100000, rng);
    CHECK(spearman_rho(column(u, 0), column(u, 1)) == doctest::Approx(rho_from_theta(f, th)).epsilon(0.02));
  }
}

TEST_CASE("tail dependence") {
  CopulaSpec g;
  g.family = Family::gumbel;
  g.theta = 2.0;
  CHECK(tail_dependence(g).second == doctest::Approx(2.0 - std::sqrt(2.0)));
  CHECK(tail_dependence(g).first == 0.0);
  CopulaSpec c;
  c.family = Family::clayton;
  c.theta = 2.0;
  CHECK(tail_dependence(c).first == doctest::Approx(std::pow(2.0, -0.5)));
  auto [l, u] = tstudent_tail(1, 0.0);
  // t_2 has cdf 1/2 + x / (2 sqrt(2 + x^2)); at x = -sqrt(2) the tail is 1 - 1/sqrt(2), not the often quoted 1/4
  CHECK(l == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(u == doctest::Approx(l));
  CopulaSpec n;
  n.family = Family::gaussian;
  n.r = cormat_constant(2, 0.7);
  CHECK(tail_dependence(n) == std::pair{0.0, 0.0});
  CopulaSpec f2;
  f2.family = Family::frechet2;
  f2.alpha = 0.3;
  f2.beta = 0.2;
  CHECK(tail_dependence(f2).first == doctest::Approx(0.3));
}

TEST_CASE("marshall-olkin samplers") {
  RngStream rng(4);
  const SampleMatrix cl = sample_archimedean(Family::clayton, 2.0, 2, 100000, rng);
  CHECK(all_in_unit(cl));
  check_uniform_marginals(cl);
  CHECK(tau_of(cl) == doctest::Approx(0.5).epsilon(0.02));
  const std::pair<Family, double> cases[] = {{Family::gumbel, 1.5}, {Family::gumbel, 3.0}, {Family::frank, 0.5},
                                              {Family::frank, 8.0}, {Family::amh, 0.5},    {Family::amh, 0.9},
                                              {Family::clayton, 0.4}};
  for (auto [f, th] : cases) {
    const SampleMatrix u = sample_archimedean(f, th, 3, 100000, rng);
    check_uniform_marginals(u);
    CHECK(std::abs(tau_of(u, 0, 2) - tau_from_theta(f, th)) < 0.02);
  }
  CHECK_THROWS(sample_archimedean(Family::clayton, -0.5, 3, 10, rng));
}

TEST_CASE("bivariate conditional sampler") {
  RngStream rng(5);
  const SampleMatrix neg = sample_bivariate_archimedean(Family::clayton, -0.75, 100000, rng);
  CHECK(std::abs(tau_of(neg) + 0.6) < 0.02);
  CHECK(ks_uniform(column(neg, 1)) < 0.006);
  CHECK(std::abs(tau_of(sample_bivariate_archimedean(Family::frank, 0.05, 100000, rng))) < 0.02);
  const SampleMatrix fr = sample_bivariate_archimedean(Family::frank, -4.0, 100000, rng);
  CHECK(std::abs(tau_of(fr) - tau_from_theta(Family::frank, -4.0)) < 0.02);
  const SampleMatrix gu = sample_bivariate_archimedean(Family::gumbel, 2.0, 50000, rng);
  CHECK(std::abs(tau_of(gu) - 0.5) < 0.02);
  const SampleMatrix am = sample_bivariate_archimedean(Family::amh, -0.8, 100000, rng);
  CHECK(std::abs(tau_of(am) - tau_from_theta(Family::amh, -0.8)) < 0.02);
  // conditional quantile inverts the h-function: C(u1 + e, v) - C(u1 - e, v) over 2e ~ w
  for (auto [f, th] : {std::pair{Family::frank, 3.0}, std::pair{Family::clayton, 1.5}, std::pair{Family::gumbel, 2.0},
                       std::pair{Family::amh, 0.5}}) {
    const double u1 = 0.3, w = 0.7, e = 1e-5;
    const double v = conditional_quantile(f, th, u1, w);
    const double h = (copula_cdf(f, th, u1 + e, v) - copula_cdf(f, th, u1 - e, v)) / (2 * e);
    CHECK(h == doctest::Approx(w).epsilon(1e-5));
  }
}

TEST_CASE("frechet samplers") {
  RngStream rng(6);
  const SampleMatrix full = sample_frechet(1.0, 4, 1000, rng);
  for (Eigen::Index i = 0; i < full.rows(); ++i) CHECK(full.row(i).maxCoeff() == full.row(i).minCoeff());
  const SampleMatrix half = sample_frechet(0.5, 4, 100000, rng);
  for (Eigen::Index a = 0; a < 4; ++a)
    for (Eigen::Index b = a + 1; b < 4; ++b) CHECK(std::abs(spearman_rho(column(half, a), column(half, b)) - 0.5) < 0.02);
  // two-parameter: rho = alpha - beta
  const SampleMatrix f2 = sample_frechet2(0.5, 0.2, 100000, rng);
  check_uniform_marginals(f2);
  CHECK(std::abs(spearman_rho(column(f2, 0), column(f2, 1)) - 0.3) < 0.02);
  CHECK_THROWS(sample_frechet2(0.7, 0.5, 10, rng));
}

TEST_CASE("elliptical copulas") {
  RngStream rng(7);
  for (double r : {0.3, 0.75}) {
    const SampleMatrix g = sample_gaussian_copula(cormat_constant(2, r), 100000, rng);
    CHECK(std::abs(tau_of(g) - elliptical_tau(r)) < 0.01);
    const SampleMatrix t = sample_tstudent_copula(cormat_constant(2, r), 4, 100000, rng);
    CHECK(std::abs(tau_of(t) - elliptical_tau(r)) < 0.01);
    check_uniform_marginals(t);
  }
}

TEST_CASE("frechet-hoeffding bounds") {
  RngStream rng(8);
  const SampleMatrix u = sample_bivariate_archimedean(Family::clayton, -0.9, 20000, rng);
  for (int a = 1; a <= 10; ++a) {
    for (int b = 1; b <= 10; ++b) {
      const double x = a / 10.0, y = b / 10.0;
      double c = 0.0;
      for (Eigen::Index i = 0; i < u.rows(); ++i) c += (u(i, 0) <= x && u(i, 1) <= y) ? 1.0 : 0.0;
      c /= static_cast<double>(u.rows());
      CHECK(c - std::max(x + y - 1.0, 0.0) >= -0.01);
      CHECK(std::min(x, y) - c >= -0.01);
    }
  }
}

TEST_CASE("nested archimedean") {
  RngStream rng(9);
  const double th0 = 1.0 / (1.0 - 0.3), th1 = 1.0 / (1.0 - 0.6);
  const std::size_t sizes[] = {2, 1};
  const double thetas[] = {th1, th0};
  const SampleMatrix u = sample_nested_archimedean(Family::gumbel, sizes, thetas, th0, 100000, rng);
  CHECK(all_in_unit(u));
  CHECK(std::abs(tau_of(u, 0, 1) - 0.6) < 0.02);
  CHECK(std::abs(tau_of(u, 0, 2) - 0.3) < 0.02);
  check_uniform_marginals(u);

  const std::size_t one[] = {3};
  const double same[] = {2.0};
  const SampleMatrix flat = sample_nested_archimedean(Family::clayton, one, same, 2.0, 100000, rng);
  CHECK(std::abs(tau_of(flat, 1, 2) - 0.5) < 0.02);

  NestedStats stats;
  const std::size_t cs[] = {2, 2};
  const double ct[] = {3.0, 5.0};
  const SampleMatrix c = sample_nested_archimedean(Family::clayton, cs, ct, 1.0, 100000, rng, &stats);
  CHECK(std::abs(tau_of(c, 0, 1) - tau_from_theta(Family::clayton, 3.0)) < 0.02);
  CHECK(std::abs(tau_of(c, 2, 3) - tau_from_theta(Family::clayton, 5.0)) < 0.02);
  CHECK(std::abs(tau_of(c, 0, 3) - tau_from_theta(Family::clayton, 1.0)) < 0.02);
  check_uniform_marginals(c);
  CHECK(stats.proposals >= stats.accepted);
  CHECK(stats.acceptance() > 0.3);

  const double bad[] = {0.5, 3.0};
  CHECK_THROWS(sample_nested_archimedean(Family::clayton, cs, bad, 1.0, 10, rng));
  CHECK_THROWS(sample_nested_archimedean(Family::frank, cs, ct, 1.0, 10, rng));
}

TEST_CASE("copula spec dispatch") {
  RngStream rng(10);
  CopulaSpec spec;
  spec.family = Family::gumbel;
  spec.n = 4;
  spec.theta = 1.5;
  spec.children.push_back({{1, 3}, 4.0});
  const SampleMatrix u = sample_copula(spec, 50000, rng);
  CHECK(u.cols() == 4);
  CHECK(std::abs(tau_of(u, 1, 3) - 0.75) < 0.02);
  CHECK(std::abs(tau_of(u, 0, 2) - 1.0 / 3.0) < 0.02);
  spec.children.push_back({{3}, 2.0});
  CHECK_THROWS(sample_copula(spec, 10, rng));
  CHECK(parse_family("clayton") == Family::clayton);
  CHECK_THROWS(parse_family("joe"));
}

TEST_CASE("positive stable quantile and latent laws") {
  // alpha = 1/2 is Levy with Laplace exp(-sqrt(s)): F(x) = erfc(1 / (2 sqrt(x)))
  const PositiveStableQuantile q(0.5);
  for (double x : {0.05, 0.3, 1.0, 10.0}) CHECK(q.cdf(x) == doctest::Approx(std::erfc(0.5 / std::sqrt(x))).epsilon(1e-6));
  for (double u : {0.01, 0.5, 0.99}) CHECK(q.cdf(q(u)) == doctest::Approx(u).epsilon(1e-5));

  // latent quantiles reproduce the sampled latent law
  RngStream rng(11);
  for (auto [f, th] : {std::pair{Family::clayton, 2.0}, std::pair{Family::gumbel, 2.0}, std::pair{Family::frank, 3.0},
                       std::pair{Family::amh, 0.6}}) {
    const LatentQuantile lq(f, th);
    std::vector<double> a(20000), b(20000);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = sample_latent(f, th, rng);
      b[i] = lq(rng.uniform());
    }
    CHECK(std::abs(median(a) - median(b)) / median(a) < 0.05);
  }
}

}  // TEST_SUITE
