#include <cmath>
#include <random>

#include "doctest.h"
#include "nongauss/cormat.hpp"
#include "nongauss/cumulants.hpp"
#include "nongauss/dimreduce.hpp"
#include "nongauss/stats.hpp"
#include "oracles.hpp"

using namespace nongauss;
using oracle::Index;

namespace {

Eigen::MatrixXd random_spd(std::size_t n, std::mt19937_64& gen) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = z(gen);
  return a * a.transpose() + Eigen::MatrixXd::Identity(a.rows(), a.cols());
}

// smallest principal angle cosine between column spaces
double subspace_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.transpose() * b);
  return 1.0 - svd.singularValues().minCoeff();
}

}  // namespace

TEST_SUITE("dimreduce") {

TEST_CASE("mev target") {
  CHECK(mev_target(Eigen::MatrixXd::Identity(3, 3)) == doctest::Approx(1.0));
  std::mt19937_64 gen(1);
  const Eigen::MatrixXd s = random_spd(4, gen);
  const Eigen::VectorXd lam = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s).eigenvalues();
  CHECK(mev_target(s) == doctest::Approx(lam.prod()).epsilon(1e-10));
  Eigen::MatrixXd x = oracle::random_data(500, 3, gen);
  x.col(2) = x.col(0);
  CHECK(std::abs(mev_target(covariance(x))) < 1e-10);
  CHECK_THROWS(mev_target(Eigen::MatrixXd::Zero(2, 3)));
}

TEST_CASE("hdet target") {
  std::mt19937_64 gen(2);
  const Eigen::MatrixXd x1 = oracle::random_data(3000, 1, gen);
  const CumulantSet c1 = cumulant_tensors(x1, 3);
  const double c2 = c1[2].get(Index{0, 0}), c3 = c1[3].get(Index{0, 0, 0});
  CHECK(hdet_target(c1[2], c1[3]) == doctest::Approx(c3 * c3 / std::pow(c2, 3)));
  CHECK(hdet_target(c1[2], BlockSymTensor(1, 3)) == 0.0);

  const Eigen::MatrixXd x = oracle::random_data(400, 3, gen);
  const CumulantSet cs = cumulant_tensors(x, 3);
  oracle::Dense d3(3, 3);
  d3.v = cs[3].to_dense();
  const double expect = oracle::contract(d3).determinant() / std::pow(cs[2].to_matrix().determinant(), 3);
  CHECK(hdet_target(cs[2], cs[3]) == doctest::Approx(expect).epsilon(1e-10));
  CHECK(log_hdet_target(cs[2], cs[3]) == doctest::Approx(std::log(expect)).epsilon(1e-10));
  CHECK_THROWS(hdet_target(BlockSymTensor(3, 2), cs[3]));
}

TEST_CASE("select_features") {
  std::mt19937_64 gen(3);
  Eigen::MatrixXd x = oracle::random_data(2000, 5, gen);
  const CumulantSet cs = cumulant_tensors(x, 4);
  const auto all = select_features(cs, Target::hdet, 4, 5);
  CHECK(all.retained == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(all.steps.empty());

  for (Target t : {Target::mev, Target::hnorm, Target::hdet}) {
    const auto res = select_features(cs, t, 4, 2);
    REQUIRE(res.steps.size() == 3);
    CHECK(res.retained.size() == 2);
    std::size_t prev = 5;
    for (const auto& st : res.steps) {
      CHECK(st.remaining.size() == prev - 1);
      prev = st.remaining.size();
    }
    for (std::size_t k = 1; k < res.steps.size(); ++k)
      for (auto i : res.steps[k].remaining)
        CHECK(std::find(res.steps[k - 1].remaining.begin(), res.steps[k - 1].remaining.end(), i) !=
              res.steps[k - 1].remaining.end());
  }

  // exhaustive check of the first greedy step for hdet
  const auto res = select_features(cs, Target::hdet, 4, 4);
  double best = -1e300;
  std::size_t arg = 0;
  for (std::size_t r = 0; r < 5; ++r) {
    const double v = log_hdet_target(fiber_cut(cs[2], r), fiber_cut(cs[4], r));
    if (v > best + 1e-12) {
      best = v;
      arg = r;
    }
  }
  CHECK(res.steps[0].removed == arg);

  // duplicated marginal goes first under mev
  Eigen::MatrixXd xd(2000, 4);
  xd.leftCols(3) = x.leftCols(3);
  xd.col(3) = x.col(1);
  const auto dup = select_features(cumulant_tensors(xd, 2), Target::mev, 2, 3);
  CHECK((dup.steps[0].removed == 1 || dup.steps[0].removed == 3));

  CHECK_THROWS(select_features(cs, Target::hdet, 4, 6));
  CHECK_THROWS(select_features(cumulant_tensors(x, 3), Target::hdet, 4, 2));
  CHECK_THROWS(parse_target("pca"));
}

TEST_CASE("hosvd factor") {
  std::mt19937_64 gen(4);
  // independent marginals with distinct third cumulants: B is diagonal
  BlockSymTensor diag(3, 3);
  diag.set_sym(Index{0, 0, 0}, 1.0);
  diag.set_sym(Index{1, 1, 1}, 3.0);
  diag.set_sym(Index{2, 2, 2}, -2.0);
  const EigenFactor f = hosvd_factor(diag);
  CHECK(f.eigenvalues(0) == doctest::Approx(9.0));
  CHECK(f.eigenvalues(2) == doctest::Approx(1.0));
  CHECK(std::abs(f.factor(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(f.factor(2, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(f.factor(0, 2)) == doctest::Approx(1.0));

  const auto dense = oracle::random_symmetric(4, 3, gen);
  const auto t = BlockSymTensor::from_dense(dense.v, 4, 3);
  const EigenFactor g = hosvd_factor(t);
  CHECK((g.factor.transpose() * g.factor - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
  for (Eigen::Index i = 1; i < 4; ++i) CHECK(g.eigenvalues(i) <= g.eigenvalues(i - 1));
  const Eigen::MatrixXd b = oracle::contract(dense);
  CHECK((g.factor * g.eigenvalues.asDiagonal() * g.factor.transpose() - b).cwiseAbs().maxCoeff() < 1e-8);
  const Eigen::VectorXd lam = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(b).eigenvalues().reverse();
  CHECK((g.eigenvalues - lam).cwiseAbs().maxCoeff() < 1e-10);
  // the core tensor has a diagonal contraction and keeps the norm
  const auto core = mode_multiply(t, g.factor.transpose());
  const Eigen::MatrixXd bc = contract_self(core);
  CHECK((bc - Eigen::MatrixXd(bc.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(frobenius_norm(core) == doctest::Approx(frobenius_norm(t)).epsilon(1e-8));
}

TEST_CASE("als factor") {
  std::mt19937_64 gen(5);
  const Eigen::MatrixXd x = oracle::random_data(3000, 5, gen);
  const CumulantSet cs = cumulant_tensors(x, 4);

  // order 2 is the covariance eigenspace
  const AlsResult r2 = als_factor(cs, 2, 2);
  const Eigen::MatrixXd top = svd_factor(cs[2].to_matrix()).factor.leftCols(2);
  CHECK(subspace_gap(r2.factor, top) < 1e-6);

  const AlsResult r4 = als_factor(cs, 4, 2, 200);
  CHECK(r4.factor.cols() == 2);
  CHECK((r4.factor.transpose() * r4.factor - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(r4.converged);
  // the iteration is not an ascent method for xi; the flag just has to report the log honestly
  bool rising = true;
  for (std::size_t i = 1; i < r4.xi.size(); ++i)
    rising = rising && r4.xi[i] >= r4.xi[i - 1] - 1e-12 * std::max(1.0, std::abs(r4.xi[i - 1]));
  CHECK(r4.monotone == rising);
  CHECK(r4.xi.size() == r4.iterations);
  CHECK(als_objective(cs, 4, r4.factor) == doctest::Approx(r4.xi.back()));

  // with n' = n the first step is the eigen-decomposition of the unprojected sum
  const AlsResult one = als_factor(cs, 3, 5, 1);
  const Eigen::MatrixXd c2 = cs[2].to_matrix();
  const Eigen::MatrixXd tsum = 0.5 * c2 * c2 + contract_self(cs[3]) / 6.0;
  const Eigen::MatrixXd v = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(tsum).eigenvectors().rowwise().reverse();
  for (Eigen::Index j = 0; j < 5; ++j) CHECK(std::abs(std::abs(one.factor.col(j).dot(v.col(j))) - 1.0) < 1e-8);
  CHECK(one.factor.determinant() > 0.0);

  CHECK_THROWS(als_factor(cs, 5, 2));
  CHECK_THROWS(als_factor(cs, 4, 6));
}

TEST_CASE("nongauss weight") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(5, 5);
  a.col(4) = Eigen::VectorXd::Unit(5, 2);
  CHECK(nongauss_weight(a, 2) == 0.0);
  a.col(4).setConstant(1.0);
  CHECK(nongauss_weight(a, 2) == doctest::Approx(std::sqrt(2.0 / 5.0)));
  a.col(4).setZero();
  CHECK_THROWS(nongauss_weight(a, 2));
  CHECK_THROWS(nongauss_weight(Eigen::MatrixXd::Identity(3, 3), 3));
}

}  // TEST_SUITE
