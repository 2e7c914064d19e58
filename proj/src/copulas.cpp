#include "nongauss/copulas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include "nongauss/special.hpp"
#include "nongauss/stable_quantile.hpp"

namespace nongauss {

Family parse_family(const std::string& name) {
  if (name == "gaussian" || name == "gauss") return Family::gaussian;
  if (name == "tstudent" || name == "t") return Family::tstudent;
  if (name == "frechet" || name == "frechet1") return Family::frechet1;
  if (name == "frechet2") return Family::frechet2;
  if (name == "gumbel") return Family::gumbel;
  if (name == "clayton") return Family::clayton;
  if (name == "frank") return Family::frank;
  if (name == "amh") return Family::amh;
  throw std::invalid_argument("unknown copula family: " + name);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::tstudent: return "tstudent";
    case Family::frechet1: return "frechet";
    case Family::frechet2: return "frechet2";
    case Family::gumbel: return "gumbel";
    case Family::clayton: return "clayton";
    case Family::frank: return "frank";
    case Family::amh: return "amh";
  }
  return "unknown";
}

bool is_archimedean(Family f) {
  return f == Family::gumbel || f == Family::clayton || f == Family::frank || f == Family::amh;
}

namespace {

void require_archimedean(Family f) {
  if (!is_archimedean(f)) throw std::invalid_argument("not an Archimedean family: " + family_name(f));
}

// S with Laplace transform exp(-s^alpha).
double positive_stable(double alpha, RngStream& rng) {
  if (alpha == 1.0) return 1.0;
  const double gamma = std::pow(std::cos(std::numbers::pi * alpha / 2.0), 1.0 / alpha);
  return gamma * sample_levy(alpha, 1.0, rng);
}

template <class F>
double solve_monotone(F f, double lo, double hi) {
  boost::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (r.first + r.second);
}

double gumbel_dcdu(double theta, double u1, double u2) {
  const double x = -std::log(u1), y = -std::log(u2);
  const double a = std::pow(x, theta) + std::pow(y, theta);
  const double c = std::exp(-std::pow(a, 1.0 / theta));
  return c * std::pow(a, 1.0 / theta - 1.0) * std::pow(x, theta - 1.0) / u1;
}

}  // namespace

bool theta_in_mo_range(Family f, double theta) {
  switch (f) {
    case Family::gumbel: return theta >= 1.0;
    case Family::clayton: return theta > 0.0;
    case Family::frank: return theta > 0.0;
    case Family::amh: return theta >= 0.0 && theta < 1.0;
    default: return false;
  }
}

void check_theta(Family f, double theta, std::size_t n) {
  require_archimedean(f);
  if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
  if (n > 2) {
    if (!theta_in_mo_range(f, theta))
      throw std::invalid_argument("theta outside the multivariate range for " + family_name(f));
    return;
  }
  bool ok = false;
  switch (f) {
    case Family::gumbel: ok = theta >= 1.0; break;
    case Family::clayton: ok = theta >= -1.0 && theta != 0.0; break;
    case Family::frank: ok = theta != 0.0; break;
    case Family::amh: ok = theta >= -1.0 && theta <= 1.0; break;
    default: break;
  }
  if (!ok) throw std::invalid_argument("theta outside the bivariate range for " + family_name(f));
}

double psi(Family f, double theta, double v) {
  check_theta(f, theta, 2);
  if (v < 0.0) throw std::invalid_argument("psi: argument must be >= 0");
  switch (f) {
    case Family::gumbel: return std::exp(-std::pow(v, 1.0 / theta));
    case Family::clayton: return std::pow(std::max(1.0 + theta * v, 0.0), -1.0 / theta);
    case Family::frank: return -std::log1p(std::exp(-v) * std::expm1(-theta)) / theta;
    case Family::amh: return (1.0 - theta) / (std::exp(v) - theta);
    default: break;
  }
  throw std::invalid_argument("psi: unsupported family");
}

double psi_inv(Family f, double theta, double x) {
  check_theta(f, theta, 2);
  if (!(x > 0.0 && x <= 1.0)) throw std::invalid_argument("psi_inv: argument must be in (0,1]");
  switch (f) {
    case Family::gumbel: return std::pow(-std::log(x), theta);
    case Family::clayton: return (std::pow(x, -theta) - 1.0) / theta;
    case Family::frank: return -std::log(std::expm1(-theta * x) / std::expm1(-theta));
    case Family::amh: return std::log((1.0 - theta * (1.0 - x)) / x);
    default: break;
  }
  throw std::invalid_argument("psi_inv: unsupported family");
}

double copula_cdf(Family f, double theta, double u, double v) {
  check_theta(f, theta, 2);
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (u >= 1.0) return std::min(v, 1.0);
  if (v >= 1.0) return u;
  switch (f) {
    case Family::gumbel: {
      const double a = std::pow(-std::log(u), theta) + std::pow(-std::log(v), theta);
      return std::exp(-std::pow(a, 1.0 / theta));
    }
    case Family::clayton:
      return std::pow(std::max(std::pow(u, -theta) + std::pow(v, -theta) - 1.0, 0.0), -1.0 / theta);
    case Family::frank:
      return -std::log1p(std::expm1(-theta * u) * std::expm1(-theta * v) / std::expm1(-theta)) / theta;
    case Family::amh: return u * v / (1.0 - theta * (1.0 - u) * (1.0 - v));
    default: break;
  }
  throw std::invalid_argument("copula_cdf: unsupported family");
}

double sample_latent(Family f, double theta, RngStream& rng) {
  check_theta(f, theta, 3);
  switch (f) {
    case Family::gumbel: return positive_stable(1.0 / theta, rng);
    case Family::clayton: return theta * rng.gamma(1.0 / theta);
    case Family::frank: return static_cast<double>(rng.logarithmic_log1mp(-theta));
    case Family::amh: return static_cast<double>(rng.geometric(1.0 - theta));
    default: break;
  }
  throw std::invalid_argument("sample_latent: unsupported family");
}

struct LatentQuantile::Impl {
  Family family;
  double theta;
  std::unique_ptr<PositiveStableQuantile> stable;
};

LatentQuantile::LatentQuantile(Family f, double theta) : impl_(std::make_unique<Impl>()) {
  check_theta(f, theta, 3);
  impl_->family = f;
  impl_->theta = theta;
  if (f == Family::gumbel) impl_->stable = std::make_unique<PositiveStableQuantile>(1.0 / theta);
}

LatentQuantile::~LatentQuantile() = default;
LatentQuantile::LatentQuantile(LatentQuantile&&) noexcept = default;
LatentQuantile& LatentQuantile::operator=(LatentQuantile&&) noexcept = default;

double LatentQuantile::operator()(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("latent quantile: u must be in (0,1)");
  const double theta = impl_->theta;
  switch (impl_->family) {
    case Family::gumbel: return (*impl_->stable)(u);
    case Family::clayton: return theta * boost::math::gamma_p_inv(1.0 / theta, u);
    case Family::amh: {
      if (theta == 0.0) return 1.0;
      return std::max(1.0, std::ceil(std::log1p(-u) / std::log(theta)));
    }
    case Family::frank: {
      // Logarithmic series with p = 1 - exp(-theta): P(k) = p^k / (k theta).
      const double p = -std::expm1(-theta);
      double pk = p, cdf = 0.0;
      for (long k = 1; k <= 4096; ++k) {
        cdf += pk / (static_cast<double>(k) * theta);
        if (cdf >= u) return static_cast<double>(k);
        pk *= p;
      }
      // Far tail: P(K > k) ~ E1(h (k + 1/2)) / theta with h = -ln p.
      const double h = -std::log(p);
      auto tail = [&](double k) { return boost::math::expint(1, h * (k + 0.5)) / theta - (1.0 - u); };
      double hi = 8192.0;
      while (tail(hi) > 0.0) hi *= 2.0;
      return std::ceil(solve_monotone(tail, 4096.0, hi));
    }
    default: break;
  }
  throw std::invalid_argument("latent quantile: unsupported family");
}

SampleMatrix sample_archimedean(Family f, double theta, std::size_t n, std::size_t t, RngStream& rng) {
  if (n < 2) throw std::invalid_argument("copula needs n >= 2");
  check_theta(f, theta, n);
  if (!theta_in_mo_range(f, theta)) return sample_bivariate_archimedean(f, theta, t, rng);
  const auto cols = static_cast<Eigen::Index>(n);
  SampleMatrix u(static_cast<Eigen::Index>(t), cols);
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    const double v = sample_latent(f, theta, rng);
    for (Eigen::Index i = 0; i < cols; ++i) u(j, i) = psi(f, theta, -std::log(rng.uniform()) / v);
  }
  return u;
}

double conditional_quantile(Family f, double theta, double u1, double w) {
  check_theta(f, theta, 2);
  switch (f) {
    case Family::clayton: {
      if (theta == -1.0) return 1.0 - u1;
      const double base = (std::pow(w, -theta / (1.0 + theta)) - 1.0) * std::pow(u1, -theta) + 1.0;
      return std::clamp(std::pow(std::max(base, 0.0), -1.0 / theta), 0.0, 1.0);
    }
    case Family::frank: {
      const double a = std::exp(-theta * u1);
      return std::clamp(-std::log1p(w * std::expm1(-theta) / (w + (1.0 - w) * a)) / theta, 0.0, 1.0);
    }
    case Family::amh: {
      const double a = 1.0 - theta * (1.0 - u1), c = theta * (1.0 - u1);
      const double qa = theta - w * c * c, qb = (1.0 - theta) - 2.0 * w * a * c, qc = -w * a * a;
      const double disc = std::sqrt(std::max(qb * qb - 4.0 * qa * qc, 0.0));
      double v = qb + disc > 0.0 ? -2.0 * qc / (qb + disc) : (-qb - disc) / (2.0 * qa);
      if (!(v >= -1e-12 && v <= 1.0 + 1e-12) && qa != 0.0) v = (-qb - disc) / (2.0 * qa);
      return std::clamp(v, 0.0, 1.0);
    }
    case Family::gumbel: {
      if (theta == 1.0) return w;
      double lo = 0.0, hi = 1.0;
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (gumbel_dcdu(theta, u1, mid) < w) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    default: break;
  }
  throw std::invalid_argument("conditional_quantile: unsupported family");
}

SampleMatrix sample_bivariate_archimedean(Family f, double theta, std::size_t t, RngStream& rng) {
  check_theta(f, theta, 2);
  SampleMatrix u(static_cast<Eigen::Index>(t), 2);
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    const double u1 = rng.uniform();
    const double w = rng.uniform();
    u(j, 0) = u1;
    u(j, 1) = conditional_quantile(f, theta, u1, w);
  }
  return u;
}

SampleMatrix sample_frechet(double alpha, std::size_t n, std::size_t t, RngStream& rng) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("frechet: alpha must be in [0,1]");
  if (n < 2) throw std::invalid_argument("copula needs n >= 2");
  const auto cols = static_cast<Eigen::Index>(n);
  SampleMatrix u(static_cast<Eigen::Index>(t), cols);
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    if (rng.uniform() <= alpha) {
      u.row(j).setConstant(rng.uniform());
    } else {
      for (Eigen::Index i = 0; i < cols; ++i) u(j, i) = rng.uniform();
    }
  }
  return u;
}

SampleMatrix sample_frechet2(double alpha, double beta, std::size_t t, RngStream& rng) {
  if (!(alpha >= 0.0 && beta >= 0.0 && alpha + beta <= 1.0))
    throw std::invalid_argument("frechet2: need alpha, beta >= 0 and alpha + beta <= 1");
  SampleMatrix u(static_cast<Eigen::Index>(t), 2);
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    const double v = rng.uniform();
    if (v <= alpha) {
      u(j, 0) = rng.uniform();
      u(j, 1) = u(j, 0);
    } else if (v <= alpha + beta) {
      u(j, 0) = rng.uniform();
      u(j, 1) = 1.0 - u(j, 0);
    } else {
      u(j, 0) = rng.uniform();
      u(j, 1) = rng.uniform();
    }
  }
  return u;
}

SampleMatrix sample_gaussian_copula(const Eigen::MatrixXd& r, std::size_t t, RngStream& rng) {
  SampleMatrix x = mvnormal_sample(t, r, rng);
  return x.unaryExpr([](double v) { return normal_cdf(v); });
}

SampleMatrix sample_tstudent_copula(const Eigen::MatrixXd& r, int nu, std::size_t t, RngStream& rng) {
  if (nu < 1) throw std::invalid_argument("tstudent: nu must be >= 1");
  SampleMatrix x = mvnormal_sample(t, r, rng);
  const double dnu = static_cast<double>(nu);
  for (Eigen::Index j = 0; j < x.rows(); ++j) {
    const double v0 = rng.chi_square(dnu);
    x.row(j) /= std::sqrt(v0 / dnu);
  }
  return x.unaryExpr([dnu](double v) { return student_t_cdf(v, dnu); });
}

SampleMatrix sample_copula(const CopulaSpec& spec, std::size_t t, RngStream& rng) {
  switch (spec.family) {
    case Family::gaussian: return sample_gaussian_copula(spec.r, t, rng);
    case Family::tstudent: return sample_tstudent_copula(spec.r, spec.nu, t, rng);
    case Family::frechet1: return sample_frechet(spec.alpha, spec.n, t, rng);
    case Family::frechet2:
      if (spec.n != 2) throw std::invalid_argument("frechet2 is bivariate only");
      return sample_frechet2(spec.alpha, spec.beta, t, rng);
    default: break;
  }
  if (spec.children.empty()) return sample_archimedean(spec.family, spec.theta, spec.n, t, rng);

  // Nested: children must cover disjoint marginals; lay them out and scatter back.
  std::vector<std::size_t> sizes, order;
  std::vector<double> thetas;
  std::vector<bool> seen(spec.n, false);
  for (const auto& c : spec.children) {
    for (auto i : c.indices) {
      if (i >= spec.n || seen[i]) throw std::invalid_argument("nested children must be disjoint and in range");
      seen[i] = true;
      order.push_back(i);
    }
    sizes.push_back(c.indices.size());
    thetas.push_back(c.theta);
  }
  // Marginals not named by any child form singleton children at the parent parameter.
  for (std::size_t i = 0; i < spec.n; ++i) {
    if (!seen[i]) {
      order.push_back(i);
      sizes.push_back(1);
      thetas.push_back(spec.theta);
    }
  }
  const SampleMatrix packed = sample_nested_archimedean(spec.family, sizes, thetas, spec.theta, t, rng);
  SampleMatrix u(packed.rows(), packed.cols());
  for (std::size_t k = 0; k < order.size(); ++k)
    u.col(static_cast<Eigen::Index>(order[k])) = packed.col(static_cast<Eigen::Index>(k));
  return u;
}

double sample_nested_child_latent(Family f, double theta0, double theta_child, double v0, RngStream& rng,
                                  NestedStats* stats) {
  const double alpha = theta0 / theta_child;
  if (f == Family::gumbel) return positive_stable(alpha, rng);
  if (f != Family::clayton) throw std::invalid_argument("nested sampling supports gumbel and clayton only");
  // Exponentially tilted stable with LT exp(-c((1+s)^alpha - 1)), c = v0 / theta0, split into
  // ceil(c) independent pieces so each rejection step accepts with probability >= 1/e.
  const double c = v0 / theta0;
  if (alpha == 1.0) return theta_child * c;
  const double m = std::max(1.0, std::ceil(c));
  const double piece = c / m;
  const double scale = std::pow(piece, 1.0 / alpha);
  double w = 0.0;
  for (long k = 0; k < static_cast<long>(m); ++k) {
    while (true) {
      const double x = scale * positive_stable(alpha, rng);
      if (stats) ++stats->proposals;
      if (rng.uniform() <= std::exp(-x)) {
        if (stats) ++stats->accepted;
        w += x;
        break;
      }
    }
  }
  return theta_child * w;
}

double nested_child_transform(Family f, double theta0, double theta_child, double v0, double vi, double x) {
  const double alpha = theta0 / theta_child;
  const double s = -std::log(x) / vi;
  if (f == Family::gumbel) return std::exp(-std::pow(s, alpha));
  if (f == Family::clayton) return std::exp(-(v0 / theta0) * (std::pow(1.0 + theta_child * s, alpha) - 1.0));
  throw std::invalid_argument("nested sampling supports gumbel and clayton only");
}

SampleMatrix sample_nested_archimedean(Family f, std::span<const std::size_t> sizes, std::span<const double> thetas,
                                       double theta0, std::size_t t, RngStream& rng, NestedStats* stats) {
  if (f != Family::gumbel && f != Family::clayton)
    throw std::invalid_argument("nested sampling supports gumbel and clayton only, got " + family_name(f));
  if (sizes.size() != thetas.size() || sizes.empty())
    throw std::invalid_argument("nested: one parameter per child required");
  check_theta(f, theta0, 3);
  std::size_t k = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) throw std::invalid_argument("nested: empty child");
    if (!(thetas[i] >= theta0)) throw std::invalid_argument("nested: sufficient nesting condition violated");
    k += sizes[i];
  }
  if (k < 2) throw std::invalid_argument("copula needs n >= 2");
  SampleMatrix u(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k));
  std::vector<double> x(k);
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    const double v0 = sample_latent(f, theta0, rng);
    for (auto& xi : x) xi = rng.uniform();
    std::size_t at = 0;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      const double vi = sample_nested_child_latent(f, theta0, thetas[c], v0, rng, stats);
      for (std::size_t i = 0; i < sizes[c]; ++i, ++at) x[at] = nested_child_transform(f, theta0, thetas[c], v0, vi, x[at]);
    }
    for (std::size_t i = 0; i < k; ++i) u(j, static_cast<Eigen::Index>(i)) = psi(f, theta0, -std::log(x[i]) / v0);
  }
  return u;
}

double tau_from_theta(Family f, double theta) {
  check_theta(f, theta, 2);
  switch (f) {
    case Family::gumbel: return 1.0 - 1.0 / theta;
    case Family::clayton: return theta / (theta + 2.0);
    case Family::frank: {
      if (std::abs(theta) < 1e-4) return theta / 9.0;
      return 1.0 - 4.0 / theta * (1.0 - debye1(theta));
    }
    case Family::amh: {
      if (std::abs(theta) < 1e-6) return 2.0 * theta / 9.0;
      if (theta == 1.0) return 1.0 / 3.0;
      return (3.0 * theta - 2.0) / (3.0 * theta) -
             2.0 * (1.0 - theta) * (1.0 - theta) * std::log1p(-theta) / (3.0 * theta * theta);
    }
    default: break;
  }
  throw std::invalid_argument("tau_from_theta: unsupported family");
}

double theta_from_tau(Family f, double tau) {
  require_archimedean(f);
  switch (f) {
    case Family::gumbel:
      if (!(tau >= 0.0 && tau < 1.0)) throw std::invalid_argument("gumbel: tau must be in [0,1)");
      return 1.0 / (1.0 - tau);
    case Family::clayton:
      if (!(tau >= -1.0 / 3.0 && tau < 1.0) || tau == 0.0)
        throw std::invalid_argument("clayton: tau must be in [-1/3,0) or (0,1)");
      return 2.0 * tau / (1.0 - tau);
    case Family::frank: {
      if (!(std::abs(tau) < 1.0) || tau == 0.0) throw std::invalid_argument("frank: tau must be in (-1,0) or (0,1)");
      auto g = [&](double th) { return tau_from_theta(Family::frank, th) - tau; };
      double lo = tau > 0 ? 1e-8 : -1.0, hi = tau > 0 ? 1.0 : -1e-8;
      if (tau > 0) {
        while (g(hi) < 0.0) {
          hi *= 2.0;
          if (hi > 1e6) throw std::invalid_argument("frank: tau unattainable");
        }
      } else {
        while (g(lo) > 0.0) {
          lo *= 2.0;
          if (lo < -1e6) throw std::invalid_argument("frank: tau unattainable");
        }
      }
      return solve_monotone(g, lo, hi);
    }
    case Family::amh: {
      const double lo_tau = tau_from_theta(Family::amh, -1.0);
      if (!(tau >= lo_tau && tau <= 1.0 / 3.0)) throw std::invalid_argument("amh: tau unattainable");
      if (tau == 0.0) return 0.0;
      auto g = [&](double th) { return tau_from_theta(Family::amh, th) - tau; };
      return solve_monotone(g, -1.0, 1.0);
    }
    default: break;
  }
  throw std::invalid_argument("theta_from_tau: unsupported family");
}

double rho_from_theta(Family f, double theta) {
  check_theta(f, theta, 2);
  using boost::math::quadrature::gauss_kronrod;
  auto inner = [&](double u) {
    auto g = [&](double v) { return copula_cdf(f, theta, u, v); };
    return gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 10, 1e-11);
  };
  const double integral = gauss_kronrod<double, 31>::integrate(inner, 0.0, 1.0, 10, 1e-10);
  return 12.0 * integral - 3.0;
}

double theta_from_rho(Family f, double rho) {
  require_archimedean(f);
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("rho must be in (-1,1)");
  auto g = [&](double th) { return rho_from_theta(f, th) - rho; };
  double lo = 0.0, hi = 0.0;
  switch (f) {
    case Family::gumbel:
      if (rho < 0.0) throw std::invalid_argument("gumbel: rho must be >= 0");
      if (rho == 0.0) return 1.0;
      lo = 1.0;
      hi = 2.0;
      while (g(hi) < 0.0) hi *= 2.0;
      break;
    case Family::clayton:
    case Family::frank:
      if (rho == 0.0) throw std::invalid_argument(family_name(f) + ": rho = 0 is the excluded independence point");
      if (rho > 0.0) {
        lo = 1e-6;
        hi = 1.0;
        while (g(hi) < 0.0) {
          hi *= 2.0;
          if (hi > 1e4) throw std::invalid_argument("rho unattainable");
        }
      } else {
        hi = -1e-6;
        lo = -1.0;
        if (f == Family::clayton && g(lo) > 0.0) throw std::invalid_argument("clayton: rho unattainable");
        while (g(lo) > 0.0) {
          lo *= 2.0;
          if (lo < -1e4) throw std::invalid_argument("rho unattainable");
        }
      }
      break;
    case Family::amh:
      lo = -1.0;
      hi = 1.0;
      if (g(lo) > 0.0 || g(hi) < 0.0) throw std::invalid_argument("amh: rho unattainable");
      break;
    default: break;
  }
  return solve_monotone(g, lo, hi);
}

double elliptical_tau(double r) {
  if (!(r >= -1.0 && r <= 1.0)) throw std::invalid_argument("r must be in [-1,1]");
  return 2.0 / std::numbers::pi * std::asin(r);
}

double elliptical_r_from_tau(double tau) {
  if (!(tau >= -1.0 && tau <= 1.0)) throw std::invalid_argument("tau must be in [-1,1]");
  return std::sin(std::numbers::pi * tau / 2.0);
}

double gaussian_rho(double r) {
  if (!(r >= -1.0 && r <= 1.0)) throw std::invalid_argument("r must be in [-1,1]");
  return 6.0 / std::numbers::pi * std::asin(r / 2.0);
}

std::pair<double, double> tstudent_tail(int nu, double r) {
  if (nu < 1) throw std::invalid_argument("tstudent: nu must be >= 1");
  if (!(r > -1.0 && r <= 1.0)) throw std::invalid_argument("r must be in (-1,1]");
  const double dnu = static_cast<double>(nu);
  const double lambda = 2.0 * student_t_cdf(-std::sqrt(dnu + 1.0) * std::sqrt((1.0 - r) / (1.0 + r)), dnu + 1.0);
  return {lambda, lambda};
}

std::pair<double, double> tail_dependence(const CopulaSpec& spec) {
  const double th = spec.theta;
  switch (spec.family) {
    case Family::gaussian: return {0.0, 0.0};
    case Family::tstudent: {
      if (spec.r.rows() < 2) throw std::invalid_argument("tstudent: correlation matrix needs n >= 2");
      return tstudent_tail(spec.nu, spec.r(0, 1));
    }
    case Family::frechet1:
    case Family::frechet2:
      if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0)) throw std::invalid_argument("frechet: alpha must be in [0,1]");
      return {spec.alpha, spec.alpha};
    case Family::gumbel: check_theta(spec.family, th, 2); return {0.0, 2.0 - std::pow(2.0, 1.0 / th)};
    case Family::clayton: check_theta(spec.family, th, 2); return {th > 0 ? std::pow(2.0, -1.0 / th) : 0.0, 0.0};
    case Family::frank: check_theta(spec.family, th, 2); return {0.0, 0.0};
    case Family::amh: check_theta(spec.family, th, 2); return {th == 1.0 ? 0.5 : 0.0, 0.0};
  }
  throw std::invalid_argument("tail_dependence: unsupported family");
}

}  // namespace nongauss
