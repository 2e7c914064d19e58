// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "experiments.hpp"
#include "nongauss/copulas.hpp"
#include "nongauss/cormat.hpp"
#include "nongauss/cumulants.hpp"
#include "nongauss/randsource.hpp"
#include "nongauss/special.hpp"
#include "nongauss/stats.hpp"
#include "nongauss/tseries.hpp"
#include "oracles.hpp"

using namespace nongauss;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double tau_of(const SampleMatrix& u) { return kendall_tau(column(u, 0), column(u, 1)); }

SampleMatrix to_normal(SampleMatrix u) {
  for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] = normal_quantile(u.data()[i]);
  return u;
}

void dependence_round_trips() {
  bool ok = true;
  std::string d;
  auto check = [&](const char* name, double expect, const std::function<SampleMatrix(RngStream&)>& gen) {
    RngStream rng(101);
    const auto t0 = Clock::now();
    const double tau = tau_of(gen(rng));
    const double s = seconds_since(t0);
    const bool good = std::abs(tau - expect) <= 0.01 && s < 10.0;
    ok = ok && good;
    d += fmt("%s tau=%.4f (want %.4f, %.1fs) ", name, tau, expect, s);
  };
  check("clayton", 0.5, [](RngStream& r) { return sample_archimedean(Family::clayton, 2.0, 2, 100000, r); });
  check("gumbel", 2.0 / 3.0, [](RngStream& r) { return sample_archimedean(Family::gumbel, 3.0, 2, 100000, r); });
  for (double rr : {0.3, 0.75}) {
    Eigen::Matrix2d m;
    m << 1, rr, rr, 1;
    check(rr < 0.5 ? "gauss0.3" : "gauss0.75", 2.0 / M_PI * std::asin(rr),
          [m](RngStream& r) { return sample_gaussian_copula(m, 100000, r); });
  }
  report(1, ok, d);
}

void frechet_spearman() {
  RngStream rng(102);
  const SampleMatrix u = sample_frechet(0.5, 4, 100000, rng);
  double worst = 0.0;
  for (Eigen::Index a = 0; a < 4; ++a)
    for (Eigen::Index b = a + 1; b < 4; ++b)
      worst = std::max(worst, std::abs(spearman_rho(column(u, a), column(u, b)) - 0.5));
  report(2, worst <= 0.02, fmt("max |rho - 0.5| = %.4f", worst));
}

double lower_tail_frequency(const SampleMatrix& u, double q) {
  std::size_t hit = 0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) hit += (u(i, 0) < q && u(i, 1) < q) ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(u.rows()) / q;
}

void tail_frequency() {
  RngStream rng(103);
  const double fc = lower_tail_frequency(sample_archimedean(Family::clayton, 2.0, 2, 1000000, rng), 0.01);
  const double ft = lower_tail_frequency(sample_tstudent_copula(Eigen::Matrix2d::Identity(), 1, 1000000, rng), 0.01);
  const bool ok = std::abs(fc - std::pow(2.0, -0.5)) <= 0.05 && std::abs(ft - 0.25) <= 0.05;
  report(3, ok, fmt("clayton %.4f (want %.4f), t nu=1 %.4f (want 0.25)", fc, std::pow(2.0, -0.5), ft));
}

void gaussian_null() {
  std::vector<double> h3, h4;
  for (std::uint64_t s = 0; s < 20; ++s) {
    RngStream rng(104, s);
    const SampleMatrix x = mvnormal_sample(100000, cormat_random(10, rng), rng);
    const CumulantSet cs = cumulant_tensors(x, 4);
    h3.push_back(h_norm(cs[2], cs[3]));
    h4.push_back(h_norm(cs[2], cs[4]));
  }
  const double m3 = median(h3), m4 = median(h4);
  report(4, m3 < 0.05 && m4 < 0.1, fmt("median h3 = %.4f, median h4 = %.4f", m3, m4));
}

void copula_signatures() {
  const auto t0 = Clock::now();
  RngStream rng(105);
  const CumulantSet fr = cumulant_tensors(to_normal(sample_frechet(0.5, 10, 1000000, rng)), 6);
  const double h3 = h_norm(fr[2], fr[3]), h4 = h_norm(fr[2], fr[4]), h6 = h_norm(fr[2], fr[6]);
  const double theta = theta_from_rho(Family::frank, 0.4);
  const CumulantSet fk = cumulant_tensors(to_normal(sample_archimedean(Family::frank, theta, 10, 1000000, rng)), 3);
  const double c112 = fk[3].get(oracle::Index{0, 0, 1}), c123 = fk[3].get(oracle::Index{0, 1, 2});
  const double s = seconds_since(t0);
  const bool ok = h4 > 0.1 && h3 < 0.05 && h6 < 0.5 * h4 && std::abs(c112) < 0.25 * std::abs(c123) && s < 120.0;
  report(5, ok, fmt("frechet h3=%.4f h4=%.4f h6=%.4f; frank c112=%.2e c123=%.2e; %.1fs", h3, h4, h6, c112, c123, s));
}

void block_vs_dense() {
  std::mt19937_64 gen(106);
  double worst = 0.0;
  for (std::size_t n = 2; n <= 6; ++n)
    for (std::size_t d = 2; d <= 6; ++d)
      for (std::size_t t : {100, 1000}) {
        const Eigen::MatrixXd x = oracle::random_data(t, n, gen);
        const Eigen::MatrixXd xc = oracle::centred(x);
        const CumulantSet cs = cumulant_tensors(x, d);
        // only sorted indices need the partition formula; every permutation must agree with it
        oracle::for_each_index(n, d, [&](const oracle::Index& idx) {
          if (!std::is_sorted(idx.begin(), idx.end())) return;
          const double ref = oracle::cumulant_entry(xc, idx);
          oracle::Index perm = idx;
          do {
            worst = std::max(worst, std::abs(cs[d].get(perm) - ref));
          } while (std::next_permutation(perm.begin(), perm.end()));
        });
      }
  report(6, worst < 1e-10, fmt("max |block - dense| = %.3e", worst));
}

void injection_delta() {
  tools::ExperimentParams p;
  p.preset = "delta-sweep";
  p.n = 20;
  p.k = 5;
  p.t = 10000;
  p.runs = 20;
  p.seed = 107;
  p.nu = {5, 10, 20};
  const auto m = tools::run_experiment(p)["summary"]["median_delta"];
  const double d5 = m["tstudent_nu5"], d10 = m["tstudent_nu10"], d20 = m["tstudent_nu20"], dn = m["naive"];
  const bool ok = d5 > d10 && d10 > d20 && d5 < dn;
  report(7, ok, fmt("median delta nu5=%.4f nu10=%.4f nu20=%.4f naive=%.4f", d5, d10, d20, dn));
}

void detection() {
  const auto t0 = Clock::now();
  tools::ExperimentParams p;
  p.preset = "detection";
  p.n = 20;
  p.k = 4;
  p.t = 10000;
  p.runs = 50;
  p.seed = 108;
  p.nu = {5};
  p.targets = {"hdet", "mev"};
  const auto sum = tools::run_experiment(p)["summary"];
  const auto& h = sum["histogram"]["hdet"];
  const double good = (h[3].get<double>() + h[4].get<double>()) / 50.0;
  const double mev = sum["mean_detected"]["mev"], guess = sum["random_guess_mean"];
  const double s = seconds_since(t0);
  const bool ok = good >= 0.7 && std::abs(mev - guess) <= 1.0 && s < 300.0;
  report(8, ok, fmt("hdet >=3/4 in %.0f%% of runs; mev mean %.2f vs guess %.2f; %.1fs", 100 * good, mev, guess, s));
}

void extraction() {
  tools::ExperimentParams p;
  p.preset = "hosvd-w";
  p.n = 5;
  p.k = 2;
  p.t = 100000;
  p.runs = 50;
  p.seed = 109;
  p.copula = "gumbel";
  p.tau = 0.6;
  const auto m = tools::run_experiment(p)["summary"]["median_w"];
  const double w3 = m["hosvd3"], w2 = m["svd"];
  report(9, w3 < w2, fmt("median w hosvd3 = %.4f, svd = %.4f", w3, w2));
}

void dfa() {
  std::vector<double> h;
  for (std::uint64_t s = 0; s < 20; ++s) {
    RngStream rng(110, s);
    std::vector<double> y(1 << 14);
    double acc = 0.0;
    for (auto& v : y) v = acc += rng.normal();
    h.push_back(dfa_hurst(y, 1.0, 20));
  }
  const double mw = median(h);
  std::vector<double> ramp(1 << 14);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i + 1);
  const double hc = dfa_hurst(ramp, 1.0, 20, Detrend::mean);
  report(10, mw >= 0.45 && mw <= 0.55 && hc >= 0.9, fmt("white noise H = %.4f, correlated H = %.4f", mw, hc));
}

void heavy_tails() {
  RngStream rng(111);
  const std::size_t t = 1000000;
  std::vector<double> a(t), b(t);
  for (auto& v : a) v = sample_levy(2.0, 0.0, rng);
  for (auto& v : b) v = sample_qgauss(1.0, rng);
  auto var = [](const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
  };
  const double va = var(a), sb = std::sqrt(var(b));
  const bool ok = std::abs(va - 2.0) <= 0.05 && std::abs(sb / std::sqrt(0.5) - 1.0) <= 0.01;
  report(11, ok, fmt("levy variance %.4f, q-gauss std %.4f (want %.4f)", va, sb, std::sqrt(0.5)));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> checks{dependence_round_trips, frechet_spearman, tail_frequency,
                                                  gaussian_null,          copula_signatures, block_vs_dense,
                                                  injection_delta,        detection,         extraction,
                                                  dfa,                    heavy_tails};
  for (std::size_t i = 0; i < checks.size(); ++i) {
    try {
      checks[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), false, std::string("exception: ") + e.what());
    }
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
