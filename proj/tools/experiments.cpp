#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <stdexcept>

#include <boost/math/special_functions/binomial.hpp>

#include "nongauss/copulas.hpp"
#include "nongauss/cormat.hpp"
#include "nongauss/cumulants.hpp"
#include "nongauss/dimreduce.hpp"
#include "nongauss/special.hpp"
#include "nongauss/stats.hpp"
#include "nongauss/subsetinject.hpp"

namespace nongauss::tools {

using json = nlohmann::ordered_json;

namespace {

// Runs fn(r, rng) for r in [0, runs) on up to `jobs` threads; results ordered by r.
template <class T>
std::vector<T> parallel_runs(const ExperimentParams& p, const std::function<T(std::size_t, RngStream&)>& fn) {
  std::vector<T> out(p.runs);
  std::vector<std::exception_ptr> errors(p.runs);
  const auto runs = static_cast<std::ptrdiff_t>(p.runs);
#pragma omp parallel for num_threads(std::max(1, p.jobs)) schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < runs; ++r) {
    const auto ru = static_cast<std::size_t>(r);
    try {
      RngStream rng(p.seed, ru);
      out[ru] = fn(ru, rng);
    } catch (...) {
      errors[ru] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::optional<double> resolve_theta(Family f, const ExperimentParams& p) {
  if (p.theta) return p.theta;
  if (p.tau) return theta_from_tau(f, *p.tau);
  if (p.rho) return theta_from_rho(f, *p.rho);
  return std::nullopt;
}

Family injection_family(const std::string& copula) {
  if (copula.rfind("nested-", 0) == 0) return parse_family(copula.substr(7));
  return parse_family(copula);
}

Eigen::MatrixXd experiment_cormat(const ExperimentParams& p, std::size_t n, RngStream& rng) {
  CorParams cp;
  cp.alpha = p.cor_alpha;
  cp.rho = p.cor_rho;
  return cormatgen(parse_cor_method(p.cor_method), n, cp, rng);
}

std::optional<double> injection_theta(const ExperimentParams& p) {
  if (p.copula == "tstudent" || p.copula == "frechet" || p.copula == "naive" || p.copula.rfind("nested-", 0) == 0)
    return std::nullopt;
  return resolve_theta(injection_family(p.copula), p);
}

json median_summary(const std::vector<json>& runs, const std::string& field) {
  json out = json::object();
  if (runs.empty()) return out;
  for (const auto& [key, _] : runs.front()[field].items()) {
    std::vector<double> v;
    for (const auto& r : runs) v.push_back(r[field][key].get<double>());
    out[key] = median(v);
  }
  return out;
}

json delta_sweep(const ExperimentParams& p) {
  const bool sweep_nu = p.copula == "tstudent";
  const auto theta = injection_theta(p);
  auto runs = parallel_runs<json>(p, [&](std::size_t, RngStream& rng) {
    const Eigen::MatrixXd r = experiment_cormat(p, p.n, rng);
    const SampleMatrix x = mvnormal_sample(p.t, r, rng);
    const auto subset = random_subset(p.n, p.k, rng);
    json run;
    run["subset"] = subset;
    json delta = json::object();
    if (sweep_nu) {
      for (int nu : p.nu)
        delta["tstudent_nu" + std::to_string(nu)] = cov_change_delta(x, apply_injection(x, subset, "tstudent", nu, {}, rng));
    } else {
      delta[p.copula] = cov_change_delta(x, apply_injection(x, subset, p.copula, 0, theta, rng));
    }
    delta["naive"] = cov_change_delta(x, naive_resample(x, subset, rng));
    run["delta"] = delta;
    return run;
  });
  for (auto& r : runs)
    for (auto& s : r["subset"]) s = s.get<std::size_t>() + 1;
  json out;
  out["runs"] = runs;
  out["summary"] = {{"median_delta", median_summary(runs, "delta")}};
  return out;
}

json detection(const ExperimentParams& p) {
  const auto theta = injection_theta(p);
  std::vector<Target> targets;
  for (const auto& name : p.targets) targets.push_back(parse_target(name));
  auto runs = parallel_runs<json>(p, [&](std::size_t, RngStream& rng) {
    const Eigen::MatrixXd r = experiment_cormat(p, p.n, rng);
    const SampleMatrix x = mvnormal_sample(p.t, r, rng);
    const auto subset = random_subset(p.n, p.k, rng);
    const SampleMatrix x2 = apply_injection(x, subset, p.copula, p.nu.front(), theta, rng);
    const CumulantSet cums = cumulant_tensors(x2, std::max<std::size_t>(p.order, 2));
    json run;
    json detected = json::object();
    for (Target tg : targets) {
      const auto sel = select_features(cums, tg, p.order, p.k);
      std::size_t hits = 0;
      for (auto i : sel.retained) hits += std::binary_search(subset.begin(), subset.end(), i) ? 1 : 0;
      detected[target_name(tg)] = hits;
    }
    std::vector<std::size_t> one_based(subset);
    for (auto& i : one_based) ++i;
    run["subset"] = one_based;
    run["detected"] = detected;
    return run;
  });

  json hist = json::object();
  json mean = json::object();
  for (Target tg : targets) {
    const std::string name = target_name(tg);
    std::vector<std::size_t> h(p.k + 1, 0);
    double m = 0.0;
    for (const auto& r : runs) {
      const auto c = r["detected"][name].get<std::size_t>();
      ++h[c];
      m += static_cast<double>(c);
    }
    hist[name] = h;
    mean[name] = m / static_cast<double>(runs.size());
  }
  // hypergeometric: k draws from n with k successes
  std::vector<double> guess(p.k + 1);
  const double total = boost::math::binomial_coefficient<double>(static_cast<unsigned>(p.n), static_cast<unsigned>(p.k));
  for (std::size_t j = 0; j <= p.k; ++j) {
    if (p.k - j > p.n - p.k) continue;
    guess[j] = boost::math::binomial_coefficient<double>(static_cast<unsigned>(p.k), static_cast<unsigned>(j)) *
               boost::math::binomial_coefficient<double>(static_cast<unsigned>(p.n - p.k),
                                                         static_cast<unsigned>(p.k - j)) /
               total;
  }
  json out;
  out["runs"] = runs;
  out["summary"] = {{"histogram", hist},
                    {"mean_detected", mean},
                    {"random_guess_pmf", guess},
                    {"random_guess_mean", static_cast<double>(p.k * p.k) / static_cast<double>(p.n)}};
  return out;
}

json copula_cumulants(const ExperimentParams& p) {
  const Family f = parse_family(p.copula);
  auto runs = parallel_runs<json>(p, [&](std::size_t, RngStream& rng) {
    CopulaSpec spec;
    spec.family = f;
    spec.n = p.n;
    if (f == Family::gaussian || f == Family::tstudent) spec.r = experiment_cormat(p, p.n, rng);
    spec.nu = p.nu.front();
    spec.alpha = p.alpha;
    if (is_archimedean(f)) {
      const auto th = resolve_theta(f, p);
      if (!th) throw std::invalid_argument("copula-cumulants: archimedean family needs --theta, --tau or --rho");
      spec.theta = *th;
    }
    SampleMatrix x = sample_copula(spec, p.t, rng);
    x = x.unaryExpr([](double u) { return normal_quantile(u); });
    const CumulantSet cums = cumulant_tensors(x, p.dmax);
    json run;
    json hn = json::object();
    for (std::size_t d = 3; d <= p.dmax; ++d) hn[std::to_string(d)] = h_norm(cums[2], cums[d]);
    run["h_norm"] = hn;
    if (p.n >= 3) {
      const std::array<std::size_t, 3> i112{0, 0, 1}, i123{0, 1, 2};
      run["c3"] = {{"c112", cums[3].get(i112)}, {"c123", cums[3].get(i123)}};
    }
    return run;
  });
  json out;
  out["runs"] = runs;
  out["summary"] = {{"median_h_norm", median_summary(runs, "h_norm")}};
  return out;
}

json hosvd_w(const ExperimentParams& p) {
  const auto theta = injection_theta(p);
  std::vector<std::size_t> subset(p.k);
  for (std::size_t i = 0; i < p.k; ++i) subset[i] = i;
  auto runs = parallel_runs<json>(p, [&](std::size_t, RngStream& rng) {
    const Eigen::MatrixXd r = experiment_cormat(p, p.n, rng);
    const SampleMatrix x = mvnormal_sample(p.t, r, rng);
    const SampleMatrix x2 = apply_injection(x, subset, p.copula, p.nu.front(), theta, rng);
    const CumulantSet cums = cumulant_tensors(x2, 4);
    json w = json::object();
    w["svd"] = nongauss_weight(svd_factor(cums[2].to_matrix()).factor, p.k);
    w["hosvd3"] = nongauss_weight(hosvd_factor(cums[3]).factor, p.k);
    w["hosvd4"] = nongauss_weight(hosvd_factor(cums[4]).factor, p.k);
    return json{{"w", w}};
  });
  json out;
  out["runs"] = runs;
  out["summary"] = {{"median_w", median_summary(runs, "w")}};
  return out;
}

}  // namespace

std::vector<std::size_t> random_subset(std::size_t n, std::size_t k, RngStream& rng) {
  if (k > n) throw std::invalid_argument("subset size exceeds n");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  // partial Fisher-Yates on our own uniforms so results do not depend on the std library
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + std::min(n - i - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

SampleMatrix apply_injection(const SampleMatrix& x, std::span<const std::size_t> subset, const std::string& copula,
                             int nu, std::optional<double> theta, RngStream& rng, json* report) {
  if (copula == "naive") return naive_resample(x, subset, rng);
  if (copula == "tstudent") {
    if (report) (*report)["nu"] = nu;
    return inject_tstudent(x, subset, nu, rng);
  }
  if (copula == "frechet") return inject_frechet(x, subset, rng);
  InjectionReport rep;
  SampleMatrix out;
  if (copula.rfind("nested-", 0) == 0) {
    out = inject_nested_archimedean(x, subset, injection_family(copula), rng, &rep);
  } else {
    const Family f = parse_family(copula);
    if (!is_archimedean(f)) throw std::invalid_argument("unsupported injection copula: " + copula);
    out = inject_archimedean(x, subset, f, theta, rng, &rep);
  }
  if (report) {
    (*report)["theta"] = rep.theta;
    if (!rep.children.empty()) {
      json children = json::array();
      for (std::size_t c = 0; c < rep.children.size(); ++c) {
        std::vector<std::size_t> cols;
        for (auto i : rep.children[c]) cols.push_back(subset[i] + 1);
        children.push_back({{"columns", cols}, {"theta", rep.child_thetas[c]}});
      }
      (*report)["children"] = children;
      (*report)["acceptance"] = rep.acceptance;
      (*report)["clustering_fallback"] = rep.clustering_fallback;
    }
  }
  return out;
}

json params_json(const ExperimentParams& p) {
  json j;
  j["preset"] = p.preset;
  j["n"] = p.n;
  j["k"] = p.k;
  j["t"] = p.t;
  j["runs"] = p.runs;
  j["copula"] = p.copula;
  j["nu"] = p.nu;
  j["theta"] = p.theta ? json(*p.theta) : json(nullptr);
  j["tau"] = p.tau ? json(*p.tau) : json(nullptr);
  j["rho"] = p.rho ? json(*p.rho) : json(nullptr);
  j["alpha"] = p.alpha;
  j["cor_method"] = p.cor_method;
  j["cor_alpha"] = p.cor_alpha;
  j["cor_rho"] = p.cor_rho;
  j["targets"] = p.targets;
  j["order"] = p.order;
  j["dmax"] = p.dmax;
  return j;
}

json run_experiment(const ExperimentParams& p) {
  if (p.runs == 0) throw std::invalid_argument("experiment: --runs must be >= 1");
  if (p.nu.empty()) throw std::invalid_argument("experiment: --nu list is empty");
  if (p.preset == "delta-sweep") return delta_sweep(p);
  if (p.preset == "detection") return detection(p);
  if (p.preset == "copula-cumulants") return copula_cumulants(p);
  if (p.preset == "hosvd-w") return hosvd_w(p);
  throw std::invalid_argument("unknown experiment preset: " + p.preset);
}

}  // namespace nongauss::tools
