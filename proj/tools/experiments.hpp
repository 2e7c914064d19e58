#ifndef NONGAUSS_TOOLS_EXPERIMENTS_HPP
#define NONGAUSS_TOOLS_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "nongauss/randsource.hpp"

namespace nongauss::tools {

struct ExperimentParams {
  std::string preset;
  std::size_t n = 20;
  std::size_t k = 4;
  std::size_t t = 10000;
  std::size_t runs = 10;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string copula = "tstudent";
  std::vector<int> nu = {5, 10, 20};
  std::optional<double> theta;  // otherwise from tau / rho, or fitted to the subset
  std::optional<double> tau;
  std::optional<double> rho;
  double alpha = 0.5;  // frechet
  std::string cor_method = "random";
  double cor_alpha = 0.5;
  double cor_rho = 0.5;
  std::vector<std::string> targets = {"hdet", "hnorm", "mev"};
  std::size_t order = 4;
  std::size_t dmax = 6;
};

/// Injection dispatch shared by `inject` and the presets. copula is one of tstudent, frechet,
/// gumbel, clayton, frank, amh, nested-gumbel, nested-clayton, naive. No theta: the family fits it to the subset.
SampleMatrix apply_injection(const SampleMatrix& x, std::span<const std::size_t> subset, const std::string& copula,
                             int nu, std::optional<double> theta, RngStream& rng, nlohmann::ordered_json* report = nullptr);

/// k distinct indices out of n, sorted.
std::vector<std::size_t> random_subset(std::size_t n, std::size_t k, RngStream& rng);

nlohmann::ordered_json params_json(const ExperimentParams& p);

/// Runs one preset; run r draws from stream r of the seed. Result is independent of jobs.
nlohmann::ordered_json run_experiment(const ExperimentParams& p);

}  // namespace nongauss::tools

#endif  // NONGAUSS_TOOLS_EXPERIMENTS_HPP
