// nongauss command line: data generation, injection, cumulant analysis, selection and DFA.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "experiments.hpp"
#include "nongauss/copulas.hpp"
#include "nongauss/cormat.hpp"
#include "nongauss/csv.hpp"
#include "nongauss/cumulants.hpp"
#include "nongauss/dimreduce.hpp"
#include "nongauss/special.hpp"
#include "nongauss/stats.hpp"
#include "nongauss/subsetinject.hpp"
#include "nongauss/tseries.hpp"

using json = nlohmann::ordered_json;
using namespace nongauss;

namespace {

struct Common {
  std::uint64_t seed = 1;
  bool header = false;
  int jobs = 1;
};

json make_header(const std::string& command, const Common& c, const json& params) {
  json h;
  h["tool"] = "nongauss";
  h["version"] = NONGAUSS_VERSION;
  h["command"] = command;
  h["seed"] = c.seed;
  h["params"] = params;
  return h;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void write_matrix(const std::string& path, const SampleMatrix& x, bool header) {
  std::vector<std::string> names;
  if (header)
    for (Eigen::Index j = 0; j < x.cols(); ++j) names.push_back("x" + std::to_string(j + 1));
  std::ostringstream os;
  write_csv(os, x, names);
  write_text(path, os.str());
}

SampleMatrix read_matrix(const std::string& path, bool header) {
  if (path.empty() || path == "-") return read_csv(std::cin, header).data;
  return read_csv_file(path, header).data;
}

std::vector<std::size_t> zero_based(const std::vector<std::size_t>& one_based, std::size_t n) {
  std::vector<std::size_t> out;
  for (auto i : one_based) {
    if (i < 1 || i > n) throw std::out_of_range("column index " + std::to_string(i) + " outside 1.." + std::to_string(n));
    out.push_back(i - 1);
  }
  return out;
}

std::vector<std::size_t> one_based(const std::vector<std::size_t>& v) {
  std::vector<std::size_t> out(v);
  for (auto& i : out) ++i;
  return out;
}

// "1,2:2.5" -> columns {0,1}, theta 2.5
NestedChild parse_child(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("--child expects cols:theta, got " + s);
  NestedChild c;
  std::stringstream cols(s.substr(0, colon));
  std::string item;
  while (std::getline(cols, item, ',')) {
    const long v = std::stol(item);
    if (v < 1) throw std::invalid_argument("--child columns are 1-based");
    c.indices.push_back(static_cast<std::size_t>(v - 1));
  }
  c.theta = std::stod(s.substr(colon + 1));
  return c;
}

void set_jobs(int jobs) {
  if (jobs < 1) throw std::invalid_argument("--jobs must be >= 1");
  omp_set_num_threads(jobs);
}

int default_jobs() {
  if (const char* env = std::getenv("NONGAUSS_JOBS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Gaussian multivariate data: copulas, cumulant tensors, feature selection, DFA"};
  app.set_version_flag("--version", std::string(NONGAUSS_VERSION));
  app.require_subcommand(1);

  Common common;
  common.jobs = default_jobs();
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "random seed")->capture_default_str();
    sub->add_flag("--header", common.header, "CSV files carry a header row");
    sub->add_option("--jobs", common.jobs, "worker threads (default NONGAUSS_JOBS or 1)")->capture_default_str();
  };

  // gen-cormat
  auto* gcm = app.add_subcommand("gen-cormat", "generate a correlation matrix");
  std::string cm_method = "random", cm_out;
  std::size_t cm_n = 10;
  double cm_alpha = 0.5, cm_rho = 0.5;
  std::optional<double> cm_eps;
  gcm->add_option("--method", cm_method, "constant, constant_noised, random, toeplitz")->capture_default_str();
  gcm->add_option("--n", cm_n)->capture_default_str();
  gcm->add_option("--alpha", cm_alpha)->capture_default_str();
  gcm->add_option("--epsilon", cm_eps);
  gcm->add_option("--rho", cm_rho)->capture_default_str();
  gcm->add_option("--output,-o", cm_out, "CSV path, stdout if omitted");
  add_common(gcm);

  // gen-copula
  auto* gco = app.add_subcommand("gen-copula", "sample a copula");
  std::string gc_family = "gaussian", gc_out, gc_marg = "uniform", gc_cormat;
  std::size_t gc_n = 2, gc_t = 1000;
  std::optional<double> gc_theta, gc_tau, gc_rho;
  double gc_r = 0.5, gc_alpha = 0.5, gc_beta = 0.0;
  int gc_nu = 4;
  std::vector<std::string> gc_children;
  gco->add_option("--family", gc_family, "gaussian, tstudent, frechet, frechet2, gumbel, clayton, frank, amh")
      ->capture_default_str();
  gco->add_option("--n", gc_n)->capture_default_str();
  gco->add_option("--t", gc_t, "number of realisations")->capture_default_str();
  auto* o_theta = gco->add_option("--theta", gc_theta, "family parameter");
  auto* o_tau = gco->add_option("--tau", gc_tau, "target Kendall tau");
  auto* o_rho = gco->add_option("--rho", gc_rho, "target Spearman rho");
  o_theta->excludes(o_tau)->excludes(o_rho);
  o_tau->excludes(o_rho);
  gco->add_option("--r", gc_r, "constant off-diagonal correlation (elliptical)")->capture_default_str();
  gco->add_option("--cormat", gc_cormat, "correlation matrix CSV (elliptical)");
  gco->add_option("--nu", gc_nu)->capture_default_str();
  gco->add_option("--alpha", gc_alpha)->capture_default_str();
  gco->add_option("--beta", gc_beta)->capture_default_str();
  gco->add_option("--child", gc_children, "nested child cols:theta, 1-based, repeatable");
  gco->add_option("--marginals", gc_marg, "uniform or normal")->capture_default_str();
  gco->add_option("--output,-o", gc_out);
  add_common(gco);

  // inject
  auto* inj = app.add_subcommand("inject", "replace a column subset by a non-Gaussian copula");
  std::string in_input, in_out, in_report, in_copula = "tstudent";
  std::vector<std::size_t> in_subset;
  int in_nu = 5;
  std::optional<double> in_theta;
  inj->add_option("--input,-i", in_input)->required();
  inj->add_option("--subset", in_subset, "1-based columns")->delimiter(',')->required();
  inj->add_option("--copula", in_copula,
                  "tstudent, frechet, gumbel, clayton, frank, amh, nested-gumbel, nested-clayton, naive")
      ->capture_default_str();
  inj->add_option("--nu", in_nu)->capture_default_str();
  inj->add_option("--theta", in_theta);
  inj->add_option("--output,-o", in_out);
  inj->add_option("--report", in_report, "JSON report path");
  add_common(inj);

  // cumulants
  auto* cum = app.add_subcommand("cumulants", "cumulant norms of a data file");
  std::string cu_input, cu_out, cu_format = "csv", cu_dump;
  std::size_t cu_dmax = 4, cu_block = 0;
  cum->add_option("--input,-i", cu_input)->required();
  cum->add_option("--dmax", cu_dmax)->capture_default_str();
  cum->add_option("--block-size", cu_block, "0 picks the default");
  cum->add_option("--format", cu_format, "csv or json")->capture_default_str();
  cum->add_option("--output,-o", cu_out);
  cum->add_option("--dump", cu_dump, "prefix for dense tensor dumps, one CSV per order");
  add_common(cum);

  // select
  auto* sel = app.add_subcommand("select", "iterative feature elimination");
  std::string se_input, se_out, se_target = "hdet";
  std::size_t se_d = 4, se_s = 2;
  sel->add_option("--input,-i", se_input)->required();
  sel->add_option("--target", se_target, "hdet, hnorm, mev")->capture_default_str();
  sel->add_option("--d", se_d, "cumulant order")->capture_default_str();
  sel->add_option("--s", se_s, "features to keep")->capture_default_str();
  sel->add_option("--output,-o", se_out);
  add_common(sel);

  // extract
  auto* ext = app.add_subcommand("extract", "feature extraction factor");
  std::string ex_input, ex_method = "hosvd-3", ex_factor, ex_proj;
  std::size_t ex_np = 2, ex_iters = 100;
  ext->add_option("--input,-i", ex_input)->required();
  ext->add_option("--method", ex_method, "svd, hosvd-d, als-d")->capture_default_str();
  ext->add_option("--nprime", ex_np)->capture_default_str();
  ext->add_option("--max-iters", ex_iters)->capture_default_str();
  ext->add_option("--factor-output", ex_factor);
  ext->add_option("--projected-output", ex_proj);
  add_common(ext);

  // dfa
  auto* dfa = app.add_subcommand("dfa", "multifractal DFA Hurst exponent");
  std::string df_input, df_out, df_detrend = "linear";
  std::size_t df_col = 1, df_n = 20;
  std::vector<double> df_q{1.0};
  dfa->add_option("--input,-i", df_input)->required();
  dfa->add_option("--column", df_col, "1-based")->capture_default_str();
  dfa->add_option("--q", df_q)->delimiter(',')->capture_default_str();
  dfa->add_option("--N", df_n)->capture_default_str();
  dfa->add_option("--detrend", df_detrend, "linear or mean")->capture_default_str();
  dfa->add_option("--output,-o", df_out);
  add_common(dfa);

  // experiment
  auto* exp = app.add_subcommand("experiment", "run an experiment preset");
  tools::ExperimentParams ep;
  std::string ex_out;
  exp->add_option("preset", ep.preset, "delta-sweep, detection, copula-cumulants, hosvd-w")->required();
  exp->add_option("--n", ep.n)->capture_default_str();
  exp->add_option("--k", ep.k)->capture_default_str();
  exp->add_option("--t", ep.t)->capture_default_str();
  exp->add_option("--runs", ep.runs)->capture_default_str();
  exp->add_option("--copula", ep.copula)->capture_default_str();
  exp->add_option("--nu", ep.nu)->delimiter(',')->capture_default_str();
  auto* e_theta = exp->add_option("--theta", ep.theta);
  auto* e_tau = exp->add_option("--tau", ep.tau);
  auto* e_rho = exp->add_option("--rho", ep.rho);
  e_theta->excludes(e_tau)->excludes(e_rho);
  e_tau->excludes(e_rho);
  exp->add_option("--alpha", ep.alpha, "frechet parameter")->capture_default_str();
  exp->add_option("--cor-method", ep.cor_method)->capture_default_str();
  exp->add_option("--cor-alpha", ep.cor_alpha)->capture_default_str();
  exp->add_option("--cor-rho", ep.cor_rho)->capture_default_str();
  exp->add_option("--targets", ep.targets)->delimiter(',')->capture_default_str();
  exp->add_option("--d", ep.order, "cumulant order for selection")->capture_default_str();
  exp->add_option("--dmax", ep.dmax)->capture_default_str();
  exp->add_option("--output,-o", ex_out);
  add_common(exp);

  CLI11_PARSE(app, argc, argv);

  try {
    set_jobs(common.jobs);
    RngStream rng(common.seed, 0);

    if (gcm->parsed()) {
      CorParams cp;
      cp.alpha = cm_alpha;
      cp.epsilon = cm_eps;
      cp.rho = cm_rho;
      write_matrix(cm_out, cormatgen(parse_cor_method(cm_method), cm_n, cp, rng), common.header);
    } else if (gco->parsed()) {
      CopulaSpec spec;
      spec.family = parse_family(gc_family);
      spec.n = gc_n;
      spec.nu = gc_nu;
      spec.alpha = gc_alpha;
      spec.beta = gc_beta;
      if (spec.family == Family::gaussian || spec.family == Family::tstudent) {
        double r = gc_r;
        if (gc_tau) r = elliptical_r_from_tau(*gc_tau);
        if (gc_rho) r = 2.0 * std::sin(M_PI * *gc_rho / 6.0);
        spec.r = gc_cormat.empty() ? cormat_constant(gc_n, r) : read_matrix(gc_cormat, common.header);
      } else if (is_archimedean(spec.family)) {
        if (gc_theta) spec.theta = *gc_theta;
        else if (gc_tau) spec.theta = theta_from_tau(spec.family, *gc_tau);
        else if (gc_rho) spec.theta = theta_from_rho(spec.family, *gc_rho);
        else throw std::invalid_argument("gen-copula: archimedean family needs --theta, --tau or --rho");
        for (const auto& c : gc_children) spec.children.push_back(parse_child(c));
      } else if (gc_tau || gc_rho || gc_theta) {
        throw std::invalid_argument("gen-copula: frechet families take --alpha / --beta");
      }
      SampleMatrix u = sample_copula(spec, gc_t, rng);
      if (gc_marg == "normal") u = u.unaryExpr([](double v) { return normal_quantile(v); });
      else if (gc_marg != "uniform") throw std::invalid_argument("--marginals must be uniform or normal");
      write_matrix(gc_out, u, common.header);
    } else if (inj->parsed()) {
      const SampleMatrix x = read_matrix(in_input, common.header);
      const auto subset = zero_based(in_subset, static_cast<std::size_t>(x.cols()));
      json details = json::object();
      const SampleMatrix x2 = tools::apply_injection(x, subset, in_copula, in_nu, in_theta, rng, &details);
      write_matrix(in_out, x2, common.header);
      if (!in_report.empty()) {
        json ks = json::array();
        std::vector<double> ks_vals;
        for (auto j : subset) {
          Eigen::VectorXd c = x2.col(static_cast<Eigen::Index>(j));
          const double m = c.mean();
          const double sd = std::sqrt((c.array() - m).square().mean());
          c = (c.array() - m) / sd;
          ks.push_back(ks_normal({c.data(), static_cast<std::size_t>(c.size())}));
        }
        json params{{"input", in_input}, {"subset", in_subset}, {"copula", in_copula}, {"nu", in_nu},
                    {"theta", in_theta ? json(*in_theta) : json(nullptr)}};
        json rep;
        rep["header"] = make_header("inject", common, params);
        rep["delta"] = cov_change_delta(x, x2);
        rep["ks_normal"] = ks;
        if (subset.size() >= 2) {
          std::vector<Eigen::Index> cols(subset.begin(), subset.end());
          rep["mean_spearman_before"] = mean_offdiagonal(spearman_matrix(x(Eigen::all, cols)));
          rep["mean_spearman_after"] = mean_offdiagonal(spearman_matrix(x2(Eigen::all, cols)));
        }
        rep["copula"] = details;
        write_text(in_report, rep.dump(2) + "\n");
      }
    } else if (cum->parsed()) {
      const SampleMatrix x = read_matrix(cu_input, common.header);
      const CumulantSet cs = cumulant_tensors(x, cu_dmax, cu_block);
      const double n2 = frobenius_norm(cs[2]);
      json rows = json::array();
      std::ostringstream csv;
      csv << "order,norm,h_norm\n";
      for (std::size_t d = 1; d <= cu_dmax; ++d) {
        const double nd = frobenius_norm(cs[d]);
        const double hn = nd / std::pow(n2, static_cast<double>(d) / 2.0);
        rows.push_back({{"order", d}, {"norm", nd}, {"h_norm", hn}});
        csv << d << ',' << nd << ',' << hn << '\n';
        if (!cu_dump.empty()) {
          const auto dense = cs[d].to_dense();
          std::ofstream out(cu_dump + "_c" + std::to_string(d) + ".csv");
          if (!out) throw std::runtime_error("cannot write dump for order " + std::to_string(d));
          out << "# d=" << d << ",n=" << cs.n << ",b=" << cs[d].block_size() << '\n';
          out.precision(17);
          for (std::size_t i = 0; i < dense.size(); ++i) out << dense[i] << (i + 1 == dense.size() ? '\n' : ',');
        }
      }
      if (cu_format == "json") {
        json out;
        out["header"] = make_header("cumulants", common, {{"input", cu_input}, {"dmax", cu_dmax}, {"t", cs.t}, {"n", cs.n}});
        out["cumulants"] = rows;
        write_text(cu_out, out.dump(2) + "\n");
      } else if (cu_format == "csv") {
        write_text(cu_out, csv.str());
      } else {
        throw std::invalid_argument("--format must be csv or json");
      }
    } else if (sel->parsed()) {
      const SampleMatrix x = read_matrix(se_input, common.header);
      const Target tg = parse_target(se_target);
      const CumulantSet cs = cumulant_tensors(x, tg == Target::mev ? 2 : se_d);
      const auto res = select_features(cs, tg, se_d, se_s);
      json steps = json::array();
      for (const auto& st : res.steps)
        steps.push_back({{"removed", st.removed + 1}, {"target", st.target}, {"remaining", one_based(st.remaining)}});
      json out;
      out["header"] = make_header("select", common, {{"input", se_input}, {"target", se_target}, {"d", se_d}, {"s", se_s}});
      out["retained"] = one_based(res.retained);
      out["steps"] = steps;
      write_text(se_out, out.dump(2) + "\n");
    } else if (ext->parsed()) {
      const SampleMatrix x = read_matrix(ex_input, common.header);
      if (static_cast<Eigen::Index>(ex_np) > x.cols() || ex_np == 0) throw std::invalid_argument("--nprime must be in 1..n");
      Eigen::MatrixXd a;
      if (ex_method == "svd") {
        a = svd_factor(covariance(x)).factor.leftCols(static_cast<Eigen::Index>(ex_np));
      } else if (ex_method.rfind("hosvd-", 0) == 0 || ex_method.rfind("als-", 0) == 0) {
        const bool hosvd = ex_method[0] == 'h';
        const std::size_t d = std::stoul(ex_method.substr(hosvd ? 6 : 4));
        const CumulantSet cs = cumulant_tensors(x, std::max<std::size_t>(d, 2));
        if (hosvd) {
          a = hosvd_factor(cs[d]).factor.leftCols(static_cast<Eigen::Index>(ex_np));
        } else {
          const auto res = als_factor(cs, d, ex_np, ex_iters);
          if (!res.converged) std::cerr << "warning: ALS did not converge in " << res.iterations << " iterations\n";
          a = res.factor;
        }
      } else {
        throw std::invalid_argument("unknown extraction method: " + ex_method);
      }
      write_matrix(ex_factor, a, false);
      if (!ex_proj.empty()) {
        const SampleMatrix centred = x.rowwise() - x.colwise().mean();
        write_matrix(ex_proj, centred * a, common.header);
      }
    } else if (dfa->parsed()) {
      const SampleMatrix x = read_matrix(df_input, common.header);
      const auto col = zero_based({df_col}, static_cast<std::size_t>(x.cols()))[0];
      const Detrend model = df_detrend == "mean" ? Detrend::mean : Detrend::linear;
      if (df_detrend != "mean" && df_detrend != "linear") throw std::invalid_argument("--detrend must be linear or mean");
      std::ostringstream csv;
      csv.precision(17);
      csv << "q,H\n";
      for (double q : df_q) csv << q << ',' << dfa_hurst(column(x, static_cast<Eigen::Index>(col)), q, df_n, model) << '\n';
      write_text(df_out, csv.str());
    } else if (exp->parsed()) {
      ep.seed = common.seed;
      ep.jobs = common.jobs;
      json out;
      out["header"] = make_header("experiment", common, tools::params_json(ep));
      const json res = tools::run_experiment(ep);
      for (const auto& [k, v] : res.items()) out[k] = v;
      write_text(ex_out, out.dump(2) + "\n");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
