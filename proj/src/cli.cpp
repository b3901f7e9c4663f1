#include "kboost/cli.hpp"

#include "kboost/io.hpp"
#include "kboost/parallel.hpp"
#include "kboost/rng.hpp"
#include "kboost/spectral.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>

namespace kboost {

namespace fs = std::filesystem;

std::vector<double> ParamGrid::values() const
{
  return linear_grid(lo, hi, count);
}

ParamGrid parse_param_grid(const std::string& text)
{
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos)
    throw std::invalid_argument("expected lo:hi:count, got '" + text + "'");
  ParamGrid g;
  try {
    std::size_t used = 0;
    const std::string a = text.substr(0, first);
    const std::string b = text.substr(first + 1, second - first - 1);
    const std::string c = text.substr(second + 1);
    g.lo = std::stod(a, &used);
    if (used != a.size())
      throw std::invalid_argument(a);
    g.hi = std::stod(b, &used);
    if (used != b.size())
      throw std::invalid_argument(b);
    const long count = std::stol(c, &used);
    if (used != c.size() || count < 1)
      throw std::invalid_argument(c);
    g.count = static_cast<std::size_t>(count);
  } catch (const std::exception&) {
    throw std::invalid_argument("expected lo:hi:count, got '" + text + "'");
  }
  if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || g.lo > g.hi || (g.count > 1 && g.lo == g.hi))
    throw std::invalid_argument("grid '" + text + "' needs finite lo < hi");
  return g;
}

MethodConfig parse_method(const std::string& text)
{
  MethodConfig m;
  const auto pos = text.find(':');
  m.kind = parse_smoother(text.substr(0, pos));
  if (pos != std::string::npos) {
    if (m.kind == SmootherKind::CubicSpline)
      throw std::invalid_argument("spline takes no kernel: '" + text + "'");
    m.kernel = parse_kernel(text.substr(pos + 1));
  }
  return m;
}

double RunConfig::param() const
{
  if (method.kind == SmootherKind::CubicSpline) {
    if (!lambda)
      throw UsageError("--lambda is required for the spline smoother");
    return *lambda;
  }
  if (!bandwidth)
    throw UsageError("--bandwidth is required for kernel smoothers");
  return *bandwidth;
}

namespace {

struct MethodFlags
{
  std::string smoother;
  std::string kernel = "epanechnikov";
  std::string rank = "full";
  std::size_t grid = 200;
  bool robust = false;
  std::string huber_c = "auto";
  double huber_factor = 1.345;
  double psi_tol = 1e-6;
  int psi_max_iter = 100;
  std::string scale = "qn";
};

void add_data_flags(CLI::App* sub, RunConfig& cfg, std::string& support)
{
  sub->add_option("--data", cfg.data_path, "CSV with header (x,y by default)")->required();
  sub->add_option("--cols", cfg.cols, "x and y column names, as x:y");
  sub->add_option("--support", support, "covariate support lo:hi (default: data range)");
}

void add_method_flags(CLI::App* sub, MethodFlags& f, bool need_smoother)
{
  auto* s = sub->add_option("--smoother", f.smoother, "lc, ll, nw or spline");
  if (need_smoother)
    s->required();
  sub->add_option("--kernel", f.kernel, "epanechnikov, gaussian, triangular, uniform, biweight");
  sub->add_option("--rank", f.rank, "low-rank truncation d, or full");
  sub->add_option("--grid", f.grid, "quadrature grid points G")->check(CLI::Range(std::size_t{ 2 }, std::size_t{ 1000000 }));
  sub->add_flag("--robust", f.robust, "Huber-robust boosting");
  sub->add_option("--huber-c", f.huber_c, "Huber cutoff value, or auto");
  sub->add_option("--huber-factor", f.huber_factor, "c = factor * sigma_hat when --huber-c auto")
    ->check(CLI::PositiveNumber);
  sub->add_option("--psi-tol", f.psi_tol, "fixed-point tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--psi-max-iter", f.psi_max_iter, "fixed-point iteration cap")->check(CLI::Range(1, 1000000));
  sub->add_option("--scale", f.scale, "qn or mad")->check(CLI::IsMember({ "qn", "mad" }));
}

void add_fit_flags(CLI::App* sub, RunConfig& cfg)
{
  sub->add_option("--bandwidth", cfg.bandwidth, "kernel bandwidth h")->check(CLI::PositiveNumber);
  sub->add_option("--lambda", cfg.lambda, "spline penalty")->check(CLI::NonNegativeNumber);
  sub->add_option("--iters", cfg.iterations, "boosting iterations b")->check(CLI::NonNegativeNumber);
}

void add_jobs_flag(CLI::App* sub, RunConfig& cfg)
{
  sub->add_option("--jobs", cfg.jobs, "worker threads (default: KBOOST_JOBS or 1)")->check(CLI::Range(1, 4096));
}

// Flag values that CLI11 cannot check on its own.
void resolve_method(RunConfig& cfg, const MethodFlags& f)
{
  auto usage = [](const std::string& flag, const std::string& msg) { return UsageError(flag + ": " + msg); };
  try {
    cfg.method.kind = parse_smoother(f.smoother.empty() ? "lc" : f.smoother);
  } catch (const std::exception& e) {
    throw usage("--smoother", e.what());
  }
  try {
    cfg.method.kernel = parse_kernel(f.kernel);
  } catch (const std::exception& e) {
    throw usage("--kernel", e.what());
  }
  cfg.method.grid_size = f.grid;
  if (f.rank != "full") {
    try {
      std::size_t used = 0;
      const long d = std::stol(f.rank, &used);
      if (used != f.rank.size() || d < 1)
        throw std::invalid_argument(f.rank);
      cfg.method.rank = d;
    } catch (const std::exception&) {
      throw usage("--rank", "expected a positive integer or 'full', got '" + f.rank + "'");
    }
  }
  cfg.method.robust = f.robust;
  cfg.method.robust_spec.psi_tol = f.psi_tol;
  cfg.method.robust_spec.psi_max_iter = f.psi_max_iter;
  cfg.method.robust_spec.huber_factor = f.huber_factor;
  cfg.huber_factor = f.huber_factor;
  cfg.scale = f.scale == "mad" ? ScaleEstimator::Mad : ScaleEstimator::Qn;
  if (f.huber_c == "auto") {
    cfg.huber_auto = true;
  } else {
    try {
      std::size_t used = 0;
      const double c = std::stod(f.huber_c, &used);
      if (used != f.huber_c.size() || !(c > 0.0))
        throw std::invalid_argument(f.huber_c);
      cfg.method.robust_spec.cutoff = c;
    } catch (const std::exception&) {
      throw usage("--huber-c", "expected a positive number or 'auto', got '" + f.huber_c + "'");
    }
  }
  try {
    cfg.method.validate();
  } catch (const std::exception& e) {
    throw usage(f.rank != "full" ? "--rank" : "--smoother", e.what());
  }
}

void resolve_support(RunConfig& cfg, const std::string& support)
{
  if (support.empty())
    return;
  try {
    cfg.support = parse_range(support);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--support: ") + e.what());
  }
}

template<typename T>
std::vector<T> split_list(const std::string& text, const std::string& flag)
{
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      if constexpr (std::is_same_v<T, double>) {
        out.push_back(std::stod(item, &used));
      } else {
        out.push_back(static_cast<T>(std::stol(item, &used)));
      }
      if (used != item.size())
        throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(flag + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty())
    throw UsageError(flag + ": empty list");
  return out;
}

} // namespace

RunConfig parse_args(int argc, const char* const* argv)
{
  RunConfig cfg;
  cfg.jobs = default_jobs();

  CLI::App app{ "Kernel-smoother L2 boosting" , "kboost" };
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  MethodFlags mf;
  std::string support;
  std::string grid_text;
  std::string model = "m1";
  std::string errors = "normal";
  std::string n_list_text;
  std::string methods_text;
  std::string cutoffs_text;
  std::string ranks_text;

  auto* fit = app.add_subcommand("fit", "boosted fit at the training points");
  add_data_flags(fit, cfg, support);
  add_method_flags(fit, mf, true);
  add_fit_flags(fit, cfg);
  fit->add_option("--out", cfg.out_path, "output CSV (x,y,fit)");
  fit->add_option("--matrix-out", cfg.matrix_out, "also write the smoother matrix as CSV");

  auto* predict = app.add_subcommand("predict", "boosted prediction at new points");
  add_data_flags(predict, cfg, support);
  add_method_flags(predict, mf, true);
  add_fit_flags(predict, cfg);
  predict->add_option("--at", cfg.at_path, "CSV or list of evaluation points")->required();
  predict->add_option("--out", cfg.out_path, "output CSV (x,prediction)");

  auto* cv = app.add_subcommand("cv", "k-fold cross-validation over (parameter, b)");
  add_data_flags(cv, cfg, support);
  add_method_flags(cv, mf, true);
  cv->add_option("--param-grid", grid_text, "lo:hi:count, linear spacing")->required();
  cv->add_option("--b-max", cfg.b_max, "largest b")->check(CLI::NonNegativeNumber);
  cv->add_option("--folds", cfg.folds, "number of folds")->check(CLI::Range(2, 1000000));
  cv->add_option("--seed", cfg.seed, "fold seed");
  cv->add_option("--out", cfg.out_path, "loss grid CSV (param,b,loss)");
  add_jobs_flag(cv, cfg);

  auto* sim = app.add_subcommand("simulate", "draw a dataset from a simulation model");
  sim->add_option("--model", model, "m1 or m2")->check(CLI::IsMember({ "m1", "m2" }));
  sim->add_option("--errors", errors, "normal or t3")->check(CLI::IsMember({ "normal", "t3" }));
  sim->add_option("--n", cfg.n, "sample size")->check(CLI::Range(Eigen::Index{ 2 }, Eigen::Index{ 100000000 }));
  sim->add_option("--seed", cfg.seed, "seed");
  sim->add_option("--out", cfg.out_path, "output CSV (x,y)");

  auto* eig = app.add_subcommand("eigen", "spectrum of a smoother matrix");
  eig->add_option("--data", cfg.data_path, "CSV with header; default: simulated design");
  eig->add_option("--cols", cfg.cols, "x and y column names, as x:y");
  eig->add_option("--support", support, "covariate support lo:hi");
  eig->add_option("--model", model, "m1 or m2 when no --data")->check(CLI::IsMember({ "m1", "m2" }));
  eig->add_option("--n", cfg.n, "simulated sample size")->check(CLI::Range(Eigen::Index{ 2 }, Eigen::Index{ 100000000 }));
  eig->add_option("--seed", cfg.seed, "seed for the simulated design");
  add_method_flags(eig, mf, true);
  eig->add_option("--bandwidth", cfg.bandwidth, "kernel bandwidth h")->check(CLI::PositiveNumber);
  eig->add_option("--lambda", cfg.lambda, "spline penalty")->check(CLI::NonNegativeNumber);
  eig->add_option("--out", cfg.out_path, "output CSV (k,lambda or k,re,im)");

  auto* bench = app.add_subcommand("bench", "simulation studies and the real-data table");
  bench->add_option("--study", cfg.study, "tables, lowrank, robust or real")
    ->check(CLI::IsMember({ "tables", "lowrank", "robust", "real" }));
  bench->add_flag("--paper-scale", cfg.paper_scale, "published grid sizes, B and repeats");
  bench->add_option("--out-dir", cfg.out_dir, "output directory");
  bench->add_option("--seed", cfg.seed, "master seed");
  add_jobs_flag(bench, cfg);
  bench->add_option("--replicates", cfg.replicates, "datasets per repeat")->check(CLI::Range(1, 100000000));
  bench->add_option("--repeats", cfg.repeats, "tuning repeats")->check(CLI::Range(1, 100000000));
  bench->add_option("--n", n_list_text, "comma-separated sample sizes");
  bench->add_option("--methods", methods_text, "comma-separated smoother[:kernel] list");
  bench->add_option("--cutoffs", cutoffs_text, "comma-separated Huber constants (robust study)");
  bench->add_option("--ranks", ranks_text, "comma-separated ranks, 0 = full (lowrank study)");
  bench->add_option("--b-max", cfg.bench_b_max, "largest b")->check(CLI::NonNegativeNumber);
  bench->add_option("--model", cfg.model_override, "restrict to m1 or m2")->check(CLI::IsMember({ "m1", "m2" }));
  bench->add_option("--data", cfg.data_path, "real-data CSV (real study)");
  bench->add_option("--cols", cfg.cols, "x and y column names, as x:y");
  bench->add_option("--support", support, "covariate support lo:hi");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    for (auto* sub : app.get_subcommands())
      cfg.help = sub->help();
    if (cfg.help.empty())
      cfg.help = app.help();
    return cfg;
  } catch (const CLI::CallForAllHelp&) {
    cfg.help = app.help("", CLI::AppFormatMode::All);
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  cfg.command = app.get_subcommands().front()->get_name();
  resolve_support(cfg, support);
  if (cfg.command == "fit" || cfg.command == "predict" || cfg.command == "cv" || cfg.command == "eigen")
    resolve_method(cfg, mf);
  if (!cfg.cols.empty()) {
    try {
      split_pair(cfg.cols, "--cols");
    } catch (const std::exception& e) {
      throw UsageError(std::string("--cols: ") + e.what());
    }
  }

  if (cfg.command == "fit" || cfg.command == "predict")
    cfg.param();
  if (cfg.command == "eigen")
    cfg.param();
  if (cfg.command == "cv") {
    try {
      cfg.param_grid = parse_param_grid(grid_text);
    } catch (const std::exception& e) {
      throw UsageError(std::string("--param-grid: ") + e.what());
    }
    const bool spline = cfg.method.kind == SmootherKind::CubicSpline;
    if (spline ? cfg.param_grid->lo < 0.0 : cfg.param_grid->lo <= 0.0)
      throw UsageError(std::string("--param-grid: ") + (spline ? "lambda must be >= 0" : "bandwidth must be > 0"));
  }
  if (cfg.command == "simulate" || cfg.command == "eigen") {
    cfg.model.id = parse_model(model);
    cfg.model.errors = parse_error_law(errors);
  }
  if (cfg.command == "bench") {
    if (!n_list_text.empty()) {
      cfg.n_list = split_list<Eigen::Index>(n_list_text, "--n");
      for (auto n : cfg.n_list)
        if (n < 10)
          throw UsageError("--n: sample sizes must be at least 10");
    }
    if (!methods_text.empty()) {
      std::stringstream ss(methods_text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          parse_method(item);
        } catch (const std::exception& e) {
          throw UsageError(std::string("--methods: ") + e.what());
        }
        cfg.methods.push_back(item);
      }
    }
    if (!cutoffs_text.empty()) {
      cfg.cutoffs = split_list<double>(cutoffs_text, "--cutoffs");
      for (double c : cfg.cutoffs)
        if (!(c > 0.0))
          throw UsageError("--cutoffs: Huber constants must be positive");
    }
    if (!ranks_text.empty()) {
      cfg.ranks = split_list<Eigen::Index>(ranks_text, "--ranks");
      for (auto d : cfg.ranks)
        if (d < 0)
          throw UsageError("--ranks: ranks must be nonnegative");
    }
    if (cfg.study == "real" && cfg.data_path.empty())
      throw UsageError("--data: required for --study real");
  }
  return cfg;
}

namespace {

Dataset load_input(const RunConfig& cfg)
{
  ColumnMap cols;
  if (!cfg.cols.empty()) {
    const auto [x, y] = split_pair(cfg.cols, "--cols");
    cols.x = x;
    cols.y = y;
  }
  return load_dataset(cfg.data_path, cols, cfg.support);
}

void emit(const RunConfig& cfg, const std::string& fallback, const std::string& content, std::ostream& out)
{
  const std::string path = cfg.out_path.empty() ? fallback : cfg.out_path;
  if (path == "-") {
    out << content;
    return;
  }
  write_text(path, content);
  out << "wrote " << path << "\n";
}

// Huber constant for --huber-c auto: factor * scale of the residuals of the
// non-robust fit at the same parameter and iteration count.
MethodConfig resolve_cutoff(const RunConfig& cfg, const Dataset& data, double param, long iterations, std::ostream& out)
{
  MethodConfig m = cfg.method;
  if (!m.robust || !cfg.huber_auto)
    return m;
  MethodConfig l2 = m;
  l2.robust = false;
  const Eigen::VectorXd resid = data.y - fit_method(data, l2, param, iterations);
  const double sigma = robust_scale(resid, cfg.scale);
  m.robust_spec.cutoff = huber_constant(sigma, cfg.huber_factor);
  out << "sigma_hat=" << format_double(sigma) << " c=" << format_double(m.robust_spec.cutoff) << "\n";
  return m;
}

int run_fit(const RunConfig& cfg, std::ostream& out)
{
  const Dataset data = load_input(cfg);
  const double param = cfg.param();
  const MethodConfig m = resolve_cutoff(cfg, data, param, cfg.iterations, out);
  const Eigen::VectorXd fit = fit_method(data, m, param, cfg.iterations);
  emit(cfg, "fit.csv", fit_csv(data, fit), out);
  if (!cfg.matrix_out.empty()) {
    write_text(cfg.matrix_out, matrix_csv(build_smoother(data, m, param).weights));
    out << "wrote " << cfg.matrix_out << "\n";
  }
  return 0;
}

int run_predict(const RunConfig& cfg, std::ostream& out)
{
  const Dataset data = load_input(cfg);
  const Eigen::VectorXd at = load_points(cfg.at_path);
  const double param = cfg.param();
  const MethodConfig m = resolve_cutoff(cfg, data, param, cfg.iterations, out);
  emit(cfg, "predict.csv", predict_csv(at, predict_method(data, m, param, cfg.iterations, at)), out);
  return 0;
}

int run_cv(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
  const Dataset data = load_input(cfg);
  CvOptions opt;
  opt.param_grid = cfg.param_grid->values();
  opt.max_iterations = cfg.b_max;
  opt.folds = cfg.folds;
  opt.seed = cfg.seed;
  opt.jobs = cfg.jobs;

  MethodConfig m = cfg.method;
  if (m.robust && cfg.huber_auto) {
    // Scale from the residuals of the non-robust CV winner.
    MethodConfig l2 = m;
    l2.robust = false;
    const CvResult pilot = kfold_cv(data, l2, opt);
    RunConfig c2 = cfg;
    m = resolve_cutoff(c2, data, pilot.best_param, pilot.best_iterations, out);
  }
  const CvResult cv = kfold_cv(data, m, opt);
  for (const auto& w : cv.warnings)
    err << "warning: " << w << "\n";
  emit(cfg, "cv.csv", cv_csv(cv), out);
  out << cv_best_line(cv) << "\n";
  return 0;
}

int run_simulate(const RunConfig& cfg, std::ostream& out)
{
  const auto sim = simulate(cfg.model, cfg.n, cfg.seed);
  emit(cfg, "simulated.csv", dataset_csv(sim.data), out);
  return 0;
}

int run_eigen(const RunConfig& cfg, std::ostream& out)
{
  const Dataset data = cfg.data_path.empty() ? simulate(cfg.model, cfg.n, cfg.seed).data : load_input(cfg);
  const SmootherMatrix s = build_smoother(data, cfg.method, cfg.param());
  if (!s.symmetric) {
    emit(cfg, "eigen.csv", complex_eigen_csv(nonsymmetric_spectrum(s)), out);
    return 0;
  }
  emit(cfg, "eigen.csv", eigen_csv(eigendecompose(s).eigenvalues), out);
  return 0;
}

std::vector<MethodConfig> bench_methods(const RunConfig& cfg, const std::vector<std::string>& defaults)
{
  std::vector<MethodConfig> out;
  for (const auto& t : cfg.methods.empty() ? defaults : cfg.methods)
    out.push_back(parse_method(t));
  return out;
}

StudyConfig base_study(const RunConfig& cfg, ModelId model, ErrorLaw errors)
{
  StudyConfig s;
  s.model.id = model;
  s.model.errors = errors;
  s.seed = cfg.seed;
  s.jobs = cfg.jobs;
  if (cfg.paper_scale)
    s.use_paper_scale();
  if (cfg.replicates)
    s.replicates = *cfg.replicates;
  if (cfg.repeats)
    s.repeats = *cfg.repeats;
  if (cfg.bench_b_max)
    s.max_iterations = *cfg.bench_b_max;
  return s;
}

std::vector<ModelId> bench_models(const RunConfig& cfg, std::vector<ModelId> defaults)
{
  if (cfg.model_override)
    return { parse_model(*cfg.model_override) };
  return defaults;
}

int run_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
  std::vector<BenchmarkReport> reports;
  std::vector<std::string> names;

  auto n_list = [&](std::vector<Eigen::Index> desk, std::vector<Eigen::Index> full) {
    if (!cfg.n_list.empty())
      return cfg.n_list;
    return cfg.paper_scale ? full : desk;
  };

  if (cfg.study == "real") {
    RealDataConfig rc;
    rc.seed = cfg.seed;
    rc.jobs = cfg.jobs;
    if (cfg.paper_scale)
      rc.use_paper_scale();
    if (cfg.bench_b_max)
      rc.max_iterations = *cfg.bench_b_max;
    if (!cfg.methods.empty()) {
      rc.smoothers.clear();
      for (const auto& t : cfg.methods)
        rc.smoothers.push_back(parse_method(t).kind);
    }
    const Dataset data = load_input(cfg);
    const RealDataReport rep = run_real_data(data, rc);
    write_files(cfg.out_dir,
                { { "table6.csv", real_data_csv(rep) }, { "metadata.json", real_data_metadata(rep, cfg.data_path) } });
    out << "sigma_hat=" << format_double(rep.pilot.sigma_hat) << "\n";
    out << "wrote " << (fs::path(cfg.out_dir) / "table6.csv").string() << "\n";
    return 0;
  }

  if (cfg.study == "tables") {
    const std::vector<std::string> defaults{ "lc:epanechnikov", "ll:epanechnikov", "nw:epanechnikov",
                                             "lc:gaussian",     "ll:gaussian",     "nw:gaussian",
                                             "spline" };
    for (ModelId id : bench_models(cfg, { ModelId::M1, ModelId::M2 })) {
      StudyConfig s = base_study(cfg, id, ErrorLaw::Normal);
      s.methods = bench_methods(cfg, defaults);
      s.n_list = n_list({ 100, 200 }, { 100, 200, 500, 1000 });
      reports.push_back(run_benchmark(s));
      names.push_back(id == ModelId::M1 ? "table1.csv" : "table3.csv");
    }
  } else if (cfg.study == "lowrank") {
    for (ModelId id : bench_models(cfg, { ModelId::M1, ModelId::M2 })) {
      StudyConfig s = base_study(cfg, id, ErrorLaw::Normal);
      s.methods = bench_methods(cfg, { "lc:epanechnikov" });
      s.n_list = n_list({ 100, 200, 500 }, { 100, 200, 500 });
      const std::vector<Eigen::Index> ranks = cfg.ranks.empty() ? std::vector<Eigen::Index>{ 2, 5, 10, 15, 0 } : cfg.ranks;
      reports.push_back(run_lowrank_study(s, ranks));
      names.push_back(id == ModelId::M1 ? "table2.csv" : "table4.csv");
    }
  } else {
    for (ModelId id : bench_models(cfg, { ModelId::M1 })) {
      StudyConfig s = base_study(cfg, id, ErrorLaw::StudentT3);
      s.methods = bench_methods(cfg, { "lc:epanechnikov", "ll:epanechnikov", "nw:epanechnikov", "spline" });
      s.n_list = n_list({ 100, 200 }, { 100, 200, 500 });
      const std::vector<double> cutoffs = cfg.cutoffs.empty() ? std::vector<double>{ 1.0, 2.0 } : cfg.cutoffs;
      reports.push_back(run_robust_study(s, cutoffs));
      names.push_back(id == ModelId::M1 ? "table5.csv" : "table5_m2.csv");
    }
  }

  std::vector<std::pair<std::string, std::string>> files;
  std::vector<const BenchmarkReport*> ptrs;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    files.emplace_back(names[i], report_csv(reports[i]));
    ptrs.push_back(&reports[i]);
    for (const auto& cell : reports[i].cells)
      for (const auto& r : cell.repeats)
        for (const auto& w : r.warnings)
          err << "warning: " << w << "\n";
  }
  files.emplace_back("metadata.json", report_metadata(ptrs, names));
  write_files(cfg.out_dir, files);
  for (const auto& n : names)
    out << "wrote " << (fs::path(cfg.out_dir) / n).string() << "\n";
  return 0;
}

} // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
  if (!cfg.help.empty()) {
    out << cfg.help;
    return 0;
  }
  try {
    if (cfg.command == "fit")
      return run_fit(cfg, out);
    if (cfg.command == "predict")
      return run_predict(cfg, out);
    if (cfg.command == "cv")
      return run_cv(cfg, out, err);
    if (cfg.command == "simulate")
      return run_simulate(cfg, out);
    if (cfg.command == "eigen")
      return run_eigen(cfg, out);
    if (cfg.command == "bench")
      return run_bench(cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "usage error: unknown subcommand '" << cfg.command << "'\n";
  return 2;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  RunConfig cfg;
  try {
    cfg = parse_args(argc, argv);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  return run(cfg, out, err);
}

} // namespace kboost
