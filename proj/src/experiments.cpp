#include "kboost/experiments.hpp"

#include "kboost/parallel.hpp"
#include "kboost/rng.hpp"
#include "kboost/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace kboost {

namespace {

enum StreamTag : std::uint64_t { tag_tune = 1, tag_folds = 2, tag_replicate = 3 };

std::uint64_t as_u64(Eigen::Index v)
{
  return static_cast<std::uint64_t>(v);
}

void summarize(BenchmarkCell& cell)
{
  const double k = static_cast<double>(cell.repeats.size());
  double sum = 0.0;
  for (const auto& r : cell.repeats)
    sum += r.mean_mse_t;
  cell.mean = sum / k;
  double ss = 0.0;
  for (const auto& r : cell.repeats)
    ss += (r.mean_mse_t - cell.mean) * (r.mean_mse_t - cell.mean);
  cell.sd = cell.repeats.size() > 1 ? std::sqrt(ss / (k - 1.0)) : 0.0;
}

BenchmarkCell make_cell(const MethodConfig& method, Eigen::Index n)
{
  BenchmarkCell cell;
  cell.method = smoother_name(method.kind);
  cell.kernel = method.kind == SmootherKind::CubicSpline ? "" : kernel_name(method.kernel);
  cell.n = n;
  cell.rank = method.rank;
  cell.robust = method.robust;
  cell.cutoff = method.robust ? method.robust_spec.cutoff : 0.0;
  return cell;
}

void check_config(const StudyConfig& config)
{
  if (config.methods.empty())
    throw std::invalid_argument("study needs at least one method");
  if (config.replicates < 1 || config.repeats < 1)
    throw std::invalid_argument("study needs at least one replicate and one repeat");
  for (const auto& m : config.methods)
    m.validate();
}

CvOptions cv_options(const StudyConfig& config, const MethodConfig& method, Eigen::Index n, int repeat)
{
  CvOptions opt;
  opt.param_grid = config.param_grid(method);
  opt.max_iterations = config.max_iterations;
  opt.folds = config.folds;
  opt.seed = fold_seed(config.seed, n, repeat);
  opt.jobs = config.jobs;
  return opt;
}

// Average MSE(T) over the replicates of one repeat at a tuned pair.
double replicate_average(const StudyConfig& config,
                         const MethodConfig& method,
                         Eigen::Index n,
                         int repeat,
                         double param,
                         long iterations)
{
  std::vector<double> scores(static_cast<std::size_t>(config.replicates));
  parallel_for(scores.size(), config.jobs, [&](std::size_t i) {
    const auto sim = simulate(config.model, n, replicate_key(config.seed, n, repeat, static_cast<int>(i)));
    scores[i] = mse_t(sim.truth, fit_method(sim.data, method, param, iterations));
  });
  double sum = 0.0;
  for (double s : scores)
    sum += s;
  return sum / static_cast<double>(scores.size());
}

BenchmarkCell run_cell(const StudyConfig& config, const MethodConfig& method, Eigen::Index n)
{
  BenchmarkCell cell = make_cell(method, n);
  for (int r = 0; r < config.repeats; ++r) {
    const auto tune = simulate(config.model, n, tuning_key(config.seed, n, r));
    const CvOptions opt = cv_options(config, method, n, r);
    const CvResult cv = kfold_cv(tune.data, method, opt);
    RepeatRecord rec;
    rec.param = cv.best_param;
    rec.iterations = cv.best_iterations;
    rec.tune_key = tuning_key(config.seed, n, r);
    rec.fold_seed = opt.seed;
    rec.warnings = cv.warnings;
    rec.mean_mse_t = replicate_average(config, method, n, r, cv.best_param, cv.best_iterations);
    cell.repeats.push_back(std::move(rec));
  }
  summarize(cell);
  return cell;
}

} // namespace

void StudyConfig::use_paper_scale()
{
  h_count = 40;
  lambda_count = 40;
  max_iterations = 5000;
  repeats = 10;
  replicates = 100;
}

std::vector<double> StudyConfig::param_grid(const MethodConfig& method) const
{
  if (method.kind == SmootherKind::CubicSpline)
    return linear_grid(lambda_lo, lambda_hi, lambda_count);
  return linear_grid(h_lo, h_hi, h_count);
}

const BenchmarkCell& BenchmarkReport::find(const std::string& method,
                                           const std::string& kernel,
                                           Eigen::Index n,
                                           Eigen::Index rank,
                                           bool robust,
                                           double cutoff) const
{
  for (const auto& c : cells)
    if (c.method == method && (kernel.empty() || c.kernel == kernel) && c.n == n && c.rank == rank && c.robust == robust && (!robust || c.cutoff == cutoff))
      return c;
  throw std::out_of_range("no benchmark cell for " + method + " n=" + std::to_string(n));
}

std::uint64_t tuning_key(std::uint64_t seed, Eigen::Index n, int repeat)
{
  return stream_key(seed, { tag_tune, as_u64(n), static_cast<std::uint64_t>(repeat) });
}

std::uint64_t fold_seed(std::uint64_t seed, Eigen::Index n, int repeat)
{
  return stream_key(seed, { tag_folds, as_u64(n), static_cast<std::uint64_t>(repeat) });
}

std::uint64_t replicate_key(std::uint64_t seed, Eigen::Index n, int repeat, int replicate)
{
  return stream_key(seed,
                    { tag_replicate, as_u64(n), static_cast<std::uint64_t>(repeat), static_cast<std::uint64_t>(replicate) });
}

BenchmarkReport run_benchmark(const StudyConfig& config)
{
  check_config(config);
  BenchmarkReport report;
  report.study = "tables";
  report.config = config;
  for (const auto& method : config.methods)
    for (auto n : config.n_list)
      report.cells.push_back(run_cell(config, method, n));
  return report;
}

BenchmarkReport run_lowrank_study(const StudyConfig& config, const std::vector<Eigen::Index>& ranks)
{
  check_config(config);
  if (ranks.empty())
    throw std::invalid_argument("low-rank study needs at least one rank");
  BenchmarkReport report;
  report.study = "lowrank";
  report.config = config;

  for (const auto& base : config.methods) {
    MethodConfig full = base;
    full.rank = 0;
    for (auto n : config.n_list) {
      for (auto d : ranks)
        if (d < 0 || d > n)
          throw std::invalid_argument("rank " + std::to_string(d) + " invalid for n=" + std::to_string(n));

      std::vector<BenchmarkCell> cells;
      for (auto d : ranks) {
        MethodConfig m = full;
        m.rank = d;
        cells.push_back(make_cell(m, n));
      }

      for (int r = 0; r < config.repeats; ++r) {
        const auto tune = simulate(config.model, n, tuning_key(config.seed, n, r));
        const CvOptions opt = cv_options(config, full, n, r);
        const auto cvs = kfold_cv_ranks(tune.data, full, opt, ranks);

        // Per replicate: one decomposition per distinct tuned bandwidth, then
        // the rank-d boosting operator for every rank.
        std::vector<std::vector<double>> scores(ranks.size(), std::vector<double>(static_cast<std::size_t>(config.replicates)));
        parallel_for(static_cast<std::size_t>(config.replicates), config.jobs, [&](std::size_t i) {
          const auto sim = simulate(config.model, n, replicate_key(config.seed, n, r, static_cast<int>(i)));
          std::map<double, SpectralDecomposition> by_param;
          for (std::size_t k = 0; k < ranks.size(); ++k) {
            const double param = cvs[k].best_param;
            auto it = by_param.find(param);
            if (it == by_param.end())
              it = by_param.emplace(param, eigendecompose(build_smoother(sim.data, full, param))).first;
            const Eigen::Index d = ranks[k] == 0 ? n : ranks[k];
            const auto op = boosting_operator(it->second, cvs[k].best_iterations, d);
            scores[k][i] = mse_t(sim.truth, op.apply(sim.data.y));
          }
        });

        for (std::size_t k = 0; k < ranks.size(); ++k) {
          RepeatRecord rec;
          rec.param = cvs[k].best_param;
          rec.iterations = cvs[k].best_iterations;
          rec.tune_key = tuning_key(config.seed, n, r);
          rec.fold_seed = opt.seed;
          rec.warnings = cvs[k].warnings;
          double sum = 0.0;
          for (double s : scores[k])
            sum += s;
          rec.mean_mse_t = sum / static_cast<double>(config.replicates);
          cells[k].repeats.push_back(std::move(rec));
        }
      }
      for (auto& c : cells) {
        summarize(c);
        report.cells.push_back(std::move(c));
      }
    }
  }
  return report;
}

BenchmarkReport run_robust_study(const StudyConfig& config, const std::vector<double>& cutoffs)
{
  check_config(config);
  if (cutoffs.empty())
    throw std::invalid_argument("robust study needs at least one Huber constant");
  BenchmarkReport report;
  report.study = "robust";
  report.config = config;
  for (const auto& base : config.methods) {
    MethodConfig l2 = base;
    l2.robust = false;
    for (auto n : config.n_list) {
      report.cells.push_back(run_cell(config, l2, n));
      for (double c : cutoffs) {
        MethodConfig rob = base;
        rob.robust = true;
        rob.robust_spec.cutoff = c;
        report.cells.push_back(run_cell(config, rob, n));
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Real data

void RealDataConfig::use_paper_scale()
{
  h_count = 40;
  lambda_count = 40;
}

PilotFit pilot_fit(const Dataset& data, const RealDataConfig& config)
{
  MethodConfig lc;
  lc.kind = SmootherKind::ProjectionLC;
  lc.kernel = config.kernel;
  lc.grid_size = config.grid_size;

  CvOptions opt;
  opt.param_grid = linear_grid(config.h_lo, config.h_hi, config.h_count);
  opt.max_iterations = config.pilot_iterations;
  opt.folds = config.folds;
  opt.seed = stream_key(config.seed, { 0x9170 });
  opt.jobs = config.jobs;
  CvResult cv = kfold_cv(data, lc, opt);

  // The pilot budget is fixed; only the bandwidth is chosen.
  Eigen::Index best = -1;
  const long b = config.pilot_iterations;
  for (Eigen::Index p = 0; p < cv.loss.rows(); ++p)
    if (std::isfinite(cv.loss(p, b)) && (best < 0 || cv.loss(p, b) < cv.loss(best, b)))
      best = p;
  if (best < 0)
    throw std::runtime_error("pilot fit: no finite cross-validation loss");

  PilotFit pilot;
  pilot.bandwidth = cv.params[static_cast<std::size_t>(best)];
  pilot.iterations = b;
  pilot.residuals = data.y - fit_method(data, lc, pilot.bandwidth, b);
  pilot.sigma_hat = robust_scale(pilot.residuals, config.scale);
  return pilot;
}

RealDataReport run_real_data(const Dataset& data, const RealDataConfig& config)
{
  RealDataReport report;
  report.config = config;
  report.pilot = pilot_fit(data, config);

  auto grid_for = [&](SmootherKind kind) {
    return kind == SmootherKind::CubicSpline ? linear_grid(config.lambda_lo, config.lambda_hi, config.lambda_count)
                                             : linear_grid(config.h_lo, config.h_hi, config.h_count);
  };
  auto tune = [&](const MethodConfig& m) {
    CvOptions opt;
    opt.param_grid = grid_for(m.kind);
    opt.max_iterations = config.max_iterations;
    opt.folds = config.folds;
    opt.seed = stream_key(config.seed, { 0xDA7A });
    opt.jobs = config.jobs;
    const CvResult cv = kfold_cv(data, m, opt);
    const Eigen::VectorXd fit = fit_method(data, m, cv.best_param, cv.best_iterations);
    return std::tuple{ cv.best_param, cv.best_iterations, mse(data.y, fit) };
  };

  for (SmootherKind kind : config.smoothers) {
    MethodConfig l2;
    l2.kind = kind;
    l2.kernel = config.kernel;
    l2.grid_size = config.grid_size;
    const auto [l2_param, l2_b, l2_mse] = tune(l2);

    for (double factor : config.huber_factors) {
      MethodConfig rob = l2;
      rob.robust = true;
      rob.robust_spec = config.robust;
      rob.robust_spec.huber_factor = factor;
      rob.robust_spec.cutoff = huber_constant(report.pilot.sigma_hat, factor);
      const auto [r_param, r_b, r_mse] = tune(rob);

      RealDataRow row;
      row.factor = factor;
      row.cutoff = rob.robust_spec.cutoff;
      row.smoother = smoother_name(kind);
      row.robust_param = r_param;
      row.robust_iterations = r_b;
      row.robust_mse = r_mse;
      row.l2_param = l2_param;
      row.l2_iterations = l2_b;
      row.l2_mse = l2_mse;
      report.rows.push_back(row);
    }
  }
  return report;
}

} // namespace kboost
