#include "kboost/tuning.hpp"

#include "kboost/parallel.hpp"
#include "kboost/rng.hpp"
#include "kboost/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace kboost {

double mse(const Eigen::VectorXd& y, const Eigen::VectorXd& fit)
{
  if (y.size() != fit.size())
    throw std::invalid_argument("mse: length mismatch");
  if (y.size() == 0)
    throw std::invalid_argument("mse: empty input");
  return (y - fit).squaredNorm() / static_cast<double>(y.size());
}

double mse_t(const Eigen::VectorXd& m_true, const Eigen::VectorXd& fit)
{
  return mse(m_true, fit);
}

double mse_rho(const Eigen::VectorXd& y, const Eigen::VectorXd& fit, const RobustSpec& spec)
{
  const double s2 = mse(y, fit);
  if (!(s2 > 0.0))
    return 0.0;
  const double s = std::sqrt(s2);
  double total = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    total += huber_rho((y[i] - fit[i]) / s, spec.cutoff);
  return s2 / static_cast<double>(y.size()) * total;
}

std::vector<std::vector<Eigen::Index>> make_folds(Eigen::Index n, int k, std::uint64_t seed)
{
  if (k < 2)
    throw std::invalid_argument("cross-validation needs at least 2 folds");
  if (n < 2 * static_cast<Eigen::Index>(k))
    throw std::invalid_argument("cross-validation needs n >= 2k");
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{ 0 });
  CounterRng rng(stream_key(seed, { 0xF01D }));
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<std::vector<Eigen::Index>> folds(static_cast<std::size_t>(k));
  for (Eigen::Index pos = 0; pos < n; ++pos)
    folds[static_cast<std::size_t>(pos % k)].push_back(perm[static_cast<std::size_t>(pos)]);
  for (auto& f : folds)
    std::sort(f.begin(), f.end());
  return folds;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count)
{
  if (count == 0)
    throw std::invalid_argument("grid needs at least one value");
  if (count == 1)
    return { lo };
  if (!(lo <= hi))
    throw std::invalid_argument("grid needs lo <= hi");
  std::vector<double> out(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

void select_best(CvResult& result)
{
  const auto P = static_cast<Eigen::Index>(result.params.size());
  std::vector<Eigen::Index> by_value(static_cast<std::size_t>(P));
  std::iota(by_value.begin(), by_value.end(), Eigen::Index{ 0 });
  std::stable_sort(by_value.begin(), by_value.end(), [&](Eigen::Index a, Eigen::Index b) {
    return result.params[static_cast<std::size_t>(a)] < result.params[static_cast<std::size_t>(b)];
  });

  double best = std::numeric_limits<double>::infinity();
  Eigen::Index best_p = -1;
  long best_b = 0;
  for (long b = 0; b <= result.max_iterations; ++b) {
    for (Eigen::Index p : by_value) {
      const double v = result.loss(p, b);
      if (v < best) {
        best = v;
        best_p = p;
        best_b = b;
      }
    }
  }
  if (best_p < 0)
    throw std::runtime_error("cross-validation produced no finite loss");
  result.best_param = result.params[static_cast<std::size_t>(best_p)];
  result.best_iterations = best_b;
  result.best_loss = best;
}

namespace {

struct FoldSplit
{
  Dataset train;
  Eigen::VectorXd test_x;
  Eigen::VectorXd test_y;
};

std::vector<FoldSplit> split_folds(const Dataset& data, int k, std::uint64_t seed)
{
  const auto folds = make_folds(data.size(), k, seed);
  std::vector<FoldSplit> out;
  for (const auto& held : folds) {
    std::vector<Eigen::Index> train_idx;
    std::vector<bool> is_held(static_cast<std::size_t>(data.size()), false);
    for (auto i : held)
      is_held[static_cast<std::size_t>(i)] = true;
    for (Eigen::Index i = 0; i < data.size(); ++i)
      if (!is_held[static_cast<std::size_t>(i)])
        train_idx.push_back(i);
    const Dataset test = data.subset(held);
    out.push_back({ data.subset(train_idx), test.x, test.y });
  }
  return out;
}

void check_options(const CvOptions& options)
{
  if (options.param_grid.empty())
    throw std::invalid_argument("cross-validation needs a nonempty parameter grid");
  if (options.max_iterations < 0)
    throw std::invalid_argument("maximum boosting iterations must be nonnegative");
}

std::string cell_warning(const MethodConfig& method, double param, std::size_t fold, const std::exception& e)
{
  return "cv " + method.label() + " param=" + std::to_string(param) + " fold=" + std::to_string(fold) + ": " + e.what();
}

CvResult empty_result(const CvOptions& options, Eigen::Index rank)
{
  CvResult r;
  r.params = options.param_grid;
  r.max_iterations = options.max_iterations;
  r.folds = options.folds;
  r.seed = options.seed;
  r.rank = rank;
  r.loss = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(options.param_grid.size()), options.max_iterations + 1);
  return r;
}

} // namespace

CvResult kfold_cv(const Dataset& data, const MethodConfig& method, const CvOptions& options)
{
  method.validate();
  if (method.rank > 0)
    return kfold_cv_ranks(data, method, options, { method.rank }).front();
  check_options(options);

  const auto splits = split_folds(data, options.folds, options.seed);
  const std::size_t P = options.param_grid.size();
  const std::size_t F = splits.size();
  const long B = options.max_iterations;

  // Slot (p, f) holds the held-out loss path of fold f at parameter p.
  std::vector<Eigen::VectorXd> cell(P * F);
  std::vector<std::string> cell_error(P * F);

  parallel_for(P * F, options.jobs, [&](std::size_t job) {
    const std::size_t p = job / F;
    const std::size_t f = job % F;
    const FoldSplit& split = splits[f];
    Eigen::VectorXd losses(B + 1);
    try {
      const LinearOperator op = build_operator(split.train, method, options.param_grid[p], split.test_x);
      const Eigen::MatrixXd path = method.robust
        ? robust_boost_predict_path(op.train.weights, op.eval, split.train.y, method.robust_spec, B)
        : boost_predict_path(op.train.weights, op.eval, split.train.y, B);
      for (long b = 0; b <= B; ++b)
        losses[b] = method.robust ? mse_rho(split.test_y, path.col(b), method.robust_spec)
                                  : mse(split.test_y, path.col(b));
    } catch (const std::exception& e) {
      losses.setConstant(std::numeric_limits<double>::infinity());
      cell_error[job] = cell_warning(method, options.param_grid[p], f, e);
    }
    cell[job] = std::move(losses);
  });

  CvResult result = empty_result(options, 0);
  for (std::size_t p = 0; p < P; ++p) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(B + 1);
    for (std::size_t f = 0; f < F; ++f)
      acc += cell[p * F + f];
    result.loss.row(static_cast<Eigen::Index>(p)) = acc.transpose() / static_cast<double>(F);
  }
  for (const auto& w : cell_error)
    if (!w.empty())
      result.warnings.push_back(w);
  select_best(result);
  return result;
}

std::vector<CvResult> kfold_cv_ranks(const Dataset& data,
                                     const MethodConfig& method,
                                     const CvOptions& options,
                                     const std::vector<Eigen::Index>& ranks)
{
  MethodConfig full = method;
  full.rank = 0;
  full.validate();
  if (method.robust)
    throw std::invalid_argument("low-rank cross-validation is only defined for L2 boosting");
  if (!has_unit_spectrum(method.kind))
    throw std::invalid_argument("low-rank cross-validation needs a symmetric smoother");
  if (ranks.empty())
    throw std::invalid_argument("no ranks requested");
  for (auto r : ranks)
    if (r < 0)
      throw std::invalid_argument("rank must be nonnegative");
  check_options(options);

  const auto splits = split_folds(data, options.folds, options.seed);
  const std::size_t P = options.param_grid.size();
  const std::size_t F = splits.size();
  const std::size_t R = ranks.size();
  const long B = options.max_iterations;

  // Slot (p, f) holds one loss path per rank.
  std::vector<std::vector<Eigen::VectorXd>> cell(P * F);
  std::vector<std::string> cell_error(P * F);

  parallel_for(P * F, options.jobs, [&](std::size_t job) {
    const std::size_t p = job / F;
    const std::size_t f = job % F;
    const FoldSplit& split = splits[f];
    std::vector<Eigen::VectorXd> losses(R, Eigen::VectorXd::Constant(B + 1, std::numeric_limits<double>::infinity()));
    try {
      const LinearOperator op = build_operator(split.train, full, options.param_grid[p], split.test_x);
      const SpectralDecomposition dec = eigendecompose(op.train);
      const Eigen::Index n = dec.size();
      const Eigen::VectorXd z = dec.eigenvectors.transpose() * split.train.y;
      const Eigen::MatrixXd eval_u = op.eval * dec.eigenvectors;
      Eigen::VectorXd keep(n);
      for (Eigen::Index k = 0; k < n; ++k)
        keep[k] = 1.0 - clip_eigenvalue(dec.eigenvalues[k]);

      for (std::size_t r = 0; r < R; ++r) {
        const Eigen::Index d = ranks[r] == 0 ? n : std::min(ranks[r], n);
        // Evaluation rows restricted to the retained eigenspace, T U_d U_d', applied
        // to the residuals delta_j whose coordinates are (1 - lambda)^j z. The
        // eigenvalue factor is already carried by T U_d.
        const Eigen::VectorXd lz = z.head(d);
        Eigen::VectorXd power = Eigen::VectorXd::Ones(d);
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
        for (long b = 0; b <= B; ++b) {
          acc += power.cwiseProduct(lz);
          power = power.cwiseProduct(keep.head(d));
          const Eigen::VectorXd pred = eval_u.leftCols(d) * acc;
          losses[r][b] = mse(split.test_y, pred);
        }
      }
    } catch (const std::exception& e) {
      cell_error[job] = cell_warning(full, options.param_grid[p], f, e);
    }
    cell[job] = std::move(losses);
  });

  std::vector<CvResult> results;
  for (std::size_t r = 0; r < R; ++r) {
    CvResult result = empty_result(options, ranks[r]);
    for (std::size_t p = 0; p < P; ++p) {
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(B + 1);
      for (std::size_t f = 0; f < F; ++f)
        acc += cell[p * F + f][r];
      result.loss.row(static_cast<Eigen::Index>(p)) = acc.transpose() / static_cast<double>(F);
    }
    for (const auto& w : cell_error)
      if (!w.empty())
        result.warnings.push_back(w);
    select_best(result);
    results.push_back(std::move(result));
  }
  return results;
}

} // namespace kboost
