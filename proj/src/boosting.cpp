#include "kboost/boosting.hpp"

#include <stdexcept>

namespace kboost {

BoostTrajectory l2_boost(const SmootherMatrix& s, const Eigen::VectorXd& y, long iterations)
{
  if (y.size() != s.size())
    throw std::invalid_argument("response length differs from smoother size");
  if (iterations < 0)
    throw std::invalid_argument("boosting iterations must be nonnegative");

  BoostTrajectory out;
  out.kind = s.kind;
  out.max_iterations = iterations;
  out.fits.reserve(static_cast<std::size_t>(iterations) + 1);
  out.train_mse.reserve(static_cast<std::size_t>(iterations) + 1);

  Eigen::VectorXd fit = s.weights * y;
  for (long b = 0;; ++b) {
    out.train_mse.push_back((y - fit).squaredNorm() / static_cast<double>(y.size()));
    out.fits.push_back(fit);
    if (b == iterations)
      break;
    fit += s.weights * (y - fit);
  }
  return out;
}

Eigen::MatrixXd boost_predict_path(const Eigen::MatrixXd& smoother,
                                   const Eigen::MatrixXd& eval_rows,
                                   const Eigen::VectorXd& y,
                                   long iterations)
{
  const Eigen::Index n = smoother.rows();
  if (smoother.cols() != n || eval_rows.cols() != n || y.size() != n)
    throw std::invalid_argument("boost_predict_path dimension mismatch");
  if (iterations < 0)
    throw std::invalid_argument("boosting iterations must be nonnegative");

  const Eigen::Index m = eval_rows.rows();
  // One product per step serves both the training update and the prediction.
  Eigen::MatrixXd stacked(n + m, n);
  stacked.topRows(n) = smoother;
  stacked.bottomRows(m) = eval_rows;

  Eigen::MatrixXd path(m, iterations + 1);
  Eigen::VectorXd fit = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd pred = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd delta = y;
  Eigen::VectorXd step(n + m);
  for (long b = 0; b <= iterations; ++b) {
    step.noalias() = stacked * delta;
    fit += step.head(n);
    pred += step.tail(m);
    path.col(b) = pred;
    delta = y - fit;
  }
  return path;
}

Eigen::VectorXd boost_predict(const Dataset& data,
                              const KernelSpec& spec,
                              int order,
                              const QuadratureGrid& grid,
                              long iterations,
                              const Eigen::VectorXd& x_test)
{
  const ProjectionSmoother builder(data, spec, order, grid);
  const Eigen::MatrixXd rows = builder.rows_at(x_test);
  return boost_predict_path(builder.matrix().weights, rows, data.y, iterations).col(iterations);
}

} // namespace kboost
