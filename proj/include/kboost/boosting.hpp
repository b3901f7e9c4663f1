#pragma once

#include "kboost/smoothers.hpp"

#include <Eigen/Dense>
#include <vector>

namespace kboost {

//! Fitted vectors for b = 0..B and the training loss against the response
//! that was boosted.
struct BoostTrajectory
{
  std::vector<Eigen::VectorXd> fits;
  std::vector<double> train_mse;
  SmootherKind kind = SmootherKind::ProjectionLC;
  long max_iterations = 0;
  //! Robust runs only: inner fixed-point solves that hit the iteration cap.
  long unconverged = 0;

  const Eigen::VectorXd& fit(long b) const { return fits.at(static_cast<std::size_t>(b)); }
};

//! L2 boosting: fits[0] = S y, fits[b] = fits[b-1] + S (y - fits[b-1]).
BoostTrajectory l2_boost(const SmootherMatrix& s, const Eigen::VectorXd& y, long iterations);

//! Predictions at evaluation points for every b = 0..B, as an m x (B+1)
//! matrix. `eval_rows` holds the evaluation-point weights (m x n) of the
//! same smoother; column b is sum_{j<=b} eval_rows * delta_j with
//! delta_0 = y and delta_j = y - fits[j-1].
Eigen::MatrixXd boost_predict_path(const Eigen::MatrixXd& smoother,
                                   const Eigen::MatrixXd& eval_rows,
                                   const Eigen::VectorXd& y,
                                   long iterations);

//! Boosted H*_p prediction at x_test after `iterations` steps.
Eigen::VectorXd boost_predict(const Dataset& data,
                              const KernelSpec& spec,
                              int order,
                              const QuadratureGrid& grid,
                              long iterations,
                              const Eigen::VectorXd& x_test);

} // namespace kboost
