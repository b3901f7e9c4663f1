#pragma once

#include "kboost/robust.hpp"
#include "kboost/smoothers.hpp"

#include <Eigen/Dense>
#include <string>

namespace kboost {

//! One boosting method: smoother family, kernel, and the robust / low-rank
//! variants. The smoothing parameter (h, or lambda for splines) is supplied
//! separately so one configuration serves a whole tuning grid.
struct MethodConfig
{
  SmootherKind kind = SmootherKind::ProjectionLC;
  KernelKind kernel = KernelKind::Epanechnikov;
  std::size_t grid_size = 200;
  bool robust = false;
  RobustSpec robust_spec;
  Eigen::Index rank = 0; // 0 = full rank

  std::string label() const;
  void validate() const;
};

SmootherMatrix build_smoother(const Dataset& data, const MethodConfig& method, double param);

//! Training smoother plus the matching rows at evaluation points.
struct LinearOperator
{
  SmootherMatrix train;
  Eigen::MatrixXd eval; // m x n
};

LinearOperator build_operator(const Dataset& data, const MethodConfig& method, double param, const Eigen::VectorXd& x_eval);

//! Training fit after `iterations` boosting steps (robust, low-rank or plain L2).
Eigen::VectorXd fit_method(const Dataset& data, const MethodConfig& method, double param, long iterations);

//! Prediction at x_eval after `iterations` boosting steps. The low-rank
//! variant uses the evaluation rows projected on the retained eigenvectors.
Eigen::VectorXd predict_method(const Dataset& data,
                               const MethodConfig& method,
                               double param,
                               long iterations,
                               const Eigen::VectorXd& x_eval);

} // namespace kboost
