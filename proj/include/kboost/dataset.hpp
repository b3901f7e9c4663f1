#pragma once

#include <Eigen/Dense>

namespace kboost {

//! Paired covariate/response sample with its declared covariate support.
struct Dataset
{
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double lo = 0.0;
  double hi = 1.0;

  Dataset() = default;
  //! Support defaults to [min x, max x].
  Dataset(Eigen::VectorXd x_, Eigen::VectorXd y_);
  Dataset(Eigen::VectorXd x_, Eigen::VectorXd y_, double lo_, double hi_);

  Eigen::Index size() const { return x.size(); }
  double support_width() const { return hi - lo; }

  //! Rows `idx` of this dataset, keeping the declared support.
  Dataset subset(const std::vector<Eigen::Index>& idx) const;

  void validate() const;
};

} // namespace kboost
