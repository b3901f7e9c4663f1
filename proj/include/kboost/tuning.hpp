#pragma once

#include "kboost/method.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace kboost {

//! n^-1 sum (y_i - fit_i)^2.
double mse(const Eigen::VectorXd& y, const Eigen::VectorXd& fit);
//! Same criterion against the true regression function.
double mse_t(const Eigen::VectorXd& m_true, const Eigen::VectorXd& fit);
//! (s^2 / n) sum rho((y_i - fit_i) / s) with s^2 = mse(y, fit); 0 when s = 0.
double mse_rho(const Eigen::VectorXd& y, const Eigen::VectorXd& fit, const RobustSpec& spec);

//! Seeded random partition of 0..n-1 into k folds whose sizes differ by at most one.
std::vector<std::vector<Eigen::Index>> make_folds(Eigen::Index n, int k, std::uint64_t seed);

//! `count` evenly spaced values over [lo, hi].
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

struct CvOptions
{
  std::vector<double> param_grid;
  long max_iterations = 1000;
  int folds = 5;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct CvResult
{
  std::vector<double> params;
  long max_iterations = 0;
  Eigen::MatrixXd loss; // params x (max_iterations + 1), mean held-out loss
  double best_param = 0.0;
  long best_iterations = 0;
  double best_loss = 0.0;
  int folds = 0;
  std::uint64_t seed = 0;
  Eigen::Index rank = 0;
  std::vector<std::string> warnings;
};

//! k-fold cross-validation over (smoothing parameter, b). One boosting run
//! per (fold, parameter) covers every b <= max_iterations. The held-out
//! criterion is mse, or mse_rho for robust methods. Ties go to the smallest
//! b, then the smallest parameter. A (fold, parameter) cell whose smoother
//! cannot be built scores +inf for that parameter and adds a warning.
CvResult kfold_cv(const Dataset& data, const MethodConfig& method, const CvOptions& options);

//! Low-rank variant sharing one eigendecomposition per (fold, parameter)
//! across all requested ranks (0 = full rank). Predictions use the spectral
//! closed form of the rank-d boosting operator.
std::vector<CvResult> kfold_cv_ranks(const Dataset& data,
                                     const MethodConfig& method,
                                     const CvOptions& options,
                                     const std::vector<Eigen::Index>& ranks);

//! Argmin over a loss grid with the tie rule above.
void select_best(CvResult& result);

} // namespace kboost
