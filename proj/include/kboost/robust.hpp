#pragma once

#include "kboost/boosting.hpp"

#include <Eigen/Dense>
#include <limits>

namespace kboost {

struct RobustSpec
{
  double cutoff = 1.345;
  double psi_tol = 1e-6;
  int psi_max_iter = 100;
  double huber_factor = 1.345;

  void validate() const;
  //! cutoff = +inf reduces every robust operation to its L2 counterpart.
  static RobustSpec l2() { return RobustSpec{ std::numeric_limits<double>::infinity() }; }
};

//! rho(x) = x^2 inside the cutoff, 2c|x| - c^2 outside.
double huber_rho(double x, double c);
//! psi = rho': 2x inside the cutoff, 2c sign(x) outside.
double huber_psi(double x, double c);

struct PseudoFit
{
  Eigen::VectorXd fit;
  Eigen::VectorXd pseudo; // fit == S * pseudo
  int iterations_used = 0;
  bool converged = false;
};

//! Fixed point m = S [m + psi(y - m) / 2] started from S y. Stops when the
//! sup-norm change relative to 1 + ||m||_inf drops to psi_tol.
PseudoFit pseudo_data_fit(const SmootherMatrix& s, const Eigen::VectorXd& y, const RobustSpec& spec);
PseudoFit pseudo_data_fit(const Eigen::MatrixXd& s, const Eigen::VectorXd& y, const RobustSpec& spec);

//! Boosting where every step smooths residuals through pseudo_data_fit.
BoostTrajectory robust_boost(const SmootherMatrix& s, const Eigen::VectorXd& y, const RobustSpec& spec, long iterations);

//! Evaluation-point analogue of robust_boost, m x (B+1): each step adds
//! eval_rows * pseudo for that step's fixed point.
Eigen::MatrixXd robust_boost_predict_path(const Eigen::MatrixXd& smoother,
                                          const Eigen::MatrixXd& eval_rows,
                                          const Eigen::VectorXd& y,
                                          const RobustSpec& spec,
                                          long iterations,
                                          long* unconverged = nullptr);

enum class ScaleEstimator { Qn, Mad };

//! Rousseeuw-Croux Qn: 2.2219 times the k-th smallest pairwise distance,
//! k = C(floor(n/2) + 1, 2), with the small-sample correction factor.
double qn_scale(const Eigen::VectorXd& residuals);
//! 1.4826 * median |r - median r|.
double mad_scale(const Eigen::VectorXd& residuals);
double robust_scale(const Eigen::VectorXd& residuals, ScaleEstimator estimator = ScaleEstimator::Qn);

double huber_constant(double sigma_hat, double factor = 1.345);

} // namespace kboost
