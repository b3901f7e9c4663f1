#pragma once

#include "kboost/dataset.hpp"
#include "kboost/kernels.hpp"

#include <Eigen/Dense>
#include <string>
#include <string_view>

namespace kboost {

enum class SmootherKind { ProjectionLC, ProjectionLL, NadarayaWatson, CubicSpline };

//! Accepts "lc", "ll", "nw", "spline".
SmootherKind parse_smoother(std::string_view name);
std::string smoother_name(SmootherKind kind);

//! True for the kinds whose spectrum lies in [0, 1].
bool has_unit_spectrum(SmootherKind kind);

struct SplineConfig
{
  double lambda = 0.0;
};

//! Dense n x n linear smoother; entry (i, j) is the weight of Y_j in the fit at X_i.
struct SmootherMatrix
{
  Eigen::MatrixXd weights;
  SmootherKind kind = SmootherKind::ProjectionLC;
  KernelSpec kernel;
  double lambda = 0.0;
  bool symmetric = false;

  Eigen::Index size() const { return weights.rows(); }
};

//! Integrated local-polynomial smoother H*_p for p in {0, 1}.
//!
//! Entry (i, j) is the grid quadrature of
//!   [K_h(x, X_i), (X_i - x) K_h(x, X_i)] (X_x' W_x X_x)^-1 [K_h(x, X_j), (X_j - x) K_h(x, X_j)]'
//! with the boundary-corrected kernel in both the outer factors and W_x. The
//! builder keeps the per-grid-point factors so that rows for new points are
//! consistent with the training rows.
class ProjectionSmoother
{
public:
  ProjectionSmoother(const Dataset& data,
                     const KernelSpec& spec,
                     int order,
                     const QuadratureGrid& grid);

  //! The n x n matrix, symmetrized as (M + M') / 2.
  SmootherMatrix matrix() const;

  //! Rows for arbitrary evaluation points, m x n. A point with no active
  //! grid point inside its kernel reach raises std::domain_error.
  Eigen::MatrixXd rows_at(const Eigen::VectorXd& x_eval) const;

  //! Number of grid points whose local design was singular and fell back to
  //! the local-constant projection (p = 1 only).
  std::size_t degenerate_points() const { return degenerate_; }

private:
  //! Per-grid-point factor rows for evaluation points, m x (cols of factors_).
  Eigen::MatrixXd factor_rows(const Eigen::VectorXd& x_eval, bool allow_outside) const;

  KernelSpec spec_;
  int order_;
  QuadratureGrid grid_;
  Eigen::Index n_;
  // Grid points with positive data mass, with their quadrature weights and
  // inverse Cholesky factors of the local Gram matrix.
  std::vector<std::size_t> active_;
  std::vector<Eigen::Matrix2d> inv_chol_;
  std::vector<bool> constant_fallback_;
  Eigen::MatrixXd factors_; // n x (p+1)*|active|
  std::size_t degenerate_ = 0;
};

SmootherMatrix build_projection_smoother(const Dataset& data,
                                         const KernelSpec& spec,
                                         int order,
                                         const QuadratureGrid& grid);

//! Row-stochastic Nadaraya-Watson smoother (not symmetric).
SmootherMatrix build_nw_smoother(const Dataset& data, const KernelSpec& spec);

//! Nadaraya-Watson weights for evaluation points, m x n.
Eigen::MatrixXd nw_rows_at(const Dataset& data, const KernelSpec& spec, const Eigen::VectorXd& x_eval);

//! Natural cubic smoothing spline hat matrix (I + lambda K)^-1, where K is the
//! Green-Silverman penalty matrix. Tied covariates are jittered by
//! 1e-9 * (hi - lo).
class SplineSmoother
{
public:
  SplineSmoother(const Dataset& data, const SplineConfig& config);

  SmootherMatrix matrix() const;
  //! Spline evaluated at new points (linear beyond the boundary knots), m x n.
  Eigen::MatrixXd rows_at(const Eigen::VectorXd& x_eval) const;
  std::size_t jittered() const { return jittered_; }

private:
  double lambda_;
  Eigen::Index n_;
  std::vector<Eigen::Index> order_; // sorted position -> original index
  Eigen::VectorXd knots_;           // sorted, distinct
  Eigen::MatrixXd hat_;             // original index order
  Eigen::MatrixXd second_deriv_;    // n x n map from sorted fitted values to gamma
  std::size_t jittered_ = 0;
};

SmootherMatrix build_spline_smoother(const Dataset& data, const SplineConfig& config);

//! Weight row of H*_p at a single point x_test.
Eigen::VectorXd test_row(const Dataset& data,
                         const KernelSpec& spec,
                         int order,
                         const QuadratureGrid& grid,
                         double x_test);

Eigen::VectorXd apply(const SmootherMatrix& s, const Eigen::VectorXd& v);

//! Grid on the dataset support with `size` points.
QuadratureGrid support_grid(const Dataset& data, std::size_t size = 200);

} // namespace kboost
