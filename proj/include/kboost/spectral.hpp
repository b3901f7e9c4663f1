#pragma once

#include "kboost/smoothers.hpp"

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace kboost {

//! Eigenpairs of a symmetric smoother, eigenvalues in descending order.
struct SpectralDecomposition
{
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors; // column k pairs with eigenvalues[k]
  SmootherKind kind = SmootherKind::ProjectionLC;
  bool unit_spectrum = false;   // eigenvalues expected in [0, 1]

  Eigen::Index size() const { return eigenvalues.size(); }
  Eigen::MatrixXd reconstruct() const;
};

//! Throws std::invalid_argument for non-symmetric input; use
//! nonsymmetric_spectrum() for those. For kinds with a unit spectrum an
//! eigenvalue outside [-1e-8, 1 + 1e-8] raises std::logic_error.
SpectralDecomposition eigendecompose(const SmootherMatrix& s);

//! Decomposition of an arbitrary symmetric matrix; `unit_spectrum` requests
//! the same [0, 1] check as smoother kinds.
SpectralDecomposition eigendecompose(const Eigen::MatrixXd& symmetric, bool unit_spectrum);

//! General eigenvalues sorted by real part, descending. Diagnostic only.
std::vector<std::complex<double>> nonsymmetric_spectrum(const SmootherMatrix& s);

//! Rank-d truncation of the boosting operator I - (I - S)^(b+1):
//!   v -> sum_{k<=d} [1 - (1 - lambda_k)^(b+1)] (u_k' v) u_k.
class LowRankOperator
{
public:
  LowRankOperator(const SpectralDecomposition& dec, long iterations, Eigen::Index rank);

  Eigen::Index rank() const { return basis_.cols(); }
  long iterations() const { return iterations_; }
  const Eigen::VectorXd& shrinkage() const { return shrink_; }
  const Eigen::MatrixXd& basis() const { return basis_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  Eigen::MatrixXd dense() const;

private:
  Eigen::MatrixXd basis_;
  Eigen::VectorXd shrink_;
  long iterations_;
};

LowRankOperator boosting_operator(const SpectralDecomposition& dec, long iterations, Eigen::Index rank);

//! Eigenvalue clipped to [0, 1]; values within 1e-8 of the interval are
//! clipped, anything further out is a construction bug and throws.
double clip_eigenvalue(double lambda);

//! 1 - (1 - lambda)^(b+1) for a clipped eigenvalue.
double boost_shrinkage(double lambda, long iterations);

//! min(n, ceil(c_rank * support_width / h)), at least 1.
Eigen::Index default_rank(double bandwidth, double support_width, Eigen::Index n, double c_rank = 1.0);

//! ||S_b - S_b(d)||_F^2 = sum_{k>d} [1 - (1 - lambda_k)^(b+1)]^2. d = 0 keeps nothing.
double approximation_error(const SpectralDecomposition& dec, long iterations, Eigen::Index rank);

struct BiasVariance
{
  double bias2 = 0.0;
  double variance = 0.0;
};

//! Average squared bias and variance of the rank-d boosting fit:
//!   bias^2 = n^-1 sum_{k<=d} gamma_k^2 (1 - lambda_k)^(2(b+1)), gamma = U' m
//!   var    = sigma^2 n^-1 sum_{k<=d} [1 - (1 - lambda_k)^(b+1)]^2
BiasVariance bias_variance_profile(const SpectralDecomposition& dec,
                                   const Eigen::VectorXd& m_true,
                                   double sigma2,
                                   long iterations,
                                   Eigen::Index rank);

} // namespace kboost
