#include "kboost/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kboost {

namespace {

constexpr double spectrum_slack = 1e-8;

void check_rank(const SpectralDecomposition& dec, Eigen::Index rank, bool allow_zero)
{
  const Eigen::Index lo = allow_zero ? 0 : 1;
  if (rank < lo || rank > dec.size())
    throw std::invalid_argument("rank out of range");
}

void check_iterations(long iterations)
{
  if (iterations < 0)
    throw std::invalid_argument("boosting iterations must be nonnegative");
}

} // namespace

Eigen::MatrixXd SpectralDecomposition::reconstruct() const
{
  return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
}

double clip_eigenvalue(double lambda)
{
  if (lambda < -spectrum_slack || lambda > 1.0 + spectrum_slack)
    throw std::logic_error("smoother eigenvalue outside [0, 1]: " + std::to_string(lambda));
  return std::clamp(lambda, 0.0, 1.0);
}

double boost_shrinkage(double lambda, long iterations)
{
  const double l = clip_eigenvalue(lambda);
  return 1.0 - std::pow(1.0 - l, static_cast<double>(iterations) + 1.0);
}

SpectralDecomposition eigendecompose(const Eigen::MatrixXd& symmetric, bool unit_spectrum)
{
  if (symmetric.rows() != symmetric.cols())
    throw std::invalid_argument("eigendecompose needs a square matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("symmetric eigensolver failed");

  // The solver returns ascending order; reverse into descending.
  const Eigen::Index n = symmetric.rows();
  SpectralDecomposition dec;
  dec.eigenvalues = solver.eigenvalues().reverse();
  dec.eigenvectors = solver.eigenvectors().rowwise().reverse();
  dec.unit_spectrum = unit_spectrum;
  if (unit_spectrum)
    for (Eigen::Index k = 0; k < n; ++k)
      clip_eigenvalue(dec.eigenvalues[k]);
  return dec;
}

SpectralDecomposition eigendecompose(const SmootherMatrix& s)
{
  if (!s.symmetric)
    throw std::invalid_argument("eigendecompose needs a symmetric smoother; use nonsymmetric_spectrum for "
                                + smoother_name(s.kind));
  auto dec = eigendecompose(s.weights, has_unit_spectrum(s.kind));
  dec.kind = s.kind;
  return dec;
}

std::vector<std::complex<double>> nonsymmetric_spectrum(const SmootherMatrix& s)
{
  Eigen::EigenSolver<Eigen::MatrixXd> solver(s.weights, false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("general eigensolver failed");
  const Eigen::VectorXcd ev = solver.eigenvalues();
  std::vector<std::complex<double>> out(ev.data(), ev.data() + ev.size());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.real() > b.real(); });
  return out;
}

LowRankOperator::LowRankOperator(const SpectralDecomposition& dec, long iterations, Eigen::Index rank)
  : iterations_(iterations)
{
  check_rank(dec, rank, false);
  check_iterations(iterations);
  basis_ = dec.eigenvectors.leftCols(rank);
  shrink_.resize(rank);
  for (Eigen::Index k = 0; k < rank; ++k)
    shrink_[k] = boost_shrinkage(dec.eigenvalues[k], iterations);
}

Eigen::VectorXd LowRankOperator::apply(const Eigen::VectorXd& v) const
{
  if (v.size() != basis_.rows())
    throw std::invalid_argument("operator and vector lengths differ");
  return basis_ * shrink_.cwiseProduct(basis_.transpose() * v);
}

Eigen::MatrixXd LowRankOperator::dense() const
{
  return basis_ * shrink_.asDiagonal() * basis_.transpose();
}

LowRankOperator boosting_operator(const SpectralDecomposition& dec, long iterations, Eigen::Index rank)
{
  return LowRankOperator(dec, iterations, rank);
}

Eigen::Index default_rank(double bandwidth, double support_width, Eigen::Index n, double c_rank)
{
  if (!(bandwidth > 0.0))
    throw std::invalid_argument("bandwidth must be positive");
  const double raw = std::ceil(c_rank * support_width / bandwidth);
  const auto d = static_cast<Eigen::Index>(std::max(1.0, raw));
  return std::min(n, d);
}

double approximation_error(const SpectralDecomposition& dec, long iterations, Eigen::Index rank)
{
  check_rank(dec, rank, true);
  check_iterations(iterations);
  // Sum from the smallest eigenvalue upward so the tail accumulates in a fixed order.
  double err = 0.0;
  for (Eigen::Index k = dec.size() - 1; k >= rank; --k) {
    const double s = boost_shrinkage(dec.eigenvalues[k], iterations);
    err += s * s;
  }
  return err;
}

BiasVariance bias_variance_profile(const SpectralDecomposition& dec,
                                   const Eigen::VectorXd& m_true,
                                   double sigma2,
                                   long iterations,
                                   Eigen::Index rank)
{
  if (m_true.size() != dec.size())
    throw std::invalid_argument("truth vector length differs from smoother size");
  if (!(sigma2 >= 0.0))
    throw std::invalid_argument("sigma2 must be nonnegative");
  check_rank(dec, rank, false);
  check_iterations(iterations);

  const Eigen::VectorXd gamma = dec.eigenvectors.leftCols(rank).transpose() * m_true;
  const double n = static_cast<double>(dec.size());
  const double e = static_cast<double>(iterations) + 1.0;
  BiasVariance out;
  for (Eigen::Index k = 0; k < rank; ++k) {
    const double l = clip_eigenvalue(dec.eigenvalues[k]);
    const double keep = std::pow(1.0 - l, e);
    out.bias2 += gamma[k] * gamma[k] * keep * keep;
    out.variance += (1.0 - keep) * (1.0 - keep);
  }
  out.bias2 /= n;
  out.variance *= sigma2 / n;
  return out;
}

} // namespace kboost
