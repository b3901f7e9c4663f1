#include "kboost/robust.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace kboost {

void RobustSpec::validate() const
{
  if (!(cutoff > 0.0))
    throw std::invalid_argument("Huber cutoff must be positive");
  if (!(psi_tol > 0.0))
    throw std::invalid_argument("psi tolerance must be positive");
  if (psi_max_iter < 1)
    throw std::invalid_argument("psi iteration cap must be at least 1");
}

double huber_rho(double x, double c)
{
  const double a = std::abs(x);
  if (a <= c)
    return x * x;
  return 2.0 * c * a - c * c;
}

double huber_psi(double x, double c)
{
  if (std::abs(x) <= c)
    return 2.0 * x;
  return x > 0.0 ? 2.0 * c : -2.0 * c;
}

namespace {

// z = m + psi(y - m) / 2, written so that an infinite cutoff yields y exactly.
void pseudo_response(const Eigen::VectorXd& y, const Eigen::VectorXd& m, double c, Eigen::VectorXd& z)
{
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double r = y[i] - m[i];
    z[i] = std::abs(r) <= c ? y[i] : m[i] + (r > 0.0 ? c : -c);
  }
}

} // namespace

PseudoFit pseudo_data_fit(const Eigen::MatrixXd& s, const Eigen::VectorXd& y, const RobustSpec& spec)
{
  spec.validate();
  if (y.size() != s.rows())
    throw std::invalid_argument("response length differs from smoother size");

  PseudoFit out;
  out.pseudo = y;
  out.fit = s * y;
  Eigen::VectorXd z(y.size());
  Eigen::VectorXd next(y.size());
  for (int k = 1; k <= spec.psi_max_iter; ++k) {
    pseudo_response(y, out.fit, spec.cutoff, z);
    next.noalias() = s * z;
    const double change = (next - out.fit).lpNorm<Eigen::Infinity>();
    const double scale = 1.0 + next.lpNorm<Eigen::Infinity>();
    out.fit.swap(next);
    out.pseudo = z;
    out.iterations_used = k;
    if (change <= spec.psi_tol * scale) {
      out.converged = true;
      break;
    }
  }
  return out;
}

PseudoFit pseudo_data_fit(const SmootherMatrix& s, const Eigen::VectorXd& y, const RobustSpec& spec)
{
  return pseudo_data_fit(s.weights, y, spec);
}

BoostTrajectory robust_boost(const SmootherMatrix& s, const Eigen::VectorXd& y, const RobustSpec& spec, long iterations)
{
  if (y.size() != s.size())
    throw std::invalid_argument("response length differs from smoother size");
  if (iterations < 0)
    throw std::invalid_argument("boosting iterations must be nonnegative");

  BoostTrajectory out;
  out.kind = s.kind;
  out.max_iterations = iterations;
  Eigen::VectorXd fit = Eigen::VectorXd::Zero(y.size());
  for (long b = 0; b <= iterations; ++b) {
    const PseudoFit step = pseudo_data_fit(s.weights, y - fit, spec);
    if (!step.converged)
      ++out.unconverged;
    fit += step.fit;
    out.fits.push_back(fit);
    out.train_mse.push_back((y - fit).squaredNorm() / static_cast<double>(y.size()));
  }
  return out;
}

Eigen::MatrixXd robust_boost_predict_path(const Eigen::MatrixXd& smoother,
                                          const Eigen::MatrixXd& eval_rows,
                                          const Eigen::VectorXd& y,
                                          const RobustSpec& spec,
                                          long iterations,
                                          long* unconverged)
{
  const Eigen::Index n = smoother.rows();
  if (smoother.cols() != n || eval_rows.cols() != n || y.size() != n)
    throw std::invalid_argument("robust_boost_predict_path dimension mismatch");
  if (iterations < 0)
    throw std::invalid_argument("boosting iterations must be nonnegative");

  Eigen::MatrixXd path(eval_rows.rows(), iterations + 1);
  Eigen::VectorXd fit = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd pred = Eigen::VectorXd::Zero(eval_rows.rows());
  long misses = 0;
  for (long b = 0; b <= iterations; ++b) {
    const PseudoFit step = pseudo_data_fit(smoother, y - fit, spec);
    if (!step.converged)
      ++misses;
    fit += step.fit;
    pred.noalias() += eval_rows * step.pseudo;
    path.col(b) = pred;
  }
  if (unconverged)
    *unconverged = misses;
  return path;
}

// ---------------------------------------------------------------------------
// Scale estimators

namespace {

// Number of pairs i < j with sorted[j] - sorted[i] <= t.
long long pairs_within(const std::vector<double>& sorted, double t)
{
  long long count = 0;
  std::size_t lo = 0;
  for (std::size_t j = 1; j < sorted.size(); ++j) {
    while (sorted[j] - sorted[lo] > t)
      ++lo;
    count += static_cast<long long>(j - lo);
  }
  return count;
}

double qn_correction(std::size_t n)
{
  static constexpr double small[] = { 0.399, 0.994, 0.512, 0.844, 0.611, 0.857, 0.669, 0.872 };
  if (n <= 9)
    return small[n - 2];
  const double dn = static_cast<double>(n);
  return n % 2 == 1 ? dn / (dn + 1.4) : dn / (dn + 3.8);
}

double median_of(std::vector<double> v)
{
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1)
    return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

} // namespace

double qn_scale(const Eigen::VectorXd& residuals)
{
  const std::size_t n = static_cast<std::size_t>(residuals.size());
  if (n < 2)
    throw std::invalid_argument("scale estimate needs at least 2 residuals");
  std::vector<double> sorted(residuals.data(), residuals.data() + n);
  std::sort(sorted.begin(), sorted.end());

  const long long h = static_cast<long long>(n / 2) + 1;
  const long long k = h * (h - 1) / 2;

  // Bisect on the distance until the bracket is two adjacent doubles; the
  // k-th smallest pairwise distance is then the upper end.
  double lo = 0.0;
  double hi = sorted.back() - sorted.front();
  if (pairs_within(sorted, lo) >= k || hi <= 0.0)
    throw std::domain_error("degenerate scale");
  while (true) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi)
      break;
    if (pairs_within(sorted, mid) >= k)
      hi = mid;
    else
      lo = mid;
  }
  return 2.2219 * qn_correction(n) * hi;
}

double mad_scale(const Eigen::VectorXd& residuals)
{
  if (residuals.size() < 2)
    throw std::invalid_argument("scale estimate needs at least 2 residuals");
  std::vector<double> v(residuals.data(), residuals.data() + residuals.size());
  const double med = median_of(v);
  for (auto& r : v)
    r = std::abs(r - med);
  const double mad = 1.4826 * median_of(std::move(v));
  if (!(mad > 0.0))
    throw std::domain_error("degenerate scale");
  return mad;
}

double robust_scale(const Eigen::VectorXd& residuals, ScaleEstimator estimator)
{
  return estimator == ScaleEstimator::Qn ? qn_scale(residuals) : mad_scale(residuals);
}

double huber_constant(double sigma_hat, double factor)
{
  if (!(sigma_hat > 0.0))
    throw std::invalid_argument("scale estimate must be positive");
  return factor * sigma_hat;
}

} // namespace kboost
