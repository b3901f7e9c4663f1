#include "kboost/method.hpp"

#include "kboost/boosting.hpp"
#include "kboost/spectral.hpp"

#include <stdexcept>

namespace kboost {

std::string MethodConfig::label() const
{
  std::string s = smoother_name(kind);
  if (kind != SmootherKind::CubicSpline)
    s += "/" + kernel_name(kernel);
  if (robust)
    s += "/robust";
  if (rank > 0)
    s += "/rank" + std::to_string(rank);
  return s;
}

void MethodConfig::validate() const
{
  if (grid_size < 2)
    throw std::invalid_argument("quadrature grid needs at least 2 points");
  if (rank < 0)
    throw std::invalid_argument("rank must be nonnegative");
  if (rank > 0 && robust)
    throw std::invalid_argument("low-rank boosting is only defined for L2 boosting");
  if (rank > 0 && !has_unit_spectrum(kind))
    throw std::invalid_argument("low-rank boosting needs a symmetric smoother");
  if (robust)
    robust_spec.validate();
}

SmootherMatrix build_smoother(const Dataset& data, const MethodConfig& method, double param)
{
  switch (method.kind) {
    case SmootherKind::ProjectionLC:
    case SmootherKind::ProjectionLL:
      return build_projection_smoother(data,
                                       KernelSpec(method.kernel, param),
                                       method.kind == SmootherKind::ProjectionLC ? 0 : 1,
                                       support_grid(data, method.grid_size));
    case SmootherKind::NadarayaWatson:
      return build_nw_smoother(data, KernelSpec(method.kernel, param));
    case SmootherKind::CubicSpline:
      return build_spline_smoother(data, SplineConfig{ param });
  }
  throw std::logic_error("unhandled smoother kind");
}

LinearOperator build_operator(const Dataset& data, const MethodConfig& method, double param, const Eigen::VectorXd& x_eval)
{
  LinearOperator op;
  switch (method.kind) {
    case SmootherKind::ProjectionLC:
    case SmootherKind::ProjectionLL: {
      const ProjectionSmoother builder(data,
                                       KernelSpec(method.kernel, param),
                                       method.kind == SmootherKind::ProjectionLC ? 0 : 1,
                                       support_grid(data, method.grid_size));
      op.train = builder.matrix();
      op.eval = builder.rows_at(x_eval);
      break;
    }
    case SmootherKind::NadarayaWatson: {
      const KernelSpec spec(method.kernel, param);
      op.train = build_nw_smoother(data, spec);
      op.eval = nw_rows_at(data, spec, x_eval);
      break;
    }
    case SmootherKind::CubicSpline: {
      const SplineSmoother builder(data, SplineConfig{ param });
      op.train = builder.matrix();
      op.eval = builder.rows_at(x_eval);
      break;
    }
  }
  return op;
}

Eigen::VectorXd fit_method(const Dataset& data, const MethodConfig& method, double param, long iterations)
{
  method.validate();
  const SmootherMatrix s = build_smoother(data, method, param);
  if (method.rank > 0) {
    const auto dec = eigendecompose(s);
    return boosting_operator(dec, iterations, std::min(method.rank, s.size())).apply(data.y);
  }
  if (method.robust)
    return robust_boost(s, data.y, method.robust_spec, iterations).fits.back();
  if (iterations < 0)
    throw std::invalid_argument("boosting iterations must be nonnegative");
  Eigen::VectorXd fit = s.weights * data.y;
  for (long b = 1; b <= iterations; ++b)
    fit += s.weights * (data.y - fit);
  return fit;
}

Eigen::VectorXd predict_method(const Dataset& data,
                               const MethodConfig& method,
                               double param,
                               long iterations,
                               const Eigen::VectorXd& x_eval)
{
  method.validate();
  if (iterations < 0)
    throw std::invalid_argument("boosting iterations must be nonnegative");
  const LinearOperator op = build_operator(data, method, param, x_eval);
  if (method.robust)
    return robust_boost_predict_path(op.train.weights, op.eval, data.y, method.robust_spec, iterations)
      .col(iterations);
  if (method.rank == 0)
    return boost_predict_path(op.train.weights, op.eval, data.y, iterations).col(iterations);

  // sum_j T U_d U_d' delta_j, with U' delta_j = (1 - lambda)^j U' y on the retained block
  const auto dec = eigendecompose(op.train);
  const Eigen::Index d = std::min(method.rank, dec.size());
  const Eigen::VectorXd z = dec.eigenvectors.leftCols(d).transpose() * data.y;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double keep = 1.0 - clip_eigenvalue(dec.eigenvalues[k]);
    double power = 1.0;
    for (long j = 0; j <= iterations; ++j) {
      acc[k] += power * z[k];
      power *= keep;
    }
  }
  return op.eval * (dec.eigenvectors.leftCols(d) * acc);
}

} // namespace kboost
