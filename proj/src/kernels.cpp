#include "kboost/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kboost {

KernelKind parse_kernel(std::string_view name)
{
  if (name == "epanechnikov")
    return KernelKind::Epanechnikov;
  if (name == "gaussian")
    return KernelKind::Gaussian;
  if (name == "triangular")
    return KernelKind::Triangular;
  if (name == "uniform")
    return KernelKind::Uniform;
  if (name == "biweight")
    return KernelKind::Biweight;
  throw std::invalid_argument("unknown kernel '" + std::string(name) + "'");
}

std::string kernel_name(KernelKind kind)
{
  switch (kind) {
    case KernelKind::Epanechnikov:
      return "epanechnikov";
    case KernelKind::Gaussian:
      return "gaussian";
    case KernelKind::Triangular:
      return "triangular";
    case KernelKind::Uniform:
      return "uniform";
    case KernelKind::Biweight:
      return "biweight";
  }
  return "unknown";
}

double kernel_reach(KernelKind kind)
{
  return kind == KernelKind::Gaussian ? 6.0 : 1.0;
}

double kernel_eval(KernelKind kind, double u)
{
  const double a = std::abs(u);
  switch (kind) {
    case KernelKind::Epanechnikov:
      return a <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    case KernelKind::Gaussian:
      return std::exp(-0.5 * u * u) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
    case KernelKind::Triangular:
      return a <= 1.0 ? 1.0 - a : 0.0;
    case KernelKind::Uniform:
      return a <= 1.0 ? 0.5 : 0.0;
    case KernelKind::Biweight: {
      if (a > 1.0)
        return 0.0;
      const double t = 1.0 - u * u;
      return 0.9375 * t * t;
    }
  }
  return 0.0;
}

KernelSpec::KernelSpec(KernelKind k, double h)
  : kind(k)
  , bandwidth(h)
{
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("bandwidth must be positive and finite");
}

double scaled_kernel(const KernelSpec& spec, double u)
{
  return spec.scaled(u);
}

QuadratureGrid::QuadratureGrid(double lo, double hi, std::size_t size)
  : lo_(lo)
  , hi_(hi)
{
  if (!(lo < hi))
    throw std::invalid_argument("quadrature grid needs lo < hi");
  if (size < 2)
    throw std::invalid_argument("quadrature grid needs at least 2 points");
  points_.resize(size);
  weights_.resize(size);
  const double step = (hi - lo) / static_cast<double>(size - 1);
  for (std::size_t g = 0; g < size; ++g) {
    points_[g] = g + 1 == size ? hi : lo + step * static_cast<double>(g);
    weights_[g] = step;
  }
  weights_.front() = 0.5 * step;
  weights_.back() = 0.5 * step;
}

std::vector<double> boundary_corrected_column(const KernelSpec& spec,
                                              const QuadratureGrid& grid,
                                              double v)
{
  const auto& pts = grid.points();
  const auto& wts = grid.weights();
  std::vector<double> col(pts.size());
  double mass = 0.0;
  for (std::size_t g = 0; g < pts.size(); ++g) {
    col[g] = spec.scaled(pts[g] - v);
    mass += wts[g] * col[g];
  }
  if (!(mass > 0.0))
    throw std::domain_error("point outside smoothing support");
  for (auto& c : col)
    c /= mass;
  return col;
}

double boundary_corrected_weight(const KernelSpec& spec,
                                 double u,
                                 double v,
                                 const QuadratureGrid& grid)
{
  const auto& pts = grid.points();
  const auto& wts = grid.weights();
  double mass = 0.0;
  for (std::size_t g = 0; g < pts.size(); ++g)
    mass += wts[g] * spec.scaled(pts[g] - v);
  if (!(mass > 0.0))
    throw std::domain_error("point outside smoothing support");
  return spec.scaled(u - v) / mass;
}

} // namespace kboost
