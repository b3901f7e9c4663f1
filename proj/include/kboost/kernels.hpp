#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kboost {

enum class KernelKind { Epanechnikov, Gaussian, Triangular, Uniform, Biweight };

//! Parses the lowercase kernel name ("epanechnikov", "gaussian", ...).
KernelKind parse_kernel(std::string_view name);
std::string kernel_name(KernelKind kind);

//! Half-width of the kernel support in bandwidth units. The Gaussian is
//! treated as supported on [-6, 6].
double kernel_reach(KernelKind kind);

//! Base kernel density K(u).
double kernel_eval(KernelKind kind, double u);

struct KernelSpec
{
  KernelKind kind = KernelKind::Epanechnikov;
  double bandwidth = 1.0;

  KernelSpec() = default;
  KernelSpec(KernelKind k, double h);

  //! K_h(u) = K(u / h) / h.
  double scaled(double u) const { return kernel_eval(kind, u / bandwidth) / bandwidth; }
  double reach() const { return kernel_reach(kind) * bandwidth; }
};

double scaled_kernel(const KernelSpec& spec, double u);

//! Uniform trapezoid grid over [lo, hi].
class QuadratureGrid
{
public:
  QuadratureGrid(double lo, double hi, std::size_t size = 200);

  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return points_.size(); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

private:
  double lo_;
  double hi_;
  std::vector<double> points_;
  std::vector<double> weights_;
};

//! Boundary-corrected kernel column for data point v: entry g holds
//! K_h(x_g - v) / sum_g' q_g' K_h(x_g' - v), so that the grid quadrature of the
//! column is 1. Throws std::domain_error ("point outside smoothing support")
//! when no grid point has positive kernel mass.
std::vector<double> boundary_corrected_column(const KernelSpec& spec,
                                              const QuadratureGrid& grid,
                                              double v);

//! Single entry K_h(u, v) of the boundary-corrected kernel, u a grid point.
double boundary_corrected_weight(const KernelSpec& spec,
                                 double u,
                                 double v,
                                 const QuadratureGrid& grid);

} // namespace kboost
