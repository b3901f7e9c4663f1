#include "kboost/dataset.hpp"

#include <cmath>
#include <stdexcept>

namespace kboost {

Dataset::Dataset(Eigen::VectorXd x_, Eigen::VectorXd y_)
  : x(std::move(x_))
  , y(std::move(y_))
{
  if (x.size() > 0) {
    lo = x.minCoeff();
    hi = x.maxCoeff();
  }
  validate();
}

Dataset::Dataset(Eigen::VectorXd x_, Eigen::VectorXd y_, double lo_, double hi_)
  : x(std::move(x_))
  , y(std::move(y_))
  , lo(lo_)
  , hi(hi_)
{
  validate();
}

Dataset Dataset::subset(const std::vector<Eigen::Index>& idx) const
{
  Dataset out;
  out.x.resize(static_cast<Eigen::Index>(idx.size()));
  out.y.resize(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    out.x[static_cast<Eigen::Index>(k)] = x[idx[k]];
    out.y[static_cast<Eigen::Index>(k)] = y[idx[k]];
  }
  out.lo = lo;
  out.hi = hi;
  return out;
}

void Dataset::validate() const
{
  if (x.size() != y.size())
    throw std::invalid_argument("dataset x and y lengths differ");
  if (x.size() < 2)
    throw std::invalid_argument("dataset needs at least 2 observations");
  if (!(lo < hi))
    throw std::invalid_argument("dataset support needs lo < hi");
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw std::invalid_argument("dataset contains non-finite values");
    if (x[i] < lo || x[i] > hi)
      throw std::invalid_argument("covariate outside declared support");
  }
}

} // namespace kboost
