#include "kboost/simulation.hpp"

#include "kboost/rng.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace kboost {

ModelId parse_model(std::string_view name)
{
  if (name == "m1")
    return ModelId::M1;
  if (name == "m2")
    return ModelId::M2;
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

ErrorLaw parse_error_law(std::string_view name)
{
  if (name == "normal")
    return ErrorLaw::Normal;
  if (name == "t3")
    return ErrorLaw::StudentT3;
  throw std::invalid_argument("unknown error law '" + std::string(name) + "'");
}

std::string model_name(ModelId id)
{
  return id == ModelId::M1 ? "m1" : "m2";
}

std::string error_law_name(ErrorLaw law)
{
  return law == ErrorLaw::Normal ? "normal" : "t3";
}

double SimulationModel::truth(double x) const
{
  using std::numbers::pi;
  if (id == ModelId::M1)
    return 0.8 * x + std::sin(6.0 * x);
  return 0.4 * (3.0 * std::sin(4.0 * pi * x) + 2.0 * std::sin(3.0 * pi * x));
}

SimulatedData simulate(const SimulationModel& model, Eigen::Index n, std::uint64_t key)
{
  if (n < 2)
    throw std::invalid_argument("simulation needs n >= 2");
  CounterRng rng(key);
  std::uniform_real_distribution<double> covariate(SimulationModel::support_lo, SimulationModel::support_hi);
  std::normal_distribution<double> normal(0.0, std::sqrt(SimulationModel::normal_variance));
  std::student_t_distribution<double> student(3.0);

  Eigen::VectorXd x(n);
  Eigen::VectorXd y(n);
  Eigen::VectorXd m(n);
  for (Eigen::Index i = 0; i < n; ++i)
    x[i] = covariate(rng);
  for (Eigen::Index i = 0; i < n; ++i) {
    m[i] = model.truth(x[i]);
    const double eps = model.errors == ErrorLaw::Normal ? normal(rng) : student(rng);
    y[i] = m[i] + eps;
  }
  return { Dataset(std::move(x), std::move(y), SimulationModel::support_lo, SimulationModel::support_hi), std::move(m) };
}

} // namespace kboost
