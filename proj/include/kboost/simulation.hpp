#pragma once

#include "kboost/dataset.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace kboost {

enum class ModelId { M1, M2 };
enum class ErrorLaw { Normal, StudentT3 };

ModelId parse_model(std::string_view name);
ErrorLaw parse_error_law(std::string_view name);
std::string model_name(ModelId id);
std::string error_law_name(ErrorLaw law);

//! Regression design with X ~ Uniform(-0.5, 0.5) and
//!   M1: m(x) = 0.8x + sin(6x)
//!   M2: m(x) = 0.4 (3 sin(4 pi x) + 2 sin(3 pi x))
//! and errors N(0, 2) or Student t with 3 degrees of freedom.
struct SimulationModel
{
  ModelId id = ModelId::M1;
  ErrorLaw errors = ErrorLaw::Normal;

  double truth(double x) const;
  static constexpr double support_lo = -0.5;
  static constexpr double support_hi = 0.5;
  static constexpr double normal_variance = 2.0;
};

struct SimulatedData
{
  Dataset data;
  Eigen::VectorXd truth;
};

//! Deterministic in (model, n, key); support is declared as [-0.5, 0.5].
SimulatedData simulate(const SimulationModel& model, Eigen::Index n, std::uint64_t key);

} // namespace kboost
