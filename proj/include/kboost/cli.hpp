#pragma once

#include "kboost/experiments.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kboost {

//! Bad command line: exit status 2.
class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct ParamGrid
{
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  std::vector<double> values() const;
};

//! "lo:hi:count", linear spacing.
ParamGrid parse_param_grid(const std::string& text);

struct RunConfig
{
  std::string command; // fit, predict, cv, simulate, eigen, bench
  std::string help;    // non-empty: print and exit 0

  // data
  std::string data_path;
  std::string cols;    // "x:y" column names
  std::optional<std::pair<double, double>> support;
  std::string out_path;
  std::string out_dir = ".";
  std::string matrix_out;
  std::string at_path;

  // method
  MethodConfig method;
  std::optional<double> bandwidth;
  std::optional<double> lambda;
  long iterations = 0;
  bool huber_auto = false;
  double huber_factor = 1.345;
  ScaleEstimator scale = ScaleEstimator::Qn;

  // cv
  std::optional<ParamGrid> param_grid;
  long b_max = 1000;
  int folds = 5;
  std::uint64_t seed = 1;
  int jobs = 1;

  // simulate
  SimulationModel model;
  Eigen::Index n = 100;

  // bench
  std::string study = "tables";
  bool paper_scale = false;
  std::optional<int> replicates;
  std::optional<int> repeats;
  std::vector<Eigen::Index> n_list;
  std::vector<std::string> methods;
  std::vector<double> cutoffs;
  std::vector<Eigen::Index> ranks;
  std::optional<long> bench_b_max;
  std::optional<std::string> model_override;

  //! The smoothing parameter matching the smoother kind.
  double param() const;
};

//! Throws UsageError with a one-line diagnostic naming the offending flag.
RunConfig parse_args(int argc, const char* const* argv);

//! Executes a parsed configuration. Returns the process exit status; runtime
//! failures are reported on `err` with status 1.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

//! parse_args + run with the documented exit statuses (0, 2, 1).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

//! "lc:epanechnikov" or "spline" -> method.
MethodConfig parse_method(const std::string& text);

} // namespace kboost
