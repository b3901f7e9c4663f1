#pragma once

#include "kboost/method.hpp"
#include "kboost/simulation.hpp"
#include "kboost/tuning.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kboost {

//! Monte-Carlo protocol: per repeat, tune (param, b) by k-fold CV on a fresh
//! sample, then average MSE(T) over `replicates` fresh datasets fitted at the
//! tuned pair; cells report mean and sd of the repeat averages.
struct StudyConfig
{
  SimulationModel model;
  std::vector<MethodConfig> methods;
  std::vector<Eigen::Index> n_list{ 100, 200 };
  int replicates = 100;
  int repeats = 3;
  std::uint64_t seed = 1;
  double h_lo = 0.1;
  double h_hi = 4.0;
  std::size_t h_count = 15;
  double lambda_lo = 0.0;
  double lambda_hi = 1000.0;
  std::size_t lambda_count = 15;
  long max_iterations = 500;
  int folds = 5;
  int jobs = 1;

  //! Grid sizes, iteration budget and repeat count used in the published tables.
  void use_paper_scale();
  std::vector<double> param_grid(const MethodConfig& method) const;
};

struct RepeatRecord
{
  double param = 0.0;
  long iterations = 0;
  double mean_mse_t = 0.0;
  std::uint64_t tune_key = 0;
  std::uint64_t fold_seed = 0;
  std::vector<std::string> warnings;
};

struct BenchmarkCell
{
  std::string method;  // lc, ll, nw, spline
  std::string kernel;  // empty for splines
  Eigen::Index n = 0;
  Eigen::Index rank = 0;   // 0 = full rank
  bool robust = false;
  double cutoff = 0.0;     // Huber c for robust cells
  double mean = 0.0;
  double sd = 0.0;
  std::vector<RepeatRecord> repeats;
};

struct BenchmarkReport
{
  std::string study;
  StudyConfig config;
  std::vector<BenchmarkCell> cells;

  //! Empty `kernel` matches any kernel.
  const BenchmarkCell& find(const std::string& method,
                            const std::string& kernel,
                            Eigen::Index n,
                            Eigen::Index rank = 0,
                            bool robust = false,
                            double cutoff = 0.0) const;
};

//! Stream keys shared by every method so comparisons are paired.
std::uint64_t tuning_key(std::uint64_t seed, Eigen::Index n, int repeat);
std::uint64_t fold_seed(std::uint64_t seed, Eigen::Index n, int repeat);
std::uint64_t replicate_key(std::uint64_t seed, Eigen::Index n, int repeat, int replicate);

BenchmarkReport run_benchmark(const StudyConfig& config);

//! Low-rank H* study: each method in `config` (L2, symmetric smoother) is run
//! at every rank in `ranks`; rank 0 stands for d = n.
BenchmarkReport run_lowrank_study(const StudyConfig& config, const std::vector<Eigen::Index>& ranks);

//! Robust vs non-robust pairs; `cutoffs` are absolute Huber constants.
BenchmarkReport run_robust_study(const StudyConfig& config, const std::vector<double>& cutoffs);

struct RealDataConfig
{
  KernelKind kernel = KernelKind::Epanechnikov;
  std::size_t grid_size = 200;
  double h_lo = 5.0;
  double h_hi = 20.0;
  std::size_t h_count = 15;
  double lambda_lo = 0.0;
  double lambda_hi = 5000.0;
  std::size_t lambda_count = 15;
  long max_iterations = 1000;
  long pilot_iterations = 10;
  int folds = 5;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::vector<double> huber_factors{ 1.345, 1.0, 1.6 };
  ScaleEstimator scale = ScaleEstimator::Qn;
  RobustSpec robust; // tolerance and iteration cap; cutoff is set per factor
  std::vector<SmootherKind> smoothers{ SmootherKind::ProjectionLC,
                                       SmootherKind::ProjectionLL,
                                       SmootherKind::NadarayaWatson,
                                       SmootherKind::CubicSpline };

  void use_paper_scale();
};

struct RealDataRow
{
  double factor = 0.0;
  double cutoff = 0.0;
  std::string smoother;
  double robust_param = 0.0;
  long robust_iterations = 0;
  double robust_mse = 0.0;
  double l2_param = 0.0;
  long l2_iterations = 0;
  double l2_mse = 0.0;
};

struct PilotFit
{
  double bandwidth = 0.0;
  long iterations = 0;
  Eigen::VectorXd residuals;
  double sigma_hat = 0.0;
};

//! Non-robust H*_0 boost with a fixed small budget and CV-selected bandwidth;
//! its residuals give the robust scale estimate.
PilotFit pilot_fit(const Dataset& data, const RealDataConfig& config);

struct RealDataReport
{
  RealDataConfig config;
  PilotFit pilot;
  std::vector<RealDataRow> rows;
};

RealDataReport run_real_data(const Dataset& data, const RealDataConfig& config);

} // namespace kboost
