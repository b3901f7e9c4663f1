#pragma once

#include "kboost/dataset.hpp"
#include "kboost/experiments.hpp"
#include "kboost/tuning.hpp"

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kboost {

//! Raised for unreadable or malformed input files and failed writes.
class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

std::string format_double(double v);

//! "a:b" -> {a, b}.
std::pair<std::string, std::string> split_pair(const std::string& text, const std::string& what);
//! "lo:hi" as two finite numbers with lo < hi.
std::pair<double, double> parse_range(const std::string& text);

struct ColumnMap
{
  std::string x = "x";
  std::string y = "y";
};

//! Reads a header + numeric rows CSV. Columns are picked by name from the
//! header; support defaults to [min x, max x].
Dataset load_dataset(const std::filesystem::path& path,
                     const ColumnMap& cols = {},
                     std::optional<std::pair<double, double>> support = std::nullopt);

//! Single numeric column (header required) or a bare list, one value per line.
Eigen::VectorXd load_points(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& content);

std::string dataset_csv(const Dataset& data);
std::string fit_csv(const Dataset& data, const Eigen::VectorXd& fit);
std::string predict_csv(const Eigen::VectorXd& x, const Eigen::VectorXd& pred);
std::string matrix_csv(const Eigen::MatrixXd& m);
std::string eigen_csv(const Eigen::VectorXd& eigenvalues);
std::string complex_eigen_csv(const std::vector<std::complex<double>>& values);
std::string cv_csv(const CvResult& cv);
std::string cv_best_line(const CvResult& cv);

//! CSV for a simulation study: table1/table3 style for "tables", one row
//! per rank for "lowrank", robust and non-robust columns for "robust".
std::string report_csv(const BenchmarkReport& report);
std::string report_metadata(const std::vector<const BenchmarkReport*>& reports,
                            const std::vector<std::string>& files);

std::string real_data_csv(const RealDataReport& report);
std::string real_data_metadata(const RealDataReport& report, const std::string& source);

//! Writes `name` -> content pairs under out_dir, creating it if needed.
void write_files(const std::filesystem::path& out_dir, const std::vector<std::pair<std::string, std::string>>& files);

const char* library_version();

} // namespace kboost
