#include "kboost/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace kboost {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const char* library_version()
{
  return "0.1.0";
}

std::string format_double(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string trim(std::string s)
{
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_csv(const std::string& line)
{
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ','))
    out.push_back(trim(cur));
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

bool parse_number(const std::string& s, double& v)
{
  if (s.empty())
    return false;
  const char* first = s.data();
  if (*first == '+')
    ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string strip_cr(std::string line)
{
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  return line;
}

} // namespace

std::pair<std::string, std::string> split_pair(const std::string& text, const std::string& what)
{
  const auto pos = text.find(':');
  if (pos == std::string::npos || text.find(':', pos + 1) != std::string::npos)
    throw std::invalid_argument(what + " must have the form a:b, got '" + text + "'");
  return { text.substr(0, pos), text.substr(pos + 1) };
}

std::pair<double, double> parse_range(const std::string& text)
{
  const auto [a, b] = split_pair(text, "range");
  double lo = 0.0;
  double hi = 0.0;
  if (!parse_number(a, lo) || !parse_number(b, hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("range '" + text + "' is not two finite numbers");
  if (!(lo < hi))
    throw std::invalid_argument("range '" + text + "' needs lo < hi");
  return { lo, hi };
}

Dataset load_dataset(const fs::path& path, const ColumnMap& cols, std::optional<std::pair<double, double>> support)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw IoError(path.string() + ": empty file");
  const auto header = split_csv(strip_cr(line));
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw IoError(path.string() + ": no column named '" + name + "' in header");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t cx = column(cols.x);
  const std::size_t cy = column(cols.y);

  std::vector<double> xs;
  std::vector<double> ys;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (trim(line).empty())
      continue;
    const auto fields = split_csv(line);
    const std::string where = path.string() + ": line " + std::to_string(line_no);
    if (fields.size() != header.size())
      throw IoError(where + ": expected " + std::to_string(header.size()) + " fields, got " +
                    std::to_string(fields.size()));
    double x = 0.0;
    double y = 0.0;
    if (!parse_number(fields[cx], x) || !parse_number(fields[cy], y))
      throw IoError(where + ": unparsable number");
    if (!std::isfinite(x) || !std::isfinite(y))
      throw IoError(where + ": non-finite value");
    xs.push_back(x);
    ys.push_back(y);
  }
  if (xs.size() < 2)
    throw IoError(path.string() + ": need at least 2 data rows");

  Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  try {
    if (support)
      return Dataset(std::move(x), std::move(y), support->first, support->second);
    return Dataset(std::move(x), std::move(y));
  } catch (const std::invalid_argument& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

Eigen::VectorXd load_points(const fs::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open " + path.string());
  std::vector<double> xs;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_cr(line));
    if (line.empty())
      continue;
    const auto fields = split_csv(line);
    double v = 0.0;
    if (!parse_number(fields.front(), v)) {
      if (line_no == 1)
        continue; // header
      throw IoError(path.string() + ": line " + std::to_string(line_no) + ": unparsable number");
    }
    if (!std::isfinite(v))
      throw IoError(path.string() + ": line " + std::to_string(line_no) + ": non-finite value");
    xs.push_back(v);
  }
  if (xs.empty())
    throw IoError(path.string() + ": no evaluation points");
  return Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

void write_text(const fs::path& path, const std::string& content)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out)
    throw IoError("write failed for " + path.string());
}

void write_files(const fs::path& out_dir, const std::vector<std::pair<std::string, std::string>>& files)
{
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  for (const auto& [name, content] : files)
    write_text(out_dir / name, content);
}

// ---------------------------------------------------------------------------
// CSV renderers

std::string dataset_csv(const Dataset& data)
{
  std::string s = "x,y\n";
  for (Eigen::Index i = 0; i < data.size(); ++i)
    s += format_double(data.x[i]) + "," + format_double(data.y[i]) + "\n";
  return s;
}

std::string fit_csv(const Dataset& data, const Eigen::VectorXd& fit)
{
  std::string s = "x,y,fit\n";
  for (Eigen::Index i = 0; i < data.size(); ++i)
    s += format_double(data.x[i]) + "," + format_double(data.y[i]) + "," + format_double(fit[i]) + "\n";
  return s;
}

std::string predict_csv(const Eigen::VectorXd& x, const Eigen::VectorXd& pred)
{
  std::string s = "x,prediction\n";
  for (Eigen::Index i = 0; i < x.size(); ++i)
    s += format_double(x[i]) + "," + format_double(pred[i]) + "\n";
  return s;
}

std::string matrix_csv(const Eigen::MatrixXd& m)
{
  std::string s;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j)
        s += ',';
      s += format_double(m(i, j));
    }
    s += '\n';
  }
  return s;
}

std::string eigen_csv(const Eigen::VectorXd& eigenvalues)
{
  std::string s = "k,lambda\n";
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
    s += std::to_string(k + 1) + "," + format_double(eigenvalues[k]) + "\n";
  return s;
}

std::string complex_eigen_csv(const std::vector<std::complex<double>>& values)
{
  std::string s = "k,re,im\n";
  for (std::size_t k = 0; k < values.size(); ++k)
    s += std::to_string(k + 1) + "," + format_double(values[k].real()) + "," + format_double(values[k].imag()) + "\n";
  return s;
}

std::string cv_csv(const CvResult& cv)
{
  std::string s = "param,b,loss\n";
  for (std::size_t p = 0; p < cv.params.size(); ++p)
    for (long b = 0; b <= cv.max_iterations; ++b)
      s += format_double(cv.params[p]) + "," + std::to_string(b) + "," +
           format_double(cv.loss(static_cast<Eigen::Index>(p), b)) + "\n";
  return s;
}

std::string cv_best_line(const CvResult& cv)
{
  return "best param=" + format_double(cv.best_param) + " b=" + std::to_string(cv.best_iterations) +
         " loss=" + format_double(cv.best_loss);
}

namespace {

std::string kernel_label(const BenchmarkCell& c)
{
  return c.kernel.empty() ? "none" : c.kernel;
}

ordered_json cell_json(const BenchmarkCell& c)
{
  ordered_json j;
  j["method"] = c.method;
  j["kernel"] = kernel_label(c);
  j["n"] = c.n;
  j["rank"] = c.rank == 0 ? c.n : c.rank;
  j["robust"] = c.robust;
  if (c.robust)
    j["cutoff"] = format_double(c.cutoff);
  j["mean"] = format_double(c.mean);
  j["sd"] = format_double(c.sd);
  ordered_json reps = ordered_json::array();
  for (const auto& r : c.repeats) {
    ordered_json rj;
    rj["param"] = format_double(r.param);
    rj["b"] = r.iterations;
    rj["mean_mse_t"] = format_double(r.mean_mse_t);
    rj["tune_key"] = r.tune_key;
    rj["fold_seed"] = r.fold_seed;
    if (!r.warnings.empty())
      rj["warnings"] = r.warnings;
    reps.push_back(rj);
  }
  j["repeats"] = reps;
  return j;
}

ordered_json grid_json(double lo, double hi, std::size_t count)
{
  ordered_json j;
  j["lo"] = format_double(lo);
  j["hi"] = format_double(hi);
  j["count"] = count;
  return j;
}

} // namespace

std::string report_csv(const BenchmarkReport& report)
{
  std::string s;
  if (report.study == "lowrank") {
    s = "kernel,n,method,rank,mean,sd\n";
    for (const auto& c : report.cells)
      s += kernel_label(c) + "," + std::to_string(c.n) + "," + c.method + "," +
           std::to_string(c.rank == 0 ? c.n : c.rank) + "," + format_double(c.mean) + "," + format_double(c.sd) + "\n";
    return s;
  }
  if (report.study == "robust") {
    s = "kernel,n,method,c,robust_mean,robust_sd,nonrobust_mean,nonrobust_sd\n";
    for (const auto& c : report.cells) {
      if (!c.robust)
        continue;
      const BenchmarkCell* pair = nullptr;
      for (const auto& other : report.cells)
        if (!other.robust && other.method == c.method && other.kernel == c.kernel && other.n == c.n)
          pair = &other;
      if (!pair)
        throw std::logic_error("robust cell without a non-robust partner");
      s += kernel_label(c) + "," + std::to_string(c.n) + "," + c.method + "," + format_double(c.cutoff) + "," +
           format_double(c.mean) + "," + format_double(c.sd) + "," + format_double(pair->mean) + "," +
           format_double(pair->sd) + "\n";
    }
    return s;
  }
  s = "kernel,n,method,mean,sd\n";
  for (const auto& c : report.cells)
    s += kernel_label(c) + "," + std::to_string(c.n) + "," + c.method + "," + format_double(c.mean) + "," +
         format_double(c.sd) + "\n";
  return s;
}

std::string report_metadata(const std::vector<const BenchmarkReport*>& reports, const std::vector<std::string>& files)
{
  ordered_json root;
  root["version"] = library_version();
  root["files"] = files;
  ordered_json studies = ordered_json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const BenchmarkReport& r = *reports[i];
    const StudyConfig& c = r.config;
    ordered_json j;
    j["file"] = i < files.size() ? files[i] : "";
    j["study"] = r.study;
    j["model"] = model_name(c.model.id);
    j["errors"] = error_law_name(c.model.errors);
    j["seed"] = c.seed;
    j["n"] = c.n_list;
    j["replicates"] = c.replicates;
    j["repeats"] = c.repeats;
    j["folds"] = c.folds;
    j["b_max"] = c.max_iterations;
    j["bandwidth_grid"] = grid_json(c.h_lo, c.h_hi, c.h_count);
    j["lambda_grid"] = grid_json(c.lambda_lo, c.lambda_hi, c.lambda_count);
    ordered_json cells = ordered_json::array();
    for (const auto& cell : r.cells)
      cells.push_back(cell_json(cell));
    j["cells"] = cells;
    studies.push_back(j);
  }
  root["studies"] = studies;
  return root.dump(2) + "\n";
}

std::string real_data_csv(const RealDataReport& report)
{
  std::string s = "factor,c,smoother,robust_param,robust_b,robust_mse,nonrobust_param,nonrobust_b,nonrobust_mse\n";
  for (const auto& r : report.rows)
    s += format_double(r.factor) + "," + format_double(r.cutoff) + "," + r.smoother + "," + format_double(r.robust_param) +
         "," + std::to_string(r.robust_iterations) + "," + format_double(r.robust_mse) + "," +
         format_double(r.l2_param) + "," + std::to_string(r.l2_iterations) + "," + format_double(r.l2_mse) + "\n";
  return s;
}

std::string real_data_metadata(const RealDataReport& report, const std::string& source)
{
  const RealDataConfig& c = report.config;
  ordered_json root;
  root["version"] = library_version();
  root["files"] = { "table6.csv" };
  root["source"] = source;
  root["kernel"] = kernel_name(c.kernel);
  root["grid_points"] = c.grid_size;
  root["seed"] = c.seed;
  root["folds"] = c.folds;
  root["b_max"] = c.max_iterations;
  root["bandwidth_grid"] = grid_json(c.h_lo, c.h_hi, c.h_count);
  root["lambda_grid"] = grid_json(c.lambda_lo, c.lambda_hi, c.lambda_count);
  root["scale_estimator"] = c.scale == ScaleEstimator::Qn ? "qn" : "mad";
  ordered_json pilot;
  pilot["bandwidth"] = format_double(report.pilot.bandwidth);
  pilot["b"] = report.pilot.iterations;
  pilot["sigma_hat"] = format_double(report.pilot.sigma_hat);
  root["pilot"] = pilot;
  std::vector<std::string> factors;
  for (double f : c.huber_factors)
    factors.push_back(format_double(f));
  root["huber_factors"] = factors;
  return root.dump(2) + "\n";
}

} // namespace kboost
