#include "kboost/cli.hpp"
#include "kboost/io.hpp"
#include "kboost/parallel.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace kboost;
namespace fs = std::filesystem;

namespace {

struct TempDir
{
  fs::path path;
  TempDir()
  {
    static int counter = 0;
    path = fs::temp_directory_path() / ("kboost_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void put(const std::string& path, const std::string& text)
{
  std::ofstream(path) << text;
}

std::string slurp(const std::string& path)
{
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig parse(std::vector<std::string> args)
{
  std::vector<const char*> argv{ "kboost" };
  for (auto& a : args)
    argv.push_back(a.c_str());
  return parse_args(static_cast<int>(argv.size()), argv.data());
}

int run_cli(std::vector<std::string> args, std::string* err_text = nullptr)
{
  std::vector<const char*> argv{ "kboost" };
  for (auto& a : args)
    argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int rc = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text)
    *err_text = err.str();
  return rc;
}

} // namespace

TEST_SUITE("cli_io")
{
  TEST_CASE("fit arguments")
  {
    const RunConfig c = parse({ "fit", "--smoother", "lc", "--kernel", "epanechnikov", "--bandwidth", "0.4", "--iters", "10", "--data", "d.csv" });
    CHECK(c.command == "fit");
    CHECK(c.method.kind == SmootherKind::ProjectionLC);
    CHECK(c.method.kernel == KernelKind::Epanechnikov);
    CHECK(*c.bandwidth == 0.4);
    CHECK(c.iterations == 10);
    CHECK(c.data_path == "d.csv");
    CHECK(c.method.rank == 0);
  }

  TEST_CASE("usage errors name the flag")
  {
    auto message = [](std::vector<std::string> args) {
      try {
        parse(std::move(args));
      } catch (const UsageError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(message({ "fit", "--smoother", "lc", "--bandwidth", "-1", "--data", "d.csv" }).find("--bandwidth") != std::string::npos);
    CHECK(message({ "fit", "--smoother", "lc", "--bandwidth", "x", "--data", "d.csv" }).find("--bandwidth") != std::string::npos);
    CHECK(message({ "fit", "--smoother", "lc", "--bandwidth", "1", "--data", "d.csv", "--grid", "1" }).find("--grid") != std::string::npos);
    CHECK(message({ "fit", "--smoother", "lc", "--bandwidth", "1" }).find("--data") != std::string::npos);
    CHECK(message({ "fit", "--smoother", "lc", "--bandwidth", "1", "--data", "d", "--frobnicate" }).find("--frobnicate") != std::string::npos);
    CHECK(message({ "fit", "--smoother", "lc", "--data", "d" }).find("--bandwidth") != std::string::npos);
    CHECK(message({ "fit", "--smoother", "spline", "--lambda", "-2", "--data", "d" }).find("--lambda") != std::string::npos);
    CHECK(message({ "fit", "--smoother", "nw", "--bandwidth", "1", "--rank", "4", "--data", "d" }).find("--rank") != std::string::npos);
    CHECK(message({ "cv", "--smoother", "lc", "--data", "d", "--param-grid", "1:2" }).find("--param-grid") != std::string::npos);
    CHECK(message({ "cv", "--smoother", "lc", "--data", "d", "--param-grid", "0.1:1:5", "--folds", "1" }).find("--folds") != std::string::npos);
    CHECK(message({ "fit", "--smoother", "lc", "--bandwidth", "1", "--iters", "-3", "--data", "d" }).find("--iters") != std::string::npos);
    CHECK(message({ "frobnicate" }) != "");
    CHECK(message({}) != "");
  }

  TEST_CASE("cv grid")
  {
    const RunConfig c = parse({ "cv", "--smoother", "lc", "--data", "d.csv", "--param-grid", "0.1:4:40", "--b-max", "5000", "--folds", "5" });
    const auto g = c.param_grid->values();
    REQUIRE(g.size() == 40);
    CHECK(g.front() == 0.1);
    CHECK(g.back() == 4.0);
    CHECK(g[1] - g[0] == doctest::Approx(0.1));
    CHECK(c.b_max == 5000);
    CHECK(c.folds == 5);
  }

  TEST_CASE("robust flags")
  {
    const RunConfig c = parse({ "fit", "--smoother", "nw", "--bandwidth", "1", "--data", "d", "--robust", "--huber-c", "0.9", "--psi-tol", "1e-8", "--psi-max-iter", "50" });
    CHECK(c.method.robust);
    CHECK_FALSE(c.huber_auto);
    CHECK(c.method.robust_spec.cutoff == 0.9);
    CHECK(c.method.robust_spec.psi_tol == 1e-8);
    CHECK(c.method.robust_spec.psi_max_iter == 50);
    const RunConfig a = parse({ "fit", "--smoother", "nw", "--bandwidth", "1", "--data", "d", "--robust", "--scale", "mad" });
    CHECK(a.huber_auto);
    CHECK(a.scale == ScaleEstimator::Mad);
  }

  TEST_CASE("jobs default from the environment")
  {
    ::setenv("KBOOST_JOBS", "3", 1);
    CHECK(default_jobs() == 3);
    CHECK(parse({ "bench", "--study", "robust" }).jobs == 3);
    CHECK(parse({ "bench", "--study", "robust", "--jobs", "2" }).jobs == 2);
    ::setenv("KBOOST_JOBS", "zero", 1);
    CHECK(default_jobs() == 1);
    ::unsetenv("KBOOST_JOBS");
    CHECK(default_jobs() == 1);
  }

  TEST_CASE("load a small dataset")
  {
    TempDir t;
    put(t.file("d.csv"), "x,y\n0.1,1\n0.5,2\r\n0.9,3\n");
    const Dataset d = load_dataset(t.file("d.csv"));
    CHECK(d.size() == 3);
    CHECK(d.lo == 0.1);
    CHECK(d.hi == 0.9);
    CHECK(d.y[2] == 3.0);
    const Dataset s = load_dataset(t.file("d.csv"), {}, std::pair{ 0.0, 1.0 });
    CHECK(s.lo == 0.0);
    CHECK(s.hi == 1.0);
  }

  TEST_CASE("malformed rows are reported with their line")
  {
    TempDir t;
    put(t.file("nan.csv"), "x,y\n0.1,1\n0.2,NaN\n");
    CHECK_THROWS_WITH(load_dataset(t.file("nan.csv")), doctest::Contains("line 3"));
    put(t.file("bad.csv"), "x,y\n0.1,1\n0.2,abc\n0.3,1\n");
    CHECK_THROWS_WITH(load_dataset(t.file("bad.csv")), doctest::Contains("line 3"));
    put(t.file("short.csv"), "x,y\n0.1,1\n0.2\n");
    CHECK_THROWS_WITH(load_dataset(t.file("short.csv")), doctest::Contains("line 3"));
    put(t.file("one.csv"), "x,y\n0.1,1\n");
    CHECK_THROWS_AS(load_dataset(t.file("one.csv")), IoError);
    CHECK_THROWS_WITH(load_dataset(t.file("missing.csv")), doctest::Contains("missing.csv"));
  }

  TEST_CASE("column mapping")
  {
    TempDir t;
    put(t.file("cps.csv"), "\"logwage\",\"age\"\n11.2,21\n12.5,40\n13.1,55\n");
    const Dataset d = load_dataset(t.file("cps.csv"), ColumnMap{ "age", "logwage" });
    CHECK(d.x[1] == 40.0);
    CHECK(d.y[1] == 12.5);
    CHECK_THROWS_WITH(load_dataset(t.file("cps.csv")), doctest::Contains("'x'"));
  }

  TEST_CASE("write then load is bit exact")
  {
    TempDir t;
    const auto sim = testing::design(200, 3);
    write_text(t.file("r.csv"), dataset_csv(sim.data));
    const Dataset back = load_dataset(t.file("r.csv"));
    CHECK((back.x - sim.data.x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.y - sim.data.y).cwiseAbs().maxCoeff() == 0.0);
    CHECK(format_double(0.1) == "0.10000000000000001");
  }

  TEST_CASE("report columns")
  {
    StudyConfig c;
    c.methods = { MethodConfig{} };
    BenchmarkReport r;
    r.study = "tables";
    r.config = c;
    BenchmarkCell cell;
    cell.method = "lc";
    cell.kernel = "epanechnikov";
    cell.n = 100;
    cell.mean = 0.5;
    cell.sd = 0.25;
    r.cells.push_back(cell);
    CHECK(report_csv(r) == "kernel,n,method,mean,sd\nepanechnikov,100,lc,0.5,0.25\n");
    const std::string meta = report_metadata({ &r }, { "table1.csv" });
    CHECK(meta.find("\"table1.csv\"") != std::string::npos);
    CHECK(meta.find("\"seed\"") != std::string::npos);
  }

  TEST_CASE("command line runs")
  {
    TempDir t;
    const std::string data = t.file("d.csv");
    CHECK(run_cli({ "simulate", "--model", "m2", "--errors", "t3", "--n", "40", "--seed", "4", "--out", data }) == 0);
    CHECK(load_dataset(data).size() == 40);

    const std::string fit = t.file("fit.csv");
    CHECK(run_cli({ "fit", "--smoother", "ll", "--bandwidth", "0.3", "--iters", "3", "--data", data, "--out", fit }) == 0);
    CHECK(slurp(fit).rfind("x,y,fit\n", 0) == 0);

    const std::string eig = t.file("eigen.csv");
    CHECK(run_cli({ "eigen", "--smoother", "lc", "--bandwidth", "0.3", "--data", data, "--out", eig }) == 0);
    CHECK(slurp(eig).rfind("k,lambda\n", 0) == 0);
    CHECK(run_cli({ "eigen", "--smoother", "nw", "--bandwidth", "0.3", "--n", "20", "--out", eig }) == 0);
    CHECK(slurp(eig).rfind("k,re,im\n", 0) == 0);

    const std::string cv = t.file("cv.csv");
    CHECK(run_cli({ "cv", "--smoother", "lc", "--data", data, "--param-grid", "0.2:0.6:3", "--b-max", "4", "--out", cv }) == 0);
    CHECK(slurp(cv).rfind("param,b,loss\n", 0) == 0);

    put(t.file("at.csv"), "x\n0\n0.1\n");
    const std::string pred = t.file("pred.csv");
    CHECK(run_cli({ "predict", "--smoother", "spline", "--lambda", "1", "--data", data, "--at", t.file("at.csv"), "--out", pred }) == 0);
    CHECK(slurp(pred).rfind("x,prediction\n", 0) == 0);

    std::string err;
    CHECK(run_cli({ "fit", "--smoother", "lc", "--bandwidth", "-1", "--data", data }, &err) == 2);
    CHECK(err.find("--bandwidth") != std::string::npos);
    CHECK(run_cli({ "fit", "--smoother", "lc", "--bandwidth", "1", "--data", t.file("none.csv") }, &err) == 1);
    CHECK(err.find("none.csv") != std::string::npos);
    CHECK(run_cli({ "--help" }) == 0);
  }

  TEST_CASE("bench writes identical files on rerun")
  {
    TempDir t;
    const std::vector<std::string> args{ "bench", "--study", "tables", "--model", "m1", "--n", "40", "--replicates", "2",
                                         "--repeats", "1", "--methods", "lc:epanechnikov,spline", "--b-max", "10", "--seed", "3" };
    auto a = args;
    a.insert(a.end(), { "--out-dir", t.file("a") });
    auto b = args;
    b.insert(b.end(), { "--out-dir", t.file("b"), "--jobs", "2" });
    REQUIRE(run_cli(a) == 0);
    REQUIRE(run_cli(b) == 0);
    const std::string table = slurp(t.file("a") + "/table1.csv");
    CHECK(table.rfind("kernel,n,method,mean,sd\n", 0) == 0);
    CHECK(table == slurp(t.file("b") + "/table1.csv"));
    CHECK(slurp(t.file("a") + "/metadata.json") == slurp(t.file("b") + "/metadata.json"));
  }
}
