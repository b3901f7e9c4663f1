#include "kboost/experiments.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace kboost;

namespace {

StudyConfig tiny(ErrorLaw errors = ErrorLaw::Normal)
{
  StudyConfig c;
  c.model.errors = errors;
  c.n_list = { 60 };
  c.replicates = 3;
  c.repeats = 2;
  c.h_count = 4;
  c.lambda_count = 4;
  c.max_iterations = 30;
  c.seed = 17;
  return c;
}

MethodConfig method(SmootherKind kind, KernelKind kernel = KernelKind::Epanechnikov)
{
  MethodConfig m;
  m.kind = kind;
  m.kernel = kernel;
  return m;
}

} // namespace

TEST_SUITE("experiments")
{
  TEST_CASE("regression functions")
  {
    SimulationModel m1;
    SimulationModel m2;
    m2.id = ModelId::M2;
    CHECK(m1.truth(0.0) == 0.0);
    CHECK(m2.truth(0.0) == 0.0);
    CHECK(m1.truth(0.25) == doctest::Approx(0.2 + std::sin(1.5)));
    CHECK(m2.truth(0.125) == doctest::Approx(0.4 * (3.0 * std::sin(M_PI / 2.0) + 2.0 * std::sin(3.0 * M_PI / 8.0))));
  }

  TEST_CASE("simulated design")
  {
    const auto sim = simulate(SimulationModel{}, 100000, 5);
    CHECK(sim.data.lo == -0.5);
    CHECK(sim.data.hi == 0.5);
    CHECK(sim.data.x.minCoeff() >= -0.5);
    CHECK(sim.data.x.maxCoeff() <= 0.5);
    const Eigen::VectorXd e = sim.data.y - sim.truth;
    const double mean = e.mean();
    const double var = (e.array() - mean).square().sum() / (e.size() - 1.0);
    CHECK(var > 1.94);
    CHECK(var < 2.06);
    const auto again = simulate(SimulationModel{}, 100000, 5);
    CHECK((again.data.y - sim.data.y).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("t errors have heavy tails")
  {
    SimulationModel m;
    m.errors = ErrorLaw::StudentT3;
    const auto sim = simulate(m, 1000000, 6);
    const Eigen::ArrayXd e = (sim.data.y - sim.truth).array();
    const double mean = e.mean();
    const double m2 = (e - mean).square().mean();
    const double m4 = (e - mean).square().square().mean();
    CHECK(m4 / (m2 * m2) > 5.0);
  }

  TEST_CASE("names")
  {
    CHECK(parse_model("m2") == ModelId::M2);
    CHECK(parse_error_law("t3") == ErrorLaw::StudentT3);
    CHECK_THROWS(parse_model("m3"));
  }

  TEST_CASE("benchmark is reproducible")
  {
    StudyConfig c = tiny();
    c.replicates = 1;
    c.repeats = 1;
    c.methods = { method(SmootherKind::ProjectionLC), method(SmootherKind::CubicSpline) };
    const auto a = run_benchmark(c);
    const auto b = run_benchmark(c);
    REQUIRE(a.cells.size() == 2);
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
      CHECK(a.cells[i].mean == b.cells[i].mean);
      CHECK(a.cells[i].repeats[0].param == b.cells[i].repeats[0].param);
      CHECK(std::isfinite(a.cells[i].mean));
      CHECK(a.cells[i].sd == 0.0);
    }
    c.jobs = 3;
    c.replicates = 4;
    const auto par = run_benchmark(c);
    c.jobs = 1;
    const auto ser = run_benchmark(c);
    CHECK(par.cells[0].mean == ser.cells[0].mean);
  }

  TEST_CASE("full rank in the low-rank study equals the plain benchmark")
  {
    StudyConfig c = tiny();
    c.methods = { method(SmootherKind::ProjectionLC) };
    const auto plain = run_benchmark(c);
    const auto low = run_lowrank_study(c, { 3, 0 });
    const auto& a = plain.find("lc", "epanechnikov", 60);
    const auto& b = low.find("lc", "epanechnikov", 60, 0);
    CHECK(std::abs(a.mean - b.mean) < 1e-9);
    CHECK(std::abs(a.sd - b.sd) < 1e-9);
    CHECK(low.find("lc", "", 60, 3).rank == 3);
    CHECK_THROWS(run_lowrank_study(c, { 61 }));
  }

  TEST_CASE("huge Huber constant reproduces the L2 cell")
  {
    StudyConfig c = tiny(ErrorLaw::StudentT3);
    c.methods = { method(SmootherKind::ProjectionLC), method(SmootherKind::NadarayaWatson, KernelKind::Gaussian) };
    const auto r = run_robust_study(c, { 1e6 });
    for (const char* name : { "lc", "nw" }) {
      const auto& l2 = r.find(name, "", 60, 0, false);
      const auto& rob = r.find(name, "", 60, 0, true, 1e6);
      CHECK(std::abs(l2.mean - rob.mean) < 1e-8);
      for (std::size_t k = 0; k < l2.repeats.size(); ++k)
        CHECK(l2.repeats[k].tune_key == rob.repeats[k].tune_key);
    }
  }

  TEST_CASE("stream keys are distinct")
  {
    CHECK(tuning_key(1, 100, 0) != tuning_key(1, 100, 1));
    CHECK(tuning_key(1, 100, 0) != tuning_key(1, 200, 0));
    CHECK(tuning_key(1, 100, 0) != fold_seed(1, 100, 0));
    CHECK(replicate_key(1, 100, 0, 0) != replicate_key(1, 100, 0, 1));
    CHECK(replicate_key(1, 100, 0, 0) != replicate_key(2, 100, 0, 0));
  }

  TEST_CASE("bad configurations")
  {
    StudyConfig c = tiny();
    CHECK_THROWS(run_benchmark(c));
    MethodConfig bad = method(SmootherKind::NadarayaWatson);
    bad.rank = 3;
    c.methods = { bad };
    CHECK_THROWS(run_benchmark(c));
  }

  TEST_CASE("real-data protocol on a synthetic sample")
  {
    // Age-like covariate on [20, 65] with a quadratic mean.
    const auto base = simulate(SimulationModel{}, 120, 8);
    const Eigen::VectorXd age = (42.5 + 45.0 * base.data.x.array()).matrix();
    const Eigen::VectorXd y = (13.0 + 0.002 * (age.array() - 45.0).square() * -1.0 + 0.3 * (base.data.y - base.truth).array()).matrix();
    const Dataset data(age, y);
    RealDataConfig rc;
    rc.h_count = 3;
    rc.lambda_count = 3;
    rc.max_iterations = 20;
    rc.huber_factors = { 1.345, 1.0 };
    rc.smoothers = { SmootherKind::ProjectionLC, SmootherKind::CubicSpline };
    const auto rep = run_real_data(data, rc);
    CHECK(rep.pilot.sigma_hat > 0.0);
    CHECK(rep.pilot.iterations == 10);
    REQUIRE(rep.rows.size() == 4);
    CHECK(rep.rows[0].cutoff == doctest::Approx(1.345 * rep.pilot.sigma_hat));
    CHECK(rep.rows[0].l2_mse == rep.rows[1].l2_mse);
    for (const auto& row : rep.rows) {
      CHECK(std::isfinite(row.robust_mse));
      CHECK(std::isfinite(row.l2_mse));
    }
  }
}
