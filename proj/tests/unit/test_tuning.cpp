#include "kboost/tuning.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

using namespace kboost;

TEST_SUITE("tuning")
{
  TEST_CASE("mse values")
  {
    Eigen::VectorXd y(2);
    y << 1.0, 2.0;
    CHECK(mse(y, y) == 0.0);
    CHECK(mse(y, Eigen::VectorXd::Zero(2)) == 2.5);
    CHECK_THROWS_AS(mse(y, Eigen::VectorXd::Zero(3)), std::invalid_argument);
  }

  TEST_CASE("mse against a two-pass sum")
  {
    const Eigen::VectorXd a = testing::normal_vector(500, 1);
    const Eigen::VectorXd b = testing::normal_vector(500, 2);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < 500; ++i) {
      const double d = a[i] - b[i];
      sum += d * d;
    }
    CHECK(std::abs(mse(a, b) - sum / 500.0) < 1e-12);
  }

  TEST_CASE("mse against the truth")
  {
    const Eigen::VectorXd m = testing::normal_vector(50, 3);
    CHECK(mse_t(m, m) == 0.0);
    CHECK(mse_t(m, (m.array() + 0.3).matrix()) == doctest::Approx(0.09).epsilon(1e-12));
  }

  TEST_CASE("Huber-weighted mse")
  {
    const Eigen::VectorXd y = testing::normal_vector(80, 4);
    RobustSpec one;
    one.cutoff = 1.0;
    CHECK(mse_rho(y, y, one) == 0.0);

    SUBCASE("infinite cutoff equals mse")
    {
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Eigen::VectorXd f = testing::normal_vector(80, 1000 + seed);
        CHECK(mse_rho(y, f, RobustSpec::l2()) == doctest::Approx(mse(y, f)).epsilon(1e-13));
      }
    }
    SUBCASE("direct formula")
    {
      const Eigen::VectorXd f = testing::normal_vector(80, 5, 0.3);
      double s2 = 0.0;
      for (Eigen::Index i = 0; i < 80; ++i)
        s2 += (y[i] - f[i]) * (y[i] - f[i]);
      s2 /= 80.0;
      const double s = std::sqrt(s2);
      double total = 0.0;
      for (Eigen::Index i = 0; i < 80; ++i) {
        const double u = std::abs(y[i] - f[i]) / s;
        total += u <= 1.0 ? u * u : 2.0 * u - 1.0;
      }
      CHECK(std::abs(mse_rho(y, f, one) - s2 / 80.0 * total) < 1e-12);
    }
  }

  TEST_CASE("folds partition the sample")
  {
    for (Eigen::Index n : { 10, 37, 200 }) {
      const auto folds = make_folds(n, 5, 9);
      REQUIRE(folds.size() == 5);
      std::set<Eigen::Index> seen;
      std::size_t lo = folds[0].size();
      std::size_t hi = folds[0].size();
      for (const auto& f : folds) {
        lo = std::min(lo, f.size());
        hi = std::max(hi, f.size());
        for (auto i : f)
          CHECK(seen.insert(i).second);
      }
      CHECK(seen.size() == static_cast<std::size_t>(n));
      CHECK(hi - lo <= 1);
      CHECK(make_folds(n, 5, 9) == folds);
    }
    CHECK(make_folds(50, 5, 1) != make_folds(50, 5, 2));
    CHECK_THROWS(make_folds(50, 1, 1));
    CHECK_THROWS(make_folds(5, 3, 1));
  }

  TEST_CASE("linear grid")
  {
    const auto g = linear_grid(0.1, 4.0, 40);
    REQUIRE(g.size() == 40);
    CHECK(g.front() == 0.1);
    CHECK(g.back() == 4.0);
    for (std::size_t i = 1; i < g.size(); ++i)
      CHECK(g[i] - g[i - 1] == doctest::Approx(0.1).epsilon(1e-12));
  }

  TEST_CASE("single cell")
  {
    const auto sim = testing::design(40, 6);
    MethodConfig m;
    CvOptions opt;
    opt.param_grid = { 0.3 };
    opt.max_iterations = 0;
    opt.folds = 2;
    const CvResult r = kfold_cv(sim.data, m, opt);
    CHECK(r.best_param == 0.3);
    CHECK(r.best_iterations == 0);
    CHECK(r.loss.rows() == 1);
    CHECK(r.loss.cols() == 1);
  }

  TEST_CASE("noiseless line under local linear")
  {
    Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(60, 0.0, 1.0);
    const Dataset d(x, (1.0 + 2.0 * x.array()).matrix(), 0.0, 1.0);
    MethodConfig m;
    m.kind = SmootherKind::ProjectionLL;
    CvOptions opt;
    opt.param_grid = { 0.2, 0.5 };
    opt.max_iterations = 10;
    const CvResult r = kfold_cv(d, m, opt);
    for (Eigen::Index p = 0; p < 2; ++p)
      CHECK(r.loss(p, 5) < 1e-3);
  }

  TEST_CASE("loss grid is finite, best is the argmin, reruns agree")
  {
    const auto sim = testing::design(60, 7);
    for (auto kind : { SmootherKind::ProjectionLC, SmootherKind::NadarayaWatson, SmootherKind::CubicSpline }) {
      MethodConfig m;
      m.kind = kind;
      CvOptions opt;
      opt.param_grid = kind == SmootherKind::CubicSpline ? linear_grid(0.0, 50.0, 5) : linear_grid(0.1, 1.0, 5);
      opt.max_iterations = 30;
      opt.seed = 3;
      const CvResult r = kfold_cv(sim.data, m, opt);
      CHECK(r.loss.allFinite());
      CHECK(r.best_loss == r.loss.minCoeff());
      CHECK(r.warnings.empty());
      const CvResult again = kfold_cv(sim.data, m, opt);
      CHECK(again.best_param == r.best_param);
      CHECK(again.best_iterations == r.best_iterations);
      CHECK((again.loss - r.loss).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  TEST_CASE("jobs do not change the result")
  {
    const auto sim = testing::design(50, 8);
    MethodConfig m;
    m.kind = SmootherKind::ProjectionLL;
    CvOptions opt;
    opt.param_grid = linear_grid(0.1, 0.8, 4);
    opt.max_iterations = 20;
    const CvResult one = kfold_cv(sim.data, m, opt);
    opt.jobs = 3;
    const CvResult three = kfold_cv(sim.data, m, opt);
    CHECK((one.loss - three.loss).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("tie rule prefers small b, then small parameter")
  {
    CvResult r;
    r.params = { 0.5, 0.2, 0.9 };
    r.max_iterations = 2;
    r.loss = Eigen::MatrixXd::Constant(3, 3, 1.0);
    r.loss(0, 2) = 0.5;
    r.loss(1, 2) = 0.5;
    r.loss(2, 1) = 0.5;
    select_best(r);
    CHECK(r.best_iterations == 1);
    CHECK(r.best_param == 0.9);
    r.loss(2, 1) = 1.0;
    select_best(r);
    CHECK(r.best_iterations == 2);
    CHECK(r.best_param == 0.2);
  }

  TEST_CASE("failed cells score infinity with a warning")
  {
    // A tiny Epanechnikov bandwidth leaves held-out points without kernel mass.
    const auto sim = testing::design(30, 9);
    MethodConfig m;
    m.kind = SmootherKind::NadarayaWatson;
    CvOptions opt;
    opt.param_grid = { 1e-4, 0.5 };
    opt.max_iterations = 3;
    const CvResult r = kfold_cv(sim.data, m, opt);
    CHECK(std::isinf(r.loss(0, 0)));
    CHECK_FALSE(r.warnings.empty());
    CHECK(r.best_param == 0.5);
  }

  TEST_CASE("rank sweep at full rank agrees with plain cross-validation")
  {
    const auto sim = testing::design(50, 10);
    MethodConfig m;
    CvOptions opt;
    opt.param_grid = linear_grid(0.1, 0.9, 4);
    opt.max_iterations = 25;
    const CvResult plain = kfold_cv(sim.data, m, opt);
    const auto ranks = kfold_cv_ranks(sim.data, m, opt, { 0, 3 });
    CHECK((ranks[0].loss - plain.loss).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(ranks[0].best_param == plain.best_param);
    CHECK(ranks[0].best_iterations == plain.best_iterations);
    CHECK(ranks[1].rank == 3);
  }

  TEST_CASE("low-rank cross-validation matches the direct prediction")
  {
    const auto sim = testing::design(40, 11);
    MethodConfig m;
    m.rank = 4;
    CvOptions opt;
    opt.param_grid = { 0.3 };
    opt.max_iterations = 6;
    opt.folds = 4;
    const CvResult r = kfold_cv(sim.data, m, opt);
    // Recompute the held-out loss at b = 6 fold by fold.
    const auto folds = make_folds(40, 4, opt.seed);
    double total = 0.0;
    for (const auto& held : folds) {
      std::vector<Eigen::Index> train;
      for (Eigen::Index i = 0; i < 40; ++i)
        if (std::find(held.begin(), held.end(), i) == held.end())
          train.push_back(i);
      const Dataset tr = sim.data.subset(train);
      const Dataset te = sim.data.subset(held);
      total += mse(te.y, predict_method(tr, m, 0.3, 6, te.x));
    }
    CHECK(std::abs(r.loss(0, 6) - total / 4.0) < 1e-10);
  }

  TEST_CASE("published grid size is accepted")
  {
    const auto sim = testing::design(50, 12);
    MethodConfig m;
    CvOptions opt;
    opt.param_grid = linear_grid(0.1, 4.0, 40);
    opt.max_iterations = 5000;
    const CvResult r = kfold_cv(sim.data, m, opt);
    CHECK(r.loss.rows() == 40);
    CHECK(r.loss.cols() == 5001);
    CHECK(std::isfinite(r.best_loss));
  }
}
