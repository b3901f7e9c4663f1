#pragma once

#include "kboost/rng.hpp"
#include "kboost/simulation.hpp"

#include <Eigen/Dense>
#include <random>

namespace testing {

inline Eigen::VectorXd normal_vector(Eigen::Index n, std::uint64_t seed, double sd = 1.0)
{
  kboost::CounterRng rng(kboost::stream_key(seed, { 77 }));
  std::normal_distribution<double> d(0.0, sd);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = d(rng);
  return v;
}

// Draw from the simulation design (M1, normal errors).
inline kboost::SimulatedData design(Eigen::Index n, std::uint64_t seed)
{
  return kboost::simulate(kboost::SimulationModel{}, n, kboost::stream_key(seed, { 5 }));
}

// Equispaced x on [0, 1] with y = x.
inline kboost::Dataset equispaced(Eigen::Index n)
{
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
  return kboost::Dataset(x, x, 0.0, 1.0);
}

// Random symmetric matrix with eigenvalues drawn from [0, 1].
inline Eigen::MatrixXd random_unit_spectrum(Eigen::Index n, std::uint64_t seed)
{
  kboost::CounterRng rng(seed);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      a(i, j) = nd(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd lam(n);
  for (Eigen::Index i = 0; i < n; ++i)
    lam[i] = ud(rng);
  Eigen::MatrixXd m = q * lam.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

} // namespace testing
