#include "kboost/smoothers.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace kboost {

namespace {

constexpr double max_condition = 1e12;

} // namespace

SmootherKind parse_smoother(std::string_view name)
{
  if (name == "lc")
    return SmootherKind::ProjectionLC;
  if (name == "ll")
    return SmootherKind::ProjectionLL;
  if (name == "nw")
    return SmootherKind::NadarayaWatson;
  if (name == "spline")
    return SmootherKind::CubicSpline;
  throw std::invalid_argument("unknown smoother '" + std::string(name) + "'");
}

std::string smoother_name(SmootherKind kind)
{
  switch (kind) {
    case SmootherKind::ProjectionLC:
      return "lc";
    case SmootherKind::ProjectionLL:
      return "ll";
    case SmootherKind::NadarayaWatson:
      return "nw";
    case SmootherKind::CubicSpline:
      return "spline";
  }
  return "unknown";
}

bool has_unit_spectrum(SmootherKind kind)
{
  return kind != SmootherKind::NadarayaWatson;
}

QuadratureGrid support_grid(const Dataset& data, std::size_t size)
{
  return QuadratureGrid(data.lo, data.hi, size);
}

// ---------------------------------------------------------------------------
// Projection smoothers

ProjectionSmoother::ProjectionSmoother(const Dataset& data,
                                       const KernelSpec& spec,
                                       int order,
                                       const QuadratureGrid& grid)
  : spec_(spec)
  , order_(order)
  , grid_(grid)
  , n_(data.size())
{
  if (order != 0 && order != 1)
    throw std::invalid_argument("projection smoother order must be 0 or 1");
  data.validate();

  const auto& pts = grid_.points();
  const auto& qw = grid_.weights();
  const std::size_t G = pts.size();

  // Raw kernel values, G x n.
  Eigen::MatrixXd kern(static_cast<Eigen::Index>(G), n_);
  for (Eigen::Index j = 0; j < n_; ++j)
    for (std::size_t g = 0; g < G; ++g)
      kern(static_cast<Eigen::Index>(g), j) = spec_.scaled(pts[g] - data.x[j]);

  // A grid point is active when some observation reaches it. Every training
  // point reaches at least the grid points its kernel covers, so normalizing
  // over active points equals normalizing over the whole grid for them.
  std::vector<bool> is_active(G, false);
  for (std::size_t g = 0; g < G; ++g)
    is_active[g] = kern.row(static_cast<Eigen::Index>(g)).maxCoeff() > 0.0;
  for (std::size_t g = 0; g < G; ++g)
    if (is_active[g])
      active_.push_back(g);
  if (active_.empty())
    throw std::domain_error("bandwidth too small for design");

  Eigen::VectorXd mass = Eigen::VectorXd::Zero(n_);
  for (std::size_t g : active_)
    mass += qw[g] * kern.row(static_cast<Eigen::Index>(g)).transpose();
  for (Eigen::Index j = 0; j < n_; ++j)
    if (!(mass[j] > 0.0))
      throw std::domain_error("point outside smoothing support");

  const Eigen::Index width = order_ + 1;
  inv_chol_.resize(active_.size());
  constant_fallback_.assign(active_.size(), false);
  factors_.resize(n_, width * static_cast<Eigen::Index>(active_.size()));

  for (std::size_t a = 0; a < active_.size(); ++a) {
    const std::size_t g = active_[a];
    const double x0 = pts[g];
    const Eigen::VectorXd kc = kern.row(static_cast<Eigen::Index>(g)).transpose().cwiseQuotient(mass);
    const double s0 = kc.sum();
    Eigen::Matrix2d L_inv = Eigen::Matrix2d::Zero();
    bool fallback = order_ == 0;
    if (order_ == 1) {
      const Eigen::VectorXd d = data.x.array() - x0;
      const double s1 = kc.dot(d);
      const double s2 = kc.dot(d.cwiseProduct(d));
      Eigen::Matrix2d gram;
      gram << s0, s1, s1, s2;
      const double det = s0 * s2 - s1 * s1;
      const double tr = s0 + s2;
      // 2x2 condition number from the eigenvalues of the SPD Gram matrix.
      const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
      const double ev_hi = 0.5 * tr + disc;
      const double ev_lo = 0.5 * tr - disc;
      if (!(ev_lo > 0.0) || ev_hi / ev_lo > max_condition) {
        fallback = true;
        ++degenerate_;
      } else {
        const Eigen::Matrix2d L = gram.llt().matrixL();
        L_inv = L.inverse();
      }
    }
    constant_fallback_[a] = fallback;
    if (fallback) {
      L_inv.setZero();
      L_inv(0, 0) = 1.0 / std::sqrt(s0);
    }
    inv_chol_[a] = L_inv;
  }

  factors_ = factor_rows(data.x, false);
}

Eigen::MatrixXd ProjectionSmoother::factor_rows(const Eigen::VectorXd& x_eval, bool allow_outside) const
{
  const auto& pts = grid_.points();
  const auto& qw = grid_.weights();
  const Eigen::Index width = order_ + 1;
  const Eigen::Index m = x_eval.size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, width * static_cast<Eigen::Index>(active_.size()));

  std::vector<double> kv(active_.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    const double v = x_eval[i];
    double mass = 0.0;
    for (std::size_t a = 0; a < active_.size(); ++a) {
      kv[a] = spec_.scaled(pts[active_[a]] - v);
      mass += qw[active_[a]] * kv[a];
    }
    if (!(mass > 0.0)) {
      if (allow_outside)
        continue;
      throw std::domain_error("point outside smoothing support");
    }
    for (std::size_t a = 0; a < active_.size(); ++a) {
      if (kv[a] == 0.0)
        continue;
      const double k = kv[a] / mass;
      const double sq = std::sqrt(qw[active_[a]]);
      const Eigen::Index c = width * static_cast<Eigen::Index>(a);
      if (order_ == 0) {
        out(i, c) = sq * k * inv_chol_[a](0, 0);
      } else {
        // Row vector k [1, v - x] L^{-T}.
        const double d = v - pts[active_[a]];
        const Eigen::Matrix2d& Li = inv_chol_[a];
        out(i, c) = sq * k * Li(0, 0);
        out(i, c + 1) = constant_fallback_[a] ? 0.0 : sq * k * (Li(1, 0) + d * Li(1, 1));
      }
    }
  }
  return out;
}

SmootherMatrix ProjectionSmoother::matrix() const
{
  SmootherMatrix s;
  s.weights = factors_ * factors_.transpose();
  s.weights = 0.5 * (s.weights + s.weights.transpose()).eval();
  s.kind = order_ == 0 ? SmootherKind::ProjectionLC : SmootherKind::ProjectionLL;
  s.kernel = spec_;
  s.symmetric = true;
  return s;
}

Eigen::MatrixXd ProjectionSmoother::rows_at(const Eigen::VectorXd& x_eval) const
{
  return factor_rows(x_eval, false) * factors_.transpose();
}

SmootherMatrix build_projection_smoother(const Dataset& data,
                                         const KernelSpec& spec,
                                         int order,
                                         const QuadratureGrid& grid)
{
  return ProjectionSmoother(data, spec, order, grid).matrix();
}

Eigen::VectorXd test_row(const Dataset& data,
                         const KernelSpec& spec,
                         int order,
                         const QuadratureGrid& grid,
                         double x_test)
{
  Eigen::VectorXd pt(1);
  pt[0] = x_test;
  return ProjectionSmoother(data, spec, order, grid).rows_at(pt).row(0).transpose();
}

// ---------------------------------------------------------------------------
// Nadaraya-Watson

Eigen::MatrixXd nw_rows_at(const Dataset& data, const KernelSpec& spec, const Eigen::VectorXd& x_eval)
{
  const Eigen::Index n = data.size();
  Eigen::MatrixXd out(x_eval.size(), n);
  for (Eigen::Index i = 0; i < x_eval.size(); ++i) {
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = spec.scaled(x_eval[i] - data.x[j]);
    const double total = out.row(i).sum();
    if (!(total > 0.0))
      throw std::domain_error("point outside smoothing support");
    out.row(i) /= total;
  }
  return out;
}

SmootherMatrix build_nw_smoother(const Dataset& data, const KernelSpec& spec)
{
  data.validate();
  SmootherMatrix s;
  try {
    s.weights = nw_rows_at(data, spec, data.x);
  } catch (const std::domain_error&) {
    throw std::logic_error("Nadaraya-Watson row with zero kernel mass");
  }
  s.kind = SmootherKind::NadarayaWatson;
  s.kernel = spec;
  s.symmetric = false;
  return s;
}

// ---------------------------------------------------------------------------
// Cubic smoothing spline

SplineSmoother::SplineSmoother(const Dataset& data, const SplineConfig& config)
  : lambda_(config.lambda)
  , n_(data.size())
{
  if (!(config.lambda >= 0.0) || !std::isfinite(config.lambda))
    throw std::invalid_argument("spline lambda must be nonnegative");
  data.validate();

  order_.resize(static_cast<std::size_t>(n_));
  std::iota(order_.begin(), order_.end(), Eigen::Index{ 0 });
  std::stable_sort(order_.begin(), order_.end(), [&](Eigen::Index a, Eigen::Index b) { return data.x[a] < data.x[b]; });

  knots_.resize(n_);
  for (Eigen::Index k = 0; k < n_; ++k)
    knots_[k] = data.x[order_[static_cast<std::size_t>(k)]];
  const double eps = 1e-9 * (data.hi - data.lo);
  for (Eigen::Index k = 1; k < n_; ++k) {
    if (knots_[k] <= knots_[k - 1]) {
      knots_[k] = knots_[k - 1] + eps;
      ++jittered_;
    }
  }
  if (jittered_ > 0)
    std::cerr << "warning: jittered " << jittered_ << " tied covariate value(s) for the spline smoother\n";
  for (Eigen::Index k = 1; k < n_; ++k)
    if (!(knots_[k] > knots_[k - 1]))
      throw std::invalid_argument("spline knots not distinct after jitter");

  Eigen::MatrixXd hat_sorted = Eigen::MatrixXd::Identity(n_, n_);
  second_deriv_ = Eigen::MatrixXd::Zero(n_, n_);

  if (n_ >= 3) {
    const Eigen::Index m = n_ - 2;
    const Eigen::VectorXd h = knots_.tail(n_ - 1) - knots_.head(n_ - 1);
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n_, m);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      // Column j corresponds to interior knot j + 1.
      Q(j, j) = 1.0 / h[j];
      Q(j + 1, j) = -1.0 / h[j] - 1.0 / h[j + 1];
      Q(j + 2, j) = 1.0 / h[j + 1];
      R(j, j) = (h[j] + h[j + 1]) / 3.0;
      if (j + 1 < m) {
        R(j, j + 1) = h[j + 1] / 6.0;
        R(j + 1, j) = h[j + 1] / 6.0;
      }
    }
    if (lambda_ > 0.0) {
      // (I + lambda Q R^-1 Q')^-1 = I - Q (R / lambda + Q'Q)^-1 Q'
      const Eigen::MatrixXd inner = R / lambda_ + Q.transpose() * Q;
      const Eigen::MatrixXd solved = inner.ldlt().solve(Q.transpose());
      hat_sorted -= Q * solved;
      hat_sorted = 0.5 * (hat_sorted + hat_sorted.transpose()).eval();
    }
    // gamma = R^-1 Q' g at the interior knots; zero at the ends.
    second_deriv_.middleRows(1, m) = R.ldlt().solve(Q.transpose());
  }

  hat_.resize(n_, n_);
  for (Eigen::Index a = 0; a < n_; ++a)
    for (Eigen::Index b = 0; b < n_; ++b)
      hat_(order_[static_cast<std::size_t>(a)], order_[static_cast<std::size_t>(b)]) = hat_sorted(a, b);
}

SmootherMatrix SplineSmoother::matrix() const
{
  SmootherMatrix s;
  s.weights = hat_;
  s.kind = SmootherKind::CubicSpline;
  s.lambda = lambda_;
  s.symmetric = true;
  return s;
}

Eigen::MatrixXd SplineSmoother::rows_at(const Eigen::VectorXd& x_eval) const
{
  // Interpolation weights on the sorted fitted values g and second
  // derivatives gamma; value = a'g + b'gamma with gamma = second_deriv_ g.
  const Eigen::Index m = x_eval.size();
  Eigen::MatrixXd on_g = Eigen::MatrixXd::Zero(m, n_);
  Eigen::MatrixXd on_gamma = Eigen::MatrixXd::Zero(m, n_);
  const Eigen::Index last = n_ - 1;

  for (Eigen::Index r = 0; r < m; ++r) {
    const double x = x_eval[r];
    if (x <= knots_[0]) {
      // g(t1) + (x - t1) g'(t1), g'(t1) = (g2 - g1)/h1 - h1 gamma2 / 6
      const double h1 = knots_[1] - knots_[0];
      const double dx = x - knots_[0];
      on_g(r, 0) += 1.0 - dx / h1;
      on_g(r, 1) += dx / h1;
      on_gamma(r, 1) -= dx * h1 / 6.0;
    } else if (x >= knots_[last]) {
      const double hn = knots_[last] - knots_[last - 1];
      const double dx = x - knots_[last];
      on_g(r, last) += 1.0 + dx / hn;
      on_g(r, last - 1) -= dx / hn;
      on_gamma(r, last - 1) += dx * hn / 6.0;
    } else {
      const auto it = std::upper_bound(knots_.data(), knots_.data() + n_, x);
      const Eigen::Index i = static_cast<Eigen::Index>(it - knots_.data()) - 1;
      const double hi = knots_[i + 1] - knots_[i];
      const double a = x - knots_[i];
      const double b = knots_[i + 1] - x;
      on_g(r, i) += b / hi;
      on_g(r, i + 1) += a / hi;
      on_gamma(r, i) -= a * b * (1.0 + b / hi) / 6.0;
      on_gamma(r, i + 1) -= a * b * (1.0 + a / hi) / 6.0;
    }
  }

  const Eigen::MatrixXd on_sorted = on_g + on_gamma * second_deriv_;
  // Sorted fitted values are rows order_ of the hat matrix.
  Eigen::MatrixXd hat_rows(n_, n_);
  for (Eigen::Index a = 0; a < n_; ++a)
    hat_rows.row(a) = hat_.row(order_[static_cast<std::size_t>(a)]);
  return on_sorted * hat_rows;
}

SmootherMatrix build_spline_smoother(const Dataset& data, const SplineConfig& config)
{
  return SplineSmoother(data, config).matrix();
}

Eigen::VectorXd apply(const SmootherMatrix& s, const Eigen::VectorXd& v)
{
  if (v.size() != s.size())
    throw std::invalid_argument("smoother and vector lengths differ");
  return s.weights * v;
}

} // namespace kboost
