#include "core/blowup.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "core/error.hpp"
#include "core/ode.hpp"

namespace ndelab::blowup {

namespace {

void require_positive_J0(double J0) {
  if (!(J0 > 0)) {
    std::ostringstream os;
    os << "J0=" << J0 << " is not positive";
    fail(ErrorCode::nonpositive_J0, os.str());
  }
}

// integral of the quadratic through (x0,f0),(x1,f1),(x2,f2) over [a, b]
double quadratic_piece(double x0, double x1, double x2, double f0, double f1, double f2, double a,
                       double b) {
  const double r = 0.5 * (b - a), c = 0.5 * (a + b);
  const double g = r / std::sqrt(3.0);
  auto q = [&](double x) {
    return f0 * (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2)) +
           f1 * (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2)) +
           f2 * (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
  };
  return r * (q(c - g) + q(c + g));
}

}  // namespace

const char* order_name(Order o) {
  switch (o) {
    case Order::first: return "first";
    case Order::second: return "second";
    case Order::third: return "third";
  }
  return "unknown";
}

double cut_weight(double L, double x) {
  if (!(L > 0)) fail(ErrorCode::invalid_argument, "L must be positive");
  if (!(x >= -L && x <= 0)) fail(ErrorCode::out_of_domain, "x outside [-L, 0]");
  const double s = x + L;
  return -s * s * s;
}

double simpson(const std::vector<double>& x, const std::vector<double>& f) {
  const std::size_t n = x.size();
  if (n != f.size() || n < 2) fail(ErrorCode::invalid_argument, "simpson needs matching arrays");
  if (n == 2) return 0.5 * (x[1] - x[0]) * (f[0] + f[1]);
  double s = 0;
  std::size_t i = 0;
  for (; i + 2 < n; i += 2) {
    const double h0 = x[i + 1] - x[i], h1 = x[i + 2] - x[i + 1];
    s += (h0 + h1) / 6.0 *
         ((2 - h1 / h0) * f[i] + (h0 + h1) * (h0 + h1) / (h0 * h1) * f[i + 1] + (2 - h0 / h1) * f[i + 2]);
  }
  if (i + 1 < n)
    s += quadratic_piece(x[n - 3], x[n - 2], x[n - 1], f[n - 3], f[n - 2], f[n - 1], x[n - 2], x[n - 1]);
  return s;
}

double expansion_coefficient(const std::vector<double>& x, const std::vector<double>& u, double L) {
  if (!(L > 0)) fail(ErrorCode::invalid_argument, "L must be positive");
  if (x.size() != u.size()) fail(ErrorCode::invalid_argument, "grid and values differ in length");
  const double tol = 1e-9 * L;
  std::vector<double> xs, fs;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < -L - tol || x[i] > tol) continue;
    const double s = x[i] + L;
    xs.push_back(x[i]);
    fs.push_back(-u[i] * s * s * s);
  }
  if (xs.size() < 3 || std::fabs(xs.front() + L) > tol || std::fabs(xs.back()) > tol)
    fail(ErrorCode::out_of_domain, "grid does not cover [-L, 0] with nodes at both ends");
  return simpson(xs, fs);
}

double expansion_coefficient(const std::function<double(double)>& u, double L, int intervals) {
  if (!(L > 0)) fail(ErrorCode::invalid_argument, "L must be positive");
  if (intervals < 2) fail(ErrorCode::invalid_argument, "need at least 2 intervals");
  if (intervals % 2) ++intervals;
  std::vector<double> x(intervals + 1), f(intervals + 1);
  for (int i = 0; i <= intervals; ++i) {
    x[i] = -L + L * i / intervals;
    const double s = x[i] + L;
    f[i] = -u(x[i]) * s * s * s;
  }
  return simpson(x, f);
}

double unit_blowup_time(Order order) {
  if (order == Order::first) return 1.0;
  if (order == Order::second) return boost::math::beta(1.0 / 6.0, 0.5) / 3.0 * std::sqrt(1.5);
  static const double tau = [] {
    ode::OdeSettings s;
    s.rel_tol = 1e-13;
    s.abs_tol = 1e-13;
    s.blowup_threshold = 1e12;
    auto rhs = [](double, const double* y, double* dy) {
      dy[0] = y[1];
      dy[1] = y[2];
      dy[2] = y[0] * y[0];
    };
    const auto tr = ode::integrate(rhs, {1.0, 0.0, 0.0}, 0.0, 100.0, s);
    if (tr.termination != ode::Termination::blowup_detected)
      fail(ErrorCode::non_blowup, "y''' = y^2 did not blow up");
    // y ~ 60 (T - t)^-3 near blow-up, so T - t ~ 3 y / y'
    const std::size_t k = tr.size() - 1;
    return tr.time(k) + 3.0 * tr.value(k, 0) / tr.value(k, 1);
  }();
  return tau;
}

double blowup_time_bound(double J0, double L, Order order) {
  require_positive_J0(J0);
  if (!(L > 0)) fail(ErrorCode::invalid_argument, "L must be positive");
  const double L7 = std::pow(L, 7);
  const double k = 3.0 / L7;
  switch (order) {
    case Order::first: return L7 / (3.0 * J0);
    case Order::second: return unit_blowup_time(order) / std::sqrt(k * J0);
    case Order::third: return unit_blowup_time(order) / std::cbrt(k * J0);
  }
  return 0.0;
}

OdiReport odi_check(const std::vector<JSample>& traj, double L, double rel_tol) {
  if (traj.size() < 3) fail(ErrorCode::insufficient_samples, "ODI check needs at least 3 samples");
  if (!(L > 0)) fail(ErrorCode::invalid_argument, "L must be positive");
  for (std::size_t i = 1; i < traj.size(); ++i)
    if (!(traj[i].t > traj[i - 1].t)) fail(ErrorCode::invalid_argument, "samples must be increasing in t");
  const double k = 3.0 / std::pow(L, 7);
  OdiReport r;
  r.min_margin = std::numeric_limits<double>::infinity();
  r.min_relative_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
    const double h0 = traj[i].t - traj[i - 1].t, h1 = traj[i + 1].t - traj[i].t;
    const double d = (-h1 / (h0 * (h0 + h1))) * traj[i - 1].J + ((h1 - h0) / (h0 * h1)) * traj[i].J +
                     (h0 / (h1 * (h0 + h1))) * traj[i + 1].J;
    const double rhs = k * traj[i].J * traj[i].J;
    const double m = d - rhs;
    const double rel = rhs > 0 ? m / rhs : (m >= 0 ? 0.0 : -std::numeric_limits<double>::infinity());
    if (m < r.min_margin) r.min_margin = m;
    if (rel < r.min_relative_margin) {
      r.min_relative_margin = rel;
      r.worst_index = i;
    }
  }
  r.satisfied = r.min_relative_margin >= -rel_tol;
  return r;
}

TimeCutoff polynomial_cutoff(int k) {
  if (k < 2) fail(ErrorCode::invalid_argument, "cut-off power must be at least 2");
  const double kk = k;
  TimeCutoff c;
  c.name = "tau^" + std::to_string(k) + "(1-tau)^" + std::to_string(k);
  c.phi = [kk](double t) { return std::pow(t * (1 - t), kk); };
  // with w = t(1-t): (w^k)'' = k(k-1) w^(k-2) (1-2t)^2 - 2k w^(k-1)
  c.phi2 = [kk](double t) {
    const double w = t * (1 - t), s = 1 - 2 * t;
    return kk * (kk - 1) * std::pow(w, kk - 2) * s * s - 2 * kk * std::pow(w, kk - 1);
  };
  return c;
}

double capacity_constant(const TimeCutoff& cutoff, double* error_estimate) {
  auto f = [&cutoff](double t) {
    const double p = cutoff.phi(t);
    const double d = cutoff.phi2(t);
    if (p <= 0) return std::numeric_limits<double>::infinity();
    return d * d / p;
  };
  double err = 0;
  const double tol = 1e-12;
  double val = std::numeric_limits<double>::infinity();
  try {
    val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 25, tol, &err);
  } catch (const std::exception&) {
    val = std::numeric_limits<double>::infinity();
  }
  if (error_estimate) *error_estimate = err;
  if (!std::isfinite(val) || !std::isfinite(err) || err > 1e-8 * std::fabs(val)) {
    std::ostringstream os;
    os << "c0 quadrature for " << cutoff.name << " does not converge (value " << val << ", error "
       << err << ")";
    fail(ErrorCode::divergent_c0, os.str());
  }
  return val;
}

CapacityResult capacity_bound(const std::vector<double>& x, const std::vector<double>& ut0, double L,
                              const TimeCutoff& cutoff) {
  if (!(L > 0)) fail(ErrorCode::invalid_argument, "L must be positive");
  if (x.size() != ut0.size()) fail(ErrorCode::invalid_argument, "grid and values differ in length");
  const double tol = 1e-9 * L;
  std::vector<double> xs, fs;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < -tol || x[i] > L + tol) continue;
    const double s = L - x[i];
    xs.push_back(x[i]);
    fs.push_back(ut0[i] * s * s * s);
  }
  if (xs.size() < 3 || std::fabs(xs.front()) > tol || std::fabs(xs.back() - L) > tol)
    fail(ErrorCode::out_of_domain, "grid does not cover [0, L] with nodes at both ends");
  CapacityResult r;
  r.J0 = simpson(xs, fs);
  require_positive_J0(r.J0);
  r.c0 = capacity_constant(cutoff, &r.c0_error);
  r.T0 = std::cbrt(r.c0 * std::pow(L, 7) / (7.0 * r.J0));
  return r;
}

}  // namespace ndelab::blowup
