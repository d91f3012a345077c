#include "core/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "core/error.hpp"

namespace ndelab::ode {

namespace {

// Dormand-Prince 5(4)
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kMinShrink = 0.2;
constexpr double kMaxGrow = 10.0;

bool all_finite(const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(y[i])) return false;
  return true;
}

}  // namespace

void OdeSettings::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0))
    fail(ErrorCode::invalid_argument, "tolerances must be positive");
  if (!(nu >= 0)) fail(ErrorCode::invalid_argument, "nu must be non-negative");
  if (!(min_step > 0) || !(max_step > 0) || !(min_step < max_step))
    fail(ErrorCode::invalid_argument, "need 0 < min_step < max_step");
  if (max_steps <= 0) fail(ErrorCode::invalid_argument, "max_steps must be positive");
  if (!(blowup_threshold > 0))
    fail(ErrorCode::invalid_argument, "blowup_threshold must be positive");
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::reached_end: return "reached_end";
    case Termination::event_hit: return "event_hit";
    case Termination::blowup_detected: return "blowup_detected";
    case Termination::step_underflow: return "step_underflow";
  }
  return "unknown";
}

void Trajectory::push(double t, const double* y, const double* dy) {
  times_.push_back(t);
  states_.insert(states_.end(), y, y + dim_);
  derivs_.insert(derivs_.end(), dy, dy + dim_);
}

void Trajectory::truncate(std::size_t n) {
  if (n >= times_.size()) return;
  times_.resize(n);
  states_.resize(n * dim_);
  derivs_.resize(n * dim_);
}

std::size_t Trajectory::locate(double t) const {
  const std::size_t n = times_.size();
  if (n < 2) fail(ErrorCode::out_of_domain, "trajectory has fewer than two points");
  const bool inc = increasing();
  const double lo = inc ? times_.front() : times_.back();
  const double hi = inc ? times_.back() : times_.front();
  if (!(t >= lo && t <= hi)) {
    std::ostringstream os;
    os << "t=" << t << " outside trajectory [" << lo << ", " << hi << "]";
    fail(ErrorCode::out_of_domain, os.str());
  }
  std::size_t k;
  if (inc) {
    k = static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin());
  } else {
    k = static_cast<std::size_t>(
        std::upper_bound(times_.begin(), times_.end(), t, std::greater<double>()) - times_.begin());
  }
  if (k == 0) k = 1;
  if (k >= n) k = n - 1;
  return k - 1;
}

double Trajectory::interpolate(double t, std::size_t comp) const {
  const std::size_t i = locate(t);
  const double t0 = times_[i], h = times_[i + 1] - t0;
  const double th = (t - t0) / h;
  const double y0 = value(i, comp), y1 = value(i + 1, comp);
  const double f0 = derivs_[i * dim_ + comp], f1 = derivs_[(i + 1) * dim_ + comp];
  const double th2 = th * th, th3 = th2 * th;
  return (2 * th3 - 3 * th2 + 1) * y0 + (th3 - 2 * th2 + th) * h * f0 + (-2 * th3 + 3 * th2) * y1 +
         (th3 - th2) * h * f1;
}

double Trajectory::interpolate_derivative(double t, std::size_t comp) const {
  const std::size_t i = locate(t);
  const double t0 = times_[i], h = times_[i + 1] - t0;
  const double th = (t - t0) / h;
  const double y0 = value(i, comp), y1 = value(i + 1, comp);
  const double f0 = derivs_[i * dim_ + comp], f1 = derivs_[(i + 1) * dim_ + comp];
  const double th2 = th * th;
  return ((6 * th2 - 6 * th) * (y0 - y1)) / h + (3 * th2 - 4 * th + 1) * f0 + (3 * th2 - 2 * th) * f1;
}

State Trajectory::interpolate(double t) const {
  State out(dim_);
  for (std::size_t c = 0; c < dim_; ++c) out[c] = interpolate(t, c);
  return out;
}

Trajectory integrate(const Rhs& rhs, const State& y0, double t_start, double t_end,
                     const OdeSettings& settings, const std::vector<EventFn>& events) {
  settings.validate();
  const std::size_t n = y0.size();
  if (n == 0) fail(ErrorCode::invalid_argument, "empty initial state");
  if (!(std::isfinite(t_start) && std::isfinite(t_end)) || t_start == t_end)
    fail(ErrorCode::invalid_argument, "degenerate integration span");
  if (!all_finite(y0.data(), n)) fail(ErrorCode::invalid_argument, "non-finite initial state");

  const double dir = t_end > t_start ? 1.0 : -1.0;
  const double span = std::fabs(t_end - t_start);
  const double hmax = std::min(settings.max_step, span);
  const double rtol = settings.rel_tol, atol = settings.abs_tol;

  Trajectory traj(n);
  std::vector<double> y(y0), ynew(n), ytmp(n), err(n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);

  auto eval = [&](double t, const double* yy, double* out) {
    rhs(t, yy, out);
    ++traj.rhs_evaluations;
  };

  double t = t_start;
  eval(t, y.data(), k1.data());
  if (!all_finite(k1.data(), n)) fail(ErrorCode::invalid_argument, "rhs not finite at start");
  traj.push(t, y.data(), k1.data());

  auto wnorm = [&](const std::vector<double>& v, const std::vector<double>& ya,
                   const std::vector<double>& yb) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sk = atol + rtol * std::max(std::fabs(ya[i]), std::fabs(yb[i]));
      const double r = v[i] / sk;
      s += r * r;
    }
    return std::sqrt(s / static_cast<double>(n));
  };

  // initial step guess
  double h;
  {
    const double d0 = wnorm(y, y, y);
    const double d1 = wnorm(k1, y, y);
    double h0 = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, hmax);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + dir * h0 * k1[i];
    eval(t + dir * h0, ytmp.data(), k2.data());
    for (std::size_t i = 0; i < n; ++i) err[i] = k2[i] - k1[i];
    const double d2 = all_finite(k2.data(), n) ? wnorm(err, y, y) / h0 : 1e300;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min({100 * h0, h1, hmax});
    h = std::max(h, settings.min_step);
  }

  std::vector<double> ev_prev(events.size());
  for (std::size_t e = 0; e < events.size(); ++e) ev_prev[e] = events[e](t, y.data());

  double facold = 1e-4;
  bool last_rejected = false;
  long attempts = 0;

  while (dir * (t_end - t) > 0) {
    if (++attempts > settings.max_steps) {
      std::ostringstream os;
      os << "max_steps=" << settings.max_steps << " exceeded at t=" << t;
      fail(ErrorCode::max_iterations, os.str());
    }
    const double remaining = std::fabs(t_end - t);
    bool final_step = false;
    if (h >= remaining || remaining - h < 1e-12 * span) {
      h = remaining;
      final_step = true;
    }
    if (h < settings.min_step && !final_step) {
      traj.termination = Termination::step_underflow;
      return traj;
    }
    if (t + dir * h == t) {
      traj.termination = Termination::step_underflow;
      return traj;
    }
    const double hs = dir * h;

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
    eval(t + c2 * hs, ytmp.data(), k2.data());
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    eval(t + c3 * hs, ytmp.data(), k3.data());
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    eval(t + c4 * hs, ytmp.data(), k4.data());
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    eval(t + c5 * hs, ytmp.data(), k5.data());
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double tnew = final_step ? t_end : t + hs;
    eval(tnew, ytmp.data(), k6.data());
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    eval(tnew, ynew.data(), k7.data());
    for (std::size_t i = 0; i < n; ++i)
      err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

    double enorm = wnorm(err, y, ynew);
    if (!std::isfinite(enorm) || !all_finite(k7.data(), n)) enorm = 1e10;

    const double fac11 = std::pow(std::max(enorm, 1e-300), kExpo);
    if (enorm <= 1.0) {
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::clamp(fac / kSafety, 1.0 / kMaxGrow, 1.0 / kMinShrink);
      double hnew = h / fac;
      if (last_rejected) hnew = std::min(hnew, h);
      facold = std::max(enorm, 1e-4);
      last_rejected = false;

      const double told = t;
      t = tnew;
      y.swap(ynew);
      k1.swap(k7);
      traj.push(t, y.data(), k1.data());

      if (!events.empty()) {
        int hit = -1;
        double thit = 0;
        for (std::size_t e = 0; e < events.size(); ++e) {
          const double vnew = events[e](t, y.data());
          const double vold = ev_prev[e];
          ev_prev[e] = vnew;
          if (vold == 0 || !(vold * vnew <= 0)) continue;
          double te = t;
          if (vnew != 0) {
            auto g = [&](double s) {
              State ys(n);
              for (std::size_t c = 0; c < n; ++c) ys[c] = traj.interpolate(s, c);
              return events[e](s, ys.data());
            };
            te = find_root(g, told, t, std::max(rtol * span, 1e-15 * std::fabs(t)));
          }
          if (hit < 0 || dir * (te - thit) < 0) {
            hit = static_cast<int>(e);
            thit = te;
          }
        }
        if (hit >= 0) {
          State ye = traj.interpolate(thit);
          std::vector<double> de(n);
          eval(thit, ye.data(), de.data());
          traj.truncate(traj.size() - 1);
          if (thit != told) traj.push(thit, ye.data(), de.data());
          traj.termination = Termination::event_hit;
          traj.event_index = hit;
          return traj;
        }
      }

      bool blown = false;
      for (std::size_t i = 0; i < n; ++i)
        if (!(std::fabs(y[i]) <= settings.blowup_threshold)) blown = true;
      if (blown) {
        traj.termination = Termination::blowup_detected;
        return traj;
      }
      h = std::min(hnew, hmax);
    } else {
      h = h / std::min(1.0 / kMinShrink, fac11 / kSafety);
      last_rejected = true;
    }
  }
  traj.termination = Termination::reached_end;
  return traj;
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                 int max_iterations) {
  if (!(tol >= 0)) fail(ErrorCode::invalid_argument, "root tolerance must be non-negative");
  if (lo > hi) std::swap(lo, hi);
  const double flo = f(lo), fhi = f(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi))
    fail(ErrorCode::no_sign_change, "function not finite at bracket ends");
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if (flo * fhi > 0) {
    std::ostringstream os;
    os << "no sign change on [" << lo << ", " << hi << "]: f=" << flo << ", " << fhi;
    fail(ErrorCode::no_sign_change, os.str());
  }
  auto done = [tol](double a, double b) {
    return std::fabs(b - a) <= std::max(tol, 4 * std::numeric_limits<double>::epsilon() *
                                                 std::max(std::fabs(a), std::fabs(b)));
  };
  boost::uintmax_t iters = static_cast<boost::uintmax_t>(max_iterations);
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, done, iters);
  if (r.first == r.second) return r.first;
  if (!done(r.first, r.second)) {
    std::ostringstream os;
    os << "root bracket [" << r.first << ", " << r.second << "] wider than " << tol << " after "
       << iters << " iterations";
    fail(ErrorCode::max_iterations, os.str());
  }
  return 0.5 * (r.first + r.second);
}

}  // namespace ndelab::ode
