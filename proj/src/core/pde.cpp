#include "core/pde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace ndelab::pde {

namespace {

double sgn(double x) { return (x > 0) - (x < 0); }

double max_abs(const std::vector<double>& u) {
  double m = 0;
  for (double v : u) m = std::max(m, std::fabs(v));
  return m;
}

// u with two ghost nodes on each side, constant extension
void extend(const std::vector<double>& u, std::vector<double>& e) {
  const std::size_t n = u.size();
  e.resize(n + 4);
  std::copy(u.begin(), u.end(), e.begin() + 2);
  e[0] = e[1] = u.front();
  e[n + 2] = e[n + 3] = u.back();
}

// constant extension beyond both ends
inline double at(const std::vector<double>& u, long i) {
  const long n = static_cast<long>(u.size());
  return u[static_cast<std::size_t>(std::clamp(i, 0L, n - 1))];
}

void rk4(std::vector<double>& u, double dt,
         const std::function<void(const std::vector<double>&, std::vector<double>&)>& F) {
  const std::size_t n = u.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  F(u, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
  F(tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
  F(tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + dt * k3[i];
  F(tmp, k4);
  for (std::size_t i = 0; i < n; ++i) u[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
}

void check_blowup(const std::vector<double>& u, double threshold, double t) {
  for (double v : u) {
    if (!(std::fabs(v) <= threshold)) {
      std::ostringstream os;
      os << "max|u| exceeded " << threshold << " near t=" << t;
      fail(ErrorCode::blowup_detected, os.str());
    }
  }
}

}  // namespace

const char* data_name(DataKind k) {
  switch (k) {
    case DataKind::s_minus: return "s-minus";
    case DataKind::s_plus: return "s-plus";
    case DataKind::h_left: return "h-left";
    case DataKind::h_right: return "h-right";
    case DataKind::custom: return "custom";
  }
  return "unknown";
}

PdeState make_state(const std::function<double(double)>& u0, double L, int n, double epsilon,
                    BoundaryKind bc) {
  if (n < kMinGrid) {
    std::ostringstream os;
    os << "grid size " << n << " below the minimum " << kMinGrid;
    fail(ErrorCode::invalid_grid, os.str());
  }
  if (!(L > 0) || !std::isfinite(L)) fail(ErrorCode::invalid_grid, "L must be positive");
  PdeState s;
  s.L = L;
  s.dx = 2 * L / (n - 1);
  s.epsilon = epsilon < 0 ? s.dx * s.dx : epsilon;
  s.bc = bc;
  s.x.resize(n);
  s.u.resize(n);
  for (int i = 0; i < n; ++i) {
    // symmetric node placement so that x_i = -x_{n-1-i} exactly
    s.x[i] = i < n / 2 ? -L + i * s.dx : L - (n - 1 - i) * s.dx;
    if (n % 2 == 1 && i == n / 2) s.x[i] = 0.0;
    s.u[i] = u0(s.x[i]);
  }
  if (bc != BoundaryKind::pinned_far_field) {
    s.pin_left = s.pin_right = 0.0;
  } else {
    s.pin_left = s.u.front();
    s.pin_right = s.u.back();
  }
  s.u.front() = s.pin_left;
  s.u.back() = s.pin_right;
  return s;
}

PdeState make_state(const RiemannData& data, double L, int n, double epsilon) {
  if (n < kMinGrid) {
    std::ostringstream os;
    os << "grid size " << n << " below the minimum " << kMinGrid;
    fail(ErrorCode::invalid_grid, os.str());
  }
  if (!(L > 0)) fail(ErrorCode::invalid_grid, "L must be positive");
  const double dx = 2 * L / (n - 1);
  const double w = data.smoothing_width < 0 ? 4 * dx : data.smoothing_width;
  // odd step profile: sign(x) or its tanh mollification
  auto step = [w](double x) { return w > 0 ? std::tanh(x / w) : sgn(x); };
  std::function<double(double)> u0;
  double pl = 0, pr = 0;
  switch (data.kind) {
    case DataKind::s_minus:
      u0 = [step](double x) { return -step(x); };
      pl = 1, pr = -1;
      break;
    case DataKind::s_plus:
      u0 = [step](double x) { return step(x); };
      pl = -1, pr = 1;
      break;
    case DataKind::h_left:
      u0 = [step](double x) { return 0.5 * (1 - step(x)); };
      pl = 1, pr = 0;
      break;
    case DataKind::h_right:
      u0 = [step](double x) { return 0.5 * (1 + step(x)); };
      pl = 0, pr = 1;
      break;
    case DataKind::custom:
      if (!data.custom) fail(ErrorCode::invalid_argument, "custom data needs a function");
      return make_state(data.custom, L, n, epsilon, BoundaryKind::pinned_far_field);
  }
  PdeState s = make_state(u0, L, n, epsilon, BoundaryKind::pinned_far_field);
  s.pin_left = pl;
  s.pin_right = pr;
  s.u.front() = pl;
  s.u.back() = pr;
  return s;
}

void spatial_operator(const PdeState& s, const std::vector<double>& u, std::vector<double>& out) {
  const std::size_t n = u.size();
  out.assign(n, 0.0);
  std::vector<double> e, w(n + 4);
  extend(u, e);
  for (std::size_t i = 0; i < n + 4; ++i) w[i] = 0.5 * e[i] * e[i];
  const double c3 = 1.0 / (2 * s.dx * s.dx * s.dx);
  const double c4 = s.epsilon / (s.dx * s.dx * s.dx * s.dx);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const std::size_t j = i + 2;
    const double d3 = w[j + 2] - 2 * w[j + 1] + 2 * w[j - 1] - w[j - 2];
    const double d4 = e[j + 2] - 4 * e[j + 1] + 6 * e[j] - 4 * e[j - 1] + e[j - 2];
    out[i] = c3 * d3 - c4 * d4;
  }
}

double stable_dt(const PdeState& s, double c3, double c4) {
  const double dx3 = s.dx * s.dx * s.dx;
  double dt = c3 * dx3 / std::max(1.0, max_abs(s.u));
  if (s.epsilon > 0) dt = std::min(dt, c4 * dx3 * s.dx / s.epsilon);
  return dt;
}

void step(PdeState& s, double dt, double blowup_threshold) {
  if (!(dt > 0)) fail(ErrorCode::invalid_argument, "dt must be positive");
  const double lim = stable_dt(s);
  if (dt > lim * (1 + 1e-9)) {
    std::ostringstream os;
    os << "dt=" << dt << " exceeds the stability limit " << lim;
    fail(ErrorCode::cfl_violation, os.str());
  }
  rk4(s.u, dt, [&s](const std::vector<double>& u, std::vector<double>& out) {
    spatial_operator(s, u, out);
  });
  s.u.front() = s.pin_left;
  s.u.back() = s.pin_right;
  s.t += dt;
  check_blowup(s.u, blowup_threshold, s.t);
}

double h_minus1_norm(const std::vector<double>& u, double dx) {
  const std::size_t n = u.size();
  if (n < 3) return 0.0;
  // -(g_{i+1} - 2 g_i + g_{i-1}) / dx^2 = u_i on interior nodes, g = 0 at both ends
  const std::size_t m = n - 2;
  std::vector<double> c(m), d(m);
  const double diag = 2.0, off = -1.0;
  for (std::size_t k = 0; k < m; ++k) d[k] = u[k + 1] * dx * dx;
  c[0] = off / diag;
  d[0] = d[0] / diag;
  for (std::size_t k = 1; k < m; ++k) {
    const double den = diag - off * c[k - 1];
    c[k] = off / den;
    d[k] = (d[k] - off * d[k - 1]) / den;
  }
  std::vector<double> g(m);
  g[m - 1] = d[m - 1];
  for (std::size_t k = m - 1; k-- > 0;) g[k] = d[k] - c[k] * g[k + 1];
  double s = 0;
  for (std::size_t k = 0; k < m; ++k) s += g[k] * u[k + 1];
  return std::sqrt(std::max(0.0, s * dx));
}

double h_minus1_norm(const PdeState& s) { return h_minus1_norm(s.u, s.dx); }

Diagnostics diagnose(const PdeState& s) {
  Diagnostics d;
  d.t = s.t;
  const std::size_t n = s.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double piece = 0.5 * s.dx * (s.u[i] + s.u[i + 1]);
    d.mass += piece;
    const double mid = 0.5 * (s.x[i] + s.x[i + 1]);
    (mid < 0 ? d.mass_left : d.mass_right) += piece;
    const double du = s.u[i + 1] - s.u[i];
    d.grad_sq += du * du / s.dx;
  }
  d.sup = max_abs(s.u);
  d.h_minus1 = h_minus1_norm(s);
  return d;
}

EvolveResult evolve(PdeState s, double t_end, const EvolveOptions& opts) {
  if (!(t_end > s.t)) fail(ErrorCode::invalid_argument, "t_end must exceed the current time");
  if (!(opts.dt_safety > 0 && opts.dt_safety <= 1))
    fail(ErrorCode::invalid_argument, "dt_safety must lie in (0, 1]");
  EvolveResult r;
  r.series.push_back(diagnose(s));
  const std::size_t n = s.size();
  const std::vector<double> u_start(s.u);
  auto boundary_moved = [&]() {
    for (std::size_t k = 1; k <= 3 && k + 1 < n; ++k) {
      if (std::fabs(s.u[k] - u_start[k]) > opts.boundary_tolerance) return true;
      if (std::fabs(s.u[n - 1 - k] - u_start[n - 1 - k]) > opts.boundary_tolerance) return true;
    }
    return false;
  };
  double next_record = opts.record_interval > 0 ? s.t + opts.record_interval : t_end;
  const double t_tol = 1e-12 * std::max(1.0, std::fabs(t_end));
  while (t_end - s.t > t_tol) {
    double dt = opts.dt_safety * stable_dt(s);
    bool hits_record = false;
    if (s.t + dt >= next_record - t_tol) {
      dt = next_record - s.t;
      hits_record = true;
    }
    if (dt <= 0) break;
    step(s, dt, opts.blowup_threshold);
    ++r.steps;
    if (hits_record) s.t = next_record;
    if (!r.boundary_arrival && boundary_moved()) r.boundary_arrival = s.t;
    if (hits_record) {
      r.series.push_back(diagnose(s));
      next_record = opts.record_interval > 0 ? std::min(next_record + opts.record_interval, t_end) : t_end;
    }
  }
  if (r.series.back().t != s.t) r.series.push_back(diagnose(s));
  r.state = std::move(s);
  return r;
}

similarity::Profile rescale_to_similarity(const PdeState& s, double T_blowup,
                                          similarity::Branch branch, double z_max, int nz) {
  double scale;
  if (branch == similarity::Branch::blowup) {
    if (!(s.t < T_blowup)) fail(ErrorCode::out_of_window, "state time is not before the blow-up time");
    scale = std::cbrt(T_blowup - s.t);
  } else {
    if (!(s.t > 0)) fail(ErrorCode::out_of_window, "rarefaction rescaling needs t > 0");
    scale = std::cbrt(s.t);
  }
  if (nz < 5 || !(z_max > 0)) fail(ErrorCode::invalid_argument, "need nz >= 5 and z_max > 0");
  if (z_max * scale > s.L - 2 * s.dx) {
    std::ostringstream os;
    os << "z window " << z_max << " maps beyond the spatial domain at t=" << s.t;
    fail(ErrorCode::out_of_window, os.str());
  }
  // cubic Lagrange interpolation of the nodal values
  auto interp = [&s](double xq) {
    const long n = static_cast<long>(s.size());
    long i = static_cast<long>(std::floor((xq + s.L) / s.dx));
    i = std::clamp(i, 1L, n - 3);
    const double t = (xq - s.x[i]) / s.dx;
    const double p0 = s.u[i - 1], p1 = s.u[i], p2 = s.u[i + 1], p3 = s.u[i + 2];
    return p1 + 0.5 * t * (p2 - p0 + t * (2 * p0 - 5 * p1 + 4 * p2 - p3 + t * (3 * (p1 - p2) + p3 - p0)));
  };
  similarity::Profile p;
  p.params = {0.0, branch};
  p.classification = similarity::Classification::bounded_oscillatory;
  const double dz = 2 * z_max / (nz - 1);
  std::vector<double> z(nz), v(nz);
  for (int k = 0; k < nz; ++k) {
    z[k] = -z_max + k * dz;
    v[k] = interp(z[k] * scale);
  }
  auto d = [&](int k, int order) {
    const int i = std::clamp(k, 2, nz - 3);
    switch (order) {
      case 1: return (v[i + 1] - v[i - 1]) / (2 * dz);
      case 2: return (v[i + 1] - 2 * v[i] + v[i - 1]) / (dz * dz);
      default: return (v[i + 2] - 2 * v[i + 1] + 2 * v[i - 1] - v[i - 2]) / (2 * dz * dz * dz);
    }
  };
  for (int k = 0; k < nz; ++k) p.push(z[k], v[k], d(k, 1), d(k, 2), d(k, 3));
  p.origin_slope = p.eval(0.0, 1);
  p.far_limit = v.front();
  p.far_limit_plus = v.back();
  return p;
}

RescaledState make_rescaled(const similarity::Profile& g, double Z, int n, double epsilon) {
  if (n < kMinGrid) fail(ErrorCode::invalid_grid, "rescaled grid too small");
  if (!(Z > 0) || !g.contains(-Z) || !g.contains(Z))
    fail(ErrorCode::out_of_window, "profile does not cover the rescaled window");
  RescaledState s;
  s.dz = 2 * Z / (n - 1);
  s.epsilon = epsilon;
  s.z.resize(n);
  s.v.resize(n);
  for (int i = 0; i < n; ++i) {
    s.z[i] = i < n / 2 ? -Z + i * s.dz : Z - (n - 1 - i) * s.dz;
    if (n % 2 == 1 && i == n / 2) s.z[i] = 0.0;
    s.v[i] = g.eval(s.z[i]);
  }
  s.pin_left = s.v.front();
  s.pin_right = s.v.back();
  return s;
}

void rescaled_operator(const RescaledState& s, const std::vector<double>& v, std::vector<double>& out) {
  const long n = static_cast<long>(v.size());
  out.assign(v.size(), 0.0);
  std::vector<double> w(v.size());
  for (long i = 0; i < n; ++i) w[i] = 0.5 * v[i] * v[i];
  const double dz = s.dz;
  const double c3 = 1.0 / (2 * dz * dz * dz);
  const double c4 = s.epsilon / (dz * dz * dz * dz);
  for (long i = 1; i + 1 < n; ++i) {
    const double d3 = at(w, i + 2) - 2 * w[i + 1] + 2 * w[i - 1] - at(w, i - 2);
    const double d4 = at(v, i + 2) - 4 * v[i + 1] + 6 * v[i] - 4 * v[i - 1] + at(v, i - 2);
    const double d1 = (v[i + 1] - v[i - 1]) / (2 * dz);
    out[i] = c3 * d3 - s.z[i] * d1 / 3.0 - c4 * d4;
  }
}

double rescaled_residual_norm(const RescaledState& s) {
  std::vector<double> r;
  rescaled_operator(s, s.v, r);
  double acc = 0;
  // the two nodes next to each pin use ghost values and are excluded
  for (std::size_t i = 2; i + 2 < r.size(); ++i) acc += r[i] * r[i] * s.dz;
  return std::sqrt(acc);
}

RescaledResult evolve_rescaled(RescaledState s, double tau_end, double window,
                               double record_interval, double blowup_threshold) {
  if (!(tau_end > s.tau)) fail(ErrorCode::invalid_argument, "tau_end must exceed the current tau");
  const std::vector<double> seed(s.v);
  auto distance = [&]() {
    double m = 0;
    for (std::size_t i = 0; i < s.v.size(); ++i)
      if (std::fabs(s.z[i]) <= window) m = std::max(m, std::fabs(s.v[i] - seed[i]));
    return m;
  };
  RescaledResult r;
  r.distances.push_back({s.tau, distance()});
  const double zmax = std::max(std::fabs(s.z.front()), std::fabs(s.z.back()));
  double next = record_interval > 0 ? s.tau + record_interval : tau_end;
  const double tol = 1e-12 * std::max(1.0, std::fabs(tau_end));
  while (tau_end - s.tau > tol) {
    const double dz3 = s.dz * s.dz * s.dz;
    double dt = kC3 * dz3 / std::max(1.0, max_abs(s.v));
    dt = std::min(dt, 0.5 * s.dz / std::max(1e-300, zmax / 3.0));
    if (s.epsilon > 0) dt = std::min(dt, kC4 * dz3 * s.dz / s.epsilon);
    bool rec = false;
    if (s.tau + dt >= next - tol) {
      dt = next - s.tau;
      rec = true;
    }
    rk4(s.v, dt, [&s](const std::vector<double>& v, std::vector<double>& out) {
      rescaled_operator(s, v, out);
    });
    s.v.front() = s.pin_left;
    s.v.back() = s.pin_right;
    s.tau = rec ? next : s.tau + dt;
    check_blowup(s.v, blowup_threshold, s.tau);
    if (rec) {
      r.distances.push_back({s.tau, distance()});
      next = record_interval > 0 ? std::min(next + record_interval, tau_end) : tau_end;
    }
  }
  r.state = std::move(s);
  return r;
}

}  // namespace ndelab::pde
