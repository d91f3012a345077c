#include "core/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace ndelab::similarity {

namespace {

constexpr double kCriticalAlpha = -0.1;
constexpr double kAlphaEps = 1e-14;

double sgn(double x) { return (x > 0) - (x < 0); }

// quintic Hermite coefficients in t = (x - z0)/h on one grid interval
std::array<double, 6> hermite5(double h, double y0, double d0, double s0, double y1, double d1,
                               double s1) {
  const double dy = y1 - y0;
  const double h2 = h * h;
  return {y0,
          h * d0,
          0.5 * h2 * s0,
          10 * dy - 6 * h * d0 - 4 * h * d1 - 1.5 * h2 * s0 + 0.5 * h2 * s1,
          -15 * dy + 8 * h * d0 + 7 * h * d1 + 1.5 * h2 * s0 - h2 * s1,
          6 * dy - 3 * h * d0 - 3 * h * d1 - 0.5 * h2 * s0 + 0.5 * h2 * s1};
}

std::size_t interval_of(const std::vector<double>& z, double x) {
  auto it = std::upper_bound(z.begin(), z.end(), x);
  std::size_t k = static_cast<std::size_t>(it - z.begin());
  if (k == 0) k = 1;
  if (k >= z.size()) k = z.size() - 1;
  return k - 1;
}

bool in_zero_region(const Profile& p, double x) {
  if (!p.interface_z0) return false;
  return p.interface_side > 0 ? x > *p.interface_z0 : x < *p.interface_z0;
}

ode::Rhs make_rhs(double alpha, double nu, Branch branch) {
  return [alpha, nu, branch](double z, const double* y, double* dy) {
    const State3 r = rhs_regularized({y[0], y[1], y[2]}, z, alpha, nu, branch);
    dy[0] = r[0];
    dy[1] = r[1];
    dy[2] = r[2];
  };
}

void append_trajectory(Profile& p, const ode::Trajectory& tr, bool reverse) {
  const std::size_t n = tr.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = reverse ? n - 1 - k : k;
    const double* y = tr.state(i);
    const double* d = tr.derivative(i);
    p.push(tr.time(i), y[0], y[1], y[2], d[2]);
  }
}

std::vector<double> column(const ode::Trajectory& tr, std::size_t c, std::size_t last_n,
                           std::vector<double>* times) {
  const std::size_t n = tr.size();
  const std::size_t from = n > last_n ? n - last_n : 0;
  std::vector<double> out;
  for (std::size_t i = from; i < n; ++i) {
    out.push_back(tr.value(i, c));
    if (times) times->push_back(tr.time(i));
  }
  return out;
}

// classification of one integrated side
Classification classify_side(const ode::Trajectory& tr, double alpha) {
  const double zl = tr.back_time();
  const double gl = tr.value(tr.size() - 1, 0);
  if (tr.termination == ode::Termination::reached_end) {
    if (std::fabs(60.0 * gl / (zl * zl * zl) - 1.0) < 0.05) return Classification::cubic_growth;
    return std::fabs(alpha) < kAlphaEps ? Classification::bounded_oscillatory
                                        : Classification::power_tail;
  }
  std::vector<double> zs;
  const std::vector<double> gs = column(tr, 0, 40, &zs);
  return detect_singularity(zs, gs).classification;
}

bool is_regular(Classification c) {
  return c == Classification::bounded_oscillatory || c == Classification::power_tail;
}

void attach_far_fields(Profile& p, bool left_regular, bool right_regular) {
  auto attempt = [&p](Side side) -> std::optional<double> {
    try {
      return estimate_far_field(p, side).value;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::insufficient_tail) return std::nullopt;
      throw;
    }
  };
  if (left_regular) p.far_limit = attempt(Side::left);
  if (right_regular) p.far_limit_plus = attempt(Side::right);
}

Classification combine(Classification l, std::optional<Classification> r) {
  if (!r) return l;
  for (auto c : {Classification::sqrt_singularity, Classification::finite_interface,
                 Classification::cubic_growth})
    if (l == c || *r == c) return c;
  return l;
}

double rms_relative(const std::vector<double>& res, double scale) {
  double s = 0;
  for (double r : res) s += r * r;
  return std::sqrt(s / static_cast<double>(res.size())) / scale;
}

// least squares y = c0 + c1 x
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double c1 = sxx > 0 ? sxy / sxx : 0.0;
  return {my - c1 * mx, c1};
}

}  // namespace

const char* branch_name(Branch b) { return b == Branch::blowup ? "blowup" : "rarefaction"; }

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::bounded_oscillatory: return "bounded_oscillatory";
    case Classification::cubic_growth: return "cubic_growth";
    case Classification::finite_interface: return "finite_interface";
    case Classification::sqrt_singularity: return "sqrt_singularity";
    case Classification::power_tail: return "power_tail";
  }
  return "unknown";
}

double Profile::eval(double x, int order) const {
  if (order < 0 || order > 3) fail(ErrorCode::invalid_argument, "derivative order must be 0..3");
  if (z.size() < 2 || !(x >= z.front() && x <= z.back())) {
    std::ostringstream os;
    os << "z=" << x << " outside profile grid";
    fail(ErrorCode::out_of_domain, os.str());
  }
  if (in_zero_region(*this, x)) return 0.0;
  const std::size_t i = interval_of(z, x);
  const double h = z[i + 1] - z[i];
  const double t = (x - z[i]) / h;
  auto a = hermite5(h, g[i], dg[i], d2g[i], g[i + 1], dg[i + 1], d2g[i + 1]);
  for (int k = 0; k < order; ++k)
    for (int j = 0; j < 5 - k; ++j) a[j] = a[j + 1] * (j + 1);
  double r = 0;
  for (int j = 5 - order; j >= 0; --j) r = r * t + a[j];
  return r / std::pow(h, order);
}

std::vector<double> Profile::eval(const std::vector<double>& xs, int order) const {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = eval(xs[i], order);
  return out;
}

double Profile::integral(double a, double b) const {
  if (a == b) return 0.0;
  if (a > b) return -integral(b, a);
  if (!contains(a) || !contains(b)) fail(ErrorCode::out_of_domain, "integral outside profile grid");
  double total = 0;
  std::size_t i = interval_of(z, a);
  for (; i + 1 < z.size() && z[i] < b; ++i) {
    const double lo = std::max(a, z[i]), hi = std::min(b, z[i + 1]);
    if (hi <= lo) continue;
    const double mid = 0.5 * (lo + hi);
    if (in_zero_region(*this, mid)) continue;
    const double h = z[i + 1] - z[i];
    const auto c = hermite5(h, g[i], dg[i], d2g[i], g[i + 1], dg[i + 1], d2g[i + 1]);
    const double ta = (lo - z[i]) / h, tb = (hi - z[i]) / h;
    double pa = 0, pb = 0;
    for (int j = 5; j >= 0; --j) {
      pa = pa * ta + c[j] / (j + 1);
      pb = pb * tb + c[j] / (j + 1);
    }
    total += h * (pb * tb - pa * ta);
  }
  return total;
}

void Profile::push(double zz, double gg, double d1, double d2, double d3) {
  z.push_back(zz);
  g.push_back(gg);
  dg.push_back(d1);
  d2g.push_back(d2);
  d3g.push_back(d3);
}

void Profile::validate() const {
  const std::size_t n = z.size();
  if (n < 2 || g.size() != n || dg.size() != n || d2g.size() != n || d3g.size() != n)
    fail(ErrorCode::invalid_argument, "profile arrays must have equal length >= 2");
  for (std::size_t i = 1; i < n; ++i)
    if (!(z[i] > z[i - 1])) fail(ErrorCode::invalid_argument, "profile grid not strictly ascending");
}

State3 rhs_regularized(const State3& s, double z, double alpha, double nu, Branch branch) {
  const double g = s[0], g1 = s[1], g2 = s[2];
  const double beta = (1.0 + alpha) / 3.0;
  const double k = sgn(g) / std::sqrt(nu * nu + g * g);
  const double drive = branch == Branch::blowup ? beta * g1 * z - alpha * g
                                                : -beta * g1 * z + alpha * g;
  return {g1, g2, k * (drive - 3.0 * g1 * g2)};
}

double ode_residual(double g, double dg, double d2g, double d3g, double z, double alpha,
                    Branch branch) {
  const double beta = (1.0 + alpha) / 3.0;
  const double flux2 = g * d3g + 3.0 * dg * d2g;
  return branch == Branch::blowup ? flux2 - beta * dg * z + alpha * g
                                  : flux2 + beta * dg * z - alpha * g;
}

double origin_series(double C, double z, double alpha) {
  return origin_series_state(C, z, alpha)[0];
}

State3 origin_series_state(double C, double z, double alpha) {
  if (C == 0.0) fail(ErrorCode::domain_error, "origin series needs C != 0");
  const double b3 = (1.0 - 2.0 * alpha) / 72.0;
  const double b5 = (b3 - 60.0 * b3 * b3) / (120.0 * C);
  const double z2 = z * z;
  return {z * (C + z2 * (b3 + z2 * b5)), C + z2 * (3 * b3 + 5 * b5 * z2), z * (6 * b3 + 20 * b5 * z2)};
}

Profile shoot_from_origin(double alpha, double C, const ode::OdeSettings& settings,
                          const ShotRange& range) {
  settings.validate();
  if (!(alpha > -1.0)) fail(ErrorCode::domain_error, "alpha must exceed -1");
  if (C == 0.0 || !std::isfinite(C)) fail(ErrorCode::domain_error, "origin slope must be nonzero");
  if (!(range.z_left < -kOriginOffset)) fail(ErrorCode::invalid_argument, "z_left must be negative");
  const auto rhs = make_rhs(alpha, settings.nu, Branch::blowup);
  const double d = kOriginOffset;

  const auto s0 = origin_series_state(C, -d, alpha);
  const auto left = ode::integrate(rhs, {s0[0], s0[1], s0[2]}, -d, range.z_left, settings);

  Profile p;
  p.params = {alpha, Branch::blowup};
  p.origin_slope = C;
  append_trajectory(p, left, true);
  p.push(0.0, 0.0, C, 0.0, 6.0 * (1.0 - 2.0 * alpha) / 72.0);

  const Classification lc = classify_side(left, alpha);
  std::optional<Classification> rc;
  if (range.z_right > d) {
    const auto s1 = origin_series_state(C, d, alpha);
    const auto right = ode::integrate(rhs, {s1[0], s1[1], s1[2]}, d, range.z_right, settings);
    append_trajectory(p, right, false);
    rc = classify_side(right, alpha);
  }
  p.classification = combine(lc, rc);
  attach_far_fields(p, is_regular(lc), rc && is_regular(*rc));
  return p;
}

Profile shoot_profile(double alpha, double target_limit, const ode::OdeSettings& settings) {
  if (!(target_limit > 0) || !std::isfinite(target_limit))
    fail(ErrorCode::invalid_argument, "target limit must be positive");
  if (alpha < kCriticalAlpha - kAlphaEps) {
    std::ostringstream os;
    os << "alpha=" << alpha << " < -1/10: every orbit ends at a square-root zero";
    fail(ErrorCode::complete_blowup, os.str());
  }
  if (std::fabs(alpha - kCriticalAlpha) <= kAlphaEps)
    fail(ErrorCode::shooting_failed,
         "alpha=-1/10 is critical: the orbit is the piecewise-cubic saw with no far limit");

  ShotRange range;
  std::optional<double> ell;
  for (double cut : {kFarCut, 2 * kFarCut}) {
    range = {cut, -cut};
    const Profile unit = shoot_from_origin(alpha, -1.0, settings, range);
    if (is_regular(unit.classification) && unit.far_limit && *unit.far_limit > 0) {
      ell = unit.far_limit;
      break;
    }
  }
  if (!ell) fail(ErrorCode::shooting_failed, "no bounded far-field limit for the unit shot");

  const double p = SimilarityParams{alpha, Branch::blowup}.tail_power();
  const double a = std::pow(target_limit / *ell, 1.0 / (3.0 - p));
  Profile out = shoot_from_origin(alpha, -a * a, settings, range);
  if (!out.far_limit) fail(ErrorCode::shooting_failed, "rescaled shot lost its far-field limit");
  return out;
}

Profile rescale_profile(const Profile& p, double a) {
  if (a == 0.0 || !std::isfinite(a)) fail(ErrorCode::invalid_argument, "scale factor must be nonzero");
  const double a2 = a * a, a3 = a2 * a;
  const double pw = p.params.tail_power();
  const double far = a3 * std::pow(std::fabs(a), -pw);
  Profile q;
  q.params = p.params;
  q.classification = p.classification;
  q.origin_slope = a2 * p.origin_slope;
  const std::size_t n = p.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = a > 0 ? k : n - 1 - k;
    q.push(a * p.z[i], a3 * p.g[i], a2 * p.dg[i], a * p.d2g[i], p.d3g[i]);
  }
  auto scaled = [far](const std::optional<double>& v) -> std::optional<double> {
    if (!v) return std::nullopt;
    return far * *v;
  };
  if (a > 0) {
    q.far_limit = scaled(p.far_limit);
    q.far_limit_plus = scaled(p.far_limit_plus);
  } else {
    q.far_limit = scaled(p.far_limit_plus);
    q.far_limit_plus = scaled(p.far_limit);
  }
  if (p.interface_z0) {
    q.interface_z0 = a * *p.interface_z0;
    q.interface_side = a > 0 ? p.interface_side : -p.interface_side;
  }
  return q;
}

Profile reflect_to_rarefaction(const Profile& p) {
  Profile q;
  q.params = p.params;
  q.params.branch = p.params.branch == Branch::blowup ? Branch::rarefaction : Branch::blowup;
  q.classification = p.classification;
  q.origin_slope = -p.origin_slope;
  const std::size_t n = p.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = n - 1 - k;
    q.push(-p.z[i], p.g[i], -p.dg[i], p.d2g[i], -p.d3g[i]);
  }
  q.far_limit = p.far_limit_plus;
  q.far_limit_plus = p.far_limit;
  if (p.interface_z0) {
    q.interface_z0 = -*p.interface_z0;
    q.interface_side = -p.interface_side;
  }
  return q;
}

std::vector<Extremum> tail_extrema(const Profile& p, Side side) {
  const double pw = p.params.tail_power();
  auto q = [&p, pw](double x) { return p.eval(x, 1) - pw * p.eval(x, 0) / x; };
  auto qn = [&p, pw](std::size_t i) { return p.dg[i] - pw * p.g[i] / p.z[i]; };
  std::vector<Extremum> out;
  const std::size_t n = p.size();
  auto consider = [&](std::size_t i, std::size_t j) {
    const double a = qn(i), b = qn(j);
    if (a == 0.0 || a * b > 0) return;
    const double lo = std::min(p.z[i], p.z[j]), hi = std::max(p.z[i], p.z[j]);
    const double x = b == 0.0 ? p.z[j] : ode::find_root(q, lo, hi, 1e-13 * std::max(1.0, std::fabs(hi)));
    out.push_back({x, p.eval(x) * std::pow(std::fabs(x), -pw)});
  };
  if (side == Side::left) {
    std::size_t start = n - 1;
    while (start > 0 && p.z[start] > -1.0) --start;
    for (std::size_t i = start; i > 0; --i) consider(i, i - 1);
  } else {
    std::size_t start = 0;
    while (start + 1 < n && p.z[start] < 1.0) ++start;
    for (std::size_t i = start; i + 1 < n; ++i) consider(i, i + 1);
  }
  return out;
}

namespace {

double window_mean(const Profile& p, double a, double b) {
  if (a > b) std::swap(a, b);
  const double pw = p.params.tail_power();
  if (pw == 0.0) return p.integral(a, b) / (b - a);
  static const double xg[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                               0.9061798459386640};
  static const double wg[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                               0.4786286704993665, 0.2369268850561891};
  double total = 0;
  std::size_t i = interval_of(p.z, a);
  for (; i + 1 < p.size() && p.z[i] < b; ++i) {
    const double lo = std::max(a, p.z[i]), hi = std::min(b, p.z[i + 1]);
    if (hi <= lo) continue;
    const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    for (int k = 0; k < 5; ++k) {
      const double x = c + r * xg[k];
      total += r * wg[k] * p.eval(x) * std::pow(std::fabs(x), -pw);
    }
  }
  return total / (b - a);
}

}  // namespace

FarFieldEstimate estimate_far_field(const Profile& p, Side side, int periods) {
  if (periods < 3) fail(ErrorCode::invalid_argument, "need at least 3 periods");
  const auto ext = tail_extrema(p, side);
  const int ne = static_cast<int>(ext.size());
  if (ne < 7) {
    // a flat tail (constant profile) has no oscillation but a well defined limit
    const double zend = side == Side::left ? p.z_min() : p.z_max();
    if (std::fabs(zend) >= 2.0) {
      const double a = zend, b = 0.5 * zend;
      double tv = 0, lo = std::min(a, b), hi = std::max(a, b), ref = 0;
      std::size_t cnt = 0;
      for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        if (p.z[i] < lo || p.z[i + 1] > hi) continue;
        tv += std::fabs(p.g[i + 1] - p.g[i]);
        ref += std::fabs(p.g[i]);
        ++cnt;
      }
      if (cnt > 0 && tv <= 1e-9 * (ref / static_cast<double>(cnt) + 1.0))
        return {window_mean(p, lo, hi), 0, std::fabs(b), std::fabs(a)};
    }
    std::ostringstream os;
    os << "only " << ne << " tail extrema resolved; need 7 for 3 periods";
    fail(ErrorCode::insufficient_tail, os.str());
  }
  const int k = std::min(periods, (ne - 2) / 2);
  const Extremum& a0 = ext[ne - 1 - 2 * k];
  const Extremum& a1 = ext[ne - 1];
  const Extremum& b0 = ext[ne - 2 - 2 * k];
  const Extremum& b1 = ext[ne - 2];
  const double m = 0.5 * (window_mean(p, a0.z, a1.z) + window_mean(p, b0.z, b1.z));
  return {m, k, std::fabs(b0.z), std::fabs(a1.z)};
}

double estimate_far_field_limit(const Profile& p) { return estimate_far_field(p, Side::left).value; }

Profile interface_profile(double alpha, double z0, const ode::OdeSettings& settings, double z_left) {
  settings.validate();
  if (!(z0 > 0) || !std::isfinite(z0)) fail(ErrorCode::invalid_argument, "z0 must be positive");
  if (!(alpha > -1.0)) fail(ErrorCode::domain_error, "alpha must exceed -1");
  if (!(z_left < 0)) fail(ErrorCode::invalid_argument, "z_left must be negative");
  const double A = (1.0 + alpha) * z0 / 18.0;
  const double B = (2.0 - alpha) / 126.0;
  const double d = 1e-3 * z0;
  const double s = -d;
  const auto rhs = make_rhs(alpha, settings.nu, Branch::blowup);
  const auto tr = ode::integrate(rhs, {A * s * s + B * s * s * s, 2 * A * s + 3 * B * s * s, 2 * A + 6 * B * s},
                                 z0 - d, z_left, settings);
  if (tr.termination != ode::Termination::reached_end) {
    std::ostringstream os;
    os << "interface orbit from z0=" << z0 << " stopped at z=" << tr.back_time() << " ("
       << ode::termination_name(tr.termination) << ")";
    fail(ErrorCode::blowup_detected, os.str());
  }
  Profile p;
  p.params = {alpha, Branch::blowup};
  append_trajectory(p, tr, true);
  p.push(z0, 0.0, 0.0, 2 * A, 6 * B);
  const double zr = std::max(-z_left, z0 + 1.0);
  const int nr = std::max(4, static_cast<int>(std::ceil((zr - z0) / 0.5)));
  for (int j = 1; j <= nr; ++j) p.push(z0 + (zr - z0) * j / nr, 0.0, 0.0, 0.0, 0.0);
  p.interface_z0 = z0;
  p.interface_side = 1;
  p.classification = Classification::finite_interface;
  const Classification lc = classify_side(tr, alpha);
  attach_far_fields(p, is_regular(lc), false);
  p.far_limit_plus = 0.0;
  p.origin_slope = p.eval(0.0, 1);
  return p;
}

HeavisideResult solve_heaviside(const ode::OdeSettings& settings) {
  const Profile unit = interface_profile(0.0, 1.0, settings);
  if (!unit.far_limit || !(*unit.far_limit > 0))
    fail(ErrorCode::shooting_failed, "interface orbit has no positive far limit");
  const double a = std::cbrt(1.0 / *unit.far_limit);
  HeavisideResult r;
  r.profile = rescale_profile(unit, a);
  r.z0 = a;
  r.H0 = r.profile.eval(0.0);
  return r;
}

Profile singular_point_family(double z0, double C, const ode::OdeSettings& settings,
                              const ShotRange& range) {
  settings.validate();
  if (!(z0 > 0) || !std::isfinite(z0)) fail(ErrorCode::invalid_argument, "z0 must be positive");
  if (C > 0 || !std::isfinite(C)) fail(ErrorCode::invalid_argument, "C must be negative");
  if (C == 0.0) return interface_profile(0.0, z0, settings, range.z_left);
  if (!(range.z_left < z0)) fail(ErrorCode::invalid_argument, "z_left must lie left of z0");
  const double A = z0 / 18.0, B = 1.0 / 72.0;
  const double d = 1e-3 * z0;
  const auto rhs = make_rhs(0.0, settings.nu, Branch::blowup);
  auto seed = [&](double s) -> ode::State {
    return {C * s + A * s * s + B * s * s * s, C + 2 * A * s + 3 * B * s * s, 2 * A + 6 * B * s};
  };
  auto check = [&](const ode::Trajectory& tr) {
    if (tr.termination == ode::Termination::blowup_detected ||
        tr.termination == ode::Termination::step_underflow) {
      std::ostringstream os;
      os << "orbit through z0=" << z0 << " with C=" << C << " stopped at z=" << tr.back_time()
         << " (" << ode::termination_name(tr.termination) << ")";
      fail(ErrorCode::blowup_detected, os.str());
    }
  };
  const auto left = ode::integrate(rhs, seed(-d), z0 - d, range.z_left, settings);
  check(left);
  Profile p;
  p.params = {0.0, Branch::blowup};
  append_trajectory(p, left, true);
  p.push(z0, 0.0, C, 2 * A, 6 * B);
  const Classification lc = classify_side(left, 0.0);
  std::optional<Classification> rc;
  if (range.z_right > z0 + d) {
    const auto right = ode::integrate(rhs, seed(d), z0 + d, range.z_right, settings);
    check(right);
    append_trajectory(p, right, false);
    rc = classify_side(right, 0.0);
  }
  p.classification = combine(lc, rc);
  attach_far_fields(p, is_regular(lc), rc && is_regular(*rc));
  if (p.contains(0.0)) p.origin_slope = p.eval(0.0, 1);
  return p;
}

SingularityReport detect_singularity(const std::vector<double>& z, const std::vector<double>& g) {
  const std::size_t n = z.size();
  if (n < 5 || g.size() != n) fail(ErrorCode::insufficient_samples, "need at least 5 samples");
  double gmax = 0;
  for (double v : g) gmax = std::max(gmax, std::fabs(v));
  {
    bool cubic = true;
    for (std::size_t i = n - 3; i < n; ++i)
      if (z[i] == 0 || !(std::fabs(60.0 * g[i] / (z[i] * z[i] * z[i]) - 1.0) < 0.05)) cubic = false;
    if (cubic) {
      const double zl = z.back();
      return {Classification::cubic_growth, 0.0, g.back() / (zl * zl * zl), 0.0};
    }
  }
  const double zspan = std::fabs(z.back() - z.front());
  // the contact point must sit at or beyond the end where |g| is smallest
  const bool small_at_back = std::fabs(g.back()) <= std::fabs(g.front());
  const double z_small = small_at_back ? z.back() : z.front();
  const double z_large = small_at_back ? z.front() : z.back();
  auto endpoint_consistent = [&](double zc) {
    const double outward = (zc - z_small) * (z_small > z_large ? 1.0 : -1.0);
    return std::isfinite(zc) && outward >= -0.1 * zspan;
  };
  bool approaching_zero = gmax > 0;
  for (std::size_t i = 1; i < n && approaching_zero; ++i) {
    if (g[i] * g.front() <= 0) approaching_zero = false;
    const double step = std::fabs(g[i]) - std::fabs(g[i - 1]);
    if (small_at_back ? step > 0 : step < 0) approaching_zero = false;
  }
  if (!approaching_zero) fail(ErrorCode::unclassified, "no singularity model fits the samples");

  std::vector<double> g2(n);
  for (std::size_t i = 0; i < n; ++i) g2[i] = g[i] * g[i];
  {
    const auto [c0, c1] = linear_fit(z, g2);
    std::vector<double> res(n);
    for (std::size_t i = 0; i < n; ++i) res[i] = g2[i] - (c0 + c1 * z[i]);
    const double rms = rms_relative(res, gmax * gmax);
    const double zc = c1 != 0 ? -c0 / c1 : NAN;
    if (rms < 1e-3 && endpoint_consistent(zc))
      return {Classification::sqrt_singularity, zc, sgn(g.front()) * std::sqrt(std::fabs(c1)), rms};
  }
  {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = std::sqrt(std::fabs(g[i]));
    const auto [c0, c1] = linear_fit(z, r);
    std::vector<double> res(n);
    for (std::size_t i = 0; i < n; ++i) res[i] = r[i] - (c0 + c1 * z[i]);
    const double rms = rms_relative(res, std::sqrt(gmax));
    const double zc = c1 != 0 ? -c0 / c1 : NAN;
    if (rms < 1e-3 && endpoint_consistent(zc))
      return {Classification::finite_interface, zc, sgn(g.front()) * c1 * c1, rms};
  }
  fail(ErrorCode::unclassified, "no singularity model fits the samples");
}

double final_time_profile(double alpha, double C_minus, double C_plus, double x) {
  if (!(alpha > kCriticalAlpha)) fail(ErrorCode::domain_error, "alpha must exceed -1/10");
  const double p = 3.0 * alpha / (1.0 + alpha);
  if (x == 0.0) {
    if (p < 0) fail(ErrorCode::singular_at_origin, "final-time profile is unbounded at x=0");
    if (p > 0) return 0.0;
    return 0.5 * (C_minus + C_plus);
  }
  return (x < 0 ? C_minus : C_plus) * std::pow(std::fabs(x), p);
}

}  // namespace ndelab::similarity
