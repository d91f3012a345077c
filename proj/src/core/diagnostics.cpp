#include "core/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "core/error.hpp"

namespace ndelab::diag {

namespace {

using std::numbers::pi;

struct Extremum {
  double z;
  double r;
};

// extrema of the sampled residual, ordered by increasing |z|
std::vector<Extremum> sample_extrema(const std::vector<double>& z, const std::vector<double>& r) {
  std::vector<Extremum> e;
  for (std::size_t i = 1; i + 1 < z.size(); ++i) {
    const double a = r[i] - r[i - 1], b = r[i + 1] - r[i];
    if (a * b < 0 || (a != 0 && b == 0)) {
      // parabola through three samples
      const double z0 = z[i - 1], z1 = z[i], z2 = z[i + 1];
      const double r0 = r[i - 1], r1 = r[i], r2 = r[i + 1];
      const double den = (z0 - z1) * (z0 - z2) * (z1 - z2);
      const double A = (z2 * (r1 - r0) + z1 * (r0 - r2) + z0 * (r2 - r1)) / den;
      const double B = (z2 * z2 * (r0 - r1) + z1 * z1 * (r2 - r0) + z0 * z0 * (r1 - r2)) / den;
      const double C = (z1 * z2 * (z1 - z2) * r0 + z2 * z0 * (z2 - z0) * r1 + z0 * z1 * (z0 - z1) * r2) / den;
      const double zv = A != 0 ? -B / (2 * A) : z1;
      e.push_back({zv, A != 0 ? C - B * B / (4 * A) : r1});
    }
  }
  std::sort(e.begin(), e.end(), [](const Extremum& x, const Extremum& y) { return std::fabs(x.z) < std::fabs(y.z); });
  return e;
}

double wrap_phase(double p) {
  p = std::fmod(p, 2 * pi);
  if (p <= -pi) p += 2 * pi;
  if (p > pi) p -= 2 * pi;
  return p;
}

std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {(sy - slope * sx) / n, slope};
}

}  // namespace

AiryTailFit airy_tail_fit(const std::vector<double>& z, const std::vector<double>& g, double limit_guess) {
  const std::size_t n = z.size();
  if (n != g.size() || n < 20) fail(ErrorCode::insufficient_tail, "too few tail samples");
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(z[i] < 0)) fail(ErrorCode::invalid_argument, "tail samples must have z < 0");
    r[i] = g[i] - limit_guess;
  }
  const auto ext = sample_extrema(z, r);
  if (ext.size() < 5) {
    std::ostringstream os;
    os << "only " << ext.size() << " tail extrema; need 5";
    fail(ErrorCode::insufficient_tail, os.str());
  }
  // initial guess from peak picking
  std::vector<double> s, ph, lz, la;
  for (std::size_t k = 0; k < ext.size(); ++k) {
    s.push_back(std::pow(std::fabs(ext[k].z), 1.5));
    ph.push_back(pi * static_cast<double>(k));
    lz.push_back(std::log(std::fabs(ext[k].z)));
    la.push_back(std::log(std::fabs(ext[k].r)));
  }
  const double a_init = line_fit(s, ph).second;
  const auto [lc, d_init] = line_fit(lz, la);
  const double phi_init = -a_init * s[0] + (ext[0].r > 0 ? 0.0 : pi);

  Eigen::Matrix<double, 5, 1> th;
  th << limit_guess, std::exp(lc), d_init, a_init, phi_init;
  auto residuals = [&](const Eigen::Matrix<double, 5, 1>& p, Eigen::VectorXd& res,
                       Eigen::Matrix<double, Eigen::Dynamic, 5>* J) {
    res.resize(static_cast<long>(n));
    if (J) J->resize(static_cast<long>(n), 5);
    for (std::size_t i = 0; i < n; ++i) {
      const double az = std::fabs(z[i]);
      const double w = std::pow(az, p(2));
      const double sp = std::pow(az, 1.5);
      const double arg = p(3) * sp + p(4);
      const double cs = std::cos(arg), sn = std::sin(arg);
      const long ii = static_cast<long>(i);
      res(ii) = g[i] - p(0) - p(1) * w * cs;
      if (J) {
        (*J)(ii, 0) = -1.0;
        (*J)(ii, 1) = -w * cs;
        (*J)(ii, 2) = -p(1) * w * std::log(az) * cs;
        (*J)(ii, 3) = p(1) * w * sn * sp;
        (*J)(ii, 4) = p(1) * w * sn;
      }
    }
  };
  Eigen::VectorXd res, trial;
  Eigen::Matrix<double, Eigen::Dynamic, 5> J;
  residuals(th, res, &J);
  double cost = res.squaredNorm();
  double lambda = 1e-3;
  for (int it = 0; it < 500; ++it) {
    const Eigen::Matrix<double, 5, 5> H = J.transpose() * J;
    const Eigen::Matrix<double, 5, 1> grad = J.transpose() * res;
    Eigen::Matrix<double, 5, 5> A = H;
    for (int k = 0; k < 5; ++k) A(k, k) += lambda * std::max(H(k, k), 1e-300);
    const Eigen::Matrix<double, 5, 1> step = A.ldlt().solve(-grad);
    const Eigen::Matrix<double, 5, 1> cand = th + step;
    residuals(cand, trial, nullptr);
    const double c2 = trial.squaredNorm();
    if (std::isfinite(c2) && c2 < cost) {
      const double rel = (cost - c2) / cost;
      th = cand;
      residuals(th, res, &J);
      cost = c2;
      lambda = std::max(lambda / 10, 1e-12);
      if (rel < 1e-14 && step.norm() < 1e-12 * (1 + th.norm())) break;
    } else {
      lambda *= 10;
      if (lambda > 1e12) break;
    }
  }
  AiryTailFit f;
  f.limit = th(0);
  f.c = th(1);
  f.decay_exp = th(2);
  f.a0_fit = th(3);
  f.c0_fit = th(4);
  if (f.c < 0) {
    f.c = -f.c;
    f.c0_fit += pi;
  }
  f.c0_fit = wrap_phase(f.c0_fit);
  f.residual = std::sqrt(cost / static_cast<double>(n));
  f.extrema = static_cast<int>(ext.size());
  f.z_start = std::fabs(z.back());
  f.z_end = std::fabs(z.front());
  for (double v : z) {
    f.z_start = std::min(f.z_start, std::fabs(v));
    f.z_end = std::max(f.z_end, std::fabs(v));
  }
  return f;
}

AiryTailFit airy_tail_fit(const similarity::Profile& p, double z_start, std::optional<double> z_end) {
  const double zmax = z_end ? *z_end : -p.z_min();
  if (!(z_start > 0) || !(zmax > z_start) || !p.contains(-zmax))
    fail(ErrorCode::insufficient_tail, "profile does not reach the requested tail window");
  const double limit = p.far_limit ? *p.far_limit : similarity::estimate_far_field_limit(p);
  const double h = 0.01;
  const int m = static_cast<int>(std::ceil((zmax - z_start) / h));
  std::vector<double> z(m + 1), g(m + 1);
  for (int i = 0; i <= m; ++i) {
    z[i] = -zmax + (zmax - z_start) * i / m;
    g[i] = p.eval(z[i]);
  }
  return airy_tail_fit(z, g, limit);
}

double total_variation(const similarity::Profile& p, double z_lo, double z_hi) {
  if (z_lo > z_hi) std::swap(z_lo, z_hi);
  if (z_lo < p.z_min() || z_hi > p.z_max()) fail(ErrorCode::out_of_domain, "window outside profile grid");
  double tv = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    if (p.z[i] >= z_lo && p.z[i] < z_hi) tv += std::fabs(p.g[i + 1] - p.g[i]);
  return tv;
}

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorCode::insufficient_samples, "power fit needs 2 points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) fail(ErrorCode::domain_error, "power fit needs positive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const auto [icpt, slope] = line_fit(lx, ly);
  return {slope, std::exp(icpt), x, y};
}

namespace {

std::vector<double> geometric(double a, double b, int count) {
  if (!(a > 0) || !(b > a) || count < 2) fail(ErrorCode::invalid_argument, "bad geometric range");
  std::vector<double> v(count);
  for (int k = 0; k < count; ++k) v[k] = a * std::pow(b / a, static_cast<double>(k) / (count - 1));
  return v;
}

}  // namespace

PowerFit tv_growth(const similarity::Profile& p, double z_min, double z_max, int count) {
  const auto Z = geometric(z_min, z_max, count);
  std::vector<double> tv;
  for (double zz : Z) tv.push_back(total_variation(p, -zz, 0.0));
  return fit_power_law(Z, tv);
}

PowerFit convergence_rate(const Evaluator& g, double l, double z_min, double z_max, int count) {
  if (!(l > 0)) fail(ErrorCode::invalid_argument, "window length must be positive");
  static const double xg[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
  static const double wg[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
  const auto Z = geometric(z_min, z_max, count);
  std::vector<double> mt, I;
  for (double zz : Z) {
    const double mtk = std::pow(l / zz, 3.0);  // -t
    // I = (-t)^(1/3) int_{-Z}^{0} |g(z) - 1| dz
    const int cells = static_cast<int>(std::ceil(zz / 0.005));
    const double h = zz / cells;
    double acc = 0;
    for (int c = 0; c < cells; ++c) {
      const double mid = -zz + (c + 0.5) * h;
      for (int k = 0; k < 4; ++k) acc += 0.5 * h * wg[k] * std::fabs(g(mid + 0.5 * h * xg[k]) - 1.0);
    }
    mt.push_back(mtk);
    I.push_back(std::cbrt(mtk) * acc);
  }
  bool all_zero = true;
  for (double v : I)
    if (v != 0.0) all_zero = false;
  if (all_zero) return {0.0, 0.0, mt, I};
  return fit_power_law(mt, I);
}

PowerFit convergence_rate(const similarity::Profile& p, double l, double z_min, double z_max, int count) {
  if (!p.contains(-z_max)) fail(ErrorCode::out_of_domain, "profile does not reach -z_max");
  return convergence_rate([&p](double z) { return p.eval(z); }, l, z_min, z_max, count);
}

std::array<std::complex<double>, 3> dispersion_eigenvalues(double u, double epsilon) {
  if (epsilon == 0.0) fail(ErrorCode::invalid_argument, "epsilon must be nonzero");
  const double r = std::cbrt(u / (epsilon * epsilon));
  const std::complex<double> w = std::polar(1.0, 2 * pi / 3);
  return {std::complex<double>(r, 0.0), r * w, r * std::conj(w)};
}

AdmissibilityReport g_admissibility_report(const Evaluator& target, const Family& family,
                                           const std::vector<double>& params, double window_lo,
                                           double window_hi, int samples, double tolerance) {
  if (!(window_hi > window_lo) || samples < 3) fail(ErrorCode::invalid_argument, "bad comparison window");
  AdmissibilityReport rep;
  rep.window_lo = window_lo;
  rep.window_hi = window_hi;
  rep.tolerance = tolerance;
  std::vector<double> zs(samples), tv(samples);
  const double h = (window_hi - window_lo) / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    zs[i] = window_lo + i * h;
    tv[i] = target(zs[i]);
  }
  bool failed = false;
  for (double prm : params) {
    AdmissibilityRow row;
    row.param = prm;
    try {
      const Evaluator member = family(prm);
      double sup = 0, l1 = 0, prev = 0;
      for (int i = 0; i < samples; ++i) {
        const double d = std::fabs(member(zs[i]) - tv[i]);
        sup = std::max(sup, d);
        if (i > 0) l1 += 0.5 * h * (d + prev);
        prev = d;
      }
      row.sup = sup;
      row.l1 = l1;
      if (!std::isfinite(sup)) {
        row.status = "non_finite";
        failed = true;
      }
    } catch (const Error& e) {
      row.status = error_name(e.code());
      row.sup = row.l1 = std::numeric_limits<double>::infinity();
      failed = true;
    }
    rep.rows.push_back(row);
  }
  rep.monotone = !failed && !rep.rows.empty();
  for (std::size_t k = 1; k < rep.rows.size(); ++k)
    if (!(rep.rows[k].sup < rep.rows[k - 1].sup)) rep.monotone = false;
  rep.converged = rep.monotone && rep.rows.back().sup < tolerance;
  rep.verdict = rep.converged ? "numerically G-admissible" : "non_convergent";
  return rep;
}

}  // namespace ndelab::diag
