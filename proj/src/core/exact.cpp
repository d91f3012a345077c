#include "core/exact.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"
#include "core/ode.hpp"

namespace ndelab::exact {

double CubicPiece::eval(double z, int order) const {
  switch (order) {
    case 0: return c[0] + z * (c[1] + z * (c[2] + z * c[3]));
    case 1: return c[1] + z * (2 * c[2] + 3 * z * c[3]);
    case 2: return 2 * c[2] + 6 * z * c[3];
    case 3: return 6 * c[3];
    default: return 0.0;
  }
}

PiecewiseCubic::PiecewiseCubic(std::vector<CubicPiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) fail(ErrorCode::invalid_argument, "piecewise cubic needs a piece");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (!(pieces_[i].z_left < pieces_[i].z_right))
      fail(ErrorCode::invalid_argument, "piece with empty interval");
    if (i > 0 && pieces_[i].z_left != pieces_[i - 1].z_right)
      fail(ErrorCode::invalid_argument, "pieces are not contiguous");
  }
}

std::vector<double> PiecewiseCubic::breakpoints() const {
  std::vector<double> b;
  for (std::size_t i = 1; i < pieces_.size(); ++i) b.push_back(pieces_[i].z_left);
  return b;
}

const CubicPiece& PiecewiseCubic::piece_at(double z) const {
  if (!(z >= z_min() && z <= z_max())) {
    std::ostringstream os;
    os << "z=" << z << " outside [" << z_min() << ", " << z_max() << "]";
    fail(ErrorCode::out_of_domain, os.str());
  }
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), z,
                             [](double v, const CubicPiece& p) { return v < p.z_left; });
  std::size_t k = static_cast<std::size_t>(it - pieces_.begin());
  return pieces_[k == 0 ? 0 : k - 1];
}

double PiecewiseCubic::eval(double z, int order, bool from_left) const {
  const CubicPiece* p = &piece_at(z);
  if (from_left && z == p->z_left && p != &pieces_.front()) --p;
  return p->eval(z, order);
}

PiecewiseCubic invariant_cubic_I(double C0, double C1, double z_left, double z_right) {
  return PiecewiseCubic({{z_left, z_right, {C0, C1, 0.0, 1.0 / 60.0}}});
}

PiecewiseCubic invariant_cubic_II(double C2, double z_left, double z_right) {
  return PiecewiseCubic(
      {{z_left, z_right, {400.0 / 3.0 * C2 * C2 * C2, 20.0 * C2 * C2, C2, 1.0 / 60.0}}});
}

double residual(const CubicPiece& piece, double alpha, double z) {
  return similarity::ode_residual(piece.eval(z), piece.eval(z, 1), piece.eval(z, 2),
                                  piece.eval(z, 3), z, alpha);
}

double residual(const PiecewiseCubic& g, double alpha, double z) {
  return residual(g.piece_at(z), alpha, z);
}

double residual(const similarity::Profile& p, double alpha, double z) {
  return similarity::ode_residual(p.eval(z), p.eval(z, 1), p.eval(z, 2), p.eval(z, 3), z, alpha,
                                  p.params.branch);
}

namespace {

// first zero of the cubic left of z_start, where the cubic is positive just left of z_start
double next_zero_left(const std::array<double, 4>& c, double z_start, double scale) {
  auto f = [&c](double z) { return c[0] + z * (c[1] + z * (c[2] + z * c[3])); };
  const double h = 1e-3 * scale;
  double hi = z_start - h;
  if (!(f(hi) > 0)) fail(ErrorCode::root_not_found, "hump is not positive next to its right end");
  for (int j = 0; j < 1000000; ++j) {
    const double lo = hi - h;
    if (f(lo) <= 0) return ode::find_root(f, lo, hi, 1e-15 * std::fabs(lo));
    hi = lo;
  }
  fail(ErrorCode::root_not_found, "no zero of the next hump found");
}

}  // namespace

Saw build_saw(double m, int num_humps) {
  if (!(m > 0) || !std::isfinite(m)) fail(ErrorCode::invalid_argument, "m must be positive");
  if (num_humps < 1) fail(ErrorCode::invalid_argument, "need at least one hump");
  // m = 1 construction, then g_a(z) = a^3 g(z/a) with a = sqrt(m)
  std::vector<std::array<double, 4>> coeffs;
  std::vector<double> zeros;
  std::array<double, 4> c = {0.0, -1.0, 0.0, 1.0 / 60.0};
  double zk = next_zero_left(c, 0.0, 1.0);
  coeffs.push_back(c);
  zeros.push_back(zk);
  for (int k = 1; k < num_humps; ++k) {
    const double slope_right = c[1] + zk * zk / 20.0;
    const double C1 = -slope_right - zk * zk / 20.0;
    const double C0 = -C1 * zk - zk * zk * zk / 60.0;
    c = {C0, C1, 0.0, 1.0 / 60.0};
    zk = next_zero_left(c, zk, std::fabs(zk));
    coeffs.push_back(c);
    zeros.push_back(zk);
  }
  const double a = std::sqrt(m);
  Saw saw;
  saw.m = m;
  std::vector<CubicPiece> pieces;
  for (int k = num_humps - 1; k >= 0; --k) {
    const auto& u = coeffs[k];
    const std::array<double, 4> s = {a * a * a * u[0], a * a * u[1], a * u[2], u[3]};
    const double zr = k == 0 ? 0.0 : a * zeros[k - 1];
    pieces.push_back({a * zeros[k], zr, s});
  }
  saw.curve = PiecewiseCubic(std::move(pieces));
  for (int k = 0; k < num_humps; ++k) {
    const auto& u = coeffs[k];
    saw.zeros.push_back(a * zeros[k]);
    saw.hump_coeffs.push_back({a * a * a * u[0], a * a * u[1], a * u[2], u[3]});
    // interior maximum where C1 + 3 C3 z^2 = 0 (C2 = 0 for every hump)
    const double zs = -std::sqrt(-u[1] / (3.0 * u[3]));
    const double hs = u[0] + zs * (u[1] + zs * zs * u[3]);
    saw.peaks.push_back({a * zs, a * a * a * hs});
  }
  return saw;
}

EnvelopeFit saw_envelope_fit(const Saw& saw, int skip_humps) {
  const int n = static_cast<int>(saw.peaks.size()) - skip_humps;
  if (skip_humps < 0 || n < 8) fail(ErrorCode::insufficient_humps, "envelope fit needs at least 8 humps");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = skip_humps; k < static_cast<int>(saw.peaks.size()); ++k) {
    const double x = std::log(std::fabs(saw.peaks[k].z));
    const double y = std::log(saw.peaks[k].value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double nn = n;
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / nn;
  return {std::exp(icpt), slope, n};
}

double TravellingWave::eval(double y, int order) const {
  switch (kind) {
    case TwKind::constant: return order == 0 ? p1 : 0.0;
    case TwKind::sqrt_branch: {
      const double arg = p1 * y + p2;
      if (arg < 0) fail(ErrorCode::domain_error, "square-root wave evaluated at negative argument");
      const double r = std::sqrt(arg);
      switch (order) {
        case 0: return r;
        case 1: return 0.5 * p1 / r;
        case 2: return -0.25 * p1 * p1 / (r * arg);
        default: return 0.375 * p1 * p1 * p1 / (arg * arg * r);
      }
    }
    case TwKind::parabola: {
      const double s = y + p1;
      switch (order) {
        case 0: return -lambda / 6.0 * s * s - 1.5 * A0 / lambda;
        case 1: return -lambda / 3.0 * s;
        case 2: return -lambda / 3.0;
        default: return 0.0;
      }
    }
  }
  return 0.0;
}

double TravellingWave::flux(double y) const {
  const double f1 = eval(y, 1);
  return eval(y) * eval(y, 2) + f1 * f1;
}

TravellingWave tw_solution(TwKind kind, double lambda, double A0, double p1, double p2) {
  if (kind == TwKind::parabola && lambda == 0.0)
    fail(ErrorCode::invalid_argument, "parabolic wave needs lambda != 0");
  return {kind, lambda, A0, p1, p2};
}

double rankine_hugoniot_speed(double flux_jump, double value_jump) {
  if (value_jump == 0.0) fail(ErrorCode::zero_jump, "value jump is zero");
  return -flux_jump / value_jump;
}

}  // namespace ndelab::exact
