#include <doctest.h>

#include <cmath>
#include <random>

#include "core/error.hpp"
#include "core/exact.hpp"

using namespace ndelab;
using namespace ndelab::exact;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ok;
}

const double s60 = std::sqrt(60.0);

}  // namespace

TEST_SUITE("exact_solutions") {

TEST_CASE("invariant cubics") {
  auto g = invariant_cubic_I(0.0, -2.0);
  REQUIRE(g.size() == 1);
  auto c = g.pieces()[0].c;
  CHECK(c[0] == 0.0);
  CHECK(c[1] == -2.0);
  CHECK(c[2] == 0.0);
  CHECK(c[3] == 1.0 / 60);
  auto h = invariant_cubic_I(-4 * s60, -5.0).pieces()[0].c;
  CHECK(h[0] == -4 * s60);
  CHECK(h[1] == -5.0);
  auto k = invariant_cubic_II(0.0).pieces()[0].c;
  CHECK(k[0] == 0.0);
  CHECK(k[1] == 0.0);
  CHECK(k[2] == 0.0);
  CHECK(k[3] == 1.0 / 60);
  auto k1 = invariant_cubic_II(0.3).pieces()[0].c;
  CHECK(k1[0] == doctest::Approx(400.0 / 3 * 0.027));
  CHECK(k1[1] == doctest::Approx(20 * 0.09));
  CHECK(k1[2] == 0.3);
}

TEST_CASE("invariant cubic residuals at random points") {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> U(-20.0, 20.0), P(-3.0, 3.0);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    auto g = invariant_cubic_I(P(rng), P(rng));
    worst = std::max(worst, std::fabs(residual(g, -0.1, U(rng))));
  }
  CHECK(worst < 1e-10);
  worst = 0;
  for (double C2 : {-1.0, 0.3, 1.0, 2.0}) {
    auto g = invariant_cubic_II(C2);
    for (int i = 0; i < 100; ++i) {
      double z = U(rng);
      // scale-aware: terms are of size |g g'''| ~ (400/3)|C2|^3 / 10
      worst = std::max(worst, std::fabs(residual(g, -1.0, z)) / (1 + std::pow(std::fabs(C2), 3)));
    }
  }
  CHECK(worst < 1e-10);
  CHECK(std::fabs(residual(invariant_cubic_II(1.0), -1.0, 0.7)) < 1e-10);
  // a kind I cubic is not a solution at alpha = -1
  CHECK(std::fabs(residual(invariant_cubic_I(1.0, -1.0), -1.0, 2.0)) > 0.1);
}

TEST_CASE("pure cubic residual by hand") {
  // g = z^3/60 at z = -2: g g''' + 3 g' g'' = -2/15 * 1/10 + 3 * (1/5)(-1/5) = -2/15,
  // -(1/3) g' z = 2/15, alpha g = 0
  auto g = invariant_cubic_II(0.0);
  double hand = (-2.0 / 15) * 0.1 + 3 * 0.2 * (-0.2) - (1.0 / 3) * 0.2 * (-2.0);
  CHECK(std::fabs(hand) < 1e-15);
  CHECK(std::fabs(residual(g, 0.0, -2.0) - hand) < 1e-15);
  for (double alpha : {-0.5, 0.0, 0.7, 3.0}) CHECK(std::fabs(residual(g, alpha, -2.0)) < 1e-14);
  // a cubic with the wrong leading coefficient is not
  auto w = invariant_cubic_I(0.0, 0.0).pieces()[0];
  w.c[3] = 1.0 / 30;
  CHECK(residual(w, 0.0, -2.0) == doctest::Approx(60 * w.c[3] * w.c[3] * -8 - w.c[3] * -8));
}

TEST_CASE("piecewise cubic bookkeeping") {
  CubicPiece a{-2.0, 0.0, {0, -1, 0, 1.0 / 60}};
  CubicPiece b{0.0, 1.0, {0, 1, 0, 0}};
  PiecewiseCubic pc({a, b});
  CHECK(pc.breakpoints() == std::vector<double>{0.0});
  CHECK(pc.eval(0.0, 1) == 1.0);
  CHECK(pc.eval(0.0, 1, true) == -1.0);
  CHECK(pc.eval(-1.0) == doctest::Approx(1 - 1.0 / 60));
  CubicPiece gap{0.5, 1.0, {0, 0, 0, 0}};
  CHECK(code_of([&] { PiecewiseCubic({a, gap}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("saw: first humps") {
  auto saw = build_saw(1.0, 12);
  REQUIRE(saw.zeros.size() == 12);
  CHECK(std::fabs(saw.zeros[0] + s60) < 1e-12);
  auto h1 = saw.hump_coeffs[1];
  CHECK(std::fabs(h1[0] + 4 * s60) < 1e-12);
  CHECK(std::fabs(h1[1] + 5) < 1e-12);
  CHECK(std::fabs(h1[2]) < 1e-12);
  CHECK(std::fabs(h1[3] - 1.0 / 60) < 1e-12);
  double rho = saw.zeros[1] / saw.zeros[0];
  CHECK(std::fabs(rho - 1.56155) < 1e-5);
  CHECK(std::fabs(rho - (std::sqrt(17.0) - 1) / 2) < 1e-12);
}

TEST_CASE("saw: matching, residual and monotone structure") {
  auto saw = build_saw(1.0, 12);
  const auto& cv = saw.curve;
  double worst_res = 0;
  for (const auto& piece : cv.pieces())
    for (int i = 1; i < 20; ++i) {
      double z = piece.z_left + (piece.z_right - piece.z_left) * i / 20;
      worst_res = std::max(worst_res, std::fabs(residual(piece, -0.1, z)));
    }
  CHECK(worst_res < 1e-10);
  for (std::size_t k = 0; k + 1 < saw.zeros.size(); ++k) {
    double zk = saw.zeros[k];
    CHECK(std::fabs(cv.eval(zk)) < 1e-12 * std::max(1.0, std::fabs(zk)));
    CHECK(std::fabs(cv.eval(zk, 0, true)) < 1e-12 * std::max(1.0, std::fabs(zk)));
    double right = cv.eval(zk, 1), left = cv.eval(zk, 1, true);
    CHECK(std::fabs(right + left) < 1e-12 * std::max(1.0, std::fabs(right)));
    // flux (g^2)'' = 2 (g g'' + g'^2)
    double fr = 2 * (cv.eval(zk) * cv.eval(zk, 2) + right * right);
    double fl = 2 * (cv.eval(zk, 0, true) * cv.eval(zk, 2, true) + left * left);
    CHECK(std::fabs(fr - fl) < 1e-10 * std::max(1.0, std::fabs(fr)));
  }
  for (std::size_t k = 1; k < saw.zeros.size(); ++k) {
    double ratio = saw.zeros[k] / saw.zeros[k - 1];
    CHECK(ratio > 1.0);
    CHECK(ratio <= (std::sqrt(17.0) - 1) / 2 + 1e-12);
    CHECK(saw.peaks[k].value < saw.peaks[k - 1].value);
  }
  for (std::size_t k = 0; k < saw.peaks.size(); ++k) {
    CHECK(saw.peaks[k].value > 0);
    CHECK(std::fabs(cv.eval(saw.peaks[k].z, 1)) < 1e-10);
  }
}

TEST_CASE("saw envelope") {
  auto saw = build_saw(1.0, 12);
  auto fit = saw_envelope_fit(saw);
  CHECK(fit.humps_used == 12);
  CHECK(std::fabs(fit.exponent + 1.0 / 3) < 0.05);
  CHECK(fit.C_env == doctest::Approx(4.86776).epsilon(1e-5));

  auto saw4 = build_saw(4.0, 12);
  auto fit4 = saw_envelope_fit(saw4);
  CHECK(std::fabs(fit4.exponent - fit.exponent) < 0.01);
  // m = 4 is the m = 1 saw scaled by a = 2: g_a(z) = a^3 g(z/a)
  for (double z : {-3.0, -20.0, -37.5})
    CHECK(saw4.curve.eval(z) == doctest::Approx(8 * saw.curve.eval(z / 2)).epsilon(1e-12));
  CHECK(fit4.C_env == doctest::Approx(fit.C_env * std::pow(2.0, 3 - fit.exponent)).epsilon(1e-9));

  CHECK(code_of([] { saw_envelope_fit(build_saw(1.0, 7)); }) == ErrorCode::insufficient_humps);
  CHECK(code_of([] { build_saw(-1.0, 3); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { build_saw(1.0, 0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("travelling waves") {
  auto p = tw_solution(TwKind::parabola, -6.0, 0.0, 0.0);
  for (double y : {-2.0, 0.5, 3.0}) {
    CHECK(p.eval(y) == doctest::Approx(y * y));
    CHECK(6 * p.eval(y) == doctest::Approx(p.flux(y)));
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int i = 0; i < 20; ++i) {
    double lam = U(rng), A0 = U(rng), B = U(rng), y = U(rng);
    if (std::fabs(lam) < 0.1) continue;
    auto w = tw_solution(TwKind::parabola, lam, A0, B);
    CHECK(-lam * w.eval(y) == doctest::Approx(w.flux(y) + A0).epsilon(1e-12));
  }
  auto s = tw_solution(TwKind::sqrt_branch, 0.0, 0.0, 1.0, 0.0);
  for (double y : {0.5, 1.0, 4.0}) {
    CHECK(s.eval(y) == doctest::Approx(std::sqrt(y)));
    CHECK(std::fabs(s.flux(y)) < 1e-14);
  }
  CHECK(code_of([&] { s.eval(-1.0); }) == ErrorCode::domain_error);
  CHECK(code_of([] { tw_solution(TwKind::parabola, 0.0, 1.0, 0.0); }) == ErrorCode::invalid_argument);
  auto c = tw_solution(TwKind::constant, 0.0, 0.0, 1.0);
  CHECK(c.eval(3.0) == 1.0);
  CHECK(c.eval(3.0, 1) == 0.0);
}

TEST_CASE("Rankine-Hugoniot speed") {
  auto plus = tw_solution(TwKind::constant, 0.0, 0.0, 1.0);
  auto minus = tw_solution(TwKind::constant, 0.0, 0.0, -1.0);
  double lam = rankine_hugoniot_speed(minus.flux(0.0) - plus.flux(0.0), minus.eval(0.0) - plus.eval(0.0));
  CHECK(lam == 0.0);
  CHECK(rankine_hugoniot_speed(0.0, -2.0) == 0.0);
  CHECK(rankine_hugoniot_speed(1.0, -2.0) == 0.5);
  CHECK(code_of([] { rankine_hugoniot_speed(1.0, 0.0); }) == ErrorCode::zero_jump);

  // parabola for y < y*, constant -A0/lambda beyond, both moving with lambda
  for (double lambda : {-2.0, 0.7, 3.0}) {
    const double A0 = 0.4, B = 0.3, ys = 0.8;
    auto left = tw_solution(TwKind::parabola, lambda, A0, B);
    auto right = tw_solution(TwKind::constant, lambda, A0, -A0 / lambda);
    double fj = right.flux(ys) - left.flux(ys), vj = right.eval(ys) - left.eval(ys);
    CHECK(std::fabs(rankine_hugoniot_speed(fj, vj) - lambda) < 1e-10);
  }
}

}
