#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/blowup.hpp"
#include "core/error.hpp"
#include "core/ode.hpp"
#include "core/pde.hpp"

using namespace ndelab;
using namespace ndelab::blowup;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ok;
}

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> x(n + 1);
  for (int i = 0; i <= n; ++i) x[i] = a + (b - a) * i / n;
  x.back() = b;
  return x;
}

// time at which some derivative of y, y^(k) = c y^2, y(0) = y0, lower derivatives zero, passes 1e30
double comparison_blowup(int k, double c, double y0) {
  ode::Rhs rhs = [k, c](double, const double* y, double* dy) {
    for (int i = 0; i + 1 < k; ++i) dy[i] = y[i + 1];
    dy[k - 1] = c * y[0] * y[0];
  };
  ode::State s(k, 0.0);
  s[0] = y0;
  ode::OdeSettings st;
  st.blowup_threshold = 1e30;
  auto tr = ode::integrate(rhs, s, 0.0, 1e6, st);
  REQUIRE(tr.termination == ode::Termination::blowup_detected);
  return tr.back_time();
}

}  // namespace

TEST_SUITE("blowup_estimates") {

TEST_CASE("cut-off weight") {
  CHECK(cut_weight(1.0, -1.0) == 0.0);
  CHECK(cut_weight(1.0, 0.0) == -1.0);
  CHECK(cut_weight(2.0, -0.5) == doctest::Approx(-1.5 * 1.5 * 1.5));
  const double h = 1e-2, L = 1.3;
  for (double x = -L; x + 3 * h <= 0.0; x += 0.1) {
    double d3 = (cut_weight(L, x + 3 * h) - 3 * cut_weight(L, x + 2 * h) + 3 * cut_weight(L, x + h) -
                 cut_weight(L, x)) /
                (h * h * h);
    CHECK(std::fabs(d3 + 6) < 1e-6);
  }
  CHECK(code_of([] { cut_weight(1.0, 0.5); }) == ErrorCode::out_of_domain);
  CHECK(code_of([] { cut_weight(1.0, -1.5); }) == ErrorCode::out_of_domain);
}

TEST_CASE("expansion coefficient") {
  auto x = grid(-1.0, 0.0, 200);
  std::vector<double> m1(x.size(), -1.0), zero(x.size(), 0.0), q(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) q[i] = x[i] * (x[i] + 1);
  CHECK(expansion_coefficient(x, m1, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(expansion_coefficient(x, zero, 1.0) == 0.0);
  // -int_{-1}^{0} x (x+1)^4 dx = -(1/6 - 1/5)
  CHECK(expansion_coefficient(x, q, 1.0) == doctest::Approx(1.0 / 30).epsilon(1e-9));
  CHECK(expansion_coefficient([](double y) { return y * (y + 1); }, 1.0) == doctest::Approx(1.0 / 30).epsilon(1e-12));

  // odd number of intervals and non-uniform nodes
  std::vector<double> xn{-1.0, -0.8, -0.75, -0.5, -0.2, 0.0};
  std::vector<double> un(xn.size(), -1.0);
  CHECK(expansion_coefficient(xn, un, 1.0) == doctest::Approx(0.25).epsilon(1e-3));

  auto coarse = grid(-2.0, 0.0, 1000), fine = grid(-2.0, 0.0, 2000);
  auto f = [](double y) { return -y * y * (y + 2) - 0.5; };
  std::vector<double> uc, uf;
  for (double y : coarse) uc.push_back(f(y));
  for (double y : fine) uf.push_back(f(y));
  CHECK(std::fabs(expansion_coefficient(coarse, uc, 2.0) - expansion_coefficient(fine, uf, 2.0)) < 1e-8);

  auto short_grid = grid(-0.5, 0.0, 10);
  std::vector<double> us(short_grid.size(), -1.0);
  CHECK(code_of([&] { expansion_coefficient(short_grid, us, 1.0); }) == ErrorCode::out_of_domain);
}

TEST_CASE("first-order bound") {
  CHECK(blowup_time_bound(1.0, 1.0, Order::first) == 1.0 / 3);
  CHECK(blowup_time_bound(0.25, 1.0, Order::first) == doctest::Approx(4.0 / 3).epsilon(1e-15));
  CHECK(code_of([] { blowup_time_bound(0.0, 1.0, Order::first); }) == ErrorCode::nonpositive_J0);
  CHECK(code_of([] { blowup_time_bound(-1.0, 1.0, Order::second); }) == ErrorCode::nonpositive_J0);
  // J' = (3/L^7) J^2 passes 1e8 at T0
  for (double L : {1.0, 1.3}) {
    ode::Rhs rhs = [L](double, const double* y, double* dy) { dy[0] = 3 / std::pow(L, 7) * y[0] * y[0]; };
    auto tr = ode::integrate(rhs, {1.0}, 0.0, 1e3, {});
    REQUIRE(tr.termination == ode::Termination::blowup_detected);
    CHECK(std::fabs(tr.back_time() - blowup_time_bound(1.0, L, Order::first)) < 1e-4);
  }
}

TEST_CASE("higher-order bounds match the comparison equations") {
  for (Order o : {Order::second, Order::third}) {
    int k = static_cast<int>(o);
    for (double J0 : {0.5, 2.0}) {
      double L = 1.1;
      double num = comparison_blowup(k, 3 / std::pow(L, 7), J0);
      CHECK(blowup_time_bound(J0, L, o) == doctest::Approx(num).epsilon(1e-4));
    }
  }
  // y'' = y^2, y(0) = 1: t = int_1^inf dy / sqrt(2 (y^3 - 1) / 3)
  CHECK(unit_blowup_time(Order::second) == doctest::Approx(comparison_blowup(2, 1.0, 1.0)).epsilon(1e-4));
  CHECK(unit_blowup_time(Order::first) == 1.0);
}

TEST_CASE("bound monotonicity") {
  for (Order o : {Order::first, Order::second, Order::third}) {
    CHECK(blowup_time_bound(2.0, 1.0, o) < blowup_time_bound(1.0, 1.0, o));
    CHECK(blowup_time_bound(1.0, 2.0, o) > blowup_time_bound(1.0, 1.0, o));
  }
}

TEST_CASE("ODI check") {
  const double L = 1.0, T0 = 2.0;
  std::vector<JSample> eq;
  for (int i = 0; i <= 100; ++i) {
    double t = 1.9 * i / 100;
    eq.push_back({t, std::pow(L, 7) / (3 * (T0 - t))});
  }
  auto r = odi_check(eq, L);
  CHECK(r.satisfied);
  CHECK(std::fabs(r.min_relative_margin) < 1e-2);

  std::vector<JSample> flat{{0, 1}, {1, 1}, {2, 1}, {3, 1}};
  auto f = odi_check(flat, L);
  CHECK_FALSE(f.satisfied);
  CHECK(f.min_margin == doctest::Approx(-3.0));
  CHECK(f.min_relative_margin == doctest::Approx(-1.0));

  CHECK(code_of([] { odi_check({{0, 1}, {1, 2}}, 1.0); }) == ErrorCode::insufficient_samples);
}

TEST_CASE("ODI along a regularized simulation") {
  // u0 <= 0 rises monotonically from -1 to 0 and vanishes on [-0.3, 2]; the window [-1, 0]
  // sees zero data at its right end, so the boundary terms of the J identity vanish
  const double X = 2.0, L = 1.0, xr = -0.3, w = 0.5;
  auto u0 = [&](double x) {
    if (x <= xr - w) return -1.0;
    if (x >= xr) return 0.0;
    double c = std::cos(M_PI * (x - xr + w) / (2 * w));
    return -c * c;
  };
  auto s = pde::make_state(u0, X, 257, -1.0, pde::BoundaryKind::pinned_far_field);
  auto J = [&] {
    std::vector<double> xs, us;
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (s.x[i] >= -L - 1e-12 && s.x[i] <= 1e-12) {
        xs.push_back(s.x[i]);
        us.push_back(s.u[i]);
      }
    return expansion_coefficient(xs, us, L);
  };
  std::vector<JSample> tr{{0.0, J()}};
  long k = 0;
  while (s.t < 0.1) {
    pde::step(s, pde::stable_dt(s));
    if (++k % 500 == 0) tr.push_back({s.t, J()});
  }
  CHECK(tr.front().J > 0);
  auto r = odi_check(tr, L);
  CHECK(r.satisfied);
  CHECK(r.min_relative_margin > 0);
  CHECK(tr.back().J > tr.front().J);
}

TEST_CASE("capacity constant") {
  double err = 0;
  double c0 = capacity_constant(polynomial_cutoff(4), &err);
  // |phi''|^2 / phi = (12 - 56 t + 56 t^2)^2 for phi = t^4 (1-t)^4
  CHECK(c0 == doctest::Approx(368.0 / 15).epsilon(1e-10));
  CHECK(err < 1e-8 * c0);
  CHECK(code_of([] { capacity_constant(polynomial_cutoff(2)); }) == ErrorCode::divergent_c0);
  // k = 3 leaves 36/tau at the ends
  CHECK(code_of([] { capacity_constant(polynomial_cutoff(3)); }) == ErrorCode::divergent_c0);
  double c5 = capacity_constant(polynomial_cutoff(5));
  CHECK(std::isfinite(c5));
  CHECK(c5 > 0);
}

TEST_CASE("capacity bound") {
  const double L = 1.5;
  auto x = grid(0.0, L, 300);
  std::vector<double> one(x.size(), 1.0), neg(x.size(), -0.7);
  auto r = capacity_bound(x, one, L);
  CHECK(r.J0 == doctest::Approx(std::pow(L, 4) / 4).epsilon(1e-12));
  CHECK(r.c0 == doctest::Approx(368.0 / 15).epsilon(1e-10));
  CHECK(r.T0 == doctest::Approx(std::cbrt(r.c0 * std::pow(L, 7) / (7 * r.J0))).epsilon(1e-14));
  CHECK(code_of([&] { capacity_bound(x, neg, L); }) == ErrorCode::nonpositive_J0);
  std::vector<double> two(x.size(), 2.0);
  CHECK(capacity_bound(x, two, L).T0 < r.T0);
}

}
