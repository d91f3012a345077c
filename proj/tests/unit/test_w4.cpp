#include <doctest.h>

#include <cmath>
#include <random>

#include "core/error.hpp"
#include "core/w4.hpp"

using namespace ndelab;
using namespace ndelab::w4;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ok;
}

double norm(const Coeffs4& c) { return std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3]); }

}  // namespace

TEST_SUITE("w4_dynamics") {

TEST_CASE("coefficient vector field") {
  CHECK(w4_rhs({0, 0, 0, 0}) == Coeffs4{0, 0, 0, 0});
  auto r = w4_rhs({0, 0, 0, 1.0 / 60});
  CHECK(r[3] == doctest::Approx(1.0 / 60).epsilon(1e-15));
  CHECK(r[0] == 0.0);
  // 6(1 + 1), 12(1 + 2), 60, 60
  CHECK(w4_rhs({1, 1, 1, 1}) == Coeffs4{12, 36, 60, 60});
}

TEST_CASE("restriction matches the PDE operator") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int i = 0; i < 5; ++i) {
    Coeffs4 c{U(rng), U(rng), U(rng), U(rng)};
    auto op = nde_operator({c[0], c[1], c[2], c[3]});
    auto r = w4_rhs(c);
    op.resize(std::max<std::size_t>(op.size(), 4), 0.0);
    for (int k = 0; k < 4; ++k) CHECK(op[k] == doctest::Approx(r[k]).epsilon(1e-14));
    for (std::size_t k = 4; k < op.size(); ++k) CHECK(std::fabs(op[k]) < 1e-13);
  }
}

TEST_CASE("states with C2 = C3 = 0 are fixed") {
  for (double c0 : {-1.0, 0.0, 2.5})
    for (double c1 : {-3.0, 0.4}) CHECK(w4_rhs({c0, c1, 0, 0}) == Coeffs4{0, 0, 0, 0});
  ode::OdeSettings s;
  auto tr = w4_integrate({0.0, {1.5, -0.7, 0.0, 0.0}}, 5.0, s);
  auto n = tr.size() - 1;
  CHECK(tr.value(n, 0) == 1.5);
  CHECK(tr.value(n, 1) == -0.7);
}

TEST_CASE("closed form values") {
  auto z = w4_closed_form(1.0, 0.0, 0.0, 0.0, 0.0);
  CHECK(z.c[0] == 0.0);
  CHECK(z.c[1] == 0.0);
  CHECK(z.c[2] == 0.0);
  CHECK(z.c[3] == doctest::Approx(1.0 / 60));
  // T = 1, t = 0: s = 1
  auto h = w4_closed_form(1.0, 1.0, 2.0, 3.0, 0.0);
  CHECK(h.c[3] == doctest::Approx(1.0 / 60));
  CHECK(h.c[2] == doctest::Approx(1.0));
  CHECK(h.c[1] == doctest::Approx(2.0 + 20.0));
  CHECK(h.c[0] == doctest::Approx(3.0 + 40.0 + 400.0 / 3));
  auto far = w4_closed_form(1.0, 1.0, 2.0, 3.0, -1e12);
  auto farther = w4_closed_form(1.0, 1.0, 2.0, 3.0, -1e24);
  CHECK(norm(farther.c) < norm(far.c) / 10);
  CHECK(std::fabs(far.c[0]) == doctest::Approx(3.0 * std::pow(1e12 + 1, -0.1)).epsilon(1e-3));
  CHECK(code_of([] { w4_closed_form(1.0, 0, 0, 0, 1.0); }) == ErrorCode::at_blowup);
  CHECK(code_of([] { w4_closed_form(1.0, 0, 0, 0, 2.0); }) == ErrorCode::at_blowup);
}

TEST_CASE("closed form is an orbit of the system") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> UT(0.5, 2.0), U(-1.0, 1.0);
  ode::OdeSettings s;
  for (int draw = 0; draw < 3; ++draw) {
    double T = UT(rng), A0 = U(rng), B0 = U(rng), D0 = U(rng);
    auto s0 = w4_closed_form(T, A0, B0, D0, 0.0);
    auto tr = w4_integrate(s0, 0.9 * T, s);
    REQUIRE(tr.termination == ode::Termination::reached_end);
    double worst = 0;
    for (int i = 0; i <= 90; ++i) {
      double t = 0.9 * T * i / 90;
      auto cf = w4_closed_form(T, A0, B0, D0, t);
      Coeffs4 num{tr.interpolate(t, 0), tr.interpolate(t, 1), tr.interpolate(t, 2), tr.interpolate(t, 3)};
      Coeffs4 d{num[0] - cf.c[0], num[1] - cf.c[1], num[2] - cf.c[2], num[3] - cf.c[3]};
      worst = std::max(worst, norm(d) / norm(cf.c));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("the alternative C1 = B0 s^(-2/5) - 60 s^(-3/5) is not an orbit") {
  // with C2 = A0/s and C3 = 1/(60 s), C1' must equal 12 C2^2 + 24 C1 C3
  const double T = 1.0, A0 = 0.0, B0 = 1.0, t = 0.3, h = 1e-6;
  auto c1 = [&](double tt) {
    double sv = T - tt;
    return B0 * std::pow(sv, -0.4) - 60 * std::pow(sv, -0.6);
  };
  double sv = T - t;
  double lhs = (c1(t + h) - c1(t - h)) / (2 * h);
  double rhs = 12 * std::pow(A0 / sv, 2) + 24 * c1(t) / (60 * sv);
  CHECK(std::fabs(lhs - rhs) == doctest::Approx(12 * std::pow(sv, -1.6)).epsilon(1e-6));
  auto ours = [&](double tt) { return w4_closed_form(T, A0, B0, 0.0, tt).c[1]; };
  double l2 = (ours(t + h) - ours(t - h)) / (2 * h);
  CHECK(l2 == doctest::Approx(24 * ours(t) / (60 * sv)).epsilon(1e-8));
}

TEST_CASE("blow-up time") {
  CHECK(w4_blowup_time(1.0 / 60) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w4_blowup_time(1.0) == doctest::Approx(1.0 / 60).epsilon(1e-15));
  CHECK(code_of([] { w4_blowup_time(0.0); }) == ErrorCode::non_blowup);
  CHECK(code_of([] { w4_blowup_time(-1.0); }) == ErrorCode::non_blowup);
  auto tr = w4_integrate({0.0, {0, 0, 0, 1.0 / 60}}, 2.0, {});
  CHECK(tr.termination == ode::Termination::blowup_detected);
  CHECK(std::fabs(tr.back_time() - 1.0) < 1e-4);
}

}
