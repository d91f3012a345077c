#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <vector>

#include "core/diagnostics.hpp"
#include "core/error.hpp"
#include "core/exact.hpp"
#include "core/similarity.hpp"

using namespace ndelab;
using namespace ndelab::diag;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ok;
}

const similarity::Profile& s_minus() {
  static const similarity::Profile p = similarity::shoot_profile(0.0, 1.0, {});
  return p;
}

const double kA0 = 2.0 / 9.0 * std::sqrt(3.0);

// c |z|^d cos(a |z|^(3/2) + phi) for |z| >= 1, frozen inside
struct TailModel {
  double c = 0.3, d = -0.25, a = kA0, phi = 0.7;
  double r(double z) const {
    const double s = std::max(std::fabs(z), 1.0);
    return c * std::pow(s, d) * std::cos(a * std::pow(s, 1.5) + phi);
  }
  double dr(double z) const {
    if (std::fabs(z) <= 1.0) return 0.0;
    const double s = std::fabs(z);
    const double arg = a * std::pow(s, 1.5) + phi;
    const double ds = c * (d * std::pow(s, d - 1) * std::cos(arg) - 1.5 * a * std::pow(s, d + 0.5) * std::sin(arg));
    return -ds;
  }
};

similarity::Profile sampled(const TailModel& m, double lo, double h) {
  similarity::Profile p;
  const int n = static_cast<int>(std::round(-lo / h));
  for (int i = 0; i <= n; ++i) {
    const double z = lo + i * h;
    p.push(z, 1.0 + m.r(z), m.dr(z), 0.0, 0.0);
  }
  p.far_limit = 1.0;
  return p;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("airy fit recovers synthetic parameters") {
  TailModel m;
  std::vector<double> z, g;
  for (int i = 0; i <= 5000; ++i) {
    z.push_back(-60.0 + 50.0 * i / 5000);
    g.push_back(1.0 + m.r(z.back()));
  }
  auto f = airy_tail_fit(z, g, 1.0);
  CHECK(std::fabs(f.limit - 1.0) < 1e-6);
  CHECK(std::fabs(f.c - m.c) < 1e-6);
  CHECK(std::fabs(f.decay_exp - m.d) < 1e-6);
  CHECK(std::fabs(f.a0_fit - m.a) < 1e-6);
  CHECK(std::fabs(f.c0_fit - m.phi) < 1e-6);
  CHECK(f.residual < 1e-10);
  CHECK(f.extrema >= 5);

  std::vector<double> zs(z.begin(), z.begin() + 10), gs(g.begin(), g.begin() + 10);
  CHECK(code_of([&] { airy_tail_fit(zs, gs, 1.0); }) == ErrorCode::insufficient_tail);
  std::vector<double> flat(g.size(), 1.0);
  CHECK(code_of([&] { airy_tail_fit(z, flat, 1.0); }) == ErrorCode::insufficient_tail);
}

TEST_CASE("airy phase coefficient of the shock profile") {
  auto f = airy_tail_fit(s_minus(), 10.0);
  CHECK(std::fabs(f.a0_fit / kA0 - 1) < 0.01);
  CHECK(std::fabs(f.limit - 1.0) < 1e-3);
  CHECK(f.extrema >= 5);
}

TEST_CASE("airy fit window stability") {
  auto f10 = airy_tail_fit(s_minus(), 10.0);
  auto f15 = airy_tail_fit(s_minus(), 15.0);
  CHECK(std::fabs(f15.a0_fit / f10.a0_fit - 1) < 0.1);
  CHECK(std::fabs(f15.decay_exp / f10.decay_exp - 1) < 0.1);
  CHECK(std::fabs(f15.c / f10.c - 1) < 0.1);
}

TEST_CASE("total variation") {
  similarity::Profile cube;
  for (int i = 0; i <= 400; ++i) {
    const double z = -2.0 + 0.01 * i;
    cube.push(z, z * z * z, 3 * z * z, 6 * z, 6);
  }
  CHECK(total_variation(cube, -1.5, 0.5) == doctest::Approx(0.5 * 0.5 * 0.5 + 1.5 * 1.5 * 1.5).epsilon(1e-12));
  CHECK(total_variation(cube, 0.5, -1.5) == total_variation(cube, -1.5, 0.5));
  CHECK(code_of([&] { total_variation(cube, -3.0, 0.0); }) == ErrorCode::out_of_domain);

  const auto& p = s_minus();
  const double a = total_variation(p, -30.0, -12.5), b = total_variation(p, -12.5, 0.0);
  CHECK(std::fabs(a + b - total_variation(p, -30.0, 0.0)) < 1e-12);

  double prev = 0;
  for (double Z : {10.0, 20.0, 30.0, 40.0, 50.0}) {
    const double tv = total_variation(p, -Z, 0.0);
    CHECK(tv > prev);
    prev = tv;
  }
}

TEST_CASE("total variation growth of the tail model") {
  TailModel m;
  auto p = sampled(m, -60.0, 0.002);
  auto fit = tv_growth(p, 10.0, 50.0, 9);
  // oracle: sum of jumps between consecutive model extrema
  std::vector<double> tv;
  for (double Z : fit.xs) {
    double acc = 0;
    double last = m.r(-1.0);
    const int k0 = static_cast<int>(std::ceil((m.a + m.phi) / std::numbers::pi));
    for (int k = k0;; ++k) {
      const double s = std::pow((k * std::numbers::pi - m.phi) / m.a, 2.0 / 3.0);
      if (s > Z) break;
      acc += std::fabs(m.r(-s) - last);
      last = m.r(-s);
    }
    acc += std::fabs(m.r(-Z) - last);
    tv.push_back(acc);
  }
  auto oracle = fit_power_law(fit.xs, tv);
  CHECK(std::fabs(fit.exponent - oracle.exponent) < 0.02);
  CHECK(std::fabs(oracle.exponent - 1.25) < 0.1);
  CHECK(std::fabs(fit.exponent - 1.25) < 0.1);
}

TEST_CASE("convergence rate") {
  auto zero = convergence_rate([](double) { return 1.0; });
  for (double v : zero.ys) CHECK(v == 0.0);

  TailModel m;
  auto g = [&m](double z) {
    const double s = std::fabs(z);
    return 1.0 + m.c * std::pow(s, -0.25) * std::cos(m.a * std::pow(s, 1.5) + m.phi);
  };
  auto fit = convergence_rate(g, 1.0, 10.0, 50.0, 9);
  // oracle: Simpson in w with z = -w^4, which removes the endpoint singularity
  std::vector<double> I;
  for (double mt : fit.xs) {
    const double s = std::cbrt(mt);
    const double W = std::pow(1.0 / s, 0.25);
    auto f = [&m](double w) { return 4 * m.c * w * w * std::fabs(std::cos(m.a * std::pow(w, 6) + m.phi)); };
    const int cells = 400000;
    const double h = W / cells;
    double acc = 0;
    for (int c = 0; c < cells; ++c) {
      const double wa = c * h;
      acc += h / 6 * (f(wa) + 4 * f(wa + 0.5 * h) + f(wa + h));
    }
    I.push_back(s * acc);
  }
  auto oracle = fit_power_law(fit.xs, I);
  CHECK(std::fabs(fit.exponent - oracle.exponent) < 0.005);
  auto far = convergence_rate(g, 1.0, 200.0, 1000.0, 5);
  CHECK(std::fabs(far.exponent - 1.0 / 12) < 0.005);
  for (std::size_t k = 0; k < I.size(); ++k) CHECK(std::fabs(fit.ys[k] / I[k] - 1) < 1e-3);

  const auto& p = s_minus();
  auto ga = similarity::rescale_profile(p, 2.0);
  auto q1 = convergence_rate(p, 1.0, 10.0, 50.0, 9);
  auto q2 = convergence_rate([&ga](double z) { return ga.eval(z) / 8.0; }, 2.0, 20.0, 100.0, 9);
  CHECK(std::fabs(q1.exponent - q2.exponent) < 0.005);
  CHECK(code_of([&] { convergence_rate(p, 1.0, 10.0, 500.0, 9); }) == ErrorCode::out_of_domain);
  CHECK(code_of([&] { convergence_rate(p, 0.0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("dispersion eigenvalues") {
  const double r3 = std::sqrt(3.0) / 2;
  auto e = dispersion_eigenvalues(1.0, 1.0);
  CHECK(std::abs(e[0] - std::complex<double>(1, 0)) < 1e-15);
  CHECK(std::abs(e[1] - std::complex<double>(-0.5, r3)) < 1e-15);
  CHECK(std::abs(e[2] - std::complex<double>(-0.5, -r3)) < 1e-15);
  for (auto v : dispersion_eigenvalues(0.0, 1.0)) CHECK(std::abs(v) == 0.0);
  for (auto v : dispersion_eigenvalues(8.0, 2.0)) CHECK(std::abs(v * v * v - 2.0) < 1e-14);
  auto n = dispersion_eigenvalues(-1.0, 1.0);
  CHECK(std::abs(n[0] + 1.0) < 1e-15);
  CHECK(code_of([] { dispersion_eigenvalues(1.0, 0.0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("admissibility: self family") {
  const auto& p = s_minus();
  auto target = [&p](double z) { return p.eval(z); };
  auto rep = g_admissibility_report(target, [&](double) -> Evaluator { return target; }, {1.0, 2.0}, -20, 20);
  for (const auto& r : rep.rows) {
    CHECK(r.sup == 0.0);
    CHECK(r.l1 == 0.0);
  }
  auto one = g_admissibility_report(target, [&](double) -> Evaluator { return target; }, {1.0}, -20, 20);
  CHECK(one.converged);
  CHECK(one.verdict == "numerically G-admissible");

  auto bad = g_admissibility_report(
      target, [](double) -> Evaluator { fail(ErrorCode::shooting_failed, "no member"); }, {1.0}, -1, 1);
  CHECK(!bad.converged);
  CHECK(bad.rows[0].status == "shooting_failed");
  CHECK(bad.verdict == "non_convergent");
}

TEST_CASE("admissibility: interface profile as a limit") {
  const double z0 = 2.0;
  auto target = similarity::interface_profile(0.0, z0, {});
  similarity::ShotRange range{-11.0, z0 + 1.0};
  auto rep = g_admissibility_report(
      [&](double z) { return target.eval(z); },
      [&](double C) -> Evaluator {
        auto p = std::make_shared<similarity::Profile>(similarity::singular_point_family(z0, C, {}, range));
        return [p](double z) { return p->eval(z); };
      },
      {-1e-2, -1e-3, -1e-4, -1e-5}, -10.0, z0);
  CHECK(rep.monotone);
  CHECK(rep.converged);
  CHECK(rep.rows.back().sup < 1e-3);
  for (std::size_t k = 1; k < rep.rows.size(); ++k) CHECK(rep.rows[k].l1 < rep.rows[k - 1].l1);
}

TEST_CASE("admissibility: saw as a limit of smooth shots") {
  auto saw = exact::build_saw(1.0, 16);
  REQUIRE(saw.zeros.back() < -20.0);
  auto rep = g_admissibility_report(
      [&](double z) { return saw.curve.eval(std::min(z, saw.curve.z_max())); },
      [](double d) -> Evaluator {
        auto p = std::make_shared<similarity::Profile>(
            similarity::shoot_from_origin(exact::kAlphaCritical + d, -1.0, {}, {-21.0, 0.0}));
        return [p](double z) { return p->eval(z); };
      },
      {1e-4, 1e-5, 1e-6, 1e-7}, -20.0, 0.0);
  CHECK(rep.monotone);
  CHECK(rep.converged);
  CHECK(rep.rows.back().sup < 1e-3);
}

}  // TEST_SUITE

TEST_SUITE("diagnostics_claims") {

TEST_CASE("airy decay exponent of the shock profile") {
  auto f = airy_tail_fit(s_minus(), 10.0);
  INFO("decay_exp = " << f.decay_exp);
  CHECK(std::fabs(f.decay_exp + 0.25) < 0.03);
}

TEST_CASE("total variation growth exponent of the shock profile") {
  auto fit = tv_growth(s_minus(), 10.0, 50.0, 9);
  INFO("exponent = " << fit.exponent);
  CHECK(std::fabs(fit.exponent - 1.25) < 0.1);
}

TEST_CASE("convergence rate exponent of the shock profile") {
  auto fit = convergence_rate(s_minus(), 1.0, 10.0, 50.0, 9);
  INFO("q = " << fit.exponent);
  CHECK(std::fabs(fit.exponent - 1.0 / 12) < 0.02);
}

}  // TEST_SUITE
