#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "core/blowup.hpp"
#include "core/diagnostics.hpp"
#include "core/error.hpp"
#include "core/exact.hpp"
#include "core/ode.hpp"
#include "core/pde.hpp"
#include "core/similarity.hpp"
#include "core/w4.hpp"

using namespace ndelab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void run(int id, const char* name, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const Error& e) {
    o = {false, fmt("error %s: %s", error_name(e.code()), e.what())};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

const similarity::Profile& s_minus() {
  static const similarity::Profile p = similarity::shoot_profile(0.0, 1.0, {});
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

double rel_norm_error(const w4::Coeffs4& a, const w4::Coeffs4& b) {
  double d = 0, n = 0;
  for (int k = 0; k < 4; ++k) {
    d += (a[k] - b[k]) * (a[k] - b[k]);
    n += b[k] * b[k];
  }
  return std::sqrt(d / n);
}

double comparison_blowup(int k, double c, double y0) {
  ode::Rhs rhs = [k, c](double, const double* y, double* dy) {
    for (int i = 0; i + 1 < k; ++i) dy[i] = y[i + 1];
    dy[k - 1] = c * y[0] * y[0];
  };
  ode::State s(k, 0.0);
  s[0] = y0;
  auto tr = ode::integrate(rhs, s, 0.0, 1e3, {});
  if (tr.termination != ode::Termination::blowup_detected) return std::nan("");
  return tr.back_time();
}

std::string table_text(const diag::AdmissibilityReport& r) {
  std::string s;
  for (const auto& row : r.rows) s += fmt(" %.0e:%.2e", row.param, row.sup);
  return s;
}

}  // namespace

int main() {
  run(1, "S- shooting constant", [] {
    auto t0 = std::chrono::steady_clock::now();
    auto p = similarity::shoot_profile(0.0, 1.0, {});
    double secs = seconds_since(t0);
    double C = p.origin_slope;
    return Outcome{std::fabs(C + 0.51) <= 0.02 && secs < 5,
                   fmt("C = %.6f (expected -0.51 +- 0.02), %.2f s", C, secs)};
  });

  run(2, "Heaviside parameters", [] {
    auto t0 = std::chrono::steady_clock::now();
    auto h = similarity::solve_heaviside({});
    double secs = seconds_since(t0);
    return Outcome{std::fabs(h.z0 - 2.192) <= 0.01 && std::fabs(h.H0 - 0.4197) <= 0.005 && secs < 5,
                   fmt("z0 = %.5f (2.192 +- 0.01), H(0) = %.5f (0.4197 +- 0.005), %.2f s", h.z0, h.H0, secs)};
  });

  run(3, "saw exactness", [] {
    auto saw = exact::build_saw(1.0, 12);
    const double r60 = std::sqrt(60.0);
    double e0 = std::fabs(saw.zeros[0] + r60);
    const auto& c = saw.hump_coeffs[1];
    double ec = std::max({std::fabs(c[0] + 4 * r60), std::fabs(c[1] + 5), std::fabs(c[2]),
                          std::fabs(c[3] - 1.0 / 60)});
    double rho = saw.zeros[1] / saw.zeros[0];
    double res = 0;
    for (const auto& piece : saw.curve.pieces())
      for (int i = 1; i < 20; ++i)
        res = std::max(res, std::fabs(exact::residual(
                                piece, -0.1, piece.z_left + (piece.z_right - piece.z_left) * i / 20)));
    return Outcome{e0 < 1e-12 && ec < 1e-12 && std::fabs(rho - 1.56155) <= 1e-5 && res < 1e-10,
                   fmt("|z0 + sqrt 60| = %.1e, coefficient error %.1e, rho = %.8f, piece residual %.1e", e0, ec,
                       rho, res)};
  });

  run(4, "invariant-subspace residuals", [] {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> Z(-10.0, 10.0), P(-1.0, 1.0);
    double r1 = 0, r2 = 0;
    for (int i = 0; i < 100; ++i) {
      auto g = exact::invariant_cubic_I(P(rng), P(rng));
      r1 = std::max(r1, std::fabs(exact::residual(g, -0.1, Z(rng))));
      auto h = exact::invariant_cubic_II(P(rng));
      r2 = std::max(r2, std::fabs(exact::residual(h, -1.0, Z(rng))));
    }
    return Outcome{r1 < 1e-10 && r2 < 1e-10, fmt("max residual %.1e at alpha -1/10, %.1e at alpha -1", r1, r2)};
  });

  run(5, "W4 closed form", [] {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> UT(0.5, 2.0), U(-1.0, 1.0);
    double worst = 0;
    for (int draw = 0; draw < 3; ++draw) {
      double T = UT(rng), A0 = U(rng), B0 = U(rng), D0 = U(rng);
      auto tr = w4::w4_integrate(w4::w4_closed_form(T, A0, B0, D0, 0.0), 0.9 * T, {});
      if (tr.termination != ode::Termination::reached_end) return Outcome{false, "integration stopped early"};
      for (int i = 0; i <= 90; ++i) {
        double t = 0.9 * T * i / 90;
        auto cf = w4::w4_closed_form(T, A0, B0, D0, t);
        w4::Coeffs4 num{tr.interpolate(t, 0), tr.interpolate(t, 1), tr.interpolate(t, 2), tr.interpolate(t, 3)};
        worst = std::max(worst, rel_norm_error(num, cf.c));
      }
    }
    double dT = 0;
    for (double c3 : {1.0 / 60, 0.1, 1.0}) {
      auto tr = w4::w4_integrate({0.0, {0, 0, 0, c3}}, 2.0 / (60 * c3), {});
      if (tr.termination != ode::Termination::blowup_detected) return Outcome{false, "no blow-up detected"};
      dT = std::max(dT, std::fabs(tr.back_time() - 1 / (60 * c3)));
    }
    return Outcome{worst < 1e-8 && dT < 1e-4,
                   fmt("max relative coefficient error %.1e, blow-up time error %.1e", worst, dT)};
  });

  run(6, "Airy tail", [] {
    auto fit = diag::airy_tail_fit(s_minus(), 10.0);
    const double a0 = 2.0 / 9 * std::sqrt(3.0);
    double ea = std::fabs(fit.a0_fit / a0 - 1);
    bool ok = ea <= 0.01 && std::fabs(fit.decay_exp + 0.25) <= 0.03;
    return Outcome{ok, fmt("a0 = %.5f (%.3f%% from %.5f), decay exponent %.4f (expected -0.25 +- 0.03)", fit.a0_fit,
                           100 * ea, a0, fit.decay_exp)};
  });

  run(7, "convergence-rate exponent", [] {
    auto f = diag::convergence_rate(s_minus());
    return Outcome{std::fabs(f.exponent - 1.0 / 12) <= 0.02,
                   fmt("q = %.4f (expected 0.0833 +- 0.02) on Z in [10, 50]", f.exponent)};
  });

  run(8, "TV growth", [] {
    auto f = diag::tv_growth(s_minus());
    return Outcome{std::fabs(f.exponent - 1.25) <= 0.1,
                   fmt("exponent %.4f (expected 1.25 +- 0.1) on Z in [10, 50]", f.exponent)};
  });

  run(9, "saw envelope", [] {
    auto saw = exact::build_saw(1.0, 16);
    auto f = exact::saw_envelope_fit(saw, 2);
    return Outcome{f.humps_used >= 10 && std::fabs(f.exponent + 1.0 / 3) <= 0.05,
                   fmt("exponent %.4f over %d humps, C = %.4f", f.exponent, f.humps_used, f.C_env)};
  });

  run(10, "PDE entropy stationarity", [] {
    auto s = pde::make_state(pde::RiemannData{pde::DataKind::s_minus, -1.0, {}}, 10.0, 1024, 1e-4);
    double worst = 0;
    for (int k = 1; k <= 5; ++k) {
      s = pde::evolve(s, 0.02 * k).state;
      double l1 = 0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const double x = s.x[i];
        if (std::fabs(x) > s.L / 2) continue;
        l1 += std::fabs(s.u[i] - (x < 0 ? 1.0 : (x > 0 ? -1.0 : 0.0))) * s.dx;
      }
      worst = std::max(worst, l1);
    }
    auto r = pde::make_state(pde::RiemannData{pde::DataKind::s_plus, -1.0, {}}, 5.0, 1024);
    auto er = pde::evolve(r, 0.5);
    auto v = pde::rescale_to_similarity(er.state, 0.0, similarity::Branch::rarefaction, 3.0, 601);
    auto g = similarity::reflect_to_rarefaction(s_minus());
    double sup = 0;
    for (int i = 0; i <= 600; ++i) {
      double z = -3 + i * 0.01;
      sup = std::max(sup, std::fabs(v.eval(z) - g.eval(z)));
    }
    return Outcome{worst < 0.05 && sup < 0.1,
                   fmt("S- max L1 distance %.4f for t <= 0.1; S+ rescaled sup distance %.2e at t = 0.5 (n = 1024)",
                       worst, sup)};
  });

  run(11, "H-1 behavior", [] {
    auto bump = [](double x) { return -1 - 0.5 * std::exp(-x * x); };
    pde::EvolveOptions o;
    o.record_interval = 0.01;
    auto c = pde::evolve(pde::make_state(bump, 10.0, 512, 0.0, pde::BoundaryKind::pinned_far_field), 0.2, o);
    double drift = 0;
    const double h0 = c.series.front().h_minus1;
    for (const auto& d : c.series) drift = std::max(drift, std::fabs(d.h_minus1 / h0 - 1));
    const double eps = 1e-2;
    o.record_interval = 0.0025;
    auto r = pde::evolve(pde::make_state(bump, 10.0, 512, eps, pde::BoundaryKind::pinned_far_field), 0.01, o);
    bool decreasing = true;
    double worst = 0;
    for (std::size_t k = 1; k < r.series.size(); ++k) {
      const auto &p = r.series[k - 1], &q = r.series[k];
      decreasing = decreasing && q.h_minus1 <= p.h_minus1;
      double rate = (q.h_minus1 * q.h_minus1 - p.h_minus1 * p.h_minus1) / (2 * (q.t - p.t));
      worst = std::max(worst, std::fabs(rate / (-eps * 0.5 * (p.grad_sq + q.grad_sq)) - 1));
    }
    return Outcome{drift < 1e-4 && decreasing && worst < 0.05,
                   fmt("eps = 0 relative drift %.1e to t = 0.2; eps = 1e-2 %s, rate mismatch %.2f%%", drift,
                       decreasing ? "non-increasing" : "increasing", 100 * worst)};
  });

  run(12, "blow-up certificates", [] {
    double T0 = blowup::blowup_time_bound(1.0, 1.0, blowup::Order::first);
    double num = comparison_blowup(1, 3.0, 1.0);
    bool rejected = false;
    try {
      blowup::capacity_constant(blowup::polynomial_cutoff(2));
    } catch (const Error& e) {
      rejected = e.code() == ErrorCode::divergent_c0;
    }
    double err = 0;
    double c4 = blowup::capacity_constant(blowup::polynomial_cutoff(4), &err);
    bool ok = T0 == 1.0 / 3 && std::fabs(num - T0) < 1e-4 && rejected && std::fabs(c4 - 368.0 / 15) < 1e-8;
    return Outcome{ok, fmt("T0 = %.17g, comparison ODE %.8f, k = 2 %s, k = 4 c0 = %.10f (+- %.1e)", T0, num,
                           rejected ? "rejected" : "accepted", c4, err)};
  });

  run(13, "G-admissibility tables", [] {
    ode::OdeSettings os;
    const double z0 = 2.0;
    auto target = std::make_shared<similarity::Profile>(similarity::interface_profile(0.0, z0, os));
    similarity::ShotRange ir{-11.0, z0 + 1.0};
    diag::Family ifam = [&](double c) -> diag::Evaluator {
      auto p = std::make_shared<similarity::Profile>(similarity::singular_point_family(z0, c, os, ir));
      return [p](double z) { return p->eval(z); };
    };
    auto a = diag::g_admissibility_report([&](double z) { return target->eval(z); }, ifam,
                                          {-1e-2, -1e-3, -1e-4, -1e-5}, -10.0, z0);

    auto saw = std::make_shared<exact::Saw>(exact::build_saw(1.0, 16));
    similarity::ShotRange sr{-21.0, 0.0};
    diag::Family sfam = [&](double d) -> diag::Evaluator {
      auto p = std::make_shared<similarity::Profile>(
          similarity::shoot_from_origin(exact::kAlphaCritical + d, -1.0, os, sr));
      if (!p->contains(-20.0)) fail(ErrorCode::out_of_domain, "shot stopped before the window");
      return [p](double z) { return p->eval(z); };
    };
    auto b = diag::g_admissibility_report([saw](double z) { return saw->curve.eval(std::min(z, 0.0)); }, sfam,
                                          {1e-4, 1e-5, 1e-6, 1e-7}, -20.0, 0.0);
    auto below = diag::g_admissibility_report([saw](double z) { return saw->curve.eval(std::min(z, 0.0)); }, sfam,
                                              {-1e-4, -1e-7}, -20.0, 0.0);
    bool ok = a.monotone && a.converged && b.monotone && b.converged;
    return Outcome{ok, fmt("interface C ->%s (%s); saw alpha -> -1/10 from above%s (%s); from below: %s",
                           table_text(a).c_str(), a.verdict.c_str(), table_text(b).c_str(), b.verdict.c_str(),
                           below.rows.front().status.c_str())};
  });

  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
