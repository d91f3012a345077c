#include "core/w4.hpp"

#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace ndelab::w4 {

Coeffs4 w4_rhs(const Coeffs4& c) {
  return {6 * (c[1] * c[2] + c[0] * c[3]), 12 * (c[2] * c[2] + 2 * c[1] * c[3]), 60 * c[2] * c[3],
          60 * c[3] * c[3]};
}

W4State w4_closed_form(double T, double A0, double B0, double D0, double t) {
  const double s = T - t;
  if (!(s >= 1e-12)) {
    std::ostringstream os;
    os << "t=" << t << " is at or beyond the blow-up time T=" << T;
    fail(ErrorCode::at_blowup, os.str());
  }
  const double s25 = std::pow(s, -0.4);
  W4State w;
  w.t = t;
  w.c[3] = 1.0 / (60.0 * s);
  w.c[2] = A0 / s;
  w.c[1] = B0 * s25 + 20.0 * A0 * A0 / s;
  w.c[0] = D0 * std::pow(s, -0.1) + 20.0 * A0 * B0 * s25 + 400.0 / 3.0 * A0 * A0 * A0 / s;
  return w;
}

double w4_blowup_time(double c3_initial) {
  if (!(c3_initial > 0)) fail(ErrorCode::non_blowup, "C3 <= 0: the orbit does not blow up");
  return 1.0 / (60.0 * c3_initial);
}

ode::Trajectory w4_integrate(const W4State& s0, double t_end, const ode::OdeSettings& settings) {
  auto rhs = [](double, const double* y, double* dy) {
    const Coeffs4 d = w4_rhs({y[0], y[1], y[2], y[3]});
    for (int i = 0; i < 4; ++i) dy[i] = d[i];
  };
  return ode::integrate(rhs, {s0.c[0], s0.c[1], s0.c[2], s0.c[3]}, s0.t, t_end, settings);
}

poly::Coeffs nde_operator(const poly::Coeffs& u) {
  const auto flux = poly::multiply(u, poly::derivative(u));
  return poly::derivative(poly::derivative(flux));
}

}  // namespace ndelab::w4
