#pragma once

#include <array>

#include "core/ode.hpp"
#include "core/poly.hpp"

namespace ndelab::w4 {

using Coeffs4 = std::array<double, 4>;

struct W4State {
  double t = 0.0;
  Coeffs4 c{};  // coefficients of 1, x, x^2, x^3
};

// (C0', C1', C2', C3') of u = sum C_k x^k under u_t = (u u_x)_xx
Coeffs4 w4_rhs(const Coeffs4& c);

// blow-up orbit with C3 = 1/(60 s), s = T - t
W4State w4_closed_form(double T, double A0, double B0, double D0, double t);

double w4_blowup_time(double c3_initial);

ode::Trajectory w4_integrate(const W4State& s0, double t_end, const ode::OdeSettings& settings);

// (u u_x)_xx for a polynomial u, by dense coefficient arithmetic
poly::Coeffs nde_operator(const poly::Coeffs& u);

}  // namespace ndelab::w4
