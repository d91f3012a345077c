#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ndelab::blowup {

enum class Order { first = 1, second = 2, third = 3 };

const char* order_name(Order o);

struct JSample {
  double t;
  double J;
};

struct BlowupCertificate {
  double L = 0.0;
  double J0 = 0.0;
  Order order = Order::first;
  double bound_T0 = 0.0;
  bool odi_satisfied = false;
  std::optional<double> odi_margin;
  std::optional<double> c0;
  std::vector<JSample> J_trajectory;
};

// phi(x) = -(x + L)^3 on [-L, 0]
double cut_weight(double L, double x);

// composite Simpson on an arbitrary ascending grid
double simpson(const std::vector<double>& x, const std::vector<double>& f);

// J = -int_{-L}^{0} u (x + L)^3 dx; the grid must cover [-L, 0] with nodes at both ends
double expansion_coefficient(const std::vector<double>& x, const std::vector<double>& u, double L);
double expansion_coefficient(const std::function<double(double)>& u, double L, int intervals = 2048);

// T0 from J^(k) = (3/L^7) J^2 with J(0) = J0 and vanishing lower derivatives
double blowup_time_bound(double J0, double L, Order order);

// blow-up time of y^(k) = y^2, y(0) = 1, lower derivatives zero
double unit_blowup_time(Order order);

struct OdiReport {
  bool satisfied = false;
  double min_margin = 0.0;           // min of J' - (3/L^7) J^2
  double min_relative_margin = 0.0;  // same, divided by (3/L^7) J^2
  std::size_t worst_index = 0;
};

// J' by non-uniform central differences at interior samples;
// satisfied when the relative margin stays above -rel_tol
OdiReport odi_check(const std::vector<JSample>& traj, double L, double rel_tol = 1e-2);

struct TimeCutoff {
  std::string name;
  std::function<double(double)> phi;
  std::function<double(double)> phi2;  // second derivative
};

// tau^k (1 - tau)^k
TimeCutoff polynomial_cutoff(int k);

struct CapacityResult {
  double J0 = 0.0;
  double c0 = 0.0;
  double c0_error = 0.0;
  double T0 = 0.0;
};

// c0 = int_0^1 |phi0''|^2 / phi0, adaptive Gauss-Kronrod
double capacity_constant(const TimeCutoff& cutoff, double* error_estimate = nullptr);

// J0 = int_0^L ut0 (L - x)^3 dx on a grid covering [0, L]; T0 = (c0 L^7 / (7 J0))^(1/3)
CapacityResult capacity_bound(const std::vector<double>& x, const std::vector<double>& ut0, double L,
                              const TimeCutoff& cutoff = polynomial_cutoff(4));

}  // namespace ndelab::blowup
