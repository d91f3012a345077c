#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/similarity.hpp"

namespace ndelab::diag {

using Evaluator = std::function<double(double)>;

struct AiryTailFit {
  double limit = 0.0;
  double c = 0.0;
  double decay_exp = 0.0;
  double a0_fit = 0.0;
  double c0_fit = 0.0;  // phase offset, reduced to (-pi, pi]
  double residual = 0.0;  // rms misfit
  int extrema = 0;
  double z_start = 0.0;
  double z_end = 0.0;
};

// g - limit ~ c |z|^d cos(a |z|^(3/2) + phi) on z in [-z_end, -z_start]
AiryTailFit airy_tail_fit(const similarity::Profile& p, double z_start = 10.0,
                          std::optional<double> z_end = std::nullopt);
// same model on raw samples (z < 0), initial limit given
AiryTailFit airy_tail_fit(const std::vector<double>& z, const std::vector<double>& g, double limit_guess);

// sum |g_{i+1} - g_i| over grid segments whose left node lies in [z_lo, z_hi)
double total_variation(const similarity::Profile& p, double z_lo, double z_hi);

struct PowerFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  std::vector<double> xs;
  std::vector<double> ys;
};

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

// TV over [-Z, 0] for Z geometric in [z_min, z_max]
PowerFit tv_growth(const similarity::Profile& p, double z_min = 10.0, double z_max = 50.0, int count = 9);

// I(t) = int_{-l}^{0} |g(x (-t)^(-1/3)) - 1| dx for (-t) = (l/Z)^3, Z geometric in [z_min, z_max];
// the fitted exponent is q in I ~ (-t)^q
PowerFit convergence_rate(const Evaluator& g, double l = 1.0, double z_min = 10.0,
                          double z_max = 50.0, int count = 9);
PowerFit convergence_rate(const similarity::Profile& p, double l = 1.0, double z_min = 10.0,
                          double z_max = 50.0, int count = 9);

std::array<std::complex<double>, 3> dispersion_eigenvalues(double u, double epsilon);

struct AdmissibilityRow {
  double param = 0.0;
  double sup = 0.0;
  double l1 = 0.0;
  std::string status = "ok";
};

struct AdmissibilityReport {
  std::vector<AdmissibilityRow> rows;
  bool monotone = false;
  bool converged = false;
  std::string verdict;  // "numerically G-admissible" or "non_convergent"
  double window_lo = 0.0;
  double window_hi = 0.0;
  double tolerance = 1e-3;
};

using Family = std::function<Evaluator(double)>;

AdmissibilityReport g_admissibility_report(const Evaluator& target, const Family& family,
                                           const std::vector<double>& params, double window_lo,
                                           double window_hi, int samples = 4001,
                                           double tolerance = 1e-3);

}  // namespace ndelab::diag
