#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "core/ode.hpp"

namespace ndelab::similarity {

enum class Branch { blowup, rarefaction };

enum class Classification {
  bounded_oscillatory,
  cubic_growth,
  finite_interface,
  sqrt_singularity,
  power_tail,  // alpha != 0: g ~ C|z|^p at infinity with p = 3 alpha/(1 + alpha)
};

const char* branch_name(Branch b);
const char* classification_name(Classification c);

struct SimilarityParams {
  double alpha = 0.0;
  Branch branch = Branch::blowup;
  double beta() const { return (1.0 + alpha) / 3.0; }
  // far-field power of g; 0 for the shock/rarefaction case
  double tail_power() const { return 3.0 * alpha / (1.0 + alpha); }
};

// Sampled profile on an ascending grid. The first three derivatives are kept
// so that evaluation between nodes is quintic Hermite.
struct Profile {
  std::vector<double> z, g, dg, d2g, d3g;
  SimilarityParams params;
  double origin_slope = 0.0;
  std::optional<double> far_limit;       // z -> -inf (coefficient of |z|^p when alpha != 0)
  std::optional<double> far_limit_plus;  // z -> +inf
  std::optional<double> interface_z0;
  int interface_side = 1;  // +1: g = 0 for z > z0, -1: g = 0 for z < z0
  Classification classification = Classification::bounded_oscillatory;

  std::size_t size() const { return z.size(); }
  double z_min() const { return z.front(); }
  double z_max() const { return z.back(); }
  bool contains(double x) const { return !z.empty() && x >= z.front() && x <= z.back(); }

  // order 0..3
  double eval(double x, int order = 0) const;
  std::vector<double> eval(const std::vector<double>& xs, int order = 0) const;
  // exact integral of the interpolant over [a, b]
  double integral(double a, double b) const;

  void push(double zz, double gg, double d1, double d2, double d3);
  void validate() const;
};

using State3 = std::array<double, 3>;

State3 rhs_regularized(const State3& s, double z, double alpha, double nu,
                       Branch branch = Branch::blowup);

// residual (g g')'' -/+ beta g' z +/- alpha g from pointwise derivative data
double ode_residual(double g, double dg, double d2g, double d3g, double z, double alpha,
                    Branch branch = Branch::blowup);

// C z + b3 z^3 + b5 z^5 with b3 = (1 - 2 alpha)/72, b5 = (b3 - 60 b3^2)/(120 C)
double origin_series(double C, double z, double alpha = 0.0);
State3 origin_series_state(double C, double z, double alpha = 0.0);

constexpr double kOriginOffset = 1e-4;
constexpr double kFarCut = -50.0;

struct ShotRange {
  double z_left = kFarCut;
  double z_right = -kFarCut;  // <= 0 means: left side only
};

// one regularized integration from the origin with g'(0) = C, both directions
Profile shoot_from_origin(double alpha, double C, const ode::OdeSettings& settings,
                          const ShotRange& range = {});

Profile shoot_profile(double alpha, double target_limit, const ode::OdeSettings& settings);

Profile rescale_profile(const Profile& p, double a);
Profile reflect_to_rarefaction(const Profile& p);

enum class Side { left, right };

struct FarFieldEstimate {
  double value = 0.0;
  int periods = 0;
  double window_start = 0.0;  // |z| where the averaging window begins
  double window_end = 0.0;
};

// period mean of g |z|^-p over the outermost oscillations on one side
FarFieldEstimate estimate_far_field(const Profile& p, Side side = Side::left, int periods = 5);
double estimate_far_field_limit(const Profile& p);

// extrema of g |z|^-p on one side, ordered outward from the origin
struct Extremum {
  double z;
  double value;
};
std::vector<Extremum> tail_extrema(const Profile& p, Side side);

Profile interface_profile(double alpha, double z0, const ode::OdeSettings& settings,
                          double z_left = kFarCut);

struct HeavisideResult {
  double z0 = 0.0;
  double H0 = 0.0;
  Profile profile;
};
HeavisideResult solve_heaviside(const ode::OdeSettings& settings);

Profile singular_point_family(double z0, double C, const ode::OdeSettings& settings,
                              const ShotRange& range = {});

struct SingularityReport {
  Classification classification = Classification::bounded_oscillatory;
  double z0 = 0.0;     // singular / contact point
  double coeff = 0.0;  // C of C sqrt|z - z0|, A of A (z - z0)^2, or g/z^3
  double rms = 0.0;    // relative rms misfit of the accepted model
};
SingularityReport detect_singularity(const std::vector<double>& z, const std::vector<double>& g);

double final_time_profile(double alpha, double C_minus, double C_plus, double x);

}  // namespace ndelab::similarity
