#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "core/similarity.hpp"

namespace ndelab::pde {

enum class BoundaryKind { pinned_far_field, dirichlet_zero };
enum class DataKind { s_minus, s_plus, h_left, h_right, custom };

const char* data_name(DataKind k);

struct RiemannData {
  DataKind kind = DataKind::s_minus;
  // < 0 selects the default 4 dx; 0 keeps the raw step
  double smoothing_width = -1.0;
  std::function<double(double)> custom;
};

struct PdeState {
  std::vector<double> x;
  std::vector<double> u;
  double t = 0.0;
  double L = 0.0;
  double dx = 0.0;
  double epsilon = 0.0;
  BoundaryKind bc = BoundaryKind::pinned_far_field;
  double pin_left = 0.0;
  double pin_right = 0.0;

  std::size_t size() const { return u.size(); }
};

constexpr int kMinGrid = 64;
constexpr double kC3 = 0.25;
constexpr double kC4 = 0.125;

// epsilon < 0 selects the default dx^2
PdeState make_state(const RiemannData& data, double L, int n, double epsilon = -1.0);
PdeState make_state(const std::function<double(double)>& u0, double L, int n, double epsilon,
                    BoundaryKind bc);

// right-hand side 1/2 (u^2)_xxx - eps u_xxxx with pinned ends
void spatial_operator(const PdeState& s, const std::vector<double>& u, std::vector<double>& out);

double stable_dt(const PdeState& s, double c3 = kC3, double c4 = kC4);

// one classical RK4 step
void step(PdeState& s, double dt, double blowup_threshold = 1e8);

struct Diagnostics {
  double t = 0.0;
  double mass = 0.0;
  double mass_left = 0.0;   // x < 0
  double mass_right = 0.0;  // x > 0
  double h_minus1 = 0.0;
  double sup = 0.0;
  double grad_sq = 0.0;  // sum of squared forward differences over dx
};

Diagnostics diagnose(const PdeState& s);

struct EvolveOptions {
  double dt_safety = 1.0;          // multiplies the stable step
  double record_interval = 0.0;    // 0: record only start and end
  double blowup_threshold = 1e8;
  double boundary_tolerance = 1e-8;
};

struct EvolveResult {
  PdeState state;
  std::vector<Diagnostics> series;
  long steps = 0;
  std::optional<double> boundary_arrival;  // first time the pins' neighbours move
};

EvolveResult evolve(PdeState s, double t_end, const EvolveOptions& opts = {});

// (int g u)^(1/2) with g'' = -u, g(+-L) = 0
double h_minus1_norm(const PdeState& s);
double h_minus1_norm(const std::vector<double>& u, double dx);

// v(z) = u(z s, t): s = (T - t)^(1/3) for the blow-up branch, t^(1/3) for rarefaction
similarity::Profile rescale_to_similarity(const PdeState& s, double T_blowup,
                                          similarity::Branch branch, double z_max = 3.0,
                                          int nz = 601);

struct RescaledState {
  std::vector<double> z;
  std::vector<double> v;
  double tau = 0.0;
  double dz = 0.0;
  double epsilon = 0.0;
  double pin_left = 0.0;
  double pin_right = 0.0;
};

// samples g on a uniform grid over [-Z, Z]
RescaledState make_rescaled(const similarity::Profile& g, double Z, int n, double epsilon = 0.0);

// (v v_z)_zz - (1/3) z v_z - eps v_zzzz at interior nodes
void rescaled_operator(const RescaledState& s, const std::vector<double>& v, std::vector<double>& out);
double rescaled_residual_norm(const RescaledState& s);

struct RescaledRecord {
  double tau;
  double sup_distance;
};

struct RescaledResult {
  RescaledState state;
  std::vector<RescaledRecord> distances;
};

// v_tau = rescaled_operator(v); distances to the seed over |z| <= window
RescaledResult evolve_rescaled(RescaledState s, double tau_end, double window,
                               double record_interval = 0.0, double blowup_threshold = 1e8);

}  // namespace ndelab::pde
