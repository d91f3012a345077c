#pragma once

#include <array>
#include <limits>
#include <vector>

#include "core/similarity.hpp"

namespace ndelab::exact {

constexpr double kAlphaCritical = -0.1;

// C0 + C1 z + C2 z^2 + C3 z^3 on [z_left, z_right]
struct CubicPiece {
  double z_left = 0.0;
  double z_right = 0.0;
  std::array<double, 4> c{};

  double eval(double z, int order = 0) const;
};

class PiecewiseCubic {
 public:
  PiecewiseCubic() = default;
  explicit PiecewiseCubic(std::vector<CubicPiece> pieces);

  const std::vector<CubicPiece>& pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }
  double z_min() const { return pieces_.front().z_left; }
  double z_max() const { return pieces_.back().z_right; }
  // interior junctions, ascending
  std::vector<double> breakpoints() const;
  const CubicPiece& piece_at(double z) const;
  // at a junction the piece on the right is used unless from_left is set
  double eval(double z, int order = 0, bool from_left = false) const;

 private:
  std::vector<CubicPiece> pieces_;
};

// g = C0 + C1 z + z^3/60, a solution for alpha = -1/10
PiecewiseCubic invariant_cubic_I(double C0, double C1,
                                 double z_left = -std::numeric_limits<double>::infinity(),
                                 double z_right = std::numeric_limits<double>::infinity());
// g = (400/3) C2^3 + 20 C2^2 z + C2 z^2 + z^3/60, a solution for alpha = -1
PiecewiseCubic invariant_cubic_II(double C2,
                                  double z_left = -std::numeric_limits<double>::infinity(),
                                  double z_right = std::numeric_limits<double>::infinity());

// (g g')'' - ((1+alpha)/3) g' z + alpha g
double residual(const CubicPiece& piece, double alpha, double z);
double residual(const PiecewiseCubic& g, double alpha, double z);
double residual(const similarity::Profile& p, double alpha, double z);

// saw for alpha = -1/10 on [z_last, 0] with g'(0) = -m, humps ordered outward
struct Saw {
  double m = 1.0;
  PiecewiseCubic curve;
  std::vector<double> zeros;  // z_0 > z_1 > ... (z_k closes hump k)
  std::vector<std::array<double, 4>> hump_coeffs;  // hump k, ordered outward
  std::vector<similarity::Extremum> peaks;         // one per hump
};

Saw build_saw(double m, int num_humps);

struct EnvelopeFit {
  double C_env = 0.0;
  double exponent = 0.0;
  int humps_used = 0;
};
EnvelopeFit saw_envelope_fit(const Saw& saw, int skip_humps = 0);

enum class TwKind { constant, sqrt_branch, parabola };

// f(y), y = x - lambda t; params (p1, p2): constant -> (C, -), sqrt -> (A1, A2),
// parabola -> (B, -)
struct TravellingWave {
  TwKind kind = TwKind::constant;
  double lambda = 0.0;
  double A0 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;

  double eval(double y, int order = 0) const;
  // (f f')' = f f'' + f'^2
  double flux(double y) const;
};

TravellingWave tw_solution(TwKind kind, double lambda, double A0, double p1, double p2 = 0.0);

double rankine_hugoniot_speed(double flux_jump, double value_jump);

}  // namespace ndelab::exact
