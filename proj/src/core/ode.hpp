#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace ndelab::ode {

using State = std::vector<double>;
// dydt = f(t, y); both arrays have the system dimension
using Rhs = std::function<void(double t, const double* y, double* dydt)>;
using EventFn = std::function<double(double t, const double* y)>;

struct OdeSettings {
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  double nu = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double min_step = 1e-14;
  long max_steps = 2000000;
  double blowup_threshold = 1e8;

  void validate() const;
};

enum class Termination { reached_end, event_hit, blowup_detected, step_underflow };

const char* termination_name(Termination t);

// Accepted steps of one integration, with derivatives for Hermite dense output.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  double time(std::size_t i) const { return times_[i]; }
  const std::vector<double>& times() const { return times_; }
  const double* state(std::size_t i) const { return &states_[i * dim_]; }
  const double* derivative(std::size_t i) const { return &derivs_[i * dim_]; }
  double value(std::size_t i, std::size_t comp) const { return states_[i * dim_ + comp]; }
  double front_time() const { return times_.front(); }
  double back_time() const { return times_.back(); }
  bool increasing() const { return times_.size() < 2 || times_.back() > times_.front(); }

  // cubic Hermite interpolation; t must lie inside the covered interval
  State interpolate(double t) const;
  double interpolate(double t, std::size_t comp) const;
  // derivative of the interpolant
  double interpolate_derivative(double t, std::size_t comp) const;

  Termination termination = Termination::reached_end;
  int event_index = -1;
  long rhs_evaluations = 0;

  void push(double t, const double* y, const double* dy);
  void truncate(std::size_t n);

 private:
  std::size_t locate(double t) const;

  std::size_t dim_ = 0;
  std::vector<double> times_;
  std::vector<double> states_;
  std::vector<double> derivs_;
};

// Dormand-Prince 5(4) with PI step control. Events stop the integration at
// the first sign change of any event function.
Trajectory integrate(const Rhs& rhs, const State& y0, double t_start, double t_end,
                     const OdeSettings& settings, const std::vector<EventFn>& events = {});

// Bracketed root with final bracket width <= tol.
double find_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                 int max_iterations = 200);

}  // namespace ndelab::ode
