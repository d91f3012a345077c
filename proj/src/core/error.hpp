#pragma once

#include <stdexcept>
#include <string>

namespace ndelab {

enum class ErrorCode {
  ok = 0,
  invalid_argument,
  domain_error,
  step_underflow,
  blowup_detected,
  max_iterations,
  no_sign_change,
  shooting_failed,
  complete_blowup,
  insufficient_tail,
  unclassified,
  root_not_found,
  insufficient_humps,
  at_blowup,
  non_blowup,
  out_of_domain,
  nonpositive_J0,
  insufficient_samples,
  divergent_c0,
  invalid_grid,
  cfl_violation,
  out_of_window,
  zero_jump,
  singular_at_origin,
  io_error,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace ndelab
