#include "core/error.hpp"

namespace ndelab {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ok: return "ok";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::domain_error: return "domain_error";
    case ErrorCode::step_underflow: return "step_underflow";
    case ErrorCode::blowup_detected: return "blowup_detected";
    case ErrorCode::max_iterations: return "max_iterations";
    case ErrorCode::no_sign_change: return "no_sign_change";
    case ErrorCode::shooting_failed: return "shooting_failed";
    case ErrorCode::complete_blowup: return "complete_blowup";
    case ErrorCode::insufficient_tail: return "insufficient_tail";
    case ErrorCode::unclassified: return "unclassified";
    case ErrorCode::root_not_found: return "root_not_found";
    case ErrorCode::insufficient_humps: return "insufficient_humps";
    case ErrorCode::at_blowup: return "at_blowup";
    case ErrorCode::non_blowup: return "non_blowup";
    case ErrorCode::out_of_domain: return "out_of_domain";
    case ErrorCode::nonpositive_J0: return "nonpositive_J0";
    case ErrorCode::insufficient_samples: return "insufficient_samples";
    case ErrorCode::divergent_c0: return "divergent_c0";
    case ErrorCode::invalid_grid: return "invalid_grid";
    case ErrorCode::cfl_violation: return "cfl_violation";
    case ErrorCode::out_of_window: return "out_of_window";
    case ErrorCode::zero_jump: return "zero_jump";
    case ErrorCode::singular_at_origin: return "singular_at_origin";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace ndelab
