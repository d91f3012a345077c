#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "core/blowup.hpp"
#include "core/diagnostics.hpp"
#include "core/exact.hpp"
#include "core/ode.hpp"
#include "core/pde.hpp"
#include "core/similarity.hpp"

namespace ndelab::io {

using json = nlohmann::ordered_json;

// shortest form is not used on purpose: every value carries 17 significant digits
std::string num(double v);

void write_text(const std::string& path, const std::string& content);

std::string profile_csv(const similarity::Profile& p);
json profile_json(const similarity::Profile& p, bool include_grid = false);

std::string saw_csv(const exact::Saw& saw, int samples_per_hump = 64);
json saw_json(const exact::Saw& saw);

std::string w4_csv(const ode::Trajectory& tr);

std::string snapshot_csv(const pde::PdeState& s);
std::string pde_diagnostics_csv(const std::vector<pde::Diagnostics>& series);
json pde_config_json(const pde::PdeState& s, const std::string& data, double smoothing_width, double t_end,
                     double dt_safety);

json certificate_json(const blowup::BlowupCertificate& c);

std::string admissibility_csv(const diag::AdmissibilityReport& r);
json admissibility_json(const diag::AdmissibilityReport& r);

json airy_json(const diag::AiryTailFit& f);

}  // namespace ndelab::io
