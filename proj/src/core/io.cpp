#include "core/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace ndelab::io {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::io_error, "cannot open " + path + " for writing");
  f << content;
  if (!f) fail(ErrorCode::io_error, "write to " + path + " failed");
}

namespace {

json optional_num(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

json finite_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

std::string profile_csv(const similarity::Profile& p) {
  std::string out = "z,g\n";
  for (std::size_t i = 0; i < p.size(); ++i) out += num(p.z[i]) + "," + num(p.g[i]) + "\n";
  return out;
}

json profile_json(const similarity::Profile& p, bool include_grid) {
  json j;
  j["alpha"] = p.params.alpha;
  j["beta"] = p.params.beta();
  j["branch"] = similarity::branch_name(p.params.branch);
  j["classification"] = similarity::classification_name(p.classification);
  j["origin_slope"] = finite_or_null(p.origin_slope);
  j["far_limit"] = optional_num(p.far_limit);
  j["far_limit_plus"] = optional_num(p.far_limit_plus);
  j["interface_z0"] = optional_num(p.interface_z0);
  j["z_min"] = p.z_min();
  j["z_max"] = p.z_max();
  j["samples"] = p.size();
  if (include_grid) {
    j["z"] = p.z;
    j["g"] = p.g;
  }
  return j;
}

std::string saw_csv(const exact::Saw& saw, int samples_per_hump) {
  std::string out = "z,g\n";
  const auto& pcs = saw.curve.pieces();
  for (std::size_t k = 0; k < pcs.size(); ++k) {
    const auto& pc = pcs[k];
    const int last = k + 1 == pcs.size() ? samples_per_hump : samples_per_hump - 1;
    for (int i = 0; i <= last; ++i) {
      const double z = pc.z_left + (pc.z_right - pc.z_left) * i / samples_per_hump;
      out += num(z) + "," + num(pc.eval(z)) + "\n";
    }
  }
  return out;
}

json saw_json(const exact::Saw& saw) {
  json j;
  j["m"] = saw.m;
  j["humps"] = saw.zeros.size();
  j["breakpoints"] = saw.zeros;
  std::vector<double> ratios;
  for (std::size_t k = 1; k < saw.zeros.size(); ++k) ratios.push_back(saw.zeros[k] / saw.zeros[k - 1]);
  j["ratios"] = ratios;
  json coeffs = json::array();
  for (const auto& c : saw.hump_coeffs) coeffs.push_back({c[0], c[1], c[2], c[3]});
  j["coefficients"] = coeffs;
  json peaks = json::array();
  for (const auto& p : saw.peaks) peaks.push_back({{"z", p.z}, {"height", p.value}});
  j["peaks"] = peaks;
  return j;
}

std::string w4_csv(const ode::Trajectory& tr) {
  std::string out = "t,C0,C1,C2,C3\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    out += num(tr.time(i));
    for (std::size_t c = 0; c < 4; ++c) out += "," + num(tr.value(i, c));
    out += "\n";
  }
  return out;
}

std::string snapshot_csv(const pde::PdeState& s) {
  std::string out = "x,u\n";
  for (std::size_t i = 0; i < s.size(); ++i) out += num(s.x[i]) + "," + num(s.u[i]) + "\n";
  return out;
}

std::string pde_diagnostics_csv(const std::vector<pde::Diagnostics>& series) {
  std::string out = "t,mass,mass_left,mass_right,h_minus1,sup\n";
  for (const auto& d : series)
    out += num(d.t) + "," + num(d.mass) + "," + num(d.mass_left) + "," + num(d.mass_right) + "," +
           num(d.h_minus1) + "," + num(d.sup) + "\n";
  return out;
}

json pde_config_json(const pde::PdeState& s, const std::string& data, double smoothing_width, double t_end,
                     double dt_safety) {
  json j;
  j["L"] = s.L;
  j["n"] = s.size();
  j["epsilon"] = s.epsilon;
  j["dt_safety"] = dt_safety;
  j["data"] = data;
  j["smoothing_width"] = smoothing_width;
  j["t_end"] = t_end;
  return j;
}

json certificate_json(const blowup::BlowupCertificate& c) {
  json j;
  j["L"] = c.L;
  j["J0"] = c.J0;
  j["order"] = blowup::order_name(c.order);
  j["T0"] = c.bound_T0;
  j["odi_satisfied"] = c.odi_satisfied;
  j["odi_margin"] = optional_num(c.odi_margin);
  j["c0"] = optional_num(c.c0);
  if (!c.J_trajectory.empty()) {
    json tr = json::array();
    for (const auto& s : c.J_trajectory) tr.push_back({s.t, s.J});
    j["J_trajectory"] = tr;
  }
  return j;
}

std::string admissibility_csv(const diag::AdmissibilityReport& r) {
  std::string out = "param,sup,l1,status\n";
  for (const auto& row : r.rows) out += num(row.param) + "," + num(row.sup) + "," + num(row.l1) + "," + row.status + "\n";
  return out;
}

json admissibility_json(const diag::AdmissibilityReport& r) {
  json j;
  j["window"] = {r.window_lo, r.window_hi};
  j["tolerance"] = r.tolerance;
  j["monotone"] = r.monotone;
  j["converged"] = r.converged;
  j["verdict"] = r.verdict;
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"param", row.param}, {"sup", finite_or_null(row.sup)}, {"l1", finite_or_null(row.l1)},
                    {"status", row.status}});
  j["rows"] = rows;
  return j;
}

json airy_json(const diag::AiryTailFit& f) {
  json j;
  j["limit"] = f.limit;
  j["c"] = f.c;
  j["decay_exp"] = f.decay_exp;
  j["a0_fit"] = f.a0_fit;
  j["c0_fit"] = f.c0_fit;
  j["residual"] = f.residual;
  j["extrema"] = f.extrema;
  j["window"] = {f.z_start, f.z_end};
  return j;
}

}  // namespace ndelab::io
