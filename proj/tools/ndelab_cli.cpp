#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ndelab/ndelab.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct NumericFailure {
  ndl_status status;
  std::string message;
};

struct UsageFailure {
  std::string message;
};

void check(ndl_status st, const std::string& what) {
  if (st != NDL_OK) throw NumericFailure{st, what + ": " + ndl_last_error()};
}

struct ProfileDeleter {
  void operator()(ndl_profile* p) const { ndl_profile_free(p); }
};
struct SawDeleter {
  void operator()(ndl_saw* s) const { ndl_saw_free(s); }
};
struct TableDeleter {
  void operator()(ndl_table* t) const { ndl_table_free(t); }
};
struct PdeDeleter {
  void operator()(ndl_pde* p) const { ndl_pde_free(p); }
};
using ProfilePtr = std::unique_ptr<ndl_profile, ProfileDeleter>;
using SawPtr = std::unique_ptr<ndl_saw, SawDeleter>;
using TablePtr = std::unique_ptr<ndl_table, TableDeleter>;
using PdePtr = std::unique_ptr<ndl_pde, PdeDeleter>;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Context {
  fs::path out;
  ndl_ode_settings settings{};
  std::vector<std::string> csv_files;
  bool gnuplot = false;

  std::string path(const std::string& name) const { return (out / name).string(); }

  void note_csv(const std::string& name) { csv_files.push_back(name); }

  void write_text(const std::string& name, const std::string& text) {
    std::ofstream f(path(name), std::ios::binary | std::ios::trunc);
    if (!f) throw NumericFailure{NDL_IO_ERROR, "cannot write " + path(name)};
    f << text;
  }

  void write_json(const std::string& name, const json& j) { write_text(name, j.dump(2) + "\n"); }

  void write_columns(const std::string& name, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& cols) {
    std::string s;
    for (std::size_t c = 0; c < header.size(); ++c) s += (c ? "," : "") + header[c];
    s += "\n";
    const std::size_t rows = cols.empty() ? 0 : cols.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols.size(); ++c) s += (c ? "," : "") + num(cols[c][r]);
      s += "\n";
    }
    write_text(name, s);
    note_csv(name);
  }

  void write_profile(const std::string& name, const ndl_profile* p) {
    check(ndl_profile_write_csv(p, path(name).c_str()), "writing " + name);
    note_csv(name);
  }

  void write_table(const std::string& name, const ndl_table* t) {
    check(ndl_table_write_csv(t, path(name).c_str()), "writing " + name);
    note_csv(name);
  }

  void finish() {
    if (!gnuplot || csv_files.empty()) return;
    std::string s = "set datafile separator ','\nset key autotitle columnhead\n";
    for (const auto& f : csv_files) {
      s += "set title '" + f + "'\nplot '" + f + "'";
      s += " using 1:2 with lines\npause -1\n";
    }
    write_text("plot.gp", s);
  }
};

ndl_profile_info info_of(const ndl_profile* p) {
  ndl_profile_info i{};
  check(ndl_profile_get_info(p, &i), "profile info");
  return i;
}

const char* classification_name(ndl_classification c) {
  switch (c) {
    case NDL_BOUNDED_OSCILLATORY: return "bounded_oscillatory";
    case NDL_CUBIC_GROWTH: return "cubic_growth";
    case NDL_FINITE_INTERFACE: return "finite_interface";
    case NDL_SQRT_SINGULARITY: return "sqrt_singularity";
    case NDL_POWER_TAIL: return "power_tail";
  }
  return "unknown";
}

json profile_meta(const ndl_profile* p) {
  const auto i = info_of(p);
  json j;
  j["alpha"] = i.alpha;
  j["beta"] = i.beta;
  j["branch"] = i.branch == NDL_BRANCH_BLOWUP ? "blowup" : "rarefaction";
  j["classification"] = classification_name(i.classification);
  j["origin_slope"] = or_null(i.origin_slope);
  j["far_limit"] = i.has_far_limit ? or_null(i.far_limit) : json(nullptr);
  j["far_limit_plus"] = i.has_far_limit_plus ? or_null(i.far_limit_plus) : json(nullptr);
  j["interface_z0"] = i.has_interface ? or_null(i.interface_z0) : json(nullptr);
  j["z_min"] = i.z_min;
  j["z_max"] = i.z_max;
  j["samples"] = i.samples;
  return j;
}

void samples(const ndl_profile* p, std::vector<double>& z, std::vector<double>& g) {
  std::size_t n = 0;
  check(ndl_profile_samples(p, nullptr, nullptr, 0, &n), "profile samples");
  z.resize(n);
  g.resize(n);
  check(ndl_profile_samples(p, z.data(), g.data(), n, &n), "profile samples");
}

std::vector<std::vector<double>> table_columns(const ndl_table* t, std::vector<std::string>* names = nullptr) {
  std::size_t rows = 0, cols = 0;
  check(ndl_table_shape(t, &rows, &cols), "table shape");
  std::vector<double> flat(rows * cols);
  if (!flat.empty()) check(ndl_table_data(t, flat.data(), flat.size()), "table data");
  std::vector<std::vector<double>> out(cols, std::vector<double>(rows));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out[c][r] = flat[r * cols + c];
  if (names) {
    names->clear();
    for (std::size_t c = 0; c < cols; ++c) {
      const char* nm = nullptr;
      check(ndl_table_column_name(t, c, &nm), "table column");
      names->push_back(nm);
    }
  }
  return out;
}

ProfilePtr shoot_profile(Context& cx, double alpha, double limit) {
  ndl_profile* p = nullptr;
  check(ndl_shoot_profile(alpha, limit, &cx.settings, &p), "shoot_profile");
  return ProfilePtr(p);
}

ProfilePtr shoot_from_origin(Context& cx, double alpha, double C, double zl, double zr) {
  ndl_profile* p = nullptr;
  check(ndl_shoot_from_origin(alpha, C, zl, zr, &cx.settings, &p), "shoot_from_origin");
  return ProfilePtr(p);
}

ProfilePtr reflect(const ndl_profile* src) {
  ndl_profile* p = nullptr;
  check(ndl_profile_reflect(src, &p), "reflect");
  return ProfilePtr(p);
}

ProfilePtr interface_profile(Context& cx, double alpha, double z0) {
  ndl_profile* p = nullptr;
  check(ndl_interface_profile(alpha, z0, &cx.settings, &p), "interface_profile");
  return ProfilePtr(p);
}

ProfilePtr singular_family(Context& cx, double z0, double C, double zl, double zr) {
  ndl_profile* p = nullptr;
  check(ndl_singular_point_family(z0, C, zl, zr, &cx.settings, &p), "singular_point_family");
  return ProfilePtr(p);
}

SawPtr build_saw(double m, int humps) {
  ndl_saw* s = nullptr;
  check(ndl_build_saw(m, humps, &s), "build_saw");
  return SawPtr(s);
}

std::vector<double> saw_zeros(const ndl_saw* s) {
  std::size_t n = 0;
  check(ndl_saw_breakpoints(s, nullptr, 0, &n), "saw breakpoints");
  std::vector<double> z(n);
  check(ndl_saw_breakpoints(s, z.data(), n, &n), "saw breakpoints");
  return z;
}

json saw_meta(const ndl_saw* s, double m) {
  const auto zeros = saw_zeros(s);
  json j;
  j["m"] = m;
  j["humps"] = zeros.size();
  j["breakpoints"] = zeros;
  std::vector<double> ratios;
  for (std::size_t k = 1; k < zeros.size(); ++k) ratios.push_back(zeros[k] / zeros[k - 1]);
  j["ratios"] = ratios;
  json coeffs = json::array(), peaks = json::array();
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    double c[4], pz = 0, ph = 0;
    check(ndl_saw_hump(s, k, c, &pz, &ph), "saw hump");
    coeffs.push_back({c[0], c[1], c[2], c[3]});
    peaks.push_back({{"z", pz}, {"height", ph}});
  }
  j["coefficients"] = coeffs;
  j["peaks"] = peaks;
  return j;
}

json feature(const std::string& name, json measured, json expected, bool pass) {
  return {{"feature", name}, {"measured", measured}, {"expected", expected}, {"pass", pass}};
}

struct Manifest {
  std::string figure;
  std::string description;
  json checked = json::array();
  json plotted = json::array();
  json files = json::array();
};

void add_file(Manifest& m, const std::string& name, const std::string& content) {
  m.files.push_back({{"file", name}, {"content", content}});
}

void write_manifest(Context& cx, const Manifest& m, const json& config) {
  json j;
  j["figure"] = m.figure;
  j["description"] = m.description;
  j["config"] = config;
  j["files"] = m.files;
  j["checked"] = m.checked;
  j["plotted_only"] = m.plotted;
  cx.write_json("manifest.json", j);
}

std::string tag(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  std::string s = buf;
  for (auto& ch : s)
    if (ch == '-') ch = 'm';
    else if (ch == '+') ch = 'p';
  return s;
}

// figures

void figure_F1(Context& cx, Manifest& m) {
  m.description = "odd shock profile and its reflected rarefaction profile";
  auto p = shoot_profile(cx, 0.0, 1.0);
  auto r = reflect(p.get());
  cx.write_profile("f1_shock.csv", p.get());
  cx.write_profile("f1_rarefaction.csv", r.get());
  add_file(m, "f1_shock.csv", "shock profile g(z), limit 1 as z -> -inf");
  add_file(m, "f1_rarefaction.csv", "rarefaction profile obtained by reflection");
  const auto i = info_of(p.get());
  m.checked.push_back(feature("origin_slope", i.origin_slope, "-0.51 +- 0.02", std::fabs(i.origin_slope + 0.51) < 0.02));
  m.checked.push_back(feature("far_limit", i.far_limit, "1 +- 1e-3", std::fabs(i.far_limit - 1.0) < 1e-3));
  m.plotted.push_back("oscillatory tails of both profiles");
}

void figure_F2(Context& cx, Manifest& m) {
  m.description = "odd shock profiles with various far-field limits";
  json slopes = json::array();
  double lo = 1e300, hi = -1e300;
  for (double lim : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    auto p = shoot_profile(cx, 0.0, lim);
    const std::string name = "f2_limit_" + tag(lim) + ".csv";
    cx.write_profile(name, p.get());
    add_file(m, name, "shock profile with far-field limit " + num(lim));
    const double C = info_of(p.get()).origin_slope;
    slopes.push_back({{"limit", lim}, {"origin_slope", C}});
    const double scaled = C / std::pow(lim, 2.0 / 3.0);
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
  }
  m.checked.push_back(feature("origin_slope / limit^(2/3) spread", hi - lo, "< 1e-4", hi - lo < 1e-4));
  m.checked.push_back({{"feature", "origin slopes"}, {"measured", slopes}});
  m.plotted.push_back("profile shapes for z < 0");
}

void figure_F3(Context& cx, Manifest& m) {
  m.description = "non-symmetric profiles through a zero at z0 = 5";
  json lims = json::array();
  for (double C : {-0.5, -1.0, -2.0}) {
    auto p = singular_family(cx, 5.0, C, -80.0, 40.0);
    const std::string name = "f3_C_" + tag(C) + ".csv";
    cx.write_profile(name, p.get());
    add_file(m, name, "profile with g(5) = 0 and slope parameter " + num(C));
    const auto i = info_of(p.get());
    lims.push_back({{"C", C},
                    {"far_limit_minus", i.has_far_limit ? or_null(i.far_limit) : json(nullptr)},
                    {"far_limit_plus", i.has_far_limit_plus ? or_null(i.far_limit_plus) : json(nullptr)}});
  }
  m.checked.push_back({{"feature", "far-field limits on both sides"}, {"measured", lims}});
  m.plotted.push_back("asymmetry of the limits");
}

void figure_F4(Context& cx, Manifest& m) {
  m.description = "profiles with finite interfaces at z0 > 0";
  json rows = json::array();
  for (double z0 : {1.0, 2.0, 3.0, 5.0}) {
    auto p = interface_profile(cx, 0.0, z0);
    const std::string name = "f4_z0_" + tag(z0) + ".csv";
    cx.write_profile(name, p.get());
    add_file(m, name, "interface profile vanishing for z >= " + num(z0));
    const auto i = info_of(p.get());
    rows.push_back({{"z0", z0}, {"interface_z0", or_null(i.interface_z0)},
                    {"far_limit", i.has_far_limit ? or_null(i.far_limit) : json(nullptr)}});
  }
  m.checked.push_back({{"feature", "interface positions and far limits"}, {"measured", rows}});
  m.plotted.push_back("quadratic contact at the interface");
}

void admissibility_table(Context& cx, Manifest& m, const std::string& name, ndl_table* t,
                         const ndl_admissibility& s, const std::string& what) {
  TablePtr tp(t);
  cx.write_table(name, tp.get());
  add_file(m, name, what);
  m.checked.push_back(feature("monotone decrease of sup distance", s.monotone != 0, true, s.monotone != 0));
  m.checked.push_back(feature("final sup distance", or_null(s.final_sup), "< 1e-3", s.converged != 0));
}

void figure_F41(Context& cx, Manifest& m) {
  m.description = "interface profile approximated by smooth profiles through a zero";
  const double z0 = 2.0;
  auto target = interface_profile(cx, 0.0, z0);
  cx.write_profile("f41_interface.csv", target.get());
  add_file(m, "f41_interface.csv", "interface profile, z0 = 2");
  const std::vector<double> Cs = {-1e-2, -1e-3, -1e-4, -1e-5};
  for (double C : Cs) {
    auto p = singular_family(cx, z0, C, -11.0, z0 + 1.0);
    const std::string name = "f41_C_" + tag(C) + ".csv";
    cx.write_profile(name, p.get());
    add_file(m, name, "approximant with slope parameter " + num(C));
  }
  ndl_table* t = nullptr;
  ndl_admissibility s{};
  check(ndl_admissibility_interface(z0, Cs.data(), Cs.size(), -10.0, z0, &cx.settings, &t, &s),
        "interface admissibility");
  admissibility_table(cx, m, "f41_convergence.csv", t, s, "sup and L1 distances on [-10, 2]");
}

void figure_F5(Context& cx, Manifest& m) {
  m.description = "profiles for alpha > 0 and alpha < 0";
  json rows = json::array();
  for (double a : {-0.05, 0.1, 0.5}) {
    auto p = shoot_from_origin(cx, a, -1.0, -60.0, 30.0);
    const std::string name = "f5_alpha_" + tag(a) + ".csv";
    cx.write_profile(name, p.get());
    add_file(m, name, "shot from the origin with slope -1, alpha " + num(a));
    const auto i = info_of(p.get());
    rows.push_back({{"alpha", a}, {"classification", classification_name(i.classification)},
                    {"far_coefficient", i.has_far_limit ? or_null(i.far_limit) : json(nullptr)}});
  }
  m.checked.push_back({{"feature", "classification and far coefficient"}, {"measured", rows}});
  m.plotted.push_back("growth |z|^p with p = 3 alpha / (1 + alpha)");
}

void figure_F6(Context& cx, Manifest& m) {
  m.description = "positive profiles for alpha in (-1/10, 0]";
  json rows = json::array();
  bool positive = true;
  for (double a : {0.0, -0.03, -0.06, -0.09, -0.09999}) {
    auto p = shoot_from_origin(cx, a, -1.0, -30.0, 0.0);
    const std::string name = "f6_alpha_" + tag(a) + ".csv";
    cx.write_profile(name, p.get());
    add_file(m, name, "shot from the origin with slope -1, alpha " + num(a));
    std::vector<double> z, g;
    samples(p.get(), z, g);
    double mn = 1e300;
    for (std::size_t k = 0; k < z.size(); ++k)
      if (z[k] <= -1.0) mn = std::min(mn, g[k]);
    positive = positive && mn > 0;
    rows.push_back({{"alpha", a}, {"min_g_for_z_le_minus_1", mn}});
  }
  m.checked.push_back(feature("g > 0 for z < 0", rows, "all positive", positive));
  m.plotted.push_back("deformation towards the saw");
}

void saw_convergence(Context& cx, Manifest& m, const std::string& prefix, double lo) {
  const std::vector<double> ds = {1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  for (double d : ds) {
    auto p = shoot_from_origin(cx, -0.1 + d, -1.0, lo - 1.0, 0.0);
    const std::string name = prefix + "_delta_" + tag(d) + ".csv";
    cx.write_profile(name, p.get());
    add_file(m, name, "shot with alpha = -1/10 + " + num(d));
  }
  ndl_table* t = nullptr;
  ndl_admissibility s{};
  std::vector<double> tail(ds.begin() + 1, ds.end());
  check(ndl_admissibility_saw(1.0, tail.data(), tail.size(), lo, 0.0, &cx.settings, &t, &s), "saw admissibility");
  admissibility_table(cx, m, prefix + "_convergence.csv", t, s,
                      "sup and L1 distances to the saw on [" + num(lo) + ", 0]");
}

void figure_F7(Context& cx, Manifest& m) {
  m.description = "convergence to the saw as alpha -> -1/10 and the zeros of the saw";
  saw_convergence(cx, m, "f7a", -20.0);
  auto s = build_saw(1.0, 16);
  check(ndl_saw_write_csv(s.get(), cx.path("f7a_saw.csv").c_str()), "writing f7a_saw.csv");
  cx.note_csv("f7a_saw.csv");
  add_file(m, "f7a_saw.csv", "saw profile, m = 1");
  const auto zeros = saw_zeros(s.get());
  std::vector<double> k, r;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    k.push_back(static_cast<double>(i));
    r.push_back(i ? zeros[i] / zeros[i - 1] : std::nan(""));
  }
  cx.write_columns("f7b_zeros.csv", {"k", "z_k", "ratio"}, {k, zeros, r});
  add_file(m, "f7b_zeros.csv", "zeros of the saw and consecutive ratios");
  const double rho = zeros[1] / zeros[0];
  m.checked.push_back(feature("z_0", zeros[0], -std::sqrt(60.0), std::fabs(zeros[0] + std::sqrt(60.0)) < 1e-12));
  m.checked.push_back(feature("first ratio", rho, "1.56155 +- 1e-5", std::fabs(rho - 1.56155) < 1e-5));
}

void figure_F8(Context& cx, Manifest& m) {
  m.description = "two profiles at alpha = -1/10 and the envelope of the saw";
  const double mm = 1.0;
  auto s = build_saw(mm, 16);
  check(ndl_saw_write_csv(s.get(), cx.path("f8a_saw.csv").c_str()), "writing f8a_saw.csv");
  cx.note_csv("f8a_saw.csv");
  add_file(m, "f8a_saw.csv", "saw profile, m = 1");
  double c[4];
  check(ndl_invariant_cubic(1, 0.0, -mm, c), "invariant cubic");
  std::vector<double> z, g;
  for (int i = 0; i <= 2000; ++i) {
    const double zz = -40.0 + 0.02 * i;
    z.push_back(zz);
    g.push_back(c[0] + zz * (c[1] + zz * (c[2] + zz * c[3])));
  }
  cx.write_columns("f8a_cubic.csv", {"z", "g"}, {z, g});
  add_file(m, "f8a_cubic.csv", "invariant cubic -m z + z^3/60");
  const auto zeros = saw_zeros(s.get());
  std::vector<double> pz, ph;
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    double cc[4], a = 0, b = 0;
    check(ndl_saw_hump(s.get(), k, cc, &a, &b), "saw hump");
    pz.push_back(a);
    ph.push_back(b);
  }
  double Cenv = 0, e = 0;
  check(ndl_saw_envelope_fit(s.get(), 2, &Cenv, &e), "envelope fit");
  std::vector<double> env;
  for (double v : pz) env.push_back(Cenv * std::pow(std::fabs(v), e));
  cx.write_columns("f8b_envelope.csv", {"z_peak", "height", "envelope_fit"}, {pz, ph, env});
  add_file(m, "f8b_envelope.csv", "hump peaks and fitted envelope C |z|^e");
  m.checked.push_back(feature("envelope exponent", e, "-1/3 +- 0.05", std::fabs(e + 1.0 / 3) < 0.05));
  m.checked.push_back({{"feature", "envelope constant"}, {"measured", Cenv}});
  m.checked.push_back(feature("cubic coefficients", {c[0], c[1], c[2], c[3]}, {0.0, -mm, 0.0, 1.0 / 60},
                              c[0] == 0 && c[1] == -mm && c[2] == 0 && std::fabs(c[3] - 1.0 / 60) < 1e-15));
}

void figure_F9(Context& cx, Manifest& m) {
  m.description = "local convergence of smooth shots to the saw as alpha -> -1/10";
  saw_convergence(cx, m, "f9", -10.0);
}

void figure_F10(Context& cx, Manifest& m) {
  m.description = "complete blow-up of shots for alpha < -1/10";
  json rows = json::array();
  bool all_sqrt = true;
  for (double a : {-0.1001, -0.11, -0.15, -0.2, -0.3}) {
    auto p = shoot_from_origin(cx, a, -1.0, -50.0, 0.0);
    const std::string name = "f10_alpha_" + tag(a) + ".csv";
    cx.write_profile(name, p.get());
    add_file(m, name, "shot with alpha " + num(a) + " up to its singular zero");
    const auto i = info_of(p.get());
    all_sqrt = all_sqrt && i.classification == NDL_SQRT_SINGULARITY;
    rows.push_back({{"alpha", a}, {"classification", classification_name(i.classification)}, {"stop_z", i.z_min}});
  }
  m.checked.push_back(feature("classification", rows, "sqrt_singularity for all", all_sqrt));
  m.plotted.push_back("approach to the singular zero");
}

void figure_F55(Context& cx, Manifest& m) {
  m.description = "non-symmetric profiles and profiles with a finite interface";
  json rows = json::array();
  for (double z0 : {3.0, 5.0, 8.0}) {
    auto p = singular_family(cx, z0, -1.0, -80.0, 40.0);
    const std::string name = "f55a_z0_" + tag(z0) + ".csv";
    cx.write_profile(name, p.get());
    add_file(m, name, "profile through a zero at " + num(z0));
    const auto i = info_of(p.get());
    rows.push_back({{"z0", z0},
                    {"far_limit_minus", i.has_far_limit ? or_null(i.far_limit) : json(nullptr)},
                    {"far_limit_plus", i.has_far_limit_plus ? or_null(i.far_limit_plus) : json(nullptr)}});
  }
  m.checked.push_back({{"feature", "limits differ in modulus"}, {"measured", rows}});
  double z0 = 0, H0 = 0;
  ndl_profile* h = nullptr;
  check(ndl_solve_heaviside(&cx.settings, &z0, &H0, &h), "solve_heaviside");
  ProfilePtr hp(h);
  cx.write_profile("f55b_heaviside.csv", hp.get());
  add_file(m, "f55b_heaviside.csv", "interface profile generating the Heaviside data");
  m.checked.push_back(feature("heaviside z0", z0, "2.192 +- 0.01", std::fabs(z0 - 2.192) < 0.01));
  m.checked.push_back(feature("heaviside H(0)", H0, "0.4197 +- 0.005", std::fabs(H0 - 0.4197) < 0.005));
  for (double a : {0.0, 0.1}) {
    auto p = interface_profile(cx, a, z0);
    const std::string name = "f55b_alpha_" + tag(a) + ".csv";
    cx.write_profile(name, p.get());
    add_file(m, name, "interface profile at the Heaviside z0, alpha " + num(a));
  }
  m.plotted.push_back("interface profiles for several alpha");
}

const std::map<std::string, std::function<void(Context&, Manifest&)>>& figures() {
  static const std::map<std::string, std::function<void(Context&, Manifest&)>> f = {
      {"figure-F1", figure_F1},   {"figure-F2", figure_F2},   {"figure-F3", figure_F3},
      {"figure-F4", figure_F4},   {"figure-F41", figure_F41}, {"figure-F5", figure_F5},
      {"figure-F6", figure_F6},   {"figure-F7", figure_F7},   {"figure-F8", figure_F8},
      {"figure-F9", figure_F9},   {"figure-F10", figure_F10}, {"figure-F55", figure_F55}};
  return f;
}

ndl_data data_kind(const std::string& s) {
  if (s == "s-minus") return NDL_S_MINUS;
  if (s == "s-plus") return NDL_S_PLUS;
  if (s == "h-left") return NDL_H_LEFT;
  return NDL_H_RIGHT;
}

void apply_env_tolerances(ndl_ode_settings& s) {
  const char* v = std::getenv("NDE_LAB_TOLS");
  if (!v || !*v) return;
  char* end = nullptr;
  const double tol = std::strtod(v, &end);
  if (*end != '\0' || !(tol > 0) || !std::isfinite(tol))
    throw UsageFailure{std::string("NDE_LAB_TOLS must be a positive number, got '") + v + "'"};
  s.rel_tol = tol;
  s.abs_tol = tol;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ndelab: similarity profiles, exact solutions and simulations for u_t = (u u_x)_xx"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out = ".";
  bool gnuplot = false;
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_flag("--gnuplot-script", gnuplot, "also write plot.gp for the CSV outputs");

  double alpha = 0.0, limit = 1.0, slope = std::nan(""), z_left = -50.0, z_right = 50.0;
  bool rarefaction = false;
  auto* profile = app.add_subcommand("profile", "shoot a similarity profile");
  profile->add_option("--alpha", alpha, "similarity exponent")->capture_default_str();
  profile->add_option("--limit", limit, "far-field limit (coefficient of |z|^p when alpha != 0)")->capture_default_str();
  profile->add_option("--slope", slope, "shoot from the origin with this g'(0) instead of matching --limit");
  profile->add_option("--z-left", z_left, "left end for --slope shots")->capture_default_str();
  profile->add_option("--z-right", z_right, "right end for --slope shots")->capture_default_str();
  profile->add_flag("--rarefaction", rarefaction, "reflect to the rarefaction branch");

  auto* heaviside = app.add_subcommand("heaviside", "interface profile generating Heaviside data");

  double m = 1.0;
  int humps = 10;
  auto* saw = app.add_subcommand("saw", "piecewise-cubic saw profile at alpha = -1/10");
  saw->add_option("--m", m, "slope magnitude, g'(0) = -m")->capture_default_str();
  saw->add_option("--humps", humps, "number of humps")->capture_default_str();

  double T = 1.0, A0 = 1.0, B0 = 2.0, D0 = 3.0, t_end_w4 = std::nan("");
  auto* w4 = app.add_subcommand("w4", "four-dimensional invariant-subspace dynamics");
  w4->add_option("--T", T, "blow-up time of the closed-form orbit")->capture_default_str();
  w4->add_option("--A0", A0, "closed-form parameter")->capture_default_str();
  w4->add_option("--B0", B0, "closed-form parameter")->capture_default_str();
  w4->add_option("--D0", D0, "closed-form parameter")->capture_default_str();
  w4->add_option("--t-end", t_end_w4, "integration end (default 0.9 T)");

  double L_b = 1.0, J0 = 1.0;
  auto* blowup = app.add_subcommand("blowup", "blow-up time bounds and capacity constants");
  blowup->add_option("--L", L_b, "half-width of the cut-off window")->capture_default_str();
  blowup->add_option("--J0", J0, "initial expansion coefficient")->capture_default_str();

  std::string data = "s-minus";
  double L = 10.0, epsilon = -1.0, t_end = 0.1, smoothing = -1.0, record = 0.01, dt_safety = 1.0;
  int n = 1024;
  auto* pde = app.add_subcommand("pde", "regularized Riemann problem");
  pde->add_option("--data", data, "initial data")
      ->check(CLI::IsMember({"s-minus", "s-plus", "h-left", "h-right"}))
      ->capture_default_str();
  pde->add_option("--L", L, "domain half-width")->capture_default_str();
  pde->add_option("--n", n, "grid nodes")->capture_default_str();
  pde->add_option("--epsilon", epsilon, "regularization (negative selects dx^2)")->capture_default_str();
  pde->add_option("--t-end", t_end, "final time")->capture_default_str();
  pde->add_option("--smoothing", smoothing, "tanh width (negative selects 4 dx, 0 raw step)")->capture_default_str();
  pde->add_option("--record", record, "diagnostics interval")->capture_default_str();
  pde->add_option("--dt-safety", dt_safety, "fraction of the stable step")->capture_default_str();

  double z_start = 10.0;
  auto* diagnose = app.add_subcommand("diagnose", "tail fit, TV growth and convergence rate of a profile");
  diagnose->add_option("--alpha", alpha, "similarity exponent")->capture_default_str();
  diagnose->add_option("--limit", limit, "far-field limit")->capture_default_str();
  diagnose->add_option("--z-start", z_start, "start of the tail window")->capture_default_str();

  std::string target;
  auto* reproduce = app.add_subcommand("reproduce", "regenerate the data behind a figure");
  std::vector<std::string> names;
  for (const auto& [k, v] : figures()) names.push_back(k);
  reproduce->add_option("target", target, "figure id")->required()->check(CLI::IsMember(names));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  Context cx;
  cx.out = out;
  cx.gnuplot = gnuplot;
  ndl_ode_settings_default(&cx.settings);
  std::string command = app.get_subcommands().front()->get_name();
  json config;
  config["command"] = command;

  try {
    apply_env_tolerances(cx.settings);
    std::error_code ec;
    fs::create_directories(cx.out, ec);
    if (ec || !fs::is_directory(cx.out)) throw UsageFailure{"cannot create output directory " + out};
    config["rel_tol"] = cx.settings.rel_tol;
    config["abs_tol"] = cx.settings.abs_tol;
  } catch (const UsageFailure& e) {
    std::cerr << "error: " << e.message << "\n";
    return 1;
  }

  try {
    if (*profile) {
      config["alpha"] = alpha;
      config["rarefaction"] = rarefaction;
      ProfilePtr p;
      if (std::isnan(slope)) {
        config["limit"] = limit;
        p = shoot_profile(cx, alpha, limit);
      } else {
        config["slope"] = slope;
        config["z_left"] = z_left;
        config["z_right"] = z_right;
        p = shoot_from_origin(cx, alpha, slope, z_left, z_right);
      }
      if (rarefaction) p = reflect(p.get());
      cx.write_profile("profile.csv", p.get());
      cx.write_json("profile.json", {{"config", config}, {"profile", profile_meta(p.get())}});
    } else if (*heaviside) {
      double z0 = 0, H0 = 0;
      ndl_profile* h = nullptr;
      check(ndl_solve_heaviside(&cx.settings, &z0, &H0, &h), "solve_heaviside");
      ProfilePtr hp(h);
      cx.write_profile("heaviside.csv", hp.get());
      cx.write_json("heaviside.json",
                    {{"config", config}, {"z0", z0}, {"H0", H0}, {"profile", profile_meta(hp.get())}});
    } else if (*saw) {
      config["m"] = m;
      config["humps"] = humps;
      auto s = build_saw(m, humps);
      check(ndl_saw_write_csv(s.get(), cx.path("saw.csv").c_str()), "writing saw.csv");
      cx.note_csv("saw.csv");
      json j = saw_meta(s.get(), m);
      double Cenv = 0, e = 0;
      if (ndl_saw_envelope_fit(s.get(), 0, &Cenv, &e) == NDL_OK) j["envelope"] = {{"C", Cenv}, {"exponent", e}};
      cx.write_json("saw.json", {{"config", config}, {"saw", j}});
    } else if (*w4) {
      const double te = std::isnan(t_end_w4) ? 0.9 * T : t_end_w4;
      config.update({{"T", T}, {"A0", A0}, {"B0", B0}, {"D0", D0}, {"t_end", te}});
      double c0[4];
      check(ndl_w4_closed_form(T, A0, B0, D0, 0.0, c0), "closed form");
      ndl_table* t = nullptr;
      ndl_termination term{};
      check(ndl_w4_integrate(0.0, c0, te, &cx.settings, &t, &term), "w4 integration");
      TablePtr tp(t);
      auto cols = table_columns(tp.get());
      std::vector<std::vector<double>> exact(4, std::vector<double>(cols[0].size()));
      double worst = 0;
      for (std::size_t r = 0; r < cols[0].size(); ++r) {
        double cf[4];
        check(ndl_w4_closed_form(T, A0, B0, D0, cols[0][r], cf), "closed form");
        for (int k = 0; k < 4; ++k) {
          exact[k][r] = cf[k];
          worst = std::max(worst, std::fabs(cols[1 + k][r] / cf[k] - 1));
        }
      }
      cols.insert(cols.end(), exact.begin(), exact.end());
      cx.write_columns("w4.csv", {"t", "C0", "C1", "C2", "C3", "C0_exact", "C1_exact", "C2_exact", "C3_exact"}, cols);
      double Tb = 0;
      check(ndl_w4_blowup_time(c0[3], &Tb), "blow-up time");
      cx.write_json("w4.json", {{"config", config},
                                {"initial", {c0[0], c0[1], c0[2], c0[3]}},
                                {"blowup_time", Tb},
                                {"max_relative_error", worst},
                                {"termination", static_cast<int>(term)}});
    } else if (*blowup) {
      config.update({{"L", L_b}, {"J0", J0}});
      json orders = json::array();
      for (auto o : {NDL_FIRST_ORDER, NDL_SECOND_ORDER, NDL_THIRD_ORDER}) {
        double T0 = 0;
        check(ndl_blowup_time_bound(J0, L_b, o, &T0), "blow-up time bound");
        orders.push_back({{"order", static_cast<int>(o)}, {"T0", T0}});
      }
      json caps = json::array();
      for (int k = 2; k <= 6; ++k) {
        double c0 = 0;
        const ndl_status st = ndl_capacity_constant(k, &c0);
        caps.push_back({{"k", k}, {"status", ndl_status_name(st)}, {"c0", st == NDL_OK ? json(c0) : json(nullptr)}});
      }
      cx.write_json("blowup.json", {{"config", config}, {"bounds", orders}, {"capacity", caps}});
    } else if (*pde) {
      config.update({{"data", data}, {"L", L}, {"n", n}, {"epsilon", epsilon}, {"t_end", t_end},
                     {"smoothing_width", smoothing}, {"record_interval", record}, {"dt_safety", dt_safety}});
      ndl_pde* raw = nullptr;
      check(ndl_pde_create(data_kind(data), L, n, epsilon, smoothing, &raw), "pde create");
      PdePtr p(raw);
      check(ndl_pde_write_csv(p.get(), cx.path("pde_initial.csv").c_str()), "writing pde_initial.csv");
      cx.note_csv("pde_initial.csv");
      ndl_pde_info info{};
      check(ndl_pde_get_info(p.get(), &info), "pde info");
      config["epsilon_used"] = info.epsilon;
      ndl_table* t = nullptr;
      double arrival = 0;
      const ndl_status st = ndl_pde_evolve(p.get(), t_end, record, dt_safety, &t, &arrival);
      if (st != NDL_OK) {
        const std::string msg = ndl_last_error();
        ndl_pde_write_csv(p.get(), cx.path("pde_partial.csv").c_str());
        throw NumericFailure{st, "pde evolve: " + msg};
      }
      TablePtr tp(t);
      cx.write_table("pde_diagnostics.csv", tp.get());
      check(ndl_pde_write_csv(p.get(), cx.path("pde_final.csv").c_str()), "writing pde_final.csv");
      cx.note_csv("pde_final.csv");
      cx.write_json("pde.json", {{"config", config}, {"boundary_arrival", or_null(arrival)}});
    } else if (*diagnose) {
      config.update({{"alpha", alpha}, {"limit", limit}, {"z_start", z_start}});
      auto p = shoot_profile(cx, alpha, limit);
      ndl_airy_fit f{};
      check(ndl_airy_tail_fit(p.get(), z_start, &f), "airy fit");
      double tv = 0, q = 0;
      check(ndl_tv_growth(p.get(), 10.0, 50.0, 9, &tv), "tv growth");
      check(ndl_convergence_rate(p.get(), 1.0, 10.0, 50.0, 9, &q), "convergence rate");
      cx.write_profile("profile.csv", p.get());
      cx.write_json("diagnose.json",
                    {{"config", config},
                     {"profile", profile_meta(p.get())},
                     {"airy", {{"limit", f.limit}, {"c", f.c}, {"decay_exp", f.decay_exp}, {"a0_fit", f.a0_fit},
                               {"c0_fit", f.c0_fit}, {"residual", f.residual}, {"extrema", f.extrema}}},
                     {"tv_growth_exponent", tv},
                     {"convergence_rate_q", q}});
    } else if (*reproduce) {
      config["target"] = target;
      Manifest man;
      man.figure = target;
      try {
        figures().at(target)(cx, man);
      } catch (...) {
        write_manifest(cx, man, config);
        throw;
      }
      write_manifest(cx, man, config);
    }
    cx.finish();
  } catch (const NumericFailure& e) {
    std::cerr << "numerical failure: " << e.message << "\n";
    json err = {{"config", config}, {"status", ndl_status_name(e.status)}, {"message", e.message}};
    std::ofstream f(cx.path("error.json"), std::ios::binary | std::ios::trunc);
    if (f) f << err.dump(2) << "\n";
    return 2;
  }
  return 0;
}
