#include "ndelab/ndelab.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "core/blowup.hpp"
#include "core/diagnostics.hpp"
#include "core/error.hpp"
#include "core/exact.hpp"
#include "core/io.hpp"
#include "core/pde.hpp"
#include "core/similarity.hpp"
#include "core/w4.hpp"

using namespace ndelab;

struct ndl_profile {
  similarity::Profile p;
};

struct ndl_saw {
  exact::Saw s;
};

struct ndl_pde {
  pde::PdeState s;
};

struct ndl_table {
  std::vector<std::string> columns;
  std::vector<double> data;  // row-major
  std::size_t rows() const { return columns.empty() ? 0 : data.size() / columns.size(); }
};

namespace {

thread_local std::string g_last_error;

ndl_status to_status(ErrorCode c) { return static_cast<ndl_status>(static_cast<int>(c)); }

template <class F>
ndl_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return NDL_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return NDL_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NDL_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown exception";
    return NDL_INTERNAL_ERROR;
  }
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorCode::invalid_argument, std::string("null pointer: ") + what);
}

ode::OdeSettings settings_from(const ndl_ode_settings* s) {
  ode::OdeSettings o;
  if (s) {
    o.rel_tol = s->rel_tol;
    o.abs_tol = s->abs_tol;
    o.nu = s->nu;
    o.max_step = s->max_step;
    o.min_step = s->min_step;
    o.max_steps = s->max_steps;
    o.blowup_threshold = s->blowup_threshold;
  }
  o.validate();
  return o;
}

similarity::Branch branch_from(ndl_branch b) {
  switch (b) {
    case NDL_BRANCH_BLOWUP: return similarity::Branch::blowup;
    case NDL_BRANCH_RAREFACTION: return similarity::Branch::rarefaction;
  }
  fail(ErrorCode::invalid_argument, "unknown branch");
}

blowup::Order order_from(ndl_order o) {
  if (o < NDL_FIRST_ORDER || o > NDL_THIRD_ORDER) fail(ErrorCode::invalid_argument, "order must be 1, 2 or 3");
  return static_cast<blowup::Order>(static_cast<int>(o));
}

ndl_profile* wrap(similarity::Profile p) { return new ndl_profile{std::move(p)}; }

ndl_table* make_table(std::vector<std::string> cols) {
  auto* t = new ndl_table;
  t->columns = std::move(cols);
  return t;
}

void write_file(const char* path, const std::string& content) {
  need(path, "path");
  io::write_text(path, content);
}

std::string table_csv(const ndl_table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ',';
    out += t.columns[c];
  }
  out += '\n';
  const std::size_t nc = t.columns.size();
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < nc; ++c) {
      if (c) out += ',';
      out += io::num(t.data[r * nc + c]);
    }
    out += '\n';
  }
  return out;
}

ndl_status admissibility(const diag::Evaluator& target, const diag::Family& fam, const double* params,
                         size_t n, double lo, double hi, ndl_table** rows, ndl_admissibility* summary) {
  return guard([&] {
    need(params, "params");
    need(rows, "rows");
    std::vector<double> ps(params, params + n);
    auto rep = diag::g_admissibility_report(target, fam, ps, lo, hi);
    std::unique_ptr<ndl_table> t(make_table({"param", "sup", "l1"}));
    for (const auto& r : rep.rows) {
      double nan = std::numeric_limits<double>::quiet_NaN();
      bool ok = r.status == "ok";
      t->data.insert(t->data.end(), {r.param, ok ? r.sup : nan, ok ? r.l1 : nan});
    }
    if (summary) {
      summary->monotone = rep.monotone ? 1 : 0;
      summary->converged = rep.converged ? 1 : 0;
      summary->final_sup = rep.rows.empty() ? std::numeric_limits<double>::quiet_NaN() : rep.rows.back().sup;
    }
    *rows = t.release();
  });
}

}  // namespace

extern "C" {

const char* ndl_status_name(ndl_status status) {
  if (status == NDL_BUFFER_TOO_SMALL) return "buffer_too_small";
  if (status == NDL_INTERNAL_ERROR) return "internal_error";
  if (status < NDL_OK || status > NDL_IO_ERROR) return "unknown";
  return error_name(static_cast<ErrorCode>(static_cast<int>(status)));
}

const char* ndl_last_error(void) { return g_last_error.c_str(); }

const char* ndl_version(void) { return "0.1.0"; }

void ndl_ode_settings_default(ndl_ode_settings* s) {
  if (!s) return;
  ode::OdeSettings o;
  s->rel_tol = o.rel_tol;
  s->abs_tol = o.abs_tol;
  s->nu = o.nu;
  s->max_step = o.max_step;
  s->min_step = o.min_step;
  s->max_steps = o.max_steps;
  s->blowup_threshold = o.blowup_threshold;
}

// tables

void ndl_table_free(ndl_table* t) { delete t; }

ndl_status ndl_table_shape(const ndl_table* t, size_t* rows, size_t* cols) {
  return guard([&] {
    need(t, "table");
    if (rows) *rows = t->rows();
    if (cols) *cols = t->columns.size();
  });
}

ndl_status ndl_table_column_name(const ndl_table* t, size_t col, const char** name) {
  return guard([&] {
    need(t, "table");
    need(name, "name");
    if (col >= t->columns.size()) fail(ErrorCode::invalid_argument, "column index out of range");
    *name = t->columns[col].c_str();
  });
}

ndl_status ndl_table_data(const ndl_table* t, double* out, size_t capacity) {
  if (t && out && capacity < t->data.size()) {
    g_last_error = "buffer holds " + std::to_string(capacity) + " values, table has " +
                   std::to_string(t->data.size());
    return NDL_BUFFER_TOO_SMALL;
  }
  return guard([&] {
    need(t, "table");
    need(out, "out");
    std::copy(t->data.begin(), t->data.end(), out);
  });
}

ndl_status ndl_table_write_csv(const ndl_table* t, const char* path) {
  return guard([&] {
    need(t, "table");
    write_file(path, table_csv(*t));
  });
}

// profiles

ndl_status ndl_rhs_regularized(const double state[3], double z, double alpha, double nu, ndl_branch branch,
                               double out[3]) {
  return guard([&] {
    need(state, "state");
    need(out, "out");
    auto r = similarity::rhs_regularized({state[0], state[1], state[2]}, z, alpha, nu, branch_from(branch));
    std::copy(r.begin(), r.end(), out);
  });
}

ndl_status ndl_origin_series(double C, double z, double alpha, double* out) {
  return guard([&] {
    need(out, "out");
    *out = similarity::origin_series(C, z, alpha);
  });
}

ndl_status ndl_shoot_profile(double alpha, double target_limit, const ndl_ode_settings* s, ndl_profile** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap(similarity::shoot_profile(alpha, target_limit, settings_from(s)));
  });
}

ndl_status ndl_shoot_from_origin(double alpha, double C, double z_left, double z_right,
                                 const ndl_ode_settings* s, ndl_profile** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap(similarity::shoot_from_origin(alpha, C, settings_from(s), {z_left, z_right}));
  });
}

ndl_status ndl_interface_profile(double alpha, double z0, const ndl_ode_settings* s, ndl_profile** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap(similarity::interface_profile(alpha, z0, settings_from(s)));
  });
}

ndl_status ndl_solve_heaviside(const ndl_ode_settings* s, double* z0, double* H0, ndl_profile** out) {
  return guard([&] {
    auto r = similarity::solve_heaviside(settings_from(s));
    if (z0) *z0 = r.z0;
    if (H0) *H0 = r.H0;
    if (out) *out = wrap(std::move(r.profile));
  });
}

ndl_status ndl_singular_point_family(double z0, double C, double z_left, double z_right,
                                     const ndl_ode_settings* s, ndl_profile** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap(similarity::singular_point_family(z0, C, settings_from(s), {z_left, z_right}));
  });
}

ndl_status ndl_profile_rescale(const ndl_profile* p, double a, ndl_profile** out) {
  return guard([&] {
    need(p, "profile");
    need(out, "out");
    *out = wrap(similarity::rescale_profile(p->p, a));
  });
}

ndl_status ndl_profile_reflect(const ndl_profile* p, ndl_profile** out) {
  return guard([&] {
    need(p, "profile");
    need(out, "out");
    *out = wrap(similarity::reflect_to_rarefaction(p->p));
  });
}

void ndl_profile_free(ndl_profile* p) { delete p; }

ndl_status ndl_profile_get_info(const ndl_profile* p, ndl_profile_info* info) {
  return guard([&] {
    need(p, "profile");
    need(info, "info");
    const auto& q = p->p;
    info->alpha = q.params.alpha;
    info->beta = q.params.beta();
    info->branch = q.params.branch == similarity::Branch::blowup ? NDL_BRANCH_BLOWUP : NDL_BRANCH_RAREFACTION;
    info->classification = static_cast<ndl_classification>(static_cast<int>(q.classification));
    info->origin_slope = q.origin_slope;
    double nan = std::numeric_limits<double>::quiet_NaN();
    info->has_far_limit = q.far_limit.has_value();
    info->far_limit = q.far_limit.value_or(nan);
    info->has_far_limit_plus = q.far_limit_plus.has_value();
    info->far_limit_plus = q.far_limit_plus.value_or(nan);
    info->has_interface = q.interface_z0.has_value();
    info->interface_z0 = q.interface_z0.value_or(nan);
    info->samples = q.size();
    info->z_min = q.size() ? q.z_min() : nan;
    info->z_max = q.size() ? q.z_max() : nan;
  });
}

ndl_status ndl_profile_samples(const ndl_profile* p, double* z, double* g, size_t capacity, size_t* count) {
  return guard([&] {
    need(p, "profile");
    const auto& q = p->p;
    if (count) *count = q.size();
    std::size_t k = std::min(capacity, q.size());
    if (z) std::copy_n(q.z.begin(), k, z);
    if (g) std::copy_n(q.g.begin(), k, g);
  });
}

ndl_status ndl_profile_eval(const ndl_profile* p, double z, int order, double* value) {
  return guard([&] {
    need(p, "profile");
    need(value, "value");
    *value = p->p.eval(z, order);
  });
}

ndl_status ndl_profile_residual(const ndl_profile* p, double z, double* value) {
  return guard([&] {
    need(p, "profile");
    need(value, "value");
    *value = exact::residual(p->p, p->p.params.alpha, z);
  });
}

ndl_status ndl_estimate_far_field_limit(const ndl_profile* p, double* value) {
  return guard([&] {
    need(p, "profile");
    need(value, "value");
    *value = similarity::estimate_far_field_limit(p->p);
  });
}

ndl_status ndl_profile_write_csv(const ndl_profile* p, const char* path) {
  return guard([&] {
    need(p, "profile");
    write_file(path, io::profile_csv(p->p));
  });
}

ndl_status ndl_profile_write_json(const ndl_profile* p, const char* path) {
  return guard([&] {
    need(p, "profile");
    write_file(path, io::profile_json(p->p).dump(2) + "\n");
  });
}

ndl_status ndl_detect_singularity(const double* z, const double* g, size_t n, ndl_classification* cls,
                                  double* z0, double* coeff) {
  return guard([&] {
    need(z, "z");
    need(g, "g");
    auto r = similarity::detect_singularity({z, z + n}, {g, g + n});
    if (cls) *cls = static_cast<ndl_classification>(static_cast<int>(r.classification));
    if (z0) *z0 = r.z0;
    if (coeff) *coeff = r.coeff;
  });
}

ndl_status ndl_final_time_profile(double alpha, double C_minus, double C_plus, double x, double* out) {
  return guard([&] {
    need(out, "out");
    *out = similarity::final_time_profile(alpha, C_minus, C_plus, x);
  });
}

// exact solutions

ndl_status ndl_build_saw(double m, int num_humps, ndl_saw** out) {
  return guard([&] {
    need(out, "out");
    *out = new ndl_saw{exact::build_saw(m, num_humps)};
  });
}

void ndl_saw_free(ndl_saw* s) { delete s; }

ndl_status ndl_saw_breakpoints(const ndl_saw* s, double* out, size_t capacity, size_t* count) {
  return guard([&] {
    need(s, "saw");
    const auto& zs = s->s.zeros;
    if (count) *count = zs.size();
    if (out) std::copy_n(zs.begin(), std::min(capacity, zs.size()), out);
  });
}

ndl_status ndl_saw_hump(const ndl_saw* s, size_t hump, double coeffs[4], double* peak_z, double* peak_height) {
  return guard([&] {
    need(s, "saw");
    if (hump >= s->s.hump_coeffs.size()) fail(ErrorCode::invalid_argument, "hump index out of range");
    if (coeffs) std::copy(s->s.hump_coeffs[hump].begin(), s->s.hump_coeffs[hump].end(), coeffs);
    if (peak_z) *peak_z = s->s.peaks[hump].z;
    if (peak_height) *peak_height = s->s.peaks[hump].value;
  });
}

ndl_status ndl_saw_eval(const ndl_saw* s, double z, int order, double* value) {
  return guard([&] {
    need(s, "saw");
    need(value, "value");
    *value = s->s.curve.eval(z, order);
  });
}

ndl_status ndl_saw_residual(const ndl_saw* s, double z, double* value) {
  return guard([&] {
    need(s, "saw");
    need(value, "value");
    *value = exact::residual(s->s.curve, exact::kAlphaCritical, z);
  });
}

ndl_status ndl_saw_envelope_fit(const ndl_saw* s, int skip_humps, double* C_env, double* exponent) {
  return guard([&] {
    need(s, "saw");
    auto f = exact::saw_envelope_fit(s->s, skip_humps);
    if (C_env) *C_env = f.C_env;
    if (exponent) *exponent = f.exponent;
  });
}

ndl_status ndl_saw_write_json(const ndl_saw* s, const char* path) {
  return guard([&] {
    need(s, "saw");
    write_file(path, io::saw_json(s->s).dump(2) + "\n");
  });
}

ndl_status ndl_saw_write_csv(const ndl_saw* s, const char* path) {
  return guard([&] {
    need(s, "saw");
    write_file(path, io::saw_csv(s->s));
  });
}

ndl_status ndl_invariant_cubic(int kind, double p0, double p1, double coeffs[4]) {
  return guard([&] {
    need(coeffs, "coeffs");
    exact::PiecewiseCubic c;
    if (kind == 1)
      c = exact::invariant_cubic_I(p0, p1);
    else if (kind == 2)
      c = exact::invariant_cubic_II(p0);
    else
      fail(ErrorCode::invalid_argument, "kind must be 1 or 2");
    const auto& a = c.pieces().front().c;
    std::copy(a.begin(), a.end(), coeffs);
  });
}

ndl_status ndl_cubic_residual(const double coeffs[4], double alpha, double z, double* out) {
  return guard([&] {
    need(coeffs, "coeffs");
    need(out, "out");
    exact::CubicPiece piece;
    piece.z_left = -std::numeric_limits<double>::infinity();
    piece.z_right = std::numeric_limits<double>::infinity();
    std::copy(coeffs, coeffs + 4, piece.c.begin());
    *out = exact::residual(piece, alpha, z);
  });
}

ndl_status ndl_tw_eval(ndl_tw_kind kind, double lambda, double A0, double p1, double p2, double y, int order,
                       double* out) {
  return guard([&] {
    need(out, "out");
    exact::TwKind k;
    switch (kind) {
      case NDL_TW_CONSTANT: k = exact::TwKind::constant; break;
      case NDL_TW_SQRT: k = exact::TwKind::sqrt_branch; break;
      case NDL_TW_PARABOLA: k = exact::TwKind::parabola; break;
      default: fail(ErrorCode::invalid_argument, "unknown travelling-wave kind");
    }
    auto w = exact::tw_solution(k, lambda, A0, p1, p2);
    *out = order < 0 ? w.flux(y) : w.eval(y, order);
  });
}

ndl_status ndl_rankine_hugoniot_speed(double flux_jump, double value_jump, double* out) {
  return guard([&] {
    need(out, "out");
    *out = exact::rankine_hugoniot_speed(flux_jump, value_jump);
  });
}

// w4

ndl_status ndl_w4_rhs(const double c[4], double out[4]) {
  return guard([&] {
    need(c, "c");
    need(out, "out");
    auto r = w4::w4_rhs({c[0], c[1], c[2], c[3]});
    std::copy(r.begin(), r.end(), out);
  });
}

ndl_status ndl_w4_closed_form(double T, double A0, double B0, double D0, double t, double c[4]) {
  return guard([&] {
    need(c, "c");
    auto s = w4::w4_closed_form(T, A0, B0, D0, t);
    std::copy(s.c.begin(), s.c.end(), c);
  });
}

ndl_status ndl_w4_blowup_time(double c3_initial, double* T) {
  return guard([&] {
    need(T, "T");
    *T = w4::w4_blowup_time(c3_initial);
  });
}

ndl_status ndl_w4_integrate(double t0, const double c0[4], double t_end, const ndl_ode_settings* s,
                            ndl_table** out, ndl_termination* termination) {
  return guard([&] {
    need(c0, "c0");
    need(out, "out");
    w4::W4State st{t0, {c0[0], c0[1], c0[2], c0[3]}};
    auto tr = w4::w4_integrate(st, t_end, settings_from(s));
    std::unique_ptr<ndl_table> t(make_table({"t", "C0", "C1", "C2", "C3"}));
    for (std::size_t i = 0; i < tr.size(); ++i) {
      t->data.push_back(tr.time(i));
      for (int k = 0; k < 4; ++k) t->data.push_back(tr.value(i, k));
    }
    if (termination) *termination = static_cast<ndl_termination>(static_cast<int>(tr.termination));
    *out = t.release();
  });
}

// blow-up bounds

ndl_status ndl_cut_weight(double L, double x, double* out) {
  return guard([&] {
    need(out, "out");
    *out = blowup::cut_weight(L, x);
  });
}

ndl_status ndl_expansion_coefficient(const double* x, const double* u, size_t n, double L, double* J) {
  return guard([&] {
    need(x, "x");
    need(u, "u");
    need(J, "J");
    *J = blowup::expansion_coefficient({x, x + n}, {u, u + n}, L);
  });
}

ndl_status ndl_blowup_time_bound(double J0, double L, ndl_order order, double* T0) {
  return guard([&] {
    need(T0, "T0");
    *T0 = blowup::blowup_time_bound(J0, L, order_from(order));
  });
}

ndl_status ndl_odi_check(const double* t, const double* J, size_t n, double L, double rel_tol, int* satisfied,
                         double* min_relative_margin) {
  return guard([&] {
    need(t, "t");
    need(J, "J");
    std::vector<blowup::JSample> tr(n);
    for (size_t i = 0; i < n; ++i) tr[i] = {t[i], J[i]};
    auto r = blowup::odi_check(tr, L, rel_tol);
    if (satisfied) *satisfied = r.satisfied ? 1 : 0;
    if (min_relative_margin) *min_relative_margin = r.min_relative_margin;
  });
}

ndl_status ndl_capacity_constant(int k, double* c0) {
  return guard([&] {
    need(c0, "c0");
    *c0 = blowup::capacity_constant(blowup::polynomial_cutoff(k));
  });
}

ndl_status ndl_capacity_bound(const double* x, const double* ut0, size_t n, double L, int k, double* J0,
                              double* c0, double* T0) {
  return guard([&] {
    need(x, "x");
    need(ut0, "ut0");
    auto r = blowup::capacity_bound({x, x + n}, {ut0, ut0 + n}, L, blowup::polynomial_cutoff(k));
    if (J0) *J0 = r.J0;
    if (c0) *c0 = r.c0;
    if (T0) *T0 = r.T0;
  });
}

// pde

ndl_status ndl_pde_create(ndl_data data, double L, int n, double epsilon, double smoothing_width,
                          ndl_pde** out) {
  return guard([&] {
    need(out, "out");
    pde::RiemannData d;
    switch (data) {
      case NDL_S_MINUS: d.kind = pde::DataKind::s_minus; break;
      case NDL_S_PLUS: d.kind = pde::DataKind::s_plus; break;
      case NDL_H_LEFT: d.kind = pde::DataKind::h_left; break;
      case NDL_H_RIGHT: d.kind = pde::DataKind::h_right; break;
      default: fail(ErrorCode::invalid_argument, "unknown data kind");
    }
    d.smoothing_width = smoothing_width;
    *out = new ndl_pde{pde::make_state(d, L, n, epsilon)};
  });
}

ndl_status ndl_pde_create_values(const double* u0, int n, double L, double epsilon, ndl_bc bc, ndl_pde** out) {
  return guard([&] {
    need(u0, "u0");
    need(out, "out");
    if (bc != NDL_PINNED_FAR_FIELD && bc != NDL_DIRICHLET_ZERO) fail(ErrorCode::invalid_argument, "unknown bc");
    auto kind = bc == NDL_DIRICHLET_ZERO ? pde::BoundaryKind::dirichlet_zero : pde::BoundaryKind::pinned_far_field;
    auto s = pde::make_state([](double) { return 0.0; }, L, n, epsilon, kind);
    std::copy(u0, u0 + n, s.u.begin());
    if (kind == pde::BoundaryKind::pinned_far_field) {
      s.pin_left = s.u.front();
      s.pin_right = s.u.back();
    } else {
      s.u.front() = 0.0;
      s.u.back() = 0.0;
    }
    *out = new ndl_pde{std::move(s)};
  });
}

void ndl_pde_free(ndl_pde* p) { delete p; }

ndl_status ndl_pde_get_info(const ndl_pde* p, ndl_pde_info* info) {
  return guard([&] {
    need(p, "pde");
    need(info, "info");
    info->t = p->s.t;
    info->n = p->s.size();
    info->L = p->s.L;
    info->dx = p->s.dx;
    info->epsilon = p->s.epsilon;
    info->stable_dt = pde::stable_dt(p->s);
  });
}

ndl_status ndl_pde_values(const ndl_pde* p, double* x, double* u, size_t capacity) {
  if (p && capacity < p->s.size()) {
    g_last_error = "buffer smaller than grid";
    return NDL_BUFFER_TOO_SMALL;
  }
  return guard([&] {
    need(p, "pde");
    if (x) std::copy(p->s.x.begin(), p->s.x.end(), x);
    if (u) std::copy(p->s.u.begin(), p->s.u.end(), u);
  });
}

ndl_status ndl_pde_step(ndl_pde* p, double dt) {
  return guard([&] {
    need(p, "pde");
    pde::step(p->s, dt);
  });
}

ndl_status ndl_pde_evolve(ndl_pde* p, double t_end, double record_interval, double dt_safety,
                          ndl_table** diagnostics, double* boundary_arrival) {
  return guard([&] {
    need(p, "pde");
    pde::EvolveOptions o;
    o.record_interval = record_interval;
    o.dt_safety = dt_safety;
    auto r = pde::evolve(p->s, t_end, o);
    if (diagnostics) {
      std::unique_ptr<ndl_table> t(make_table({"t", "mass", "mass_left", "mass_right", "h_minus1", "sup"}));
      for (const auto& d : r.series)
        t->data.insert(t->data.end(), {d.t, d.mass, d.mass_left, d.mass_right, d.h_minus1, d.sup});
      *diagnostics = t.release();
    }
    if (boundary_arrival)
      *boundary_arrival = r.boundary_arrival.value_or(std::numeric_limits<double>::quiet_NaN());
    p->s = std::move(r.state);
  });
}

ndl_status ndl_pde_h_minus1(const ndl_pde* p, double* out) {
  return guard([&] {
    need(p, "pde");
    need(out, "out");
    *out = pde::h_minus1_norm(p->s);
  });
}

ndl_status ndl_pde_write_csv(const ndl_pde* p, const char* path) {
  return guard([&] {
    need(p, "pde");
    write_file(path, io::snapshot_csv(p->s));
  });
}

ndl_status ndl_pde_rescale(const ndl_pde* p, double T_blowup, ndl_branch branch, double z_max, int nz,
                           ndl_profile** out) {
  return guard([&] {
    need(p, "pde");
    need(out, "out");
    *out = wrap(pde::rescale_to_similarity(p->s, T_blowup, branch_from(branch), z_max, nz));
  });
}

ndl_status ndl_evolve_rescaled(const ndl_profile* seed, double Z, int n, double epsilon, double tau_end,
                               double window, double* residual0, double* final_distance) {
  return guard([&] {
    need(seed, "seed");
    auto s = pde::make_rescaled(seed->p, Z, n, epsilon);
    if (residual0) *residual0 = pde::rescaled_residual_norm(s);
    auto r = pde::evolve_rescaled(std::move(s), tau_end, window);
    if (final_distance)
      *final_distance = r.distances.empty() ? 0.0 : r.distances.back().sup_distance;
  });
}

// diagnostics

ndl_status ndl_airy_tail_fit(const ndl_profile* p, double z_start, ndl_airy_fit* out) {
  return guard([&] {
    need(p, "profile");
    need(out, "out");
    auto f = diag::airy_tail_fit(p->p, z_start);
    out->limit = f.limit;
    out->c = f.c;
    out->decay_exp = f.decay_exp;
    out->a0_fit = f.a0_fit;
    out->c0_fit = f.c0_fit;
    out->residual = f.residual;
    out->extrema = f.extrema;
  });
}

ndl_status ndl_total_variation(const ndl_profile* p, double z_lo, double z_hi, double* out) {
  return guard([&] {
    need(p, "profile");
    need(out, "out");
    *out = diag::total_variation(p->p, z_lo, z_hi);
  });
}

ndl_status ndl_tv_growth(const ndl_profile* p, double z_min, double z_max, int count, double* exponent) {
  return guard([&] {
    need(p, "profile");
    need(exponent, "exponent");
    *exponent = diag::tv_growth(p->p, z_min, z_max, count).exponent;
  });
}

ndl_status ndl_convergence_rate(const ndl_profile* p, double l, double z_min, double z_max, int count,
                                double* q) {
  return guard([&] {
    need(p, "profile");
    need(q, "q");
    *q = diag::convergence_rate(p->p, l, z_min, z_max, count).exponent;
  });
}

ndl_status ndl_dispersion_eigenvalues(double u, double epsilon, double re[3], double im[3]) {
  return guard([&] {
    need(re, "re");
    need(im, "im");
    auto ev = diag::dispersion_eigenvalues(u, epsilon);
    for (int i = 0; i < 3; ++i) {
      re[i] = ev[i].real();
      im[i] = ev[i].imag();
    }
  });
}

ndl_status ndl_admissibility_interface(double z0, const double* C, size_t n, double window_lo, double window_hi,
                                       const ndl_ode_settings* s, ndl_table** rows, ndl_admissibility* summary) {
  ode::OdeSettings os;
  try {
    os = settings_from(s);
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  }
  std::shared_ptr<similarity::Profile> target;
  ndl_status st = guard([&] {
    target = std::make_shared<similarity::Profile>(similarity::interface_profile(0.0, z0, os));
  });
  if (st != NDL_OK) return st;
  similarity::ShotRange range{window_lo - 1.0, std::max(window_hi, z0) + 1.0};
  diag::Family fam = [=](double c) -> diag::Evaluator {
    auto p = std::make_shared<similarity::Profile>(similarity::singular_point_family(z0, c, os, range));
    return [p](double z) { return p->eval(z); };
  };
  return admissibility([target](double z) { return target->eval(z); }, fam, C, n, window_lo, window_hi, rows,
                       summary);
}

ndl_status ndl_admissibility_saw(double m, const double* d, size_t n, double window_lo, double window_hi,
                                 const ndl_ode_settings* s, ndl_table** rows, ndl_admissibility* summary) {
  ode::OdeSettings os;
  try {
    os = settings_from(s);
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  }
  std::shared_ptr<exact::Saw> saw;
  ndl_status st = guard([&] {
    int humps = 4;
    auto built = exact::build_saw(m, humps);
    while (built.zeros.back() > window_lo && humps < 512) {
      humps *= 2;
      built = exact::build_saw(m, humps);
    }
    if (built.zeros.back() > window_lo) fail(ErrorCode::out_of_domain, "saw does not cover the window");
    saw = std::make_shared<exact::Saw>(std::move(built));
  });
  if (st != NDL_OK) return st;
  similarity::ShotRange range{window_lo - 1.0, 0.0};
  diag::Family fam = [=](double delta) -> diag::Evaluator {
    auto p = std::make_shared<similarity::Profile>(
        similarity::shoot_from_origin(exact::kAlphaCritical + delta, -m, os, range));
    if (!p->contains(window_lo)) fail(ErrorCode::out_of_domain, "shot stopped before the window");
    return [p](double z) { return p->eval(z); };
  };
  auto target = [saw](double z) { return saw->curve.eval(std::min(z, saw->curve.z_max())); };
  return admissibility(target, fam, d, n, window_lo, window_hi, rows, summary);
}

}  // extern "C"
