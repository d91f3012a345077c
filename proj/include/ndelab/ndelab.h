/* ndelab: similarity profiles, exact solutions, blow-up bounds and a regularized
 * finite-difference solver for u_t = (u u_x)_xx.
 *
 * Every function returns an ndl_status; on failure ndl_last_error() holds a
 * message for the calling thread. Objects are opaque and owned by the caller
 * once returned; release them with the matching *_free function.
 */
#ifndef NDELAB_NDELAB_H
#define NDELAB_NDELAB_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(NDELAB_BUILDING_LIBRARY)
#    define NDELAB_API __declspec(dllexport)
#  else
#    define NDELAB_API __declspec(dllimport)
#  endif
#else
#  define NDELAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ndl_status {
  NDL_OK = 0,
  NDL_INVALID_ARGUMENT,
  NDL_DOMAIN_ERROR,
  NDL_STEP_UNDERFLOW,
  NDL_BLOWUP_DETECTED,
  NDL_MAX_ITERATIONS,
  NDL_NO_SIGN_CHANGE,
  NDL_SHOOTING_FAILED,
  NDL_COMPLETE_BLOWUP,
  NDL_INSUFFICIENT_TAIL,
  NDL_UNCLASSIFIED,
  NDL_ROOT_NOT_FOUND,
  NDL_INSUFFICIENT_HUMPS,
  NDL_AT_BLOWUP,
  NDL_NON_BLOWUP,
  NDL_OUT_OF_DOMAIN,
  NDL_NONPOSITIVE_J0,
  NDL_INSUFFICIENT_SAMPLES,
  NDL_DIVERGENT_C0,
  NDL_INVALID_GRID,
  NDL_CFL_VIOLATION,
  NDL_OUT_OF_WINDOW,
  NDL_ZERO_JUMP,
  NDL_SINGULAR_AT_ORIGIN,
  NDL_IO_ERROR,
  NDL_BUFFER_TOO_SMALL,
  NDL_INTERNAL_ERROR
} ndl_status;

NDELAB_API const char* ndl_status_name(ndl_status status);
NDELAB_API const char* ndl_last_error(void);
NDELAB_API const char* ndl_version(void);

/* ---- integrator settings ---- */

typedef struct ndl_ode_settings {
  double rel_tol;
  double abs_tol;
  double nu; /* regularization of 1/|g| */
  double max_step;
  double min_step;
  long max_steps;
  double blowup_threshold;
} ndl_ode_settings;

/* rel_tol = abs_tol = nu = 1e-12, blowup_threshold = 1e8 */
NDELAB_API void ndl_ode_settings_default(ndl_ode_settings* s);

typedef enum ndl_termination {
  NDL_REACHED_END = 0,
  NDL_EVENT_HIT,
  NDL_TERM_BLOWUP,
  NDL_TERM_UNDERFLOW
} ndl_termination;

/* ---- tables: rows of doubles with named columns ---- */

typedef struct ndl_table ndl_table;

NDELAB_API void ndl_table_free(ndl_table* t);
NDELAB_API ndl_status ndl_table_shape(const ndl_table* t, size_t* rows, size_t* cols);
NDELAB_API ndl_status ndl_table_column_name(const ndl_table* t, size_t col, const char** name);
/* row-major copy, capacity counted in doubles */
NDELAB_API ndl_status ndl_table_data(const ndl_table* t, double* out, size_t capacity);
NDELAB_API ndl_status ndl_table_write_csv(const ndl_table* t, const char* path);

/* ---- similarity profiles ---- */

typedef enum ndl_branch { NDL_BRANCH_BLOWUP = 0, NDL_BRANCH_RAREFACTION = 1 } ndl_branch;

typedef enum ndl_classification {
  NDL_BOUNDED_OSCILLATORY = 0,
  NDL_CUBIC_GROWTH,
  NDL_FINITE_INTERFACE,
  NDL_SQRT_SINGULARITY,
  NDL_POWER_TAIL
} ndl_classification;

typedef struct ndl_profile ndl_profile;

typedef struct ndl_profile_info {
  double alpha;
  double beta;
  ndl_branch branch;
  ndl_classification classification;
  double origin_slope;
  int has_far_limit;
  double far_limit;
  int has_far_limit_plus;
  double far_limit_plus;
  int has_interface;
  double interface_z0;
  size_t samples;
  double z_min;
  double z_max;
} ndl_profile_info;

NDELAB_API ndl_status ndl_rhs_regularized(const double state[3], double z, double alpha, double nu,
                                          ndl_branch branch, double out[3]);
NDELAB_API ndl_status ndl_origin_series(double C, double z, double alpha, double* out);

NDELAB_API ndl_status ndl_shoot_profile(double alpha, double target_limit, const ndl_ode_settings* s,
                                        ndl_profile** out);
/* z_right <= 0 integrates the left side only */
NDELAB_API ndl_status ndl_shoot_from_origin(double alpha, double C, double z_left, double z_right,
                                            const ndl_ode_settings* s, ndl_profile** out);
NDELAB_API ndl_status ndl_interface_profile(double alpha, double z0, const ndl_ode_settings* s,
                                            ndl_profile** out);
NDELAB_API ndl_status ndl_solve_heaviside(const ndl_ode_settings* s, double* z0, double* H0,
                                          ndl_profile** out);
NDELAB_API ndl_status ndl_singular_point_family(double z0, double C, double z_left, double z_right,
                                                const ndl_ode_settings* s, ndl_profile** out);
NDELAB_API ndl_status ndl_profile_rescale(const ndl_profile* p, double a, ndl_profile** out);
NDELAB_API ndl_status ndl_profile_reflect(const ndl_profile* p, ndl_profile** out);
NDELAB_API void ndl_profile_free(ndl_profile* p);

NDELAB_API ndl_status ndl_profile_get_info(const ndl_profile* p, ndl_profile_info* info);
/* copies min(capacity, samples) grid points; count receives the total */
NDELAB_API ndl_status ndl_profile_samples(const ndl_profile* p, double* z, double* g, size_t capacity,
                                          size_t* count);
NDELAB_API ndl_status ndl_profile_eval(const ndl_profile* p, double z, int order, double* value);
NDELAB_API ndl_status ndl_profile_residual(const ndl_profile* p, double z, double* value);
NDELAB_API ndl_status ndl_estimate_far_field_limit(const ndl_profile* p, double* value);
NDELAB_API ndl_status ndl_profile_write_csv(const ndl_profile* p, const char* path);
NDELAB_API ndl_status ndl_profile_write_json(const ndl_profile* p, const char* path);

NDELAB_API ndl_status ndl_detect_singularity(const double* z, const double* g, size_t n,
                                             ndl_classification* cls, double* z0, double* coeff);
NDELAB_API ndl_status ndl_final_time_profile(double alpha, double C_minus, double C_plus, double x,
                                             double* out);

/* ---- exact solutions ---- */

typedef struct ndl_saw ndl_saw;

NDELAB_API ndl_status ndl_build_saw(double m, int num_humps, ndl_saw** out);
NDELAB_API void ndl_saw_free(ndl_saw* s);
NDELAB_API ndl_status ndl_saw_breakpoints(const ndl_saw* s, double* out, size_t capacity, size_t* count);
NDELAB_API ndl_status ndl_saw_hump(const ndl_saw* s, size_t hump, double coeffs[4], double* peak_z,
                                   double* peak_height);
NDELAB_API ndl_status ndl_saw_eval(const ndl_saw* s, double z, int order, double* value);
NDELAB_API ndl_status ndl_saw_residual(const ndl_saw* s, double z, double* value);
NDELAB_API ndl_status ndl_saw_envelope_fit(const ndl_saw* s, int skip_humps, double* C_env,
                                           double* exponent);
NDELAB_API ndl_status ndl_saw_write_json(const ndl_saw* s, const char* path);
NDELAB_API ndl_status ndl_saw_write_csv(const ndl_saw* s, const char* path);

/* kind 1: g = p0 + p1 z + z^3/60; kind 2: g = (400/3) p0^3 + 20 p0^2 z + p0 z^2 + z^3/60 */
NDELAB_API ndl_status ndl_invariant_cubic(int kind, double p0, double p1, double coeffs[4]);
NDELAB_API ndl_status ndl_cubic_residual(const double coeffs[4], double alpha, double z, double* out);

typedef enum ndl_tw_kind { NDL_TW_CONSTANT = 0, NDL_TW_SQRT, NDL_TW_PARABOLA } ndl_tw_kind;

/* order 0..3 evaluates f and its derivatives; order -1 evaluates the flux (f f')' */
NDELAB_API ndl_status ndl_tw_eval(ndl_tw_kind kind, double lambda, double A0, double p1, double p2,
                                  double y, int order, double* out);
NDELAB_API ndl_status ndl_rankine_hugoniot_speed(double flux_jump, double value_jump, double* out);

/* ---- invariant subspace dynamics ---- */

NDELAB_API ndl_status ndl_w4_rhs(const double c[4], double out[4]);
NDELAB_API ndl_status ndl_w4_closed_form(double T, double A0, double B0, double D0, double t, double c[4]);
NDELAB_API ndl_status ndl_w4_blowup_time(double c3_initial, double* T);
/* table columns t, C0..C3 */
NDELAB_API ndl_status ndl_w4_integrate(double t0, const double c0[4], double t_end,
                                       const ndl_ode_settings* s, ndl_table** out,
                                       ndl_termination* termination);

/* ---- blow-up bounds ---- */

typedef enum ndl_order { NDL_FIRST_ORDER = 1, NDL_SECOND_ORDER = 2, NDL_THIRD_ORDER = 3 } ndl_order;

NDELAB_API ndl_status ndl_cut_weight(double L, double x, double* out);
NDELAB_API ndl_status ndl_expansion_coefficient(const double* x, const double* u, size_t n, double L,
                                                double* J);
NDELAB_API ndl_status ndl_blowup_time_bound(double J0, double L, ndl_order order, double* T0);
NDELAB_API ndl_status ndl_odi_check(const double* t, const double* J, size_t n, double L, double rel_tol,
                                    int* satisfied, double* min_relative_margin);
/* cut-off tau^k (1-tau)^k */
NDELAB_API ndl_status ndl_capacity_constant(int k, double* c0);
NDELAB_API ndl_status ndl_capacity_bound(const double* x, const double* ut0, size_t n, double L, int k,
                                         double* J0, double* c0, double* T0);

/* ---- regularized PDE ---- */

typedef enum ndl_data { NDL_S_MINUS = 0, NDL_S_PLUS, NDL_H_LEFT, NDL_H_RIGHT } ndl_data;
typedef enum ndl_bc { NDL_PINNED_FAR_FIELD = 0, NDL_DIRICHLET_ZERO = 1 } ndl_bc;

typedef struct ndl_pde ndl_pde;

typedef struct ndl_pde_info {
  double t;
  size_t n;
  double L;
  double dx;
  double epsilon;
  double stable_dt;
} ndl_pde_info;

/* epsilon < 0 selects dx^2; smoothing_width < 0 selects 4 dx, 0 the raw step */
NDELAB_API ndl_status ndl_pde_create(ndl_data data, double L, int n, double epsilon, double smoothing_width,
                                     ndl_pde** out);
/* u0 holds n nodal values on the uniform grid over [-L, L] */
NDELAB_API ndl_status ndl_pde_create_values(const double* u0, int n, double L, double epsilon, ndl_bc bc,
                                            ndl_pde** out);
NDELAB_API void ndl_pde_free(ndl_pde* p);
NDELAB_API ndl_status ndl_pde_get_info(const ndl_pde* p, ndl_pde_info* info);
NDELAB_API ndl_status ndl_pde_values(const ndl_pde* p, double* x, double* u, size_t capacity);
NDELAB_API ndl_status ndl_pde_step(ndl_pde* p, double dt);
/* table columns t, mass, mass_left, mass_right, h_minus1, sup; boundary_arrival is NaN if none */
NDELAB_API ndl_status ndl_pde_evolve(ndl_pde* p, double t_end, double record_interval, double dt_safety,
                                     ndl_table** diagnostics, double* boundary_arrival);
NDELAB_API ndl_status ndl_pde_h_minus1(const ndl_pde* p, double* out);
NDELAB_API ndl_status ndl_pde_write_csv(const ndl_pde* p, const char* path);
NDELAB_API ndl_status ndl_pde_rescale(const ndl_pde* p, double T_blowup, ndl_branch branch, double z_max,
                                      int nz, ndl_profile** out);
/* seeds the rescaled equation with the profile on [-Z, Z] and reports the residual norm at tau = 0
 * and the sup distance to the seed over |z| <= window at tau_end */
NDELAB_API ndl_status ndl_evolve_rescaled(const ndl_profile* seed, double Z, int n, double epsilon,
                                          double tau_end, double window, double* residual0,
                                          double* final_distance);

/* ---- diagnostics ---- */

typedef struct ndl_airy_fit {
  double limit;
  double c;
  double decay_exp;
  double a0_fit;
  double c0_fit;
  double residual;
  int extrema;
} ndl_airy_fit;

NDELAB_API ndl_status ndl_airy_tail_fit(const ndl_profile* p, double z_start, ndl_airy_fit* out);
NDELAB_API ndl_status ndl_total_variation(const ndl_profile* p, double z_lo, double z_hi, double* out);
NDELAB_API ndl_status ndl_tv_growth(const ndl_profile* p, double z_min, double z_max, int count,
                                    double* exponent);
NDELAB_API ndl_status ndl_convergence_rate(const ndl_profile* p, double l, double z_min, double z_max,
                                           int count, double* q);
NDELAB_API ndl_status ndl_dispersion_eigenvalues(double u, double epsilon, double re[3], double im[3]);

typedef struct ndl_admissibility {
  int monotone;
  int converged;
  double final_sup;
} ndl_admissibility;

/* singular-point family through z0 with slopes C[k] against the interface profile at z0;
 * table columns param, sup, l1 */
NDELAB_API ndl_status ndl_admissibility_interface(double z0, const double* C, size_t n, double window_lo,
                                                  double window_hi, const ndl_ode_settings* s,
                                                  ndl_table** rows, ndl_admissibility* summary);
/* shots from the origin with alpha = -1/10 + d[k], g'(0) = -m, against the saw */
NDELAB_API ndl_status ndl_admissibility_saw(double m, const double* d, size_t n, double window_lo,
                                            double window_hi, const ndl_ode_settings* s, ndl_table** rows,
                                            ndl_admissibility* summary);

#ifdef __cplusplus
}
#endif

#endif /* NDELAB_NDELAB_H */
