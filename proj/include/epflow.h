/* epflow: C API for the entropy-power flow verification library.
 *
 * All functions return epf_status; results come back through out-pointers.
 * Objects are opaque handles created and released by the library. On any
 * failure, epf_last_error_message() returns a thread-local description of
 * the most recent error.
 */

#ifndef EPFLOW_H
#define EPFLOW_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define EPF_API __declspec(dllexport)
#else
#define EPF_API __attribute__((visibility("default")))
#endif

typedef enum epf_status {
  EPF_OK = 0,
  EPF_ERR_INVALID_ARGUMENT = 1, /* null pointers, bad shapes, out-of-range orders */
  EPF_ERR_PARSE = 2,            /* unreadable or malformed files */
  EPF_ERR_ACCURACY = 3,         /* a numeric routine missed its accuracy target */
  EPF_ERR_IO = 4,               /* filesystem write failures */
  EPF_ERR_INTERNAL = 5
} epf_status;

typedef struct epf_mixture epf_mixture; /* a validated Gaussian mixture */
typedef struct epf_report epf_report;   /* a completed conjecture evaluation */

typedef struct epf_quad_options {
  double abs_tol;               /* default 1e-12 */
  double rel_tol;               /* default 1e-10 */
  int max_panels;               /* default 4096 */
  double tail_sigma_multiplier; /* default 12 */
} epf_quad_options;

typedef enum epf_method {
  EPF_METHOD_ANALYTIC = 0,
  EPF_METHOD_SPECTRAL = 1,
  EPF_METHOD_BOTH = 2
} epf_method;

/* One (t, m) record of the conjecture report. */
typedef struct epf_cell {
  double t;
  int m;
  double sigma_t2;
  double ep_value;          /* (-1)^{m-1} d^m N/dt^m, preferred route */
  double ep_value_spectral; /* NaN when the spectral route did not run */
  double ep_error;
  double ep_spectral_error; /* NaN when the spectral route did not run */
  double gcm_value; /* (-1)^{m-1} ydot^{(m-1)} */
  double gcm_error;
  double mck_bound; /* (m-1)!/sigma_t^{2m} */
  double mck_slack;
  int ep_ok;
  int gcm_ok;
  int mck_ok;
  int violation_candidate;
  int cell_error;
  epf_method method;
} epf_cell;

/* Per-time functionals and proof-chain outcome. */
typedef struct epf_point {
  double t;
  double entropy;       /* H = integral p log p */
  double fisher;        /* I */
  double y;             /* -2H */
  double y_dot;         /* I */
  double entropy_power; /* N = e^y */
  double sigma_t2;
  double cramer_rao_product; /* y_dot * sigma_t2 */
  double de_bruijn_residual; /* dH/dt + I/2 */
  int evaluation_failed;
  int chain_satisfied; /* 1 satisfied, 0 vacuous, -1 failed */
  double chain_identity_rel_err;
} epf_point;

EPF_API const char* epf_status_name(epf_status status);

/* Thread-local message for the most recent failure in this thread. Never
 * NULL; empty string when no error has occurred. */
EPF_API const char* epf_last_error_message(void);

EPF_API void epf_quad_options_default(epf_quad_options* options);

/* ---- mixtures ------------------------------------------------------- */

/* Arrays of length n: weights (positive, summing to 1 within 1e-3; they are
 * renormalized), means, variances (positive). */
EPF_API epf_status epf_mixture_create(const double* weights, const double* means,
                                      const double* variances, int n, epf_mixture** out);

/* Load from a mixture spec file (see the documented key/value format). */
EPF_API epf_status epf_mixture_load(const char* path, epf_mixture** out);

EPF_API void epf_mixture_free(epf_mixture* mixture);

EPF_API epf_status epf_mixture_component_count(const epf_mixture* mixture, int* out);
EPF_API epf_status epf_mixture_component(const epf_mixture* mixture, int index, double* weight,
                                         double* mean, double* variance);
EPF_API epf_status epf_mixture_moments(const epf_mixture* mixture, double* mean,
                                       double* variance);
EPF_API epf_status epf_mixture_name(const epf_mixture* mixture, const char** out);

/* Warnings gathered while loading (e.g. renormalized weights). */
EPF_API epf_status epf_mixture_warning_count(const epf_mixture* mixture, int* out);
EPF_API epf_status epf_mixture_warning(const epf_mixture* mixture, int index, const char** out);

/* Density of the mixture flowed to time t, evaluated at x. */
EPF_API epf_status epf_mixture_density(const epf_mixture* mixture, double t, double x,
                                       double* out);

/* ---- flow functionals ------------------------------------------------ */

/* H, I, and the analytic derivative list ydot^{(k)}, k = 0..order-1, at one
 * flow time. ydot_derivs/ydot_errors may be NULL or arrays of length order.
 */
EPF_API epf_status epf_flow_eval(const epf_mixture* mixture, double t, int order,
                                 const epf_quad_options* options, double* entropy,
                                 double* fisher, double* ydot_derivs, double* ydot_errors);

/* ---- Bell polynomials ------------------------------------------------ */

/* out has length n+1 and receives B_0..B_n of x_1..x_n. */
EPF_API epf_status epf_bell_complete(const double* x, int n, double* out);

/* ---- conjecture evaluation ------------------------------------------- */

/* Evaluates EP/McK/GCM at every (t, m), t in t_grid (strictly increasing,
 * positive), m = 1..order (order up to 6), and verifies the proof chain. */
EPF_API epf_status epf_evaluate(const epf_mixture* mixture, const double* t_grid, int n_t,
                                int order, const epf_quad_options* options, epf_method method,
                                epf_report** out);

EPF_API void epf_report_free(epf_report* report);

EPF_API epf_status epf_report_cell_count(const epf_report* report, int* out);
EPF_API epf_status epf_report_cell(const epf_report* report, int index, epf_cell* out);
EPF_API epf_status epf_report_point_count(const epf_report* report, int* out);
EPF_API epf_status epf_report_point(const epf_report* report, int index, epf_point* out);

/* 1 when any cell is a violation candidate / any hard failure occurred. */
EPF_API epf_status epf_report_has_violation_candidate(const epf_report* report, int* out);
EPF_API epf_status epf_report_has_hard_failure(const epf_report* report, int* out);
EPF_API epf_status epf_report_has_cell_error(const epf_report* report, int* out);

/* Deterministic serializations: identical runs produce identical bytes. */
EPF_API epf_status epf_report_write_json(const epf_report* report, const char* path);
EPF_API epf_status epf_report_write_table_csv(const epf_report* report, const char* path);
EPF_API epf_status epf_report_write_curves_csv(const epf_report* report, const char* path);

/* Rendered JSON held by the report; valid until the report is freed. */
EPF_API epf_status epf_report_json(const epf_report* report, const char** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* EPFLOW_H */
