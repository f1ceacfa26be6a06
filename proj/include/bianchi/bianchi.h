/* C interface to the Bianchi-group Eisenstein series library.
 *
 * Every function returns a bq_status; on failure a message for the calling
 * thread is available from bq_last_error(). Handles are opaque and owned by
 * the caller, who releases them with the matching *_destroy function.
 */
#ifndef BIANCHI_H
#define BIANCHI_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(BQ_BUILDING_LIBRARY)
#define BQ_API __attribute__((visibility("default")))
#else
#define BQ_API
#endif

typedef enum bq_status {
  BQ_OK = 0,
  BQ_ERR_INVALID_ARGUMENT = 1,
  BQ_ERR_DOMAIN = 2,
  BQ_ERR_POLE = 3,
  BQ_ERR_OUT_OF_RANGE = 4,
  BQ_ERR_CONVERGENCE = 5,
  BQ_ERR_PARSE = 6,
  BQ_ERR_IO = 7,
  BQ_ERR_INTERNAL = 8,
  BQ_ERR_NULL_POINTER = 9,
  BQ_ERR_BUFFER_TOO_SMALL = 10
} bq_status;

typedef struct bq_complex {
  double re;
  double im;
} bq_complex;

typedef struct bq_point {
  double x1;
  double x2;
  double y;
} bq_point;

typedef struct bq_field bq_field;
typedef struct bq_eisenstein bq_eisenstein;
typedef struct bq_config bq_config;
typedef struct bq_report bq_report;

typedef struct bq_field_info {
  int D;
  int d_K;
  int unit_count;
  double lattice_covolume;
  double manifold_volume;
  double zeta_k_2;
  double zeta_k_residue;
  double printed_residue;
} bq_field_info;

typedef struct bq_zero {
  double gamma;
  int source; /* 0: zeta factor, 1: L(s, chi) factor */
  double bracket_lo;
  double bracket_hi;
} bq_zero;

typedef struct bq_lemma_result {
  double lhs;
  double rhs_main;
  double ratio;
  double quad_delta;
} bq_lemma_result;

BQ_API const char* bq_version(void);
BQ_API const char* bq_status_string(bq_status status);
BQ_API const char* bq_last_error(void);

/* 0 selects hardware concurrency. */
BQ_API bq_status bq_set_threads(int n);
BQ_API int bq_get_threads(void);

/* Fields: D in {-1, -2, -3, -7, -11, -19, -43, -67, -163}. */
BQ_API bq_status bq_supported_fields(int* out, size_t capacity, size_t* count);
BQ_API bq_status bq_field_create(int D, bq_field** out);
BQ_API void bq_field_destroy(bq_field* field);
BQ_API bq_status bq_field_info_get(const bq_field* field, bq_field_info* out);

/* Elements are a + b*omega with omega = (d_K + sqrt(d_K)) / 2. */
BQ_API bq_status bq_norm(const bq_field* field, int64_t a, int64_t b, int64_t* out);
BQ_API bq_status bq_divisor_sum(const bq_field* field, int64_t a, int64_t b, bq_complex s, bq_complex* out);

BQ_API bq_status bq_riemann_zeta(bq_complex s, bq_complex* out);
BQ_API bq_status bq_dirichlet_l(const bq_field* field, bq_complex s, bq_complex* out);
BQ_API bq_status bq_dedekind_zeta(const bq_field* field, bq_complex s, bq_complex* out);
BQ_API bq_status bq_completed_xi(const bq_field* field, bq_complex s, bq_complex* out);
BQ_API bq_status bq_scattering_phi(const bq_field* field, bq_complex s, bq_complex* out);
BQ_API bq_status bq_phi_log_derivative(const bq_field* field, bq_complex s, bq_complex* out);

/* Zeros with 0 < gamma <= t_max (t_max <= 120). *count receives the number found
 * even when it exceeds capacity, in which case BQ_ERR_BUFFER_TOO_SMALL is returned. */
BQ_API bq_status bq_critical_zeros(const bq_field* field, double t_max, bq_zero* out, size_t capacity, size_t* count);
BQ_API bq_status bq_argument_count(const bq_field* field, double height, int* out);

BQ_API bq_status bq_log_gamma(bq_complex z, bq_complex* out);
BQ_API bq_status bq_bessel_k(bq_complex nu, double x, bq_complex* out);
/* exp(pi |Im nu| / 2) K_nu(x) = mantissa * exp(log_scale). */
BQ_API bq_status bq_bessel_k_scaled(bq_complex nu, double x, bq_complex* mantissa, double* log_scale);

/* gamma (optional, 8 entries) receives the reducing matrix in the omega basis:
 * a0, a1, b0, b1, c0, c1, d0, d1 with a = a0 + a1 omega and so on. */
BQ_API bq_status bq_reduce(const bq_field* field, bq_point p, bq_point* out, int64_t* gamma);
BQ_API bq_status bq_volume(const bq_field* field, double* quadrature, double* closed_form);

BQ_API bq_status bq_eisenstein_create(const bq_field* field, bq_complex s, double y_min, double eps,
                                      bq_eisenstein** out);
BQ_API void bq_eisenstein_destroy(bq_eisenstein* e);
BQ_API bq_status bq_eisenstein_eval(const bq_eisenstein* e, bq_point p, bq_complex* out);
BQ_API bq_status bq_eisenstein_orbits(const bq_eisenstein* e, size_t* out);
/* Coset-sum evaluation; requires Re s > 2. */
BQ_API bq_status bq_coset_sum(const bq_field* field, bq_point p, bq_complex s, bq_complex* out);
BQ_API bq_status bq_eisenstein_pole_residue(const bq_field* field, double* out);

BQ_API bq_status bq_verify_divisor_identity(const bq_field* field, bq_complex a, bq_complex b, bq_complex s,
                                            int64_t norm_bound, double* rel_error);
BQ_API bq_status bq_verify_bessel_moment(double sigma_t, double t, bq_complex s, double* rel_error);
/* approach_one != 0 selects the sigma -> 1 main term. */
BQ_API bq_status bq_lemma_cont(const bq_field* field, const char* test_function, double sigma, double t,
                               int approach_one, bq_lemma_result* out);

/* Run configuration as JSON. */
BQ_API bq_status bq_config_parse(const char* json, bq_config** out);
BQ_API bq_status bq_config_load(const char* path, bq_config** out);
BQ_API void bq_config_destroy(bq_config* cfg);
/* Writes at most capacity bytes including the terminator; *needed receives the full size. */
BQ_API bq_status bq_config_to_json(const bq_config* cfg, char* buf, size_t capacity, size_t* needed);

/* Reports: a CSV table and named pass/fail assertions. */
BQ_API bq_status bq_run_selftest(int field, uint64_t seed, bq_report** out);
BQ_API bq_status bq_run_sweep(const bq_config* cfg, bq_report** out);
BQ_API bq_status bq_run_lemma_cont(const bq_config* cfg, bq_report** out);
BQ_API bq_status bq_run_volume(int field, bq_report** out);
BQ_API bq_status bq_run_zeros(int field, double t_max, bq_report** out);
BQ_API void bq_report_destroy(bq_report* r);
BQ_API size_t bq_report_row_count(const bq_report* r);
/* Pointers stay valid for the lifetime of the report. */
BQ_API const char* bq_report_csv_header(const bq_report* r);
BQ_API const char* bq_report_csv_row(const bq_report* r, size_t i);
BQ_API size_t bq_report_assertion_count(const bq_report* r);
BQ_API bq_status bq_report_assertion(const bq_report* r, size_t i, const char** name, int* pass, const char** detail);
BQ_API int bq_report_all_pass(const bq_report* r);
BQ_API bq_status bq_report_write_csv(const bq_report* r, const char* path);

#ifdef __cplusplus
}
#endif

#endif
