/*
 * sbforms C API: super Moebius geometry, cusp Fourier analysis and the
 * integrability classifier behind libsbforms.
 *
 * Conventions:
 *   - complex scalars and vectors travel as interleaved doubles re,im,...;
 *     a point in C^n occupies 2n doubles
 *   - every function returning sbf_status leaves outputs untouched on
 *     failure; sbf_last_error() describes the most recent failure on the
 *     calling thread
 *   - objects created by *_parse / *_mul / ... are owned by the caller and
 *     released with the matching *_free
 */
#ifndef SBFORMS_H
#define SBFORMS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sbf_status {
    SBF_OK = 0,
    SBF_ERR_INVALID_ARGUMENT = 1,
    SBF_ERR_DIMENSION = 2,
    SBF_ERR_DOMAIN = 3,
    SBF_ERR_POLE = 4,
    SBF_ERR_NOT_MEMBER = 5,
    SBF_ERR_SCHEMA = 6,
    SBF_ERR_NUMERIC = 7,
    SBF_ERR_IO = 8,
    SBF_ERR_INTERNAL = 9
} sbf_status;

typedef struct sbf_group_element sbf_group_element;
typedef struct sbf_super_function sbf_super_function;
typedef struct sbf_job_result sbf_job_result;

const char* sbf_version(void);
const char* sbf_last_error(void);

/* --- group elements ----------------------------------------------------- */

/* JSON schema: {n, r, realization: "ball"|"half_plane", A, b, c, d, E} with
 * complex entries as [re, im]; round-trips exactly. */
sbf_status sbf_group_element_parse(const char* json, sbf_group_element** out);
sbf_status sbf_group_element_to_json(const sbf_group_element* g, char** json_out);
sbf_status sbf_group_element_identity(int n, int r, int half_plane, sbf_group_element** out);
sbf_status sbf_group_element_a_t(double t, int n, int r, sbf_group_element** out);
sbf_status sbf_group_element_a_prime_t(double t, int n, int r, sbf_group_element** out);
sbf_status sbf_group_element_n_prime(double lambda, const double* u_reim, int n, int r,
                                     sbf_group_element** out);
sbf_status sbf_group_element_mul(const sbf_group_element* g, const sbf_group_element* h,
                                 sbf_group_element** out);
sbf_status sbf_group_element_inv(const sbf_group_element* g, sbf_group_element** out);
/* residuals_out: form preservation, unitarity of E, determinant match */
sbf_status sbf_group_element_is_member(const sbf_group_element* g, double tol, int* ok_out,
                                       double residuals_out[3]);
sbf_status sbf_mobius(const sbf_group_element* g, const double* z_reim, double* out_reim);
sbf_status sbf_cocycle(const sbf_group_element* g, const double* z_reim, double out_reim[2]);
void sbf_group_element_free(sbf_group_element* g);

/* --- domain -------------------------------------------------------------- */

sbf_status sbf_delta(const double* z_reim, const double* w_reim, int n, double out_reim[2]);
sbf_status sbf_delta_h(const double* z_reim, const double* w_reim, int n, double out_reim[2]);
sbf_status sbf_cayley_point(const double* z_reim, int n, double* w_reim_out);
sbf_status sbf_cayley_point_inv(const double* w_reim, int n, double* z_reim_out);
/* u_reim has length 2(n-1); the image point w has length 2n */
sbf_status sbf_psi(double x, double y, const double* u_reim, int n, double* w_reim_out);
sbf_status sbf_invariant_density(const double* p_reim, int n, int half_plane, double* out);

/* --- super functions ------------------------------------------------------ */

/* JSON schema: {n, r, weight, domain, components: [{odd_index: [..],
 * kind: "constant"|"monomial"|"fourier_mode"|"cocycle_power", ...}]} */
sbf_status sbf_super_function_parse(const char* json, sbf_super_function** out);
sbf_status sbf_super_function_info(const sbf_super_function* f, int* n_out, int* r_out,
                                   int* weight_out, int* half_plane_out);
sbf_status sbf_super_function_slash(const sbf_super_function* f, const sbf_group_element* g,
                                    sbf_super_function** out);
sbf_status sbf_super_function_slash_cayley(const sbf_super_function* f_on_h,
                                           sbf_super_function** out);
sbf_status sbf_super_function_slash_cayley_inv(const sbf_super_function* f_on_b,
                                               sbf_super_function** out);
/* json_out: [{"I": [..], "value": [re, im]}, ...] */
sbf_status sbf_super_function_eval(const sbf_super_function* f, const double* p_reim,
                                   char** json_out);
sbf_status sbf_super_function_lift(const sbf_super_function* f, const sbf_group_element* g,
                                   char** json_out);
sbf_status sbf_super_function_amplitude(const sbf_super_function* f, const double* p_reim,
                                        double* out);
void sbf_super_function_free(sbf_super_function* f);

/* --- cusp Fourier analysis ------------------------------------------------ */

/* cusp_json: {"lambda0": .., "chi": .., "D": [..]} */
sbf_status sbf_frequency_lattice(const char* cusp_json, const int* odd_index, int odd_count,
                                 int r, int k, int j_min, int j_max, double* out,
                                 size_t out_capacity, size_t* count_out);
/* coefficient of the odd_index component of f at frequency m over one period
 * anchored at base (length 2n) */
sbf_status sbf_fourier_coefficient(const sbf_super_function* f, const int* odd_index,
                                   int odd_count, double m, const double* base_reim,
                                   const char* cusp_json, int quad_points, double out_reim[2]);

/* --- integrability classifier --------------------------------------------- */

sbf_status sbf_weight_threshold(int n, int rho, int* out);
/* s may be INFINITY; finite_out is 1/0, bound_out only set when finite */
sbf_status sbf_tail_dichotomy(double m0, int k, int rho, int n, double s, double x0,
                              int* finite_out, double* bound_out);
/* json_out: {value, partials: [..], x_max_seq: [..], diagnostic} */
sbf_status sbf_ls_norm(const sbf_super_function* f, const int* odd_index, int odd_count,
                       double s, const char* region_json, int doublings, int threads,
                       char** json_out);

/* --- batch jobs ------------------------------------------------------------ */

/* seed_override < 0 and NaN tol_override mean "keep the job's value";
 * plots_override: -1 keep, 0 off, 1 on. */
sbf_status sbf_job_run(const char* job_json, int threads, long long seed_override,
                       double tol_override, int plots_override, sbf_job_result** out);
int sbf_job_result_exit_code(const sbf_job_result* res);
const char* sbf_job_result_report(const sbf_job_result* res);
size_t sbf_job_result_artifact_count(const sbf_job_result* res);
const char* sbf_job_result_artifact_name(const sbf_job_result* res, size_t idx);
const char* sbf_job_result_artifact_content(const sbf_job_result* res, size_t idx);
void sbf_job_result_free(sbf_job_result* res);

void sbf_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SBFORMS_H */
