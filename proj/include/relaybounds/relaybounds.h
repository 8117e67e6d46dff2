/* C interface to the relaybounds library. All functions are thread-safe;
 * rb_last_error_message() is per thread. Handles are owned by the caller and
 * released with the matching *_free function. */
#ifndef RELAYBOUNDS_H
#define RELAYBOUNDS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RB_API __declspec(dllexport)
#else
#define RB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rb_status {
  RB_OK = 0,
  RB_INVALID_ARGUMENT = 1,
  RB_DEGENERATE = 2,          /* a closed-form denominator vanishes */
  RB_NO_SPECIAL_PATTERN = 3,  /* phi_special at a point matching no pattern */
  RB_OUT_OF_RANGE = 4,        /* getter index past the end */
  RB_INTERNAL = 5
} rb_status;

enum { RB_LOG2 = 0, RB_LOGE = 1 };
enum { RB_RHO12_ZERO = 0, RB_RHO12_JOINT = 1 };
enum { RB_CONST_BITS = 0, RB_CONST_LITERAL = 1 };
enum { RB_OBJ_V1 = 0, RB_OBJ_V2 = 1 };
enum { RB_LAYER_ONE = 1, RB_LAYER_TWO = 2 };

typedef enum rb_variant {
  RB_ND = 0,
  RB_LEMMA2_V1 = 1,
  RB_LEMMA2_V2 = 2,
  RB_LEMMA2_MIN = 3,
  RB_THEOREM2_V1 = 4,
  RB_THEOREM2_V2 = 5,
  RB_SPECIAL_MU = 6
} rb_variant;

/* Selector for rb_theorem2_bound. */
enum { RB_THEOREM2_BOTH = 0, RB_THEOREM2_ONLY_V1 = 1, RB_THEOREM2_ONLY_V2 = 2 };

enum { RB_MUTATION_NONE = 0, RB_MUTATION_PSI_SIGN_FLIP = 1 };

typedef struct rb_config {
  double grid_step;  /* default 1e-3 */
  double refine_tol; /* default 1e-6 */
  int log_base;      /* RB_LOG2 or RB_LOGE */
  int rho12_mode;    /* RB_RHO12_ZERO or RB_RHO12_JOINT */
  int v2_constant;   /* RB_CONST_BITS or RB_CONST_LITERAL */
  int threads;       /* >= 1 */
} rb_config;

typedef struct rb_bound_result rb_bound_result;
typedef struct rb_verify_report rb_verify_report;

RB_API const char* rb_version(void);
RB_API const char* rb_last_error_message(void);
RB_API const char* rb_variant_name(int variant);
RB_API void rb_config_default(rb_config* cfg);

/* Bounds. cfg may be NULL for defaults. */
RB_API rb_status rb_nd_bound(int relays, double r1, double r2, const rb_config* cfg, rb_bound_result** out);
/* variant: RB_LEMMA2_V1, RB_LEMMA2_V2, RB_LEMMA2_MIN or RB_SPECIAL_MU. */
RB_API rb_status rb_layered_bound(int relays, double r1, double r2, double r3, int variant, const rb_config* cfg,
                                  rb_bound_result** out);
/* which: RB_THEOREM2_BOTH, RB_THEOREM2_ONLY_V1 or RB_THEOREM2_ONLY_V2. */
RB_API rb_status rb_theorem2_bound(int relays, double r1, double r2, double r3, int which, const rb_config* cfg,
                                   rb_bound_result** out);

RB_API double rb_result_value(const rb_bound_result* r);
RB_API int rb_result_variant(const rb_bound_result* r);
RB_API int rb_result_achieved_by(const rb_bound_result* r);
RB_API int rb_result_log_base(const rb_bound_result* r);
RB_API void rb_result_argmax(const rb_bound_result* r, double* rho1, double* rho2, double* rho12);
RB_API void rb_result_meta(const rb_bound_result* r, double* grid_step, double* refine_tol, double* final_spacing,
                           long long* evaluations, int* rho12_mode);
RB_API size_t rb_result_pair_count(const rb_bound_result* r);
RB_API rb_status rb_result_pair(const rb_bound_result* r, size_t i, int* n, int* m);
RB_API size_t rb_result_component_count(const rb_bound_result* r);
RB_API rb_status rb_result_component(const rb_bound_result* r, size_t i, int* variant, double* value);
/* Theorem bound only: per-pair values; has_v2 = 0 when N - m = 0. */
RB_API size_t rb_result_pair_eval_count(const rb_bound_result* r);
RB_API rb_status rb_result_pair_eval(const rb_bound_result* r, size_t i, int* n, int* m, int* source, double* v1,
                                     double* v2, int* has_v2);
RB_API void rb_result_free(rb_bound_result* r);

/* Verification suites. */
RB_API rb_status rb_verify_oracle(int n_max, int samples, uint64_t seed, int mutation, rb_verify_report** out);
RB_API rb_status rb_verify_maxima(int n_max, int samples, uint64_t seed, rb_verify_report** out);
/* gains: count triples (r1, r2, r3) laid out contiguously. */
RB_API rb_status rb_verify_lemma3(int n_max, const double* gains, size_t count, const rb_config* cfg,
                                  double joint_grid_step, rb_verify_report** out);
RB_API rb_status rb_verify_limits(int n_max, rb_verify_report** out);
RB_API rb_status rb_verify_timeshare(int relays, int samples, uint64_t seed, const double gains[3],
                                     const rb_config* cfg, rb_verify_report** out);
RB_API rb_status rb_verify_eigen(int n_max, int samples, uint64_t seed, rb_verify_report** out);

RB_API int rb_report_passed(const rb_verify_report* r);
RB_API size_t rb_report_failure_count(const rb_verify_report* r);
RB_API size_t rb_report_finding_count(const rb_verify_report* r);
RB_API double rb_report_wall_time(const rb_verify_report* r);
/* Strings stay valid until the report is freed. */
RB_API const char* rb_report_suite(const rb_verify_report* r);
RB_API int rb_report_samples(const rb_verify_report* r);
RB_API uint64_t rb_report_seed(const rb_verify_report* r);
RB_API rb_status rb_report_failure(const rb_verify_report* r, size_t i, const char** check, const char** input,
                                   double* expected, double* got, double* diff);
RB_API rb_status rb_report_finding(const rb_verify_report* r, size_t i, const char** check, const char** input,
                                   double* expected, double* got, double* diff);
RB_API size_t rb_report_note_count(const rb_verify_report* r);
RB_API const char* rb_report_note(const rb_verify_report* r, size_t i);
RB_API size_t rb_report_tolerance_count(const rb_verify_report* r);
RB_API rb_status rb_report_tolerance(const rb_verify_report* r, size_t i, const char** name, double* value);
/* snprintf semantics: writes at most cap bytes including the terminator and
 * returns the full length excluding it. */
RB_API size_t rb_report_serialize(const rb_verify_report* r, int include_wall_time, char* buf, size_t cap);
RB_API void rb_report_free(rb_verify_report* r);

/* Scalar functions. */
RB_API rb_status rb_psi(int relays, int n, double rho1, double* out);
RB_API rb_status rb_phi(int relays, int n, int m, double rho1, double rho2, double rho12, double* out);
/* Special pattern, then closed form, then oracle. */
RB_API rb_status rb_phi_eval(int relays, int n, int m, double rho1, double rho2, double rho12, double* out);
RB_API rb_status rb_phi_special(int relays, int n, int m, double rho1, double rho2, double rho12, double* out);
RB_API rb_status rb_mu(int relays, double rho2, double* out);
/* layer: RB_LAYER_ONE (psi) or RB_LAYER_TWO (phi). */
RB_API rb_status rb_schur_oracle(int relays, int n, int m, double rho1, double rho2, double rho12, int layer,
                                 double* out);
RB_API rb_status rb_is_feasible(int relays, double rho1, double rho2, double rho12, int* out);
RB_API rb_status rb_zeta_interval(int relays, double rho1, double rho2, double* lo, double* hi);
/* objective: RB_OBJ_V1 or RB_OBJ_V2; base and constant unit taken from cfg (NULL for defaults). */
RB_API rb_status rb_lemma2_objective(int relays, double r1, double r2, double r3, int n, int m, double rho1,
                                     double rho2, double rho12, int objective, const rb_config* cfg, double* out);

#ifdef __cplusplus
}
#endif

#endif /* RELAYBOUNDS_H */
