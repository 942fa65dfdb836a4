/* C API for the kcsp shared library.
 *
 * All objects are opaque handles created and destroyed by the library.
 * Functions return KCSP_OK (0) on success or a nonzero status; the message
 * for the most recent failure on the calling thread is available through
 * kcsp_last_error(). Output strings are heap-allocated and must be released
 * with kcsp_string_free().
 */

#ifndef KCSP_H
#define KCSP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kcsp_status {
    KCSP_OK = 0,
    KCSP_ERROR_VALIDATION = 1, /* bad input, schema violation, precondition */
    KCSP_ERROR_BUDGET = 2,     /* exact computation exceeds its budget */
    KCSP_ERROR_INTERNAL = 3
} kcsp_status;

typedef struct kcsp_instance kcsp_instance;   /* weighted Max k-CSP instance */
typedef struct kcsp_game kcsp_game;           /* unique or d-to-1 game */
typedef struct kcsp_proof kcsp_proof;         /* long-code proof tables */
typedef struct kcsp_rfunction kcsp_rfunction; /* f: [R]^n -> [R] */
typedef struct kcsp_table kcsp_table;         /* real-valued table on [R]^n */

/* Parameter bundle (k, R, rho, d, delta). delta underflows IEEE doubles for
 * moderate k and R, so it travels as a natural logarithm. */
typedef struct kcsp_params {
    int k;
    int R;
    double rho;
    int degree;
    double log_delta;
} kcsp_params;

const char* kcsp_version(void);
const char* kcsp_last_error(void);
void kcsp_string_free(char* s);

/* rho = 1/sqrt((k-1) ln R), d = ceil(10 k ln R), ln delta = -(10+100 k ln R) ln R. */
kcsp_status kcsp_params_default(int k, int R, kcsp_params* out);

/* ---- instances ---------------------------------------------------------- */

kcsp_status kcsp_instance_from_json(const char* text, kcsp_instance** out);
kcsp_status kcsp_instance_to_json(const kcsp_instance* inst, char** out);
kcsp_status kcsp_instance_random(int n, int R, int k, int m, uint64_t seed, kcsp_instance** out);
void kcsp_instance_free(kcsp_instance* inst);

int kcsp_instance_num_vars(const kcsp_instance* inst);
int kcsp_instance_alphabet(const kcsp_instance* inst);
int kcsp_instance_num_constraints(const kcsp_instance* inst);

/* assignment: length n, values in [0, R) */
kcsp_status kcsp_evaluate(const kcsp_instance* inst, const int* assignment, size_t len,
                          double* value);
kcsp_status kcsp_expected_random_value(const kcsp_instance* inst, double* value);
kcsp_status kcsp_brute_force(const kcsp_instance* inst, uint64_t budget, int* assignment_out,
                             size_t len, double* value);
kcsp_status kcsp_solve_naive(const kcsp_instance* inst, uint64_t seed, int* assignment_out,
                             size_t len);
kcsp_status kcsp_project(const kcsp_instance* inst, int k_prime, kcsp_instance** out);
/* base: "naive" or "brute"; alpha < 0 selects the default (k-k')/k */
kcsp_status kcsp_solve_extend(const kcsp_instance* inst, int k_prime, const char* base,
                              double alpha, uint64_t budget, uint64_t seed, int* assignment_out,
                              size_t len);

/* ---- games and the PCP reduction ---------------------------------------- */

kcsp_status kcsp_game_from_json(const char* text, kcsp_game** out);
kcsp_status kcsp_game_to_json(const kcsp_game* game, char** out);
kcsp_status kcsp_game_random_unique(int num_left, int num_right, int N, int edges_per_left,
                                    uint64_t seed, kcsp_game** out);
kcsp_status kcsp_game_random_d21(int num_left, int num_right, int N, int d, int edges_per_left,
                                 uint64_t seed, kcsp_game** out);
void kcsp_game_free(kcsp_game* game);

int kcsp_game_num_left(const kcsp_game* game);
int kcsp_game_num_right(const kcsp_game* game);
int kcsp_game_alphabet(const kcsp_game* game);
int kcsp_game_right_alphabet(const kcsp_game* game);

/* labels: num_left left labels followed by num_right right labels */
kcsp_status kcsp_game_value(const kcsp_game* game, const int* labels, size_t len, double* value);
kcsp_status kcsp_game_brute_force(const kcsp_game* game, uint64_t budget, int* labels_out,
                                  size_t len, double* value);

kcsp_status kcsp_reduce_d21_to_ug(const kcsp_game* game, kcsp_game** out);

/* mode 0: exact (z and noise marginalized analytically into the weights),
 * mode 1: sampled (samples i.i.d. verifier tuples of weight 1/samples). */
kcsp_status kcsp_reduce_ug_to_csp(const kcsp_game* game, const kcsp_params* params, int mode,
                                  int64_t samples, uint64_t seed, uint64_t budget,
                                  kcsp_instance** out);

kcsp_status kcsp_proof_from_json(const char* text, kcsp_proof** out);
kcsp_status kcsp_proof_to_json(const kcsp_proof* proof, char** out);
/* labels: one right-vertex label per right vertex */
kcsp_status kcsp_proof_honest(const kcsp_game* game, const int* labels, size_t len, int R,
                              kcsp_proof** out);
kcsp_status kcsp_proof_random(int num_right, int n, int R, uint64_t seed, kcsp_proof** out);
void kcsp_proof_free(kcsp_proof* proof);

kcsp_status kcsp_csp_assignment_from_proof(const kcsp_game* game, const kcsp_params* params,
                                           const kcsp_proof* proof, int* assignment_out,
                                           size_t len);
kcsp_status kcsp_csp_variable_count(const kcsp_game* game, const kcsp_params* params,
                                    size_t* count);

kcsp_status kcsp_verifier_acceptance_exact(const kcsp_game* game, const kcsp_params* params,
                                           const kcsp_proof* proof, uint64_t budget,
                                           double* value);
kcsp_status kcsp_verifier_acceptance_mc(const kcsp_game* game, const kcsp_params* params,
                                        const kcsp_proof* proof, int64_t trials, uint64_t seed,
                                        int threads, double* value, double* stderr_out);
/* one entry per left vertex: sum_i E_z[(T_rho g^i_v)^k] */
kcsp_status kcsp_verifier_vertex_sums(const kcsp_game* game, const kcsp_params* params,
                                      const kcsp_proof* proof, uint64_t budget, double* sums_out,
                                      size_t len);
kcsp_status kcsp_influence_decode(const kcsp_game* game, const kcsp_params* params,
                                  const kcsp_proof* proof, uint64_t seed, int* labels_out,
                                  size_t len);

/* ---- dictator-vs-quasirandom test --------------------------------------- */

kcsp_status kcsp_rfunction_from_json(const char* text, kcsp_rfunction** out);
kcsp_status kcsp_rfunction_to_json(const kcsp_rfunction* f, char** out);
kcsp_status kcsp_rfunction_dictator(int n, int R, int coord, kcsp_rfunction** out);
kcsp_status kcsp_rfunction_constant(int n, int R, int value, kcsp_rfunction** out);
kcsp_status kcsp_rfunction_random(int n, int R, uint64_t seed, kcsp_rfunction** out);
kcsp_status kcsp_rfunction_folded_random(int n, int R, uint64_t seed, kcsp_rfunction** out);
void kcsp_rfunction_free(kcsp_rfunction* f);

int kcsp_rfunction_num_vars(const kcsp_rfunction* f);
int kcsp_rfunction_alphabet(const kcsp_rfunction* f);

kcsp_status kcsp_dtest_exact(const kcsp_rfunction* f, const kcsp_params* params, uint64_t budget,
                             double* acceptance);
kcsp_status kcsp_dtest_mc(const kcsp_rfunction* f, const kcsp_params* params, int64_t trials,
                          uint64_t seed, int threads, double* acceptance, double* stderr_out);
kcsp_status kcsp_dictator_closed_form(int k, int R, double rho, double* acceptance);
kcsp_status kcsp_quasirandomness_check(const kcsp_rfunction* f, int degree, double log_delta,
                                       int* is_quasirandom, double* max_influence,
                                       int* arg_projection, int* arg_coord);

/* ---- inequality lab ------------------------------------------------------ */

/* Real-valued tables. R=2 tables double as cube functions (point 0 is +1). */
kcsp_status kcsp_table_random_sign(int m, uint64_t seed, kcsp_table** out);
kcsp_status kcsp_table_random_unit(int n, int R, uint64_t seed, kcsp_table** out);
kcsp_status kcsp_table_dictator_sign(int m, int coord, kcsp_table** out);
kcsp_status kcsp_table_constant(int n, int R, double value, kcsp_table** out);
void kcsp_table_free(kcsp_table* t);

kcsp_status kcsp_lab_hyper(const kcsp_table* h, double p, double q, double rho, double* lhs,
                           double* rhs);
/* psi_kind 1: |t|; otherwise psi_k with exponent k */
kcsp_status kcsp_lab_invariance(const kcsp_table* f, int degree, int psi_kind, int psi_k,
                                double* boolean_side, double* r_side, double* max_influence);

typedef struct kcsp_main_lemma_stats {
    double lhs;
    double reference;
    double implied_constant;
    double max_degree_influence;
    double high_tail_norm_sq;
    double half_noise_abs_mean;
    double half_noise_sq_mean;
    double half_noise_full_sq_mean;
    double mean;
} kcsp_main_lemma_stats;

kcsp_status kcsp_lab_main_lemma(const kcsp_table* g, int k, double rho, int degree,
                                kcsp_main_lemma_stats* out);

/* Scales a [0,1]-valued table so its mean is exactly 1/R (main lemma input). */
kcsp_status kcsp_table_normalize_mean(const kcsp_table* t, double mean, kcsp_table** out);

/* Random [0,1]-valued table with mean exactly `mean` (retries derived seeds
 * until the rescaled draw stays within range). */
kcsp_status kcsp_table_random_mean(int n, int R, double mean, uint64_t seed, kcsp_table** out);

/* ---- consistency suite ---------------------------------------------------- */

/* Runs the cross-module consistency checks. Returns KCSP_OK when every check
 * passes, KCSP_ERROR_INTERNAL otherwise; the report text is returned either way. */
kcsp_status kcsp_run_verify(uint64_t seed, int threads, char** report_out);

#ifdef __cplusplus
}
#endif

#endif /* KCSP_H */
