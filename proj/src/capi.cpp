#include "kcsp.h"

#include <cstring>
#include <string>

#include "kcsp/algorithms.hpp"
#include "kcsp/csp.hpp"
#include "kcsp/dictator_test.hpp"
#include "kcsp/fourier.hpp"
#include "kcsp/games.hpp"
#include "kcsp/inequality_lab.hpp"
#include "kcsp/json_io.hpp"
#include "kcsp/verify.hpp"

struct kcsp_instance {
    kcsp::CspInstance value;
};
struct kcsp_game {
    kcsp::Game value;
};
struct kcsp_proof {
    kcsp::Proof value;
};
struct kcsp_rfunction {
    kcsp::RFunction value;
};
struct kcsp_table {
    kcsp::TableFunction value;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
kcsp_status wrap(F&& fn) {
    try {
        fn();
        return KCSP_OK;
    } catch (const kcsp::ValidationError& e) {
        g_last_error = e.what();
        return KCSP_ERROR_VALIDATION;
    } catch (const kcsp::BudgetError& e) {
        g_last_error = e.what();
        return KCSP_ERROR_BUDGET;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return KCSP_ERROR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool ok, const char* message) {
    if (!ok) throw kcsp::ValidationError(message);
}

kcsp::PcpParams to_pcp(const kcsp_params& p) {
    kcsp::PcpParams out;
    out.k = p.k;
    out.R = p.R;
    out.rho = p.rho;
    out.degree = p.degree;
    out.log_delta = p.log_delta;
    return out;
}

kcsp::Assignment copy_assignment(const int* data, size_t len) {
    require(data != nullptr, "assignment pointer is null");
    return kcsp::Assignment(data, data + len);
}

void export_labels(const kcsp::GameAssignment& a, int* out, size_t len) {
    require(out != nullptr, "output pointer is null");
    require(len == a.left.size() + a.right.size(), "label buffer has the wrong length");
    size_t pos = 0;
    for (int v : a.left) out[pos++] = v;
    for (int v : a.right) out[pos++] = v;
}

kcsp::GameAssignment import_labels(const kcsp::Game& game, const int* labels, size_t len) {
    require(labels != nullptr, "label pointer is null");
    require(len == static_cast<size_t>(game.num_left + game.num_right),
            "label buffer has the wrong length");
    kcsp::GameAssignment a;
    a.left.assign(labels, labels + game.num_left);
    a.right.assign(labels + game.num_left, labels + len);
    return a;
}

}  // namespace

extern "C" {

const char* kcsp_version(void) { return "1.0.0"; }

const char* kcsp_last_error(void) { return g_last_error.c_str(); }

void kcsp_string_free(char* s) { delete[] s; }

kcsp_status kcsp_params_default(int k, int R, kcsp_params* out) {
    return wrap([&] {
        require(out != nullptr, "output pointer is null");
        kcsp::PcpParams p = kcsp::PcpParams::defaults(k, R);
        out->k = p.k;
        out->R = p.R;
        out->rho = p.rho;
        out->degree = p.degree;
        out->log_delta = p.log_delta;
    });
}

/* ---- instances ---------------------------------------------------------- */

kcsp_status kcsp_instance_from_json(const char* text, kcsp_instance** out) {
    return wrap([&] {
        require(text != nullptr && out != nullptr, "null argument");
        *out = new kcsp_instance{kcsp::instance_from_json(text)};
    });
}

kcsp_status kcsp_instance_to_json(const kcsp_instance* inst, char** out) {
    return wrap([&] {
        require(inst != nullptr && out != nullptr, "null argument");
        *out = dup_string(kcsp::instance_to_json(inst->value));
    });
}

kcsp_status kcsp_instance_random(int n, int R, int k, int m, uint64_t seed, kcsp_instance** out) {
    return wrap([&] {
        require(out != nullptr, "null argument");
        *out = new kcsp_instance{kcsp::generate_random_instance(n, R, k, m, seed)};
    });
}

void kcsp_instance_free(kcsp_instance* inst) { delete inst; }

int kcsp_instance_num_vars(const kcsp_instance* inst) { return inst ? inst->value.n : -1; }
int kcsp_instance_alphabet(const kcsp_instance* inst) { return inst ? inst->value.R : -1; }
int kcsp_instance_num_constraints(const kcsp_instance* inst) {
    return inst ? static_cast<int>(inst->value.constraints.size()) : -1;
}

kcsp_status kcsp_evaluate(const kcsp_instance* inst, const int* assignment, size_t len,
                          double* value) {
    return wrap([&] {
        require(inst != nullptr && value != nullptr, "null argument");
        *value = kcsp::evaluate(inst->value, copy_assignment(assignment, len));
    });
}

kcsp_status kcsp_expected_random_value(const kcsp_instance* inst, double* value) {
    return wrap([&] {
        require(inst != nullptr && value != nullptr, "null argument");
        *value = kcsp::expected_random_value(inst->value);
    });
}

kcsp_status kcsp_brute_force(const kcsp_instance* inst, uint64_t budget, int* assignment_out,
                             size_t len, double* value) {
    return wrap([&] {
        require(inst != nullptr && assignment_out != nullptr && value != nullptr, "null argument");
        require(len == static_cast<size_t>(inst->value.n), "assignment buffer has wrong length");
        auto [best, best_value] = kcsp::brute_force_optimum(inst->value, budget);
        std::copy(best.begin(), best.end(), assignment_out);
        *value = best_value;
    });
}

kcsp_status kcsp_solve_naive(const kcsp_instance* inst, uint64_t seed, int* assignment_out,
                             size_t len) {
    return wrap([&] {
        require(inst != nullptr && assignment_out != nullptr, "null argument");
        require(len == static_cast<size_t>(inst->value.n), "assignment buffer has wrong length");
        kcsp::Assignment a = kcsp::naive_random(inst->value, seed);
        std::copy(a.begin(), a.end(), assignment_out);
    });
}

kcsp_status kcsp_project(const kcsp_instance* inst, int k_prime, kcsp_instance** out) {
    return wrap([&] {
        require(inst != nullptr && out != nullptr, "null argument");
        *out = new kcsp_instance{kcsp::project_instance(inst->value, k_prime)};
    });
}

kcsp_status kcsp_solve_extend(const kcsp_instance* inst, int k_prime, const char* base,
                              double alpha, uint64_t budget, uint64_t seed, int* assignment_out,
                              size_t len) {
    return wrap([&] {
        require(inst != nullptr && base != nullptr && assignment_out != nullptr, "null argument");
        require(len == static_cast<size_t>(inst->value.n), "assignment buffer has wrong length");
        kcsp::BaseAlgorithm algo;
        std::string name = base;
        if (name == "naive")
            algo = kcsp::make_naive_base(k_prime);
        else if (name == "brute")
            algo = kcsp::make_brute_force_base(k_prime, budget);
        else
            throw kcsp::ValidationError("unknown base algorithm \"" + name + "\"");
        kcsp::ExtensionParams params;
        params.k = inst->value.uniform_arity();
        params.k_prime = k_prime;
        params.alpha = alpha;
        kcsp::Assignment a = kcsp::extend_algorithm(inst->value, algo, params, seed);
        std::copy(a.begin(), a.end(), assignment_out);
    });
}

/* ---- games --------------------------------------------------------------- */

kcsp_status kcsp_game_from_json(const char* text, kcsp_game** out) {
    return wrap([&] {
        require(text != nullptr && out != nullptr, "null argument");
        *out = new kcsp_game{kcsp::game_from_json(text)};
    });
}

kcsp_status kcsp_game_to_json(const kcsp_game* game, char** out) {
    return wrap([&] {
        require(game != nullptr && out != nullptr, "null argument");
        *out = dup_string(kcsp::game_to_json(game->value));
    });
}

kcsp_status kcsp_game_random_unique(int num_left, int num_right, int N, int edges_per_left,
                                    uint64_t seed, kcsp_game** out) {
    return wrap([&] {
        require(out != nullptr, "null argument");
        *out = new kcsp_game{
            kcsp::generate_random_unique_game(num_left, num_right, N, edges_per_left, seed)};
    });
}

kcsp_status kcsp_game_random_d21(int num_left, int num_right, int N, int d, int edges_per_left,
                                 uint64_t seed, kcsp_game** out) {
    return wrap([&] {
        require(out != nullptr, "null argument");
        *out = new kcsp_game{
            kcsp::generate_random_d21_game(num_left, num_right, N, d, edges_per_left, seed)};
    });
}

void kcsp_game_free(kcsp_game* game) { delete game; }

int kcsp_game_num_left(const kcsp_game* game) { return game ? game->value.num_left : -1; }
int kcsp_game_num_right(const kcsp_game* game) { return game ? game->value.num_right : -1; }
int kcsp_game_alphabet(const kcsp_game* game) { return game ? game->value.N : -1; }
int kcsp_game_right_alphabet(const kcsp_game* game) {
    return game ? game->value.right_alphabet() : -1;
}

kcsp_status kcsp_game_value(const kcsp_game* game, const int* labels, size_t len, double* value) {
    return wrap([&] {
        require(game != nullptr && value != nullptr, "null argument");
        *value = kcsp::game_value(game->value, import_labels(game->value, labels, len));
    });
}

kcsp_status kcsp_game_brute_force(const kcsp_game* game, uint64_t budget, int* labels_out,
                                  size_t len, double* value) {
    return wrap([&] {
        require(game != nullptr && value != nullptr, "null argument");
        auto [best, best_value] = kcsp::brute_force_game_value(game->value, budget);
        export_labels(best, labels_out, len);
        *value = best_value;
    });
}

kcsp_status kcsp_reduce_d21_to_ug(const kcsp_game* game, kcsp_game** out) {
    return wrap([&] {
        require(game != nullptr && out != nullptr, "null argument");
        *out = new kcsp_game{kcsp::reduce_d21_to_ug(game->value)};
    });
}

kcsp_status kcsp_reduce_ug_to_csp(const kcsp_game* game, const kcsp_params* params, int mode,
                                  int64_t samples, uint64_t seed, uint64_t budget,
                                  kcsp_instance** out) {
    return wrap([&] {
        require(game != nullptr && params != nullptr && out != nullptr, "null argument");
        kcsp::PcpParams p = to_pcp(*params);
        p.mode = mode == 0 ? kcsp::PcpParams::Mode::exact : kcsp::PcpParams::Mode::sampled;
        p.samples = samples;
        *out = new kcsp_instance{kcsp::reduce_ug_to_csp(game->value, p, seed, budget)};
    });
}

kcsp_status kcsp_proof_from_json(const char* text, kcsp_proof** out) {
    return wrap([&] {
        require(text != nullptr && out != nullptr, "null argument");
        *out = new kcsp_proof{kcsp::proof_from_json(text)};
    });
}

kcsp_status kcsp_proof_to_json(const kcsp_proof* proof, char** out) {
    return wrap([&] {
        require(proof != nullptr && out != nullptr, "null argument");
        *out = dup_string(kcsp::proof_to_json(proof->value));
    });
}

kcsp_status kcsp_proof_honest(const kcsp_game* game, const int* labels, size_t len, int R,
                              kcsp_proof** out) {
    return wrap([&] {
        require(game != nullptr && labels != nullptr && out != nullptr, "null argument");
        require(len == static_cast<size_t>(game->value.num_right),
                "label buffer has the wrong length");
        kcsp::GameAssignment a;
        a.left.assign(static_cast<size_t>(game->value.num_left), 0);
        a.right.assign(labels, labels + len);
        *out = new kcsp_proof{kcsp::honest_proof(game->value, a, R)};
    });
}

kcsp_status kcsp_proof_random(int num_right, int n, int R, uint64_t seed, kcsp_proof** out) {
    return wrap([&] {
        require(out != nullptr, "null argument");
        *out = new kcsp_proof{kcsp::random_proof(num_right, n, R, seed)};
    });
}

void kcsp_proof_free(kcsp_proof* proof) { delete proof; }

kcsp_status kcsp_csp_variable_count(const kcsp_game* game, const kcsp_params* params,
                                    size_t* count) {
    return wrap([&] {
        require(game != nullptr && params != nullptr && count != nullptr, "null argument");
        *count = kcsp::csp_variable_count(game->value, to_pcp(*params));
    });
}

kcsp_status kcsp_csp_assignment_from_proof(const kcsp_game* game, const kcsp_params* params,
                                           const kcsp_proof* proof, int* assignment_out,
                                           size_t len) {
    return wrap([&] {
        require(game != nullptr && params != nullptr && proof != nullptr &&
                    assignment_out != nullptr,
                "null argument");
        kcsp::Assignment a =
            kcsp::proof_to_csp_assignment(game->value, to_pcp(*params), proof->value);
        require(len == a.size(), "assignment buffer has wrong length");
        std::copy(a.begin(), a.end(), assignment_out);
    });
}

kcsp_status kcsp_verifier_acceptance_exact(const kcsp_game* game, const kcsp_params* params,
                                           const kcsp_proof* proof, uint64_t budget,
                                           double* value) {
    return wrap([&] {
        require(game != nullptr && params != nullptr && proof != nullptr && value != nullptr,
                "null argument");
        *value = kcsp::verifier_acceptance_exact(game->value, to_pcp(*params), proof->value,
                                                 budget);
    });
}

kcsp_status kcsp_verifier_acceptance_mc(const kcsp_game* game, const kcsp_params* params,
                                        const kcsp_proof* proof, int64_t trials, uint64_t seed,
                                        int threads, double* value, double* stderr_out) {
    return wrap([&] {
        require(game != nullptr && params != nullptr && proof != nullptr && value != nullptr,
                "null argument");
        kcsp::McEstimate est = kcsp::verifier_acceptance_mc(game->value, to_pcp(*params),
                                                            proof->value, trials, seed, threads);
        *value = est.value;
        if (stderr_out != nullptr) *stderr_out = est.stderr_;
    });
}

kcsp_status kcsp_verifier_vertex_sums(const kcsp_game* game, const kcsp_params* params,
                                      const kcsp_proof* proof, uint64_t budget, double* sums_out,
                                      size_t len) {
    return wrap([&] {
        require(game != nullptr && params != nullptr && proof != nullptr && sums_out != nullptr,
                "null argument");
        auto sums = kcsp::verifier_vertex_sums(game->value, to_pcp(*params), proof->value, budget);
        require(len == sums.size(), "sum buffer has the wrong length");
        std::copy(sums.begin(), sums.end(), sums_out);
    });
}

kcsp_status kcsp_influence_decode(const kcsp_game* game, const kcsp_params* params,
                                  const kcsp_proof* proof, uint64_t seed, int* labels_out,
                                  size_t len) {
    return wrap([&] {
        require(game != nullptr && params != nullptr && proof != nullptr, "null argument");
        kcsp::GameAssignment a =
            kcsp::influence_decode(game->value, to_pcp(*params), proof->value, seed);
        export_labels(a, labels_out, len);
    });
}

/* ---- dictator test ------------------------------------------------------- */

kcsp_status kcsp_rfunction_from_json(const char* text, kcsp_rfunction** out) {
    return wrap([&] {
        require(text != nullptr && out != nullptr, "null argument");
        *out = new kcsp_rfunction{kcsp::rfunction_from_json(text)};
    });
}

kcsp_status kcsp_rfunction_to_json(const kcsp_rfunction* f, char** out) {
    return wrap([&] {
        require(f != nullptr && out != nullptr, "null argument");
        *out = dup_string(kcsp::rfunction_to_json(f->value));
    });
}

kcsp_status kcsp_rfunction_dictator(int n, int R, int coord, kcsp_rfunction** out) {
    return wrap([&] {
        require(out != nullptr, "null argument");
        *out = new kcsp_rfunction{kcsp::dictator_function(n, R, coord)};
    });
}

kcsp_status kcsp_rfunction_constant(int n, int R, int value, kcsp_rfunction** out) {
    return wrap([&] {
        require(out != nullptr, "null argument");
        *out = new kcsp_rfunction{kcsp::constant_function(n, R, value)};
    });
}

kcsp_status kcsp_rfunction_random(int n, int R, uint64_t seed, kcsp_rfunction** out) {
    return wrap([&] {
        require(out != nullptr, "null argument");
        *out = new kcsp_rfunction{kcsp::random_function(n, R, seed)};
    });
}

kcsp_status kcsp_rfunction_folded_random(int n, int R, uint64_t seed, kcsp_rfunction** out) {
    return wrap([&] {
        require(out != nullptr, "null argument");
        *out = new kcsp_rfunction{kcsp::folded_random_function(n, R, seed)};
    });
}

void kcsp_rfunction_free(kcsp_rfunction* f) { delete f; }

int kcsp_rfunction_num_vars(const kcsp_rfunction* f) { return f ? f->value.n : -1; }
int kcsp_rfunction_alphabet(const kcsp_rfunction* f) { return f ? f->value.R : -1; }

kcsp_status kcsp_dtest_exact(const kcsp_rfunction* f, const kcsp_params* params, uint64_t budget,
                             double* acceptance) {
    return wrap([&] {
        require(f != nullptr && params != nullptr && acceptance != nullptr, "null argument");
        kcsp::TestParams t;
        t.k = params->k;
        t.R = params->R;
        t.rho = params->rho;
        t.degree = params->degree;
        t.log_delta = params->log_delta;
        *acceptance = kcsp::run_test_exact(f->value, t, budget);
    });
}

kcsp_status kcsp_dtest_mc(const kcsp_rfunction* f, const kcsp_params* params, int64_t trials,
                          uint64_t seed, int threads, double* acceptance, double* stderr_out) {
    return wrap([&] {
        require(f != nullptr && params != nullptr && acceptance != nullptr, "null argument");
        kcsp::TestParams t;
        t.k = params->k;
        t.R = params->R;
        t.rho = params->rho;
        t.degree = params->degree;
        t.log_delta = params->log_delta;
        t.trials = trials;
        t.seed = seed;
        kcsp::McResult r = kcsp::run_test_mc(f->value, t, threads);
        *acceptance = r.acceptance;
        if (stderr_out != nullptr) *stderr_out = r.stderr_;
    });
}

kcsp_status kcsp_dictator_closed_form(int k, int R, double rho, double* acceptance) {
    return wrap([&] {
        require(acceptance != nullptr, "null argument");
        *acceptance = kcsp::dictator_closed_form(k, R, rho);
    });
}

kcsp_status kcsp_quasirandomness_check(const kcsp_rfunction* f, int degree, double log_delta,
                                       int* is_quasirandom, double* max_influence,
                                       int* arg_projection, int* arg_coord) {
    return wrap([&] {
        require(f != nullptr, "null argument");
        kcsp::QuasirandomReport r = kcsp::quasirandomness_check(f->value, degree, log_delta);
        if (is_quasirandom != nullptr) *is_quasirandom = r.is_quasirandom ? 1 : 0;
        if (max_influence != nullptr) *max_influence = r.max_influence;
        if (arg_projection != nullptr) *arg_projection = r.arg_projection;
        if (arg_coord != nullptr) *arg_coord = r.arg_coord;
    });
}

/* ---- lab ------------------------------------------------------------------ */

kcsp_status kcsp_table_random_sign(int m, uint64_t seed, kcsp_table** out) {
    return wrap([&] {
        require(out != nullptr, "null argument");
        kcsp::TableFunction t = kcsp::TableFunction::zeros(m, 2);
        kcsp::Rng rng(seed);
        for (double& v : t.values) v = rng.uniform_int(2) == 0 ? 1.0 : -1.0;
        *out = new kcsp_table{std::move(t)};
    });
}

kcsp_status kcsp_table_random_unit(int n, int R, uint64_t seed, kcsp_table** out) {
    return wrap([&] {
        require(out != nullptr, "null argument");
        kcsp::TableFunction t = kcsp::TableFunction::zeros(n, R);
        kcsp::Rng rng(seed);
        for (double& v : t.values) v = rng.uniform_real();
        *out = new kcsp_table{std::move(t)};
    });
}

kcsp_status kcsp_table_dictator_sign(int m, int coord, kcsp_table** out) {
    return wrap([&] {
        require(out != nullptr, "null argument");
        require(coord >= 0 && coord < m, "coordinate out of range");
        kcsp::TableFunction t = kcsp::TableFunction::zeros(m, 2);
        std::vector<int> x(static_cast<size_t>(m));
        for (size_t idx = 0; idx < t.values.size(); ++idx) {
            kcsp::decode_point(idx, m, 2, x);
            t.values[idx] = x[static_cast<size_t>(coord)] == 0 ? 1.0 : -1.0;
        }
        *out = new kcsp_table{std::move(t)};
    });
}

kcsp_status kcsp_table_constant(int n, int R, double value, kcsp_table** out) {
    return wrap([&] {
        require(out != nullptr, "null argument");
        kcsp::TableFunction t = kcsp::TableFunction::zeros(n, R);
        for (double& v : t.values) v = value;
        *out = new kcsp_table{std::move(t)};
    });
}

void kcsp_table_free(kcsp_table* t) { delete t; }

kcsp_status kcsp_lab_hyper(const kcsp_table* h, double p, double q, double rho, double* lhs,
                           double* rhs) {
    return wrap([&] {
        require(h != nullptr && lhs != nullptr && rhs != nullptr, "null argument");
        kcsp::InequalityReport r = kcsp::hypercontractivity_margin(h->value, p, q, rho);
        *lhs = r.lhs;
        *rhs = r.rhs;
    });
}

kcsp_status kcsp_lab_invariance(const kcsp_table* f, int degree, int psi_kind, int psi_k,
                                double* boolean_side, double* r_side, double* max_influence) {
    return wrap([&] {
        require(f != nullptr && boolean_side != nullptr && r_side != nullptr, "null argument");
        kcsp::PsiFunction psi =
            psi_kind == 1 ? kcsp::PsiFunction::psi1() : kcsp::PsiFunction::psik(psi_k);
        kcsp::InequalityReport r = kcsp::invariance_gap(f->value, degree, psi);
        *boolean_side = r.lhs;
        *r_side = r.rhs;
        if (max_influence != nullptr) {
            // recompute: aux is JSON text; the raw value is cheaper to rebuild
            kcsp::Basis basis = kcsp::build_basis(f->value.R);
            kcsp::FourierRep rep = kcsp::transform(f->value, basis);
            double max_inf = 0.0;
            for (int j = 0; j < f->value.n; ++j)
                max_inf = std::max(max_inf, kcsp::degree_influence(rep, j, degree));
            *max_influence = max_inf;
        }
    });
}

kcsp_status kcsp_lab_main_lemma(const kcsp_table* g, int k, double rho, int degree,
                                kcsp_main_lemma_stats* out) {
    return wrap([&] {
        require(g != nullptr && out != nullptr, "null argument");
        kcsp::MainLemmaStats s = kcsp::main_lemma_report(g->value, k, rho, degree);
        out->lhs = s.lhs;
        out->reference = s.reference;
        out->implied_constant = s.implied_constant;
        out->max_degree_influence = s.max_degree_influence;
        out->high_tail_norm_sq = s.high_tail_norm_sq;
        out->half_noise_abs_mean = s.half_noise_abs_mean;
        out->half_noise_sq_mean = s.half_noise_sq_mean;
        out->half_noise_full_sq_mean = s.half_noise_full_sq_mean;
        out->mean = s.mean;
    });
}

kcsp_status kcsp_table_normalize_mean(const kcsp_table* t, double mean, kcsp_table** out) {
    return wrap([&] {
        require(t != nullptr && out != nullptr, "null argument");
        double current = kcsp::expectation(t->value);
        require(current > 0.0, "table mean must be positive to rescale");
        kcsp::TableFunction scaled = t->value;
        double factor = mean / current;
        for (double& v : scaled.values) v *= factor;
        *out = new kcsp_table{std::move(scaled)};
    });
}

kcsp_status kcsp_table_random_mean(int n, int R, double mean, uint64_t seed, kcsp_table** out) {
    return wrap([&] {
        require(out != nullptr, "null argument");
        *out = new kcsp_table{kcsp::random_mean_table(n, R, mean, seed)};
    });
}

/* ---- verify ---------------------------------------------------------------- */

kcsp_status kcsp_run_verify(uint64_t seed, int threads, char** report_out) {
    try {
        kcsp::VerifyResult result = kcsp::run_verify_suite(seed, threads);
        if (report_out != nullptr) *report_out = dup_string(kcsp::verify_report_text(result));
        if (!result.all_passed()) {
            g_last_error = "verify suite reported failures";
            return KCSP_ERROR_INTERNAL;
        }
        return KCSP_OK;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return KCSP_ERROR_INTERNAL;
    }
}

}  // extern "C"
