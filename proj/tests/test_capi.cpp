#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "kcsp.h"

namespace {

std::string take_string(char* s) {
    std::string out = s ? s : "";
    kcsp_string_free(s);
    return out;
}

}  // namespace

TEST_CASE("version and error plumbing") {
    CHECK(kcsp_version() != nullptr);
    kcsp_params p{};
    CHECK(kcsp_params_default(2, 2, &p) == KCSP_ERROR_VALIDATION);
    CHECK(std::strlen(kcsp_last_error()) > 0);
    CHECK(kcsp_params_default(2, 3, &p) == KCSP_OK);
    CHECK(p.rho == doctest::Approx(1.0 / std::sqrt(std::log(3.0))));
    CHECK(p.degree == 22);
}

TEST_CASE("instance lifecycle through the C surface") {
    kcsp_instance* inst = nullptr;
    REQUIRE(kcsp_instance_random(6, 3, 2, 10, 42, &inst) == KCSP_OK);
    CHECK(kcsp_instance_num_vars(inst) == 6);
    CHECK(kcsp_instance_alphabet(inst) == 3);
    CHECK(kcsp_instance_num_constraints(inst) == 10);

    std::string text = take_string([&] {
        char* s = nullptr;
        REQUIRE(kcsp_instance_to_json(inst, &s) == KCSP_OK);
        return s;
    }());
    kcsp_instance* back = nullptr;
    REQUIRE(kcsp_instance_from_json(text.c_str(), &back) == KCSP_OK);

    std::vector<int> assignment(6, 0);
    double direct = 0.0, reloaded = 0.0;
    REQUIRE(kcsp_evaluate(inst, assignment.data(), assignment.size(), &direct) == KCSP_OK);
    REQUIRE(kcsp_evaluate(back, assignment.data(), assignment.size(), &reloaded) == KCSP_OK);
    CHECK(direct == reloaded);

    std::vector<int> best(6);
    double value = 0.0;
    REQUIRE(kcsp_brute_force(inst, 10'000'000, best.data(), best.size(), &value) == KCSP_OK);
    CHECK(value == doctest::Approx(0.8).epsilon(1e-12));  // frozen csp fixture

    double expect = 0.0;
    REQUIRE(kcsp_expected_random_value(inst, &expect) == KCSP_OK);
    CHECK(expect > 0.0);

    kcsp_instance_free(back);
    kcsp_instance_free(inst);
}

TEST_CASE("error codes distinguish validation from budget") {
    kcsp_instance* inst = nullptr;
    CHECK(kcsp_instance_random(1, 3, 2, 10, 0, &inst) == KCSP_ERROR_VALIDATION);
    REQUIRE(kcsp_instance_random(30, 3, 2, 10, 0, &inst) == KCSP_OK);
    std::vector<int> best(30);
    double value = 0.0;
    CHECK(kcsp_brute_force(inst, 10'000'000, best.data(), best.size(), &value) ==
          KCSP_ERROR_BUDGET);
    CHECK(std::string(kcsp_last_error()).find("too large") != std::string::npos);
    kcsp_instance_free(inst);
    CHECK(kcsp_instance_from_json("{\"broken\"", &inst) == KCSP_ERROR_VALIDATION);
}

TEST_CASE("solver entry points") {
    kcsp_instance* inst = nullptr;
    REQUIRE(kcsp_instance_random(6, 2, 3, 8, 3, &inst) == KCSP_OK);
    std::vector<int> a(6);
    REQUIRE(kcsp_solve_naive(inst, 5, a.data(), a.size()) == KCSP_OK);
    for (int v : a) CHECK((v == 0 || v == 1));

    kcsp_instance* projected = nullptr;
    REQUIRE(kcsp_project(inst, 2, &projected) == KCSP_OK);
    CHECK(kcsp_instance_num_constraints(projected) == 8 * 3 * 2);

    std::vector<int> b(6);
    REQUIRE(kcsp_solve_extend(inst, 2, "brute", -1.0, 10'000'000, 11, b.data(), b.size()) ==
            KCSP_OK);
    std::vector<int> b2(6);
    REQUIRE(kcsp_solve_extend(inst, 2, "brute", -1.0, 10'000'000, 11, b2.data(), b2.size()) ==
            KCSP_OK);
    CHECK(b == b2);
    CHECK(kcsp_solve_extend(inst, 2, "nope", -1.0, 0, 0, b.data(), b.size()) ==
          KCSP_ERROR_VALIDATION);

    kcsp_instance_free(projected);
    kcsp_instance_free(inst);
}

TEST_CASE("game, proof, verifier, and decode through the C surface") {
    kcsp_game* game = nullptr;
    REQUIRE(kcsp_game_random_unique(2, 2, 3, 2, 9, &game) == KCSP_OK);
    CHECK(kcsp_game_num_left(game) == 2);
    CHECK(kcsp_game_right_alphabet(game) == 3);

    std::string text = take_string([&] {
        char* s = nullptr;
        REQUIRE(kcsp_game_to_json(game, &s) == KCSP_OK);
        return s;
    }());
    kcsp_game* reloaded = nullptr;
    REQUIRE(kcsp_game_from_json(text.c_str(), &reloaded) == KCSP_OK);

    std::vector<int> labels(4);
    double value = 0.0;
    REQUIRE(kcsp_game_brute_force(game, 10'000'000, labels.data(), labels.size(), &value) ==
            KCSP_OK);
    double revalue = 0.0;
    REQUIRE(kcsp_game_value(reloaded, labels.data(), labels.size(), &revalue) == KCSP_OK);
    CHECK(revalue == doctest::Approx(value));

    kcsp_params params{};
    REQUIRE(kcsp_params_default(2, 3, &params) == KCSP_OK);

    kcsp_proof* proof = nullptr;
    REQUIRE(kcsp_proof_honest(game, labels.data() + 2, 2, params.R, &proof) == KCSP_OK);

    double exact = 0.0;
    REQUIRE(kcsp_verifier_acceptance_exact(game, &params, proof, 10'000'000, &exact) == KCSP_OK);
    double mc = 0.0, se = 0.0;
    REQUIRE(kcsp_verifier_acceptance_mc(game, &params, proof, 50'000, 4, 2, &mc, &se) == KCSP_OK);
    CHECK(std::abs(mc - exact) <= 3 * se + 1e-12);

    size_t nvars = 0;
    REQUIRE(kcsp_csp_variable_count(game, &params, &nvars) == KCSP_OK);
    kcsp_instance* csp = nullptr;
    REQUIRE(kcsp_reduce_ug_to_csp(game, &params, 0, 0, 0, 10'000'000, &csp) == KCSP_OK);
    CHECK(kcsp_instance_num_vars(csp) == static_cast<int>(nvars));
    std::vector<int> proof_assignment(nvars);
    REQUIRE(kcsp_csp_assignment_from_proof(game, &params, proof, proof_assignment.data(),
                                           proof_assignment.size()) == KCSP_OK);
    double via_csp = 0.0;
    REQUIRE(kcsp_evaluate(csp, proof_assignment.data(), proof_assignment.size(), &via_csp) ==
            KCSP_OK);
    CHECK(via_csp == doctest::Approx(exact).epsilon(1e-9));

    std::vector<double> sums(2);
    REQUIRE(kcsp_verifier_vertex_sums(game, &params, proof, 10'000'000, sums.data(),
                                      sums.size()) == KCSP_OK);
    for (double s : sums) CHECK(s <= 1.0 + 1e-12);

    std::vector<int> decoded(4);
    REQUIRE(kcsp_influence_decode(game, &params, proof, 7, decoded.data(), decoded.size()) ==
            KCSP_OK);
    double decoded_value = 0.0;
    REQUIRE(kcsp_game_value(game, decoded.data(), decoded.size(), &decoded_value) == KCSP_OK);
    CHECK(decoded_value == doctest::Approx(value));  // honest proof decodes to the optimum

    std::string proof_text = take_string([&] {
        char* s = nullptr;
        REQUIRE(kcsp_proof_to_json(proof, &s) == KCSP_OK);
        return s;
    }());
    kcsp_proof* proof_back = nullptr;
    REQUIRE(kcsp_proof_from_json(proof_text.c_str(), &proof_back) == KCSP_OK);

    kcsp_proof_free(proof_back);
    kcsp_proof_free(proof);
    kcsp_instance_free(csp);
    kcsp_game_free(reloaded);
    kcsp_game_free(game);
}

TEST_CASE("d-to-1 reduction through the C surface") {
    kcsp_game* d21 = nullptr;
    REQUIRE(kcsp_game_random_d21(2, 2, 4, 2, 2, 5, &d21) == KCSP_OK);
    CHECK(kcsp_game_right_alphabet(d21) == 2);
    kcsp_game* ug = nullptr;
    REQUIRE(kcsp_reduce_d21_to_ug(d21, &ug) == KCSP_OK);
    CHECK(kcsp_game_right_alphabet(ug) == 4);
    kcsp_game_free(ug);
    kcsp_game_free(d21);
}

TEST_CASE("dictator test through the C surface") {
    kcsp_params params{};
    REQUIRE(kcsp_params_default(2, 3, &params) == KCSP_OK);
    params.rho = 0.5;

    kcsp_rfunction* f = nullptr;
    REQUIRE(kcsp_rfunction_dictator(3, 3, 0, &f) == KCSP_OK);
    double exact = 0.0;
    REQUIRE(kcsp_dtest_exact(f, &params, 10'000'000, &exact) == KCSP_OK);
    CHECK(exact == doctest::Approx(0.5).epsilon(1e-9));
    double closed = 0.0;
    REQUIRE(kcsp_dictator_closed_form(2, 3, 0.5, &closed) == KCSP_OK);
    CHECK(closed == doctest::Approx(0.5));
    double mc = 0.0, se = 0.0;
    REQUIRE(kcsp_dtest_mc(f, &params, 50'000, 3, 2, &mc, &se) == KCSP_OK);
    CHECK(std::abs(mc - exact) <= 3 * se);

    int quasirandom = -1, arg_i = -1, arg_j = -1;
    double max_inf = 0.0;
    REQUIRE(kcsp_quasirandomness_check(f, params.degree, params.log_delta, &quasirandom, &max_inf,
                                       &arg_i, &arg_j) == KCSP_OK);
    CHECK(quasirandom == 0);
    CHECK(arg_j == 0);

    std::string text = take_string([&] {
        char* s = nullptr;
        REQUIRE(kcsp_rfunction_to_json(f, &s) == KCSP_OK);
        return s;
    }());
    kcsp_rfunction* back = nullptr;
    REQUIRE(kcsp_rfunction_from_json(text.c_str(), &back) == KCSP_OK);
    kcsp_rfunction_free(back);
    kcsp_rfunction_free(f);

    kcsp_rfunction* folded = nullptr;
    REQUIRE(kcsp_rfunction_folded_random(3, 4, 8, &folded) == KCSP_OK);
    REQUIRE(kcsp_quasirandomness_check(folded, params.degree, params.log_delta, &quasirandom,
                                       &max_inf, &arg_i, &arg_j) == KCSP_OK);
    kcsp_rfunction_free(folded);
}

TEST_CASE("lab entry points") {
    kcsp_table* h = nullptr;
    REQUIRE(kcsp_table_dictator_sign(3, 1, &h) == KCSP_OK);
    double lhs = 0.0, rhs = 0.0;
    REQUIRE(kcsp_lab_hyper(h, 2.0, 4.0, 1.0 / std::sqrt(3.0), &lhs, &rhs) == KCSP_OK);
    CHECK(lhs == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(rhs == doctest::Approx(1.0));
    kcsp_table_free(h);

    kcsp_table* f = nullptr;
    REQUIRE(kcsp_table_random_unit(3, 3, 4, &f) == KCSP_OK);
    double boolean_side = 0.0, r_side = 0.0, max_inf = 0.0;
    REQUIRE(kcsp_lab_invariance(f, 1, 1, 0, &boolean_side, &r_side, &max_inf) == KCSP_OK);
    CHECK(std::isfinite(boolean_side));
    CHECK(std::isfinite(r_side));

    kcsp_table* g = nullptr;
    REQUIRE(kcsp_table_normalize_mean(f, 1.0 / 3, &g) == KCSP_OK);
    kcsp_main_lemma_stats stats{};
    // rescaled tables may leave [0,1]; constants are always valid
    kcsp_table* c = nullptr;
    REQUIRE(kcsp_table_constant(2, 3, 1.0 / 3, &c) == KCSP_OK);
    REQUIRE(kcsp_lab_main_lemma(c, 2, 0.5, 1, &stats) == KCSP_OK);
    CHECK(stats.implied_constant == doctest::Approx(1.0).epsilon(1e-12));
    kcsp_table_free(c);
    kcsp_table_free(g);
    kcsp_table_free(f);
}

TEST_CASE("verify suite through the C surface") {
    char* report = nullptr;
    kcsp_status status = kcsp_run_verify(1, 2, &report);
    std::string text = take_string(report);
    CHECK(status == KCSP_OK);
    CHECK(text.find("PASS") != std::string::npos);
    CHECK(text.find("FAIL") == std::string::npos);
}
