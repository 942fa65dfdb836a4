#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kcsp/algorithms.hpp"
#include "kcsp/fourier.hpp"

using namespace kcsp;

namespace {

CspInstance single_constraint_instance(int n, int R, const std::vector<int>& scope,
                                       const std::vector<std::uint8_t>& predicate) {
    CspInstance inst;
    inst.n = n;
    inst.R = R;
    Constraint c;
    c.weight = 1.0;
    c.scope = scope;
    c.predicate = predicate;
    inst.constraints.push_back(std::move(c));
    return inst;
}

CspInstance all_ones(int n, int R, int k, int m, std::uint64_t seed) {
    CspInstance inst = generate_random_instance(n, R, k, m, seed);
    for (Constraint& c : inst.constraints) c.predicate.assign(c.predicate.size(), 1);
    return inst;
}

}  // namespace

TEST_CASE("naive assignment is deterministic and uniform on average") {
    CspInstance inst = generate_random_instance(6, 3, 2, 10, 3);
    CHECK(naive_random(inst, 5) == naive_random(inst, 5));
    double exact = expected_random_value(inst);
    const int samples = 10'000;
    Accumulator mean;
    for (int s = 0; s < samples; ++s) mean.add(evaluate(inst, naive_random(inst, s)));
    double sigma = 0.5 / std::sqrt(static_cast<double>(samples));
    CHECK(std::abs(mean.value() / samples - exact) <= 3 * sigma);
}

TEST_CASE("naive assignment hits 1/2 on the equality constraint") {
    CspInstance inst = single_constraint_instance(2, 2, {0, 1}, {1, 0, 0, 1});
    const int samples = 10'000;
    Accumulator mean;
    for (int s = 0; s < samples; ++s) mean.add(evaluate(inst, naive_random(inst, s)));
    double sigma = 0.5 / std::sqrt(static_cast<double>(samples));
    CHECK(std::abs(mean.value() / samples - 0.5) <= 3 * sigma);
}

TEST_CASE("projection emits C(k,k') R^(k-k') constraints with scaled weights") {
    // k=3, k'=2, R=2, one weight-1 constraint: 3 * 2 = 6 projections of weight 1/6
    std::vector<std::uint8_t> pred(8, 0);
    pred[0] = 1;  // satisfied only by (0,0,0)
    CspInstance inst = single_constraint_instance(3, 2, {0, 1, 2}, pred);
    CspInstance projected = project_instance(inst, 2);
    CHECK(projected.constraints.size() == 6);
    for (const Constraint& c : projected.constraints) {
        CHECK(c.weight == doctest::Approx(1.0 / 6));
        CHECK(c.arity() == 2);
    }
    Accumulator wsum;
    for (const Constraint& c : projected.constraints) wsum.add(c.weight);
    CHECK(wsum.value() == doctest::Approx(1.0).epsilon(1e-12));
    projected.validate();
}

TEST_CASE("projection weight conservation on random instances") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        CspInstance inst = generate_random_instance(6, 3, 3, 10, seed);
        CspInstance projected = project_instance(inst, 2);
        Accumulator wsum;
        for (const Constraint& c : projected.constraints) wsum.add(c.weight);
        CHECK(std::abs(wsum.value() - 1.0) <= 1e-9);
    }
}

TEST_CASE("projection keeps tautologies intact") {
    CspInstance inst = all_ones(5, 2, 3, 4, 2);
    CspInstance projected = project_instance(inst, 2);
    for (const Constraint& c : projected.constraints)
        for (std::uint8_t v : c.predicate) CHECK(v == 1);
    Assignment a(5, 1);
    CHECK(evaluate(projected, a) == doctest::Approx(evaluate(inst, a)));
}

TEST_CASE("projected value dominates the original value over R^(k-k')") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        CspInstance inst = generate_random_instance(5, 2, 3, 6, 100 + seed);
        CspInstance projected = project_instance(inst, 2);
        Rng rng(seed);
        for (int t = 0; t < 20; ++t) {
            Assignment a(5);
            for (int& v : a) v = rng.uniform_int(2);
            CHECK(evaluate(projected, a) >= evaluate(inst, a) / 2.0 - 1e-12);
        }
    }
}

TEST_CASE("projection rejects mixed arities and bad k'") {
    CspInstance inst = generate_random_instance(5, 2, 3, 4, 1);
    inst.constraints[1].scope.pop_back();
    inst.constraints[1].predicate.resize(4);
    CHECK_THROWS_WITH_AS(project_instance(inst, 2), doctest::Contains("mixed"), ValidationError);
    CspInstance ok = generate_random_instance(5, 2, 3, 4, 1);
    CHECK_THROWS_AS(project_instance(ok, 3), ValidationError);
    CHECK_THROWS_AS(project_instance(ok, 0), ValidationError);
}

TEST_CASE("projection satisfies the per-constraint averaging identity") {
    // For every assignment a: the projected instance's value equals
    // sum over (S', tau) of W P(a|_S' o tau) / (C(k,k') R^(k-k')).
    CspInstance inst = generate_random_instance(4, 2, 3, 3, 11);
    CspInstance projected = project_instance(inst, 2);
    const std::size_t per_constraint = projected.constraints.size() / inst.constraints.size();
    std::vector<int> a(4);
    for (std::size_t idx = 0; idx < 16; ++idx) {
        decode_point(idx, 4, 2, a);
        for (std::size_t ci = 0; ci < inst.constraints.size(); ++ci) {
            Accumulator via_projection;
            for (std::size_t pi = 0; pi < per_constraint; ++pi) {
                const Constraint& pc = projected.constraints[ci * per_constraint + pi];
                via_projection.add(pc.weight * pc.predicate[predicate_row(pc, a, 2)]);
            }
            // direct enumeration of subsets and fixings over the original predicate
            const Constraint& c = inst.constraints[ci];
            Accumulator direct;
            for (int drop = 0; drop < 3; ++drop) {
                for (int tau = 0; tau < 2; ++tau) {
                    Assignment patched = a;
                    patched[static_cast<std::size_t>(c.scope[static_cast<std::size_t>(drop)])] =
                        tau;
                    direct.add(c.predicate[predicate_row(c, patched, 2)]);
                }
            }
            double scaled = c.weight * direct.value() / (3.0 * 2.0);
            CHECK(via_projection.value() == doctest::Approx(scaled).epsilon(1e-12));
        }
    }
}

TEST_CASE("blend endpoints") {
    Assignment from = {0, 1, 2, 0, 1};
    CHECK(blend_assignment(from, 0.0, 3, 77) == from);
    const int trials = 30'000;
    int agree = 0;
    for (int t = 0; t < trials; ++t) {
        Assignment out = blend_assignment(from, 1.0, 3, static_cast<std::uint64_t>(t));
        for (std::size_t i = 0; i < from.size(); ++i)
            if (out[i] == from[i]) ++agree;
    }
    double rate = static_cast<double>(agree) / (trials * 5.0);
    double sigma = std::sqrt((1.0 / 3) * (2.0 / 3) / (trials * 5.0));
    CHECK(std::abs(rate - 1.0 / 3) <= 3 * sigma);
}

TEST_CASE("blend keeps a fixed size-2 set with probability alpha (1-alpha)^2") {
    // Observable coin trick: blending two everywhere-different sources with
    // the same seed redraws identical values, so outputs differ exactly at
    // kept coordinates.
    const double alpha = 1.0 / 3;  // default for k=3, k'=2
    const int trials = 40'000;
    Assignment zeros(3, 0), ones(3, 1);
    int hit = 0;
    for (int t = 0; t < trials; ++t) {
        Assignment a = blend_assignment(zeros, alpha, 2, static_cast<std::uint64_t>(t));
        Assignment b = blend_assignment(ones, alpha, 2, static_cast<std::uint64_t>(t));
        bool kept0 = a[0] != b[0];
        bool kept1 = a[1] != b[1];
        bool kept2 = a[2] != b[2];
        if (kept0 && kept1 && !kept2) ++hit;
    }
    double expected = std::pow(alpha, 1) * std::pow(1 - alpha, 2);  // 4/27
    CHECK(expected == doctest::Approx(4.0 / 27));
    double rate = static_cast<double>(hit) / trials;
    double sigma = std::sqrt(expected * (1 - expected) / trials);
    CHECK(std::abs(rate - expected) <= 3 * sigma);
}

TEST_CASE("extension on a tautology yields value 1") {
    CspInstance inst = all_ones(5, 2, 3, 4, 6);
    ExtensionParams params;
    params.k = 3;
    params.k_prime = 2;
    BaseAlgorithm base = make_brute_force_base(2);
    Assignment out = extend_algorithm(inst, base, params, 123);
    CHECK(evaluate(inst, out) == doctest::Approx(1.0));
    CHECK(out == extend_algorithm(inst, base, params, 123));
}

TEST_CASE("extension checks arities") {
    CspInstance inst = generate_random_instance(5, 2, 3, 4, 6);
    ExtensionParams params;
    params.k = 3;
    params.k_prime = 2;
    CHECK_THROWS_AS(extend_algorithm(inst, make_naive_base(3), params, 1), ValidationError);
    params.k_prime = 3;
    CHECK_THROWS_AS(extend_algorithm(inst, make_naive_base(3), params, 1), ValidationError);
}

TEST_CASE("extension guarantee factor arithmetic") {
    // k=3, k'=2, default alpha 1/3: 3 * (1/3) * (2/3)^2 = 4/9 >= 1/2^(2l) with l=1
    double factor = extension_guarantee_factor(3, 2, 1.0 / 3);
    CHECK(factor == doctest::Approx(4.0 / 9));
    CHECK(factor >= 0.25);
}

TEST_CASE("blended value clears the guarantee against the projected value") {
    CspInstance inst = generate_random_instance(6, 2, 3, 10, 21);
    CspInstance projected = project_instance(inst, 2);
    auto [phi_a, proj_opt] = brute_force_optimum(projected);
    double val_projected = evaluate(projected, phi_a);
    const double alpha = 1.0 / 3;
    const int trials = 4000;
    Accumulator mean, var;
    for (int t = 0; t < trials; ++t) {
        double v = evaluate(inst, blend_assignment(phi_a, alpha, 2, static_cast<std::uint64_t>(t)));
        mean.add(v);
        var.add(v * v);
    }
    double mu = mean.value() / trials;
    double sigma2 = var.value() / trials - mu * mu;
    double sigma_mean = std::sqrt(std::max(sigma2, 0.0) / trials);
    double bound = extension_guarantee_factor(3, 2, alpha) * val_projected;
    CHECK(mu >= bound - 3 * sigma_mean);
}
