#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kcsp/inequality_lab.hpp"

using namespace kcsp;

namespace {

TableFunction random_table(int n, int R, std::uint64_t seed, double lo, double hi) {
    TableFunction f = TableFunction::zeros(n, R);
    Rng rng(seed);
    for (double& v : f.values) v = lo + (hi - lo) * rng.uniform_real();
    return f;
}

TableFunction sign_dictator(int m, int coord) {
    TableFunction f = TableFunction::zeros(m, 2);
    std::vector<int> x(static_cast<std::size_t>(m));
    for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
        decode_point(idx, m, 2, x);
        f.values[idx] = x[static_cast<std::size_t>(coord)] == 0 ? 1.0 : -1.0;
    }
    return f;
}

TableFunction constant_table(int n, int R, double c) {
    TableFunction f = TableFunction::zeros(n, R);
    for (double& v : f.values) v = c;
    return f;
}

}  // namespace

TEST_CASE("psi evaluation") {
    PsiFunction psi2 = PsiFunction::psik(2);
    CHECK(psi_eval(psi2, 0.5) == doctest::Approx(0.25));
    CHECK(psi_eval(psi2, -1.0) == doctest::Approx(0.0));
    CHECK(psi_eval(psi2, 2.0) == doctest::Approx(1.0));
    CHECK(psi_eval(PsiFunction::psi1(), -0.3) == doctest::Approx(0.3));
}

TEST_CASE("psi_k is k-Lipschitz, monotone, and [0,1]-valued") {
    for (int k = 1; k <= 5; ++k) {
        PsiFunction psi = PsiFunction::psik(k);
        double prev = -1.0;
        for (int i = -40; i <= 40; ++i) {
            double a = 0.05 * i;
            double va = psi_eval(psi, a);
            CHECK(va >= 0.0);
            CHECK(va <= 1.0);
            CHECK(va >= prev - 1e-12);
            prev = va;
            for (int j = -40; j <= 40; j += 7) {
                double b = 0.05 * j;
                CHECK(std::abs(va - psi_eval(psi, b)) <= k * std::abs(a - b) + 1e-12);
            }
        }
    }
}

TEST_CASE("hypercontractivity on a single character") {
    InequalityReport r = hypercontractivity_margin(sign_dictator(3, 0), 2.0, 4.0,
                                                   1.0 / std::sqrt(3.0));
    CHECK(r.lhs == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(r.rhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.margin >= 0.0);
}

TEST_CASE("hypercontractivity equality on constants") {
    InequalityReport r = hypercontractivity_margin(constant_table(3, 2, -0.7), 1.25, 2.0, 0.5);
    CHECK(r.lhs == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(r.rhs == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("hypercontractivity margins are nonnegative at the critical rho") {
    const struct {
        double p, q;
    } pairs[] = {{2.0, 4.0}, {1.25, 2.0}, {1.0 + 4.0 / std::log(16.0), 2.0}};
    double worst = 1.0;
    for (const auto& [p, q] : pairs) {
        double rho = p < q ? std::sqrt((p - 1.0) / (q - 1.0)) : 1.0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            TableFunction h = random_table(8, 2, 900 + seed, -1.0, 1.0);
            InequalityReport r = hypercontractivity_margin(h, p, q, rho);
            worst = std::min(worst, r.margin);
        }
    }
    CHECK(worst >= -1e-12);
}

TEST_CASE("hypercontractivity rejects hypothesis violations") {
    TableFunction h = sign_dictator(2, 0);
    CHECK_THROWS_AS(hypercontractivity_margin(h, 2.0, 4.0, 0.9), ValidationError);
    CHECK_THROWS_AS(hypercontractivity_margin(h, 0.5, 2.0, 0.1), ValidationError);
    CHECK_THROWS_AS(hypercontractivity_margin(h, 2.0, 4.0, -0.1), ValidationError);
}

TEST_CASE("k vs 1+eps specialization holds where its hypothesis does") {
    // k=3, R=8: eps = 4/ln 8 < k-1 and 2 rho sits exactly at the threshold
    const int k = 3, R = 8;
    double rho = 1.0 / std::sqrt((k - 1) * std::log(static_cast<double>(R)));
    Basis basis = build_basis(R);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        TableFunction g = random_table(2, R, 300 + seed, 0.0, 1.0);
        for (int d : {1, 2}) {
            BooleanRep analog = boolean_analog(truncate(transform(g, basis), d, TruncatePart::low));
            InequalityReport r = k_vs_one_plus_eps(analog, k, rho);
            REQUIRE(r.hypothesis_met);
            CHECK(r.margin >= -1e-12);
        }
    }
}

TEST_CASE("k vs 1+eps equality on constants") {
    Basis basis = build_basis(8);
    BooleanRep analog = boolean_analog(transform(constant_table(2, 8, 0.3), basis));
    InequalityReport r = k_vs_one_plus_eps(analog, 3, 0.49);
    REQUIRE(r.hypothesis_met);
    CHECK(r.lhs == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(r.rhs == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("k vs 1+eps reports the unmet hypothesis at k=2, R=16") {
    // natural-log eps = 4/ln 16 > k-1 = 1, so 1+eps exceeds k
    const int k = 2, R = 16;
    double rho = 1.0 / std::sqrt((k - 1) * std::log(static_cast<double>(R)));
    CHECK(rho == doctest::Approx(0.60056).epsilon(1e-4));
    Basis basis = build_basis(R);
    BooleanRep analog = boolean_analog(transform(random_table(1, R, 7, 0.0, 1.0), basis));
    InequalityReport r = k_vs_one_plus_eps(analog, k, rho);
    CHECK_FALSE(r.hypothesis_met);
    CHECK(r.aux_json.find("1+eps exceeds k") != std::string::npos);
}

TEST_CASE("invariance gap vanishes for constants") {
    InequalityReport r = invariance_gap(constant_table(3, 3, 0.42), 2, PsiFunction::psi1());
    CHECK(std::abs(r.margin) <= 1e-12);
    CHECK(r.lhs == doctest::Approx(0.42).epsilon(1e-12));
}

TEST_CASE("invariance gap fixture for a single basis character") {
    // f = l_1(x_0) on [3]^2. The boolean side |F| is identically 1; the
    // [R]-side E|l_1| is 2 sqrt(2)/3. The gap is their difference.
    const int R = 3;
    Basis basis = build_basis(R);
    TableFunction f = TableFunction::zeros(2, R);
    std::vector<int> x(2);
    for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
        decode_point(idx, 2, R, x);
        f.values[idx] = basis.at(1, x[0]);
    }
    InequalityReport r = invariance_gap(f, 1, PsiFunction::psi1());
    CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-12));  // E_y |y| over {+1,-1}

    Accumulator direct;  // enumeration oracle on the [R]^n side
    for (double v : f.values) direct.add(std::abs(v));
    CHECK(r.rhs == doctest::Approx(direct.value() / 9.0).epsilon(1e-12));
    CHECK(std::abs(r.margin) ==
          doctest::Approx(1.0 - 2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-9));
}

TEST_CASE("invariance gap shrinks with the influence scale (recorded)") {
    // mass spread over degree-1 coefficients, scaled down step by step
    const int n = 4, R = 4;
    Basis basis = build_basis(R);
    double previous_gap = 1e9;
    for (int step = 0; step < 3; ++step) {
        double scale = std::pow(10.0, -step);
        TableFunction f = TableFunction::zeros(n, R);
        FourierRep rep = transform(f, basis);
        rep.coeffs[0] = 0.5;
        Rng rng(42 + static_cast<std::uint64_t>(step));
        for (int coord = 0; coord < n; ++coord) {
            for (int digit = 1; digit < R; ++digit) {
                std::size_t stride = checked_pow(R, n - 1 - coord);
                rep.coeffs[stride * static_cast<std::size_t>(digit)] =
                    scale * 0.05 * (0.5 + rng.uniform_real());
            }
        }
        InequalityReport r = invariance_gap(inverse_transform(rep), 1, PsiFunction::psik(2));
        CHECK(std::abs(r.margin) < 1.0);
        // trend is recorded, not asserted as a theorem bound
        if (step > 0) CHECK(std::abs(r.margin) <= previous_gap + 1e-9);
        previous_gap = std::abs(r.margin);
    }
}

TEST_CASE("main lemma on the constant 1/R") {
    MainLemmaStats s = main_lemma_report(constant_table(2, 4, 0.25), 3, 0.6, 2);
    CHECK(s.lhs == doctest::Approx(std::pow(0.25, 3)).epsilon(1e-12));
    CHECK(s.implied_constant == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.max_degree_influence <= 1e-12);
}

TEST_CASE("main lemma on a dictator indicator records a large constant") {
    // g = 1{x_0 = 0} has E[g] = 1/R but influence far above any delta
    const int R = 3;
    TableFunction g = TableFunction::zeros(2, R);
    std::vector<int> x(2);
    for (std::size_t idx = 0; idx < g.values.size(); ++idx) {
        decode_point(idx, 2, R, x);
        g.values[idx] = x[0] == 0 ? 1.0 : 0.0;
    }
    MainLemmaStats s = main_lemma_report(g, 2, 0.5, 2);
    // closed form: (1/R)(rho + (1-rho)/R)^k + (1-1/R)((1-rho)/R)^k = 1/6
    CHECK(s.lhs == doctest::Approx(1.0 / 6).epsilon(1e-12));
    CHECK(s.implied_constant > 1.0);
    CHECK(s.max_degree_influence == doctest::Approx((1.0 / 3) * (2.0 / 3)).epsilon(1e-9));
}

TEST_CASE("main lemma intermediate chain") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        TableFunction raw = random_table(2, 3, 700 + seed, 0.0, 1.0);
        double mean = expectation(raw);
        for (double& v : raw.values) v *= (1.0 / 3) / mean;  // rescale to E[g] = 1/R
        MainLemmaStats s = main_lemma_report(raw, 2, 0.7, 1);
        CHECK(s.half_noise_sq_mean <= s.half_noise_full_sq_mean + 1e-12);
        CHECK(s.half_noise_full_sq_mean <= s.mean + 1e-12);
        CHECK(s.high_tail_norm_sq <= std::pow(0.7, 2) + 1e-12);  // rho^(2d), d = 1
    }
}

TEST_CASE("main lemma rejects bad inputs") {
    CHECK_THROWS_AS(main_lemma_report(constant_table(2, 3, 0.5), 2, 0.5, 1), ValidationError);
    TableFunction g = constant_table(2, 3, 1.0 / 3);
    g.values[0] = 1.5;
    CHECK_THROWS_AS(main_lemma_report(g, 2, 0.5, 1), ValidationError);
}

TEST_CASE("inequality report serialization fields") {
    InequalityReport r = hypercontractivity_margin(sign_dictator(2, 1), 2.0, 4.0, 0.5);
    CHECK(r.check == "hypercontractivity");
    CHECK(r.params_json.find("\"p\":2") != std::string::npos);
    CHECK(r.margin == doctest::Approx(r.rhs - r.lhs));
}
