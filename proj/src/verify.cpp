#include "kcsp/verify.hpp"

#include <cmath>
#include <sstream>

#include "kcsp/algorithms.hpp"
#include "kcsp/dictator_test.hpp"
#include "kcsp/fourier.hpp"
#include "kcsp/games.hpp"
#include "kcsp/inequality_lab.hpp"

namespace kcsp {

namespace {

TableFunction random_table(int n, int R, std::uint64_t seed, double lo, double hi) {
    TableFunction f = TableFunction::zeros(n, R);
    Rng rng(seed);
    for (double& v : f.values) v = lo + (hi - lo) * rng.uniform_real();
    return f;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

VerifyResult run_verify_suite(std::uint64_t seed, int threads) {
    VerifyResult result;
    auto check = [&](const std::string& name, bool ok, const std::string& detail) {
        result.checks.push_back({name, ok, detail});
    };

    // Fourier round trip and Parseval on random tables.
    {
        double worst_rt = 0.0, worst_parseval = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            int n = 1 + trial % 3;
            int R = 2 + trial % 4;
            TableFunction f = random_table(n, R, derive_seed(seed, 100 + trial), -1.0, 1.0);
            Basis basis = build_basis(R);
            FourierRep rep = transform(f, basis);
            TableFunction back = inverse_transform(rep);
            for (std::size_t i = 0; i < f.values.size(); ++i)
                worst_rt = std::max(worst_rt, std::abs(back.values[i] - f.values[i]));
            double sq = p_norm(f, 2.0);
            worst_parseval = std::max(worst_parseval,
                                      std::abs(coeff_norm2_sq(rep) - sq * sq));
        }
        check("fourier round trip", worst_rt <= 1e-9, "max deviation " + fmt(worst_rt));
        check("parseval", worst_parseval <= 1e-9, "max deviation " + fmt(worst_parseval));
    }

    // Dictator test: exact vs Monte Carlo within 3 sigma.
    {
        bool ok = true;
        std::string detail;
        for (int trial = 0; trial < 3; ++trial) {
            RFunction f = random_function(2, 3, derive_seed(seed, 200 + trial));
            TestParams params = TestParams::defaults(2, 3);
            params.trials = 20'000;
            params.seed = derive_seed(seed, 300 + trial);
            double exact = run_test_exact(f, params);
            McResult mc = run_test_mc(f, params, threads);
            double gap = std::abs(mc.acceptance - exact);
            if (gap > 3.0 * mc.stderr_ + 1e-12) {
                ok = false;
                detail = "gap " + fmt(gap) + " > 3 sigma " + fmt(3.0 * mc.stderr_);
            }
        }
        check("dictator test exact vs mc", ok, ok ? "within 3 sigma" : detail);
    }

    // PCP measure equality: evaluate(reduce(exact), proof entries) equals the
    // exact verifier acceptance, for honest and for random proofs.
    {
        Game game = generate_random_unique_game(2, 2, 3, 2, derive_seed(seed, 400));
        PcpParams params = PcpParams::defaults(2, 3);
        auto [opt, value] = brute_force_game_value(game);
        Proof honest = honest_proof(game, opt, params.R);
        Proof random = random_proof(game.num_right, game.N, params.R, derive_seed(seed, 401));
        CspInstance csp = reduce_ug_to_csp(game, params, 0);
        double worst = 0.0;
        for (const Proof* proof : {&honest, &random}) {
            double via_csp = evaluate(csp, proof_to_csp_assignment(game, params, *proof));
            double via_verifier = verifier_acceptance_exact(game, params, *proof);
            worst = std::max(worst, std::abs(via_csp - via_verifier));
        }
        check("csp vs verifier measure", worst <= 1e-9, "max deviation " + fmt(worst));

        McEstimate mc = verifier_acceptance_mc(game, params, honest, 20'000,
                                               derive_seed(seed, 402), threads);
        double exact = verifier_acceptance_exact(game, params, honest);
        double gap = std::abs(mc.value - exact);
        check("verifier exact vs mc", gap <= 3.0 * mc.stderr_ + 1e-12,
              "gap " + fmt(gap) + ", 3 sigma " + fmt(3.0 * mc.stderr_));

        double worst_sum = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            Proof p = random_proof(game.num_right, game.N, params.R, derive_seed(seed, 410 + trial));
            for (double s : verifier_vertex_sums(game, params, p)) worst_sum = std::max(worst_sum, s);
        }
        check("projection sum bound", worst_sum <= 1.0 + 1e-12, "max sum " + fmt(worst_sum));
    }

    // Hypercontractivity margins on random cube functions.
    {
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            TableFunction h = random_table(8, 2, derive_seed(seed, 500 + trial), -1.0, 1.0);
            InequalityReport r = hypercontractivity_margin(h, 2.0, 4.0, 1.0 / std::sqrt(3.0));
            worst = std::min(worst, r.margin);
        }
        check("hypercontractivity margin", worst >= -1e-12, "min margin " + fmt(worst));
    }

    // Extension algorithm: projected weights conserved, blended value sane.
    {
        CspInstance inst = generate_random_instance(5, 2, 3, 8, derive_seed(seed, 600));
        CspInstance projected = project_instance(inst, 2);
        Accumulator wsum;
        for (const Constraint& c : projected.constraints) wsum.add(c.weight);
        check("projection weight conservation", std::abs(wsum.value() - 1.0) <= 1e-9,
              "weight sum " + fmt(wsum.value()));
    }

    return result;
}

std::string verify_report_text(const VerifyResult& result) {
    std::ostringstream os;
    for (const auto& c : result.checks)
        os << (c.passed ? "PASS" : "FAIL") << "  " << c.name << " (" << c.detail << ")\n";
    os << (result.all_passed() ? "verify: all checks passed" : "verify: FAILURES present") << "\n";
    return os.str();
}

}  // namespace kcsp
