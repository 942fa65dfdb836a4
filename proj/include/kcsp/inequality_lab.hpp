#pragma once

#include <string>

#include "kcsp/fourier.hpp"

namespace kcsp {

// Test functions of the invariance bound: psi_1(t) = |t| and the clamped
// power psi_k(t) = t^k on [0,1], 0 below, 1 above. Both are k-Lipschitz.
struct PsiFunction {
    enum class Kind { abs, clamped_power };
    Kind kind = Kind::abs;
    int k = 1;

    static PsiFunction psi1() { return {Kind::abs, 1}; }
    static PsiFunction psik(int k);
    std::string name() const;
};

double psi_eval(const PsiFunction& psi, double t);

struct InequalityReport {
    std::string check;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs; negative margins are recorded, not hidden
    bool hypothesis_met = true;
    std::string params_json;
    std::string aux_json;
};

// ||T_rho h||_q <= ||h||_p on the cube, h given as a TableFunction with R=2
// (point 0 is +1, point 1 is -1). The hypothesis p <= q, rho <= sqrt((p-1)/(q-1))
// is a precondition; violations throw.
InequalityReport hypercontractivity_margin(const TableFunction& h, double p, double q, double rho);

// The specialization ||T_{2 rho} G||_k <= ||G||_{1+eps} with eps = 4/ln R on a
// boolean analog. When 2 rho exceeds sqrt(eps/(k-1)) the hypothesis is unmet
// and the report says so instead of carrying a margin.
InequalityReport k_vs_one_plus_eps(const BooleanRep& g_analog, int k, double rho);

// |E_y[psi(F^(<=d)(y))] - E_x[psi(f^(<=d)(x))]| for F the boolean analog of f.
// Reports the raw gap; no threshold is asserted.
InequalityReport invariance_gap(const TableFunction& f, int d, const PsiFunction& psi,
                                std::uint64_t budget = kDefaultBudget);

struct MainLemmaStats {
    double lhs = 0.0;               // E[(T_rho g)^k]
    double reference = 0.0;         // 1/R^k
    double implied_constant = 0.0;  // lhs * R^k
    double max_degree_influence = 0.0;
    double high_tail_norm_sq = 0.0;      // ||T_rho g^{>d}||_2^2
    double half_noise_abs_mean = 0.0;    // E[|T_{1/2} g^{<=d}|]
    double half_noise_sq_mean = 0.0;     // E[(T_{1/2} g^{<=d})^2]
    double half_noise_full_sq_mean = 0.0;  // E[(T_{1/2} g)^2]
    double mean = 0.0;                   // E[g]
};

// Requires g in [0,1] with E[g] = 1/R (within 1e-9). Reports the noisy k-th
// moment against the 1/R^k scale plus the intermediate quantities of the
// bound's derivation.
MainLemmaStats main_lemma_report(const TableFunction& g, int k, double rho, int d,
                                 std::uint64_t budget = kDefaultBudget);

InequalityReport main_lemma_inequality_report(const MainLemmaStats& stats, int k, int R,
                                              double rho, int d);

// Random table with values in [0,1] and mean exactly `mean`: uniform draws
// rescaled, retrying derived seeds until the rescale stays within range.
TableFunction random_mean_table(int n, int R, double mean, std::uint64_t seed);

}  // namespace kcsp
