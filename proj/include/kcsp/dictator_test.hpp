#pragma once

#include <cstdint>
#include <vector>

#include "kcsp/fourier.hpp"

namespace kcsp {

struct TestParams {
    int k = 2;
    int R = 3;
    double rho = 0.5;
    int degree = 1;
    double log_delta = 0.0;  // natural log of delta
    std::int64_t trials = 100'000;
    std::uint64_t seed = 0;

    // Same parameter schedule as PcpParams::defaults.
    static TestParams defaults(int k, int R);
};

// Function f: [0,R)^n -> [0,R) as a dense table, indexed like TableFunction.
struct RFunction {
    int n = 0;
    int R = 2;
    std::vector<int> table;

    void validate() const;
};

RFunction dictator_function(int n, int R, int coord);
RFunction constant_function(int n, int R, int value);
RFunction random_function(int n, int R, std::uint64_t seed);

// Random table accessed through folding, i.e. f(x) = t(x - x_0 1) + x_0;
// balanced by construction.
RFunction folded_random_function(int n, int R, std::uint64_t seed);

// f_c(x) = f(x + c 1) - c (mod R). Fixes dictators for every c.
RFunction shift(const RFunction& f, int c);

// Indicator of f(x) = value.
TableFunction projection(const RFunction& f, int value);

// g^i = E_c[f_c^i], the shift-averaged projection; E[g^i] = 1/R exactly.
TableFunction averaged_projection(const RFunction& f, int value);

struct McResult {
    double acceptance = 0.0;
    double stderr_ = 0.0;
    std::int64_t trials = 0;
};

// Samples the k-query test: z uniform, k rho-correlated copies, k uniform
// shifts; accept iff the k shifted values agree.
McResult run_test_mc(const RFunction& f, const TestParams& params, int threads = 1);

// Exact acceptance sum_i E_z[(T_rho g^i(z))^k].
double run_test_exact(const RFunction& f, const TestParams& params,
                      std::uint64_t budget = kDefaultBudget);

// (rho + (1-rho)/R)^k + (R-1)((1-rho)/R)^k: acceptance on any dictator.
double dictator_closed_form(int k, int R, double rho);

struct QuasirandomReport {
    bool is_quasirandom = false;
    double max_influence = 0.0;
    int arg_projection = -1;
    int arg_coord = -1;
};

// Degree-d influences of every projection f^i against the log-space
// threshold; quasirandom iff all are at most delta.
QuasirandomReport quasirandomness_check(const RFunction& f, int degree, double log_delta);

}  // namespace kcsp
