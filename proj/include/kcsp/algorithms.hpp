#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "kcsp/csp.hpp"

namespace kcsp {

// Pluggable solver contract for the extension construction: any algorithm for
// instances of the declared arity. The advantage factor of a base over random
// assignment is a property of the chosen algorithm, recorded as metadata.
struct BaseAlgorithm {
    std::string name;
    int arity = 0;
    std::function<Assignment(const CspInstance&, std::uint64_t seed)> solve;
};

BaseAlgorithm make_naive_base(int arity);
BaseAlgorithm make_brute_force_base(int arity, std::uint64_t budget = kDefaultBudget);

struct ExtensionParams {
    int k = 3;
    int k_prime = 2;
    double alpha = -1.0;  // < 0 selects the default (k - k') / k

    double resolved_alpha() const;
    void validate() const;
};

// Uniform random assignment; deterministic in the seed.
Assignment naive_random(const CspInstance& inst, std::uint64_t seed);

// Projects every arity-k constraint onto all size-k' subsets of its scope and
// all fixings of the removed variables. Weights scale by 1/(C(k,k') R^(k-k'))
// so the output stays a probability distribution. Subsets are enumerated in
// lexicographic order and fixings in row-major order.
CspInstance project_instance(const CspInstance& inst, int k_prime);

// Per variable: uniform with probability alpha, otherwise copy from `from`.
Assignment blend_assignment(const Assignment& from, double alpha, int R, std::uint64_t seed);

// The extension construction: project, solve the projection with the base,
// then blend the base's assignment toward uniform.
Assignment extend_algorithm(const CspInstance& inst, const BaseAlgorithm& base,
                            const ExtensionParams& params, std::uint64_t seed);

double binomial(int n, int r);

// C(k,k') alpha^(k-k') (1-alpha)^k' — the factor the blend keeps of the
// base assignment's projected value.
double extension_guarantee_factor(int k, int k_prime, double alpha);

}  // namespace kcsp
