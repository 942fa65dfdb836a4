#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "kcsp/common.hpp"

namespace kcsp {

// Full assignment to the variables of an instance; values in [0, R).
using Assignment = std::vector<int>;

// One weighted constraint: a 0/1 predicate table over the scope variables.
// The table is row-major with scope[0] as the most significant base-R digit.
struct Constraint {
    double weight = 0.0;
    std::vector<int> scope;
    std::vector<std::uint8_t> predicate;

    int arity() const { return static_cast<int>(scope.size()); }
};

// Weighted Max k-CSP over alphabet [0, R). Weights sum to 1.
struct CspInstance {
    int n = 0;
    int R = 2;
    std::vector<Constraint> constraints;

    // Throws ValidationError naming the offending constraint or field.
    void validate() const;

    // Common arity when every constraint has the same one; throws otherwise.
    int uniform_arity() const;
};

// Row index of the scope-restricted assignment, base R, scope[0] most significant.
std::size_t predicate_row(const Constraint& c, const Assignment& a, int R);

// Total weight of satisfied constraints; in [0, 1].
double evaluate(const CspInstance& inst, const Assignment& a);

// Exhaustive maximization. Ties broken by lexicographically smallest
// assignment. Throws BudgetError when R^n exceeds the budget.
std::pair<Assignment, double> brute_force_optimum(const CspInstance& inst,
                                                  std::uint64_t budget = kDefaultBudget);

// Exact expected value of a uniformly random assignment.
double expected_random_value(const CspInstance& inst);

// m constraints of weight 1/m, scopes of k distinct variables, each predicate
// row a fair coin. Deterministic in the seed.
CspInstance generate_random_instance(int n, int R, int k, int m, std::uint64_t seed);

}  // namespace kcsp
