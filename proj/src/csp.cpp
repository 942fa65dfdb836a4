#include "kcsp/csp.hpp"

#include <algorithm>
#include <cmath>

namespace kcsp {

namespace {

constexpr double kWeightSumTolerance = 1e-9;

void check_assignment(const CspInstance& inst, const Assignment& a) {
    if (static_cast<int>(a.size()) != inst.n)
        throw ValidationError("assignment length " + std::to_string(a.size()) +
                              " does not match instance n=" + std::to_string(inst.n));
    for (int i = 0; i < inst.n; ++i)
        if (a[i] < 0 || a[i] >= inst.R)
            throw ValidationError("variable " + std::to_string(i) + " value " +
                                  std::to_string(a[i]) + " outside [0, " +
                                  std::to_string(inst.R) + ")");
}

}  // namespace

void CspInstance::validate() const {
    if (n < 0) throw ValidationError("instance n must be nonnegative");
    if (R < 2) throw ValidationError("alphabet size R must be at least 2");
    Accumulator wsum;
    for (std::size_t ci = 0; ci < constraints.size(); ++ci) {
        const Constraint& c = constraints[ci];
        const std::string tag = "constraint " + std::to_string(ci);
        if (!(c.weight > 0.0)) throw ValidationError(tag + ": weight must be strictly positive");
        if (c.scope.empty()) throw ValidationError(tag + ": arity must be at least 1");
        std::vector<int> sorted = c.scope;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t j = 0; j < sorted.size(); ++j) {
            if (sorted[j] < 0 || sorted[j] >= n)
                throw ValidationError(tag + ": scope variable " + std::to_string(sorted[j]) +
                                      " outside [0, " + std::to_string(n) + ")");
            if (j > 0 && sorted[j] == sorted[j - 1])
                throw ValidationError(tag + ": duplicate scope variable " +
                                      std::to_string(sorted[j]));
        }
        std::size_t rows = checked_pow(R, c.arity());
        if (c.predicate.size() != rows)
            throw ValidationError(tag + ": predicate has " + std::to_string(c.predicate.size()) +
                                  " entries, expected " + std::to_string(rows));
        for (std::uint8_t v : c.predicate)
            if (v > 1) throw ValidationError(tag + ": predicate entries must be 0 or 1");
        wsum.add(c.weight);
    }
    if (!constraints.empty() && std::abs(wsum.value() - 1.0) > kWeightSumTolerance)
        throw ValidationError("constraint weights sum to " + std::to_string(wsum.value()) +
                              ", expected 1");
}

int CspInstance::uniform_arity() const {
    if (constraints.empty()) throw ValidationError("instance has no constraints");
    int k = constraints.front().arity();
    for (const Constraint& c : constraints)
        if (c.arity() != k)
            throw ValidationError("mixed constraint arities " + std::to_string(k) + " and " +
                                  std::to_string(c.arity()));
    return k;
}

std::size_t predicate_row(const Constraint& c, const Assignment& a, int R) {
    std::size_t idx = 0;
    for (int v : c.scope) idx = idx * static_cast<std::size_t>(R) + static_cast<std::size_t>(a[v]);
    return idx;
}

double evaluate(const CspInstance& inst, const Assignment& a) {
    check_assignment(inst, a);
    Accumulator total;
    for (const Constraint& c : inst.constraints)
        if (c.predicate[predicate_row(c, a, inst.R)]) total.add(c.weight);
    return total.value();
}

std::pair<Assignment, double> brute_force_optimum(const CspInstance& inst, std::uint64_t budget) {
    inst.validate();
    std::size_t count = 1;
    try {
        count = checked_pow(inst.R, inst.n, budget);
    } catch (const BudgetError&) {
        throw BudgetError("instance too large for exhaustive search (R^n > " +
                          std::to_string(budget) + ")");
    }
    Assignment a(static_cast<std::size_t>(inst.n), 0);
    Assignment best = a;
    double best_value = evaluate(inst, a);
    // Odometer with the last variable fastest enumerates assignments in
    // lexicographic order, so the first maximum seen is the smallest one.
    for (std::size_t step = 1; step < count; ++step) {
        int pos = inst.n - 1;
        while (a[pos] == inst.R - 1) a[pos--] = 0;
        ++a[pos];
        double v = evaluate(inst, a);
        if (v > best_value) {
            best_value = v;
            best = a;
        }
    }
    return {best, best_value};
}

double expected_random_value(const CspInstance& inst) {
    inst.validate();
    Accumulator total;
    for (const Constraint& c : inst.constraints) {
        std::size_t satisfied = 0;
        for (std::uint8_t v : c.predicate) satisfied += v;
        total.add(c.weight * static_cast<double>(satisfied) /
                  static_cast<double>(c.predicate.size()));
    }
    return total.value();
}

CspInstance generate_random_instance(int n, int R, int k, int m, std::uint64_t seed) {
    if (k < 1 || n < k) throw ValidationError("need n >= k >= 1");
    if (R < 2) throw ValidationError("need R >= 2");
    if (m < 1) throw ValidationError("need m >= 1");
    CspInstance inst;
    inst.n = n;
    inst.R = R;
    inst.constraints.reserve(static_cast<std::size_t>(m));
    std::size_t rows = checked_pow(R, k);
    Rng rng(seed);
    for (int ci = 0; ci < m; ++ci) {
        Constraint c;
        c.weight = 1.0 / static_cast<double>(m);
        while (static_cast<int>(c.scope.size()) < k) {
            int v = rng.uniform_int(n);
            if (std::find(c.scope.begin(), c.scope.end(), v) == c.scope.end()) c.scope.push_back(v);
        }
        c.predicate.resize(rows);
        for (std::size_t r = 0; r < rows; ++r)
            c.predicate[r] = static_cast<std::uint8_t>(rng.uniform_int(2));
        inst.constraints.push_back(std::move(c));
    }
    return inst;
}

}  // namespace kcsp
