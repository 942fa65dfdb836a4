#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "kcsp/common.hpp"

namespace kcsp {

// Orthonormal basis l_0..l_{R-1} of functions [0,R) -> reals under
// <u,v> = E_x[u(x) v(x)], with l_0 identically 1. Stored row-major:
// rows are basis functions, columns are domain points.
struct Basis {
    int R = 2;
    std::vector<double> table;  // R*R entries

    double at(int fn, int point) const {
        return table[static_cast<std::size_t>(fn) * static_cast<std::size_t>(R) +
                     static_cast<std::size_t>(point)];
    }
    // Orthonormality and l_0 == 1 within 1e-12; throws on violation.
    void validate() const;
};

// Gram-Schmidt over (1, 1{x=1}, ..., 1{x=R-1}); sign fixed so the first
// nonvanishing entry of each row is positive. For R=2 this is l_1 = (+1,-1),
// the usual +/-1 convention with point 0 mapped to +1.
Basis build_basis(int R);

// Gram-Schmidt over caller-supplied seed rows (R rows of length R); the first
// row must span the constants. Used to probe basis independence.
Basis build_basis_from(int R, const std::vector<double>& seed_rows);

// Dense real-valued function on [0,R)^n. Row-major indexing with coordinate 0
// as the most significant base-R digit, shared with Constraint predicates.
struct TableFunction {
    int n = 0;
    int R = 2;
    std::vector<double> values;

    static TableFunction zeros(int n, int R);
    std::size_t size() const { return values.size(); }
};

std::size_t point_index(std::span<const int> x, int R);
void decode_point(std::size_t idx, int n, int R, std::span<int> out);

// Coefficients over the tensor basis, indexed like the table: multi-index s
// with digit 0 selecting the constant basis function. The degree |s| counts
// nonzero digits.
struct FourierRep {
    int n = 0;
    int R = 2;
    Basis basis;
    std::vector<double> coeffs;
};

int multi_index_degree(std::size_t s, int n, int R);

FourierRep transform(const TableFunction& f, const Basis& basis);
TableFunction inverse_transform(const FourierRep& rep);

// One rho-correlated copy of x: each coordinate kept with probability rho,
// redrawn uniformly otherwise (the redraw may repeat the original value).
std::vector<int> noise_sample(std::span<const int> x, int R, double rho, Rng& rng);

// T_rho on coefficients: multiply the entry at s by rho^|s|.
FourierRep apply_noise(FourierRep rep, double rho);

enum class TruncatePart { low, high };

// Degree split: `low` keeps |s| <= d, `high` keeps |s| > d.
FourierRep truncate(FourierRep rep, int d, TruncatePart part);

double influence(const FourierRep& rep, int coord);
double degree_influence(const FourierRep& rep, int coord, int d);

double expectation(const TableFunction& f);
double p_norm(const TableFunction& f, double p);
double variance(const FourierRep& rep);
double coeff_norm2_sq(const FourierRep& rep);

// Boolean analog over {+1,-1}^(n*R): same coefficients, with the basis factor
// at (coordinate i, digit j != 0) replaced by the cube variable y_{i,j}. Only
// the n*(R-1) variables with j != 0 ever occur; terms are stored sparsely as
// bitmasks over those positions (bit i*(R-1)+j-1 for digit j at coordinate i).
struct BooleanRep {
    int n = 0;
    int R = 2;
    std::vector<std::pair<std::uint32_t, double>> terms;  // sorted by mask

    int num_vars() const { return n * (R - 1); }
};

BooleanRep boolean_analog(const FourierRep& rep);

// Point masks encode y: bit b set means y_b = -1. Expectations over the full
// {+1,-1}^(n*R) cube equal averages over these 2^(n*(R-1)) masks because the
// unused coordinates never appear in any term.
double eval_boolean(const BooleanRep& rep, std::uint32_t point_mask);

BooleanRep boolean_truncate(BooleanRep rep, int d, TruncatePart part);
BooleanRep boolean_noise(BooleanRep rep, double rho);
double boolean_norm2_sq(const BooleanRep& rep);

// Exact E over the cube of |G(y)|^p, to the power 1/p.
double boolean_p_norm(const BooleanRep& rep, double p);

}  // namespace kcsp
