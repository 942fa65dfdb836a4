#include "kcsp/fourier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace kcsp {

namespace {

constexpr double kBasisTolerance = 1e-12;

// out[j] = sum_x kernel[j*R + x] * in[x] along one tensor axis.
void contract_axis(std::vector<double>& data, int n, int R, int axis,
                   const std::vector<double>& kernel) {
    const auto r = static_cast<std::size_t>(R);
    std::size_t inner = 1;  // stride of the axis
    for (int a = axis + 1; a < n; ++a) inner *= r;
    std::size_t outer = data.size() / (inner * r);
    std::vector<double> slice(r);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t in_pos = 0; in_pos < inner; ++in_pos) {
            std::size_t base = o * inner * r + in_pos;
            for (std::size_t x = 0; x < r; ++x) slice[x] = data[base + x * inner];
            for (std::size_t j = 0; j < r; ++j) {
                double acc = 0.0;
                for (std::size_t x = 0; x < r; ++x) acc += kernel[j * r + x] * slice[x];
                data[base + j * inner] = acc;
            }
        }
    }
}

}  // namespace

void Basis::validate() const {
    if (R < 2) throw ValidationError("basis alphabet must be at least 2");
    if (table.size() != static_cast<std::size_t>(R) * static_cast<std::size_t>(R))
        throw ValidationError("basis table has wrong size");
    for (int x = 0; x < R; ++x)
        if (std::abs(at(0, x) - 1.0) > kBasisTolerance)
            throw ValidationError("basis row 0 is not the constant 1");
    for (int i = 0; i < R; ++i) {
        for (int j = i; j < R; ++j) {
            Accumulator ip;
            for (int x = 0; x < R; ++x) ip.add(at(i, x) * at(j, x));
            double expected = (i == j) ? 1.0 : 0.0;
            if (std::abs(ip.value() / R - expected) > kBasisTolerance)
                throw ValidationError("basis rows " + std::to_string(i) + "," + std::to_string(j) +
                                      " are not orthonormal");
        }
    }
}

Basis build_basis_from(int R, const std::vector<double>& seed_rows) {
    if (R < 2) throw ValidationError("alphabet size must be at least 2");
    if (seed_rows.size() != static_cast<std::size_t>(R) * static_cast<std::size_t>(R))
        throw ValidationError("need R seed rows of length R");
    Basis b;
    b.R = R;
    b.table.assign(seed_rows.begin(), seed_rows.end());
    const auto r = static_cast<std::size_t>(R);
    for (std::size_t i = 0; i < r; ++i) {
        double* row = b.table.data() + i * r;
        for (std::size_t prev = 0; prev < i; ++prev) {
            const double* p = b.table.data() + prev * r;
            Accumulator ip;
            for (std::size_t x = 0; x < r; ++x) ip.add(row[x] * p[x]);
            double proj = ip.value() / R;
            for (std::size_t x = 0; x < r; ++x) row[x] -= proj * p[x];
        }
        Accumulator nsq;
        for (std::size_t x = 0; x < r; ++x) nsq.add(row[x] * row[x]);
        double norm = std::sqrt(nsq.value() / R);
        if (norm < 1e-9)
            throw ValidationError("seed rows are linearly dependent at row " + std::to_string(i));
        for (std::size_t x = 0; x < r; ++x) row[x] /= norm;
        for (std::size_t x = 0; x < r; ++x) {
            if (std::abs(row[x]) > 1e-9) {
                if (row[x] < 0)
                    for (std::size_t y = 0; y < r; ++y) row[y] = -row[y];
                break;
            }
        }
    }
    b.validate();
    return b;
}

Basis build_basis(int R) {
    std::vector<double> rows(static_cast<std::size_t>(R) * static_cast<std::size_t>(R), 0.0);
    for (int x = 0; x < R; ++x) rows[static_cast<std::size_t>(x)] = 1.0;  // row 0: constant
    for (int i = 1; i < R; ++i)
        rows[static_cast<std::size_t>(i) * static_cast<std::size_t>(R) +
             static_cast<std::size_t>(i)] = 1.0;  // row i: indicator of point i
    return build_basis_from(R, rows);
}

TableFunction TableFunction::zeros(int n, int R) {
    TableFunction f;
    f.n = n;
    f.R = R;
    f.values.assign(checked_pow(R, n), 0.0);
    return f;
}

std::size_t point_index(std::span<const int> x, int R) {
    std::size_t idx = 0;
    for (int v : x) idx = idx * static_cast<std::size_t>(R) + static_cast<std::size_t>(v);
    return idx;
}

void decode_point(std::size_t idx, int n, int R, std::span<int> out) {
    for (int i = n - 1; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(R));
        idx /= static_cast<std::size_t>(R);
    }
}

int multi_index_degree(std::size_t s, int n, int R) {
    int deg = 0;
    for (int i = 0; i < n; ++i) {
        if (s % static_cast<std::size_t>(R) != 0) ++deg;
        s /= static_cast<std::size_t>(R);
    }
    return deg;
}

FourierRep transform(const TableFunction& f, const Basis& basis) {
    if (basis.R != f.R) throw ValidationError("basis alphabet does not match function");
    if (f.values.size() != checked_pow(f.R, f.n))
        throw ValidationError("table size does not match n, R");
    FourierRep rep;
    rep.n = f.n;
    rep.R = f.R;
    rep.basis = basis;
    rep.coeffs = f.values;
    const auto r = static_cast<std::size_t>(f.R);
    // c(s) = E_x[f(x) prod_i l_{s_i}(x_i)]: contract each axis with l_j(x)/R.
    std::vector<double> kernel(r * r);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t x = 0; x < r; ++x)
            kernel[j * r + x] = basis.at(static_cast<int>(j), static_cast<int>(x)) / f.R;
    for (int axis = 0; axis < f.n; ++axis) contract_axis(rep.coeffs, f.n, f.R, axis, kernel);
    return rep;
}

TableFunction inverse_transform(const FourierRep& rep) {
    TableFunction f;
    f.n = rep.n;
    f.R = rep.R;
    f.values = rep.coeffs;
    const auto r = static_cast<std::size_t>(rep.R);
    // g(x) = sum_s c(s) prod_i l_{s_i}(x_i): contract each axis with l_j(x).
    std::vector<double> kernel(r * r);
    for (std::size_t x = 0; x < r; ++x)
        for (std::size_t j = 0; j < r; ++j)
            kernel[x * r + j] = rep.basis.at(static_cast<int>(j), static_cast<int>(x));
    for (int axis = 0; axis < rep.n; ++axis) contract_axis(f.values, rep.n, rep.R, axis, kernel);
    return f;
}

std::vector<int> noise_sample(std::span<const int> x, int R, double rho, Rng& rng) {
    if (rho < 0.0 || rho > 1.0) throw ValidationError("rho must be in [0, 1]");
    std::vector<int> y(x.begin(), x.end());
    for (std::size_t i = 0; i < y.size(); ++i)
        if (!rng.bernoulli(rho)) y[i] = rng.uniform_int(R);
    return y;
}

FourierRep apply_noise(FourierRep rep, double rho) {
    if (rho < 0.0 || rho > 1.0) throw ValidationError("rho must be in [0, 1]");
    for (std::size_t s = 0; s < rep.coeffs.size(); ++s)
        rep.coeffs[s] *= std::pow(rho, multi_index_degree(s, rep.n, rep.R));
    return rep;
}

FourierRep truncate(FourierRep rep, int d, TruncatePart part) {
    if (d < 0) throw ValidationError("degree must be nonnegative");
    for (std::size_t s = 0; s < rep.coeffs.size(); ++s) {
        bool low = multi_index_degree(s, rep.n, rep.R) <= d;
        if (low != (part == TruncatePart::low)) rep.coeffs[s] = 0.0;
    }
    return rep;
}

double influence(const FourierRep& rep, int coord) {
    return degree_influence(rep, coord, rep.n);
}

double degree_influence(const FourierRep& rep, int coord, int d) {
    if (coord < 0 || coord >= rep.n) throw ValidationError("coordinate out of range");
    const auto r = static_cast<std::size_t>(rep.R);
    std::size_t stride = 1;
    for (int a = coord + 1; a < rep.n; ++a) stride *= r;
    Accumulator acc;
    for (std::size_t s = 0; s < rep.coeffs.size(); ++s) {
        if ((s / stride) % r == 0) continue;
        if (multi_index_degree(s, rep.n, rep.R) > d) continue;
        acc.add(rep.coeffs[s] * rep.coeffs[s]);
    }
    return acc.value();
}

double expectation(const TableFunction& f) {
    Accumulator acc;
    for (double v : f.values) acc.add(v);
    return acc.value() / static_cast<double>(f.values.size());
}

double p_norm(const TableFunction& f, double p) {
    if (p < 1.0) throw ValidationError("p-norm requires p >= 1");
    Accumulator acc;
    for (double v : f.values) acc.add(std::pow(std::abs(v), p));
    return std::pow(acc.value() / static_cast<double>(f.values.size()), 1.0 / p);
}

double variance(const FourierRep& rep) {
    Accumulator acc;
    for (std::size_t s = 1; s < rep.coeffs.size(); ++s) acc.add(rep.coeffs[s] * rep.coeffs[s]);
    return acc.value();
}

double coeff_norm2_sq(const FourierRep& rep) {
    Accumulator acc;
    for (double c : rep.coeffs) acc.add(c * c);
    return acc.value();
}

BooleanRep boolean_analog(const FourierRep& rep) {
    if (rep.n * (rep.R - 1) > 32)
        throw BudgetError("boolean analog would need more than 32 live variables");
    BooleanRep out;
    out.n = rep.n;
    out.R = rep.R;
    out.terms.reserve(rep.coeffs.size());
    const auto r = static_cast<std::size_t>(rep.R);
    for (std::size_t s = 0; s < rep.coeffs.size(); ++s) {
        if (rep.coeffs[s] == 0.0) continue;
        std::uint32_t mask = 0;
        std::size_t rest = s;
        for (int i = rep.n - 1; i >= 0; --i) {
            auto digit = static_cast<int>(rest % r);
            rest /= r;
            if (digit != 0) mask |= 1u << (i * (rep.R - 1) + digit - 1);
        }
        out.terms.emplace_back(mask, rep.coeffs[s]);
    }
    std::sort(out.terms.begin(), out.terms.end());
    return out;
}

double eval_boolean(const BooleanRep& rep, std::uint32_t point_mask) {
    Accumulator acc;
    for (const auto& [mask, coeff] : rep.terms) {
        int parity = std::popcount(mask & point_mask) & 1;
        acc.add(parity ? -coeff : coeff);
    }
    return acc.value();
}

BooleanRep boolean_truncate(BooleanRep rep, int d, TruncatePart part) {
    std::erase_if(rep.terms, [&](const auto& t) {
        bool low = std::popcount(t.first) <= d;
        return low != (part == TruncatePart::low);
    });
    return rep;
}

BooleanRep boolean_noise(BooleanRep rep, double rho) {
    for (auto& [mask, coeff] : rep.terms) coeff *= std::pow(rho, std::popcount(mask));
    return rep;
}

double boolean_norm2_sq(const BooleanRep& rep) {
    Accumulator acc;
    for (const auto& [mask, coeff] : rep.terms) acc.add(coeff * coeff);
    return acc.value();
}

double boolean_p_norm(const BooleanRep& rep, double p) {
    if (p < 1.0) throw ValidationError("p-norm requires p >= 1");
    int m = rep.num_vars();
    if (m > 24) throw BudgetError("boolean cube enumeration over 2^" + std::to_string(m));
    std::size_t points = std::size_t{1} << m;
    Accumulator acc;
    for (std::size_t y = 0; y < points; ++y)
        acc.add(std::pow(std::abs(eval_boolean(rep, static_cast<std::uint32_t>(y))), p));
    return std::pow(acc.value() / static_cast<double>(points), 1.0 / p);
}

}  // namespace kcsp
