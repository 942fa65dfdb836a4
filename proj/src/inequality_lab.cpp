#include "kcsp/inequality_lab.hpp"

#include <cmath>
#include <sstream>

namespace kcsp {

namespace {

std::string json_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

PsiFunction PsiFunction::psik(int k) {
    if (k < 1) throw ValidationError("psi_k needs k >= 1");
    return {Kind::clamped_power, k};
}

std::string PsiFunction::name() const {
    return kind == Kind::abs ? "psi_1" : "psi_" + std::to_string(k);
}

double psi_eval(const PsiFunction& psi, double t) {
    if (psi.kind == PsiFunction::Kind::abs) return std::abs(t);
    if (t < 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return std::pow(t, psi.k);
}

InequalityReport hypercontractivity_margin(const TableFunction& h, double p, double q,
                                           double rho) {
    if (h.R != 2) throw ValidationError("hypercontractivity works on the cube; need R = 2");
    if (p < 1.0 || q < 1.0) throw ValidationError("need p, q >= 1");
    if (rho < 0.0 || rho > 1.0) throw ValidationError("rho must be in [0, 1]");
    if (p < q) {
        // the genuine hypercontractive regime; for p >= q the inequality
        // already follows from contraction and norm monotonicity
        double bound = std::sqrt((p - 1.0) / (q - 1.0));
        if (rho > bound + 1e-12)
            throw ValidationError("rho violates the hypothesis rho <= sqrt((p-1)/(q-1))");
    }
    Basis basis = build_basis(2);
    TableFunction noisy = inverse_transform(apply_noise(transform(h, basis), rho));
    InequalityReport report;
    report.check = "hypercontractivity";
    report.lhs = p_norm(noisy, q);
    report.rhs = p_norm(h, p);
    report.margin = report.rhs - report.lhs;
    report.params_json = "{\"p\":" + json_number(p) + ",\"q\":" + json_number(q) +
                         ",\"rho\":" + json_number(rho) + ",\"m\":" + std::to_string(h.n) + "}";
    return report;
}

InequalityReport k_vs_one_plus_eps(const BooleanRep& g_analog, int k, double rho) {
    if (k < 2) throw ValidationError("need k >= 2");
    double eps = 4.0 / std::log(static_cast<double>(g_analog.R));
    InequalityReport report;
    report.check = "k_vs_one_plus_eps";
    report.params_json = "{\"k\":" + std::to_string(k) + ",\"R\":" + std::to_string(g_analog.R) +
                         ",\"rho\":" + json_number(rho) + ",\"eps\":" + json_number(eps) + "}";
    // the specialization is an instance of the theorem only when the lower
    // norm index 1+eps stays at most k and 2 rho is within the threshold
    double bound = std::sqrt(eps / (k - 1));
    bool norms_ordered = 1.0 + eps <= static_cast<double>(k) + 1e-12;
    bool rho_ok = 2.0 * rho <= bound + 1e-12;
    if (!norms_ordered || !rho_ok) {
        report.hypothesis_met = false;
        std::string reason = !norms_ordered ? "1+eps exceeds k" : "2 rho exceeds sqrt(eps/(k-1))";
        report.aux_json = "{\"reason\":\"" + reason + "\",\"two_rho\":" +
                          json_number(2.0 * rho) + ",\"limit\":" + json_number(bound) +
                          ",\"eps\":" + json_number(eps) + "}";
        report.lhs = report.rhs = report.margin = std::nan("");
        return report;
    }
    report.lhs = boolean_p_norm(boolean_noise(g_analog, 2.0 * rho), static_cast<double>(k));
    report.rhs = boolean_p_norm(g_analog, 1.0 + eps);
    report.margin = report.rhs - report.lhs;
    return report;
}

InequalityReport invariance_gap(const TableFunction& f, int d, const PsiFunction& psi,
                                std::uint64_t budget) {
    if (f.n * f.R > 20) throw BudgetError("boolean side needs n*R <= 20");
    checked_pow(f.R, f.n, budget);
    Basis basis = build_basis(f.R);
    FourierRep rep = transform(f, basis);
    FourierRep low = truncate(rep, d, TruncatePart::low);

    TableFunction f_low = inverse_transform(low);
    Accumulator r_side;
    for (double v : f_low.values) r_side.add(psi_eval(psi, v));
    double r_mean = r_side.value() / static_cast<double>(f_low.values.size());

    BooleanRep analog = boolean_analog(low);
    std::size_t points = std::size_t{1} << analog.num_vars();
    Accumulator b_side;
    for (std::size_t y = 0; y < points; ++y)
        b_side.add(psi_eval(psi, eval_boolean(analog, static_cast<std::uint32_t>(y))));
    double b_mean = b_side.value() / static_cast<double>(points);

    double max_dinf = 0.0;
    for (int j = 0; j < f.n; ++j) max_dinf = std::max(max_dinf, degree_influence(rep, j, d));

    InequalityReport report;
    report.check = "invariance_gap";
    report.lhs = b_mean;
    report.rhs = r_mean;
    report.margin = report.rhs - report.lhs;
    report.params_json = "{\"n\":" + std::to_string(f.n) + ",\"R\":" + std::to_string(f.R) +
                         ",\"d\":" + std::to_string(d) + ",\"psi\":\"" + psi.name() + "\"}";
    report.aux_json = "{\"gap\":" + json_number(std::abs(report.margin)) +
                      ",\"max_degree_influence\":" + json_number(max_dinf) + "}";
    return report;
}

MainLemmaStats main_lemma_report(const TableFunction& g, int k, double rho, int d,
                                 std::uint64_t budget) {
    if (k < 1) throw ValidationError("need k >= 1");
    if (rho < 0.0 || rho > 1.0) throw ValidationError("rho must be in [0, 1]");
    checked_pow(g.R, g.n, budget);
    for (double v : g.values)
        if (v < -1e-12 || v > 1.0 + 1e-12)
            throw ValidationError("main lemma needs g with values in [0, 1]");
    MainLemmaStats stats;
    stats.mean = expectation(g);
    double target = 1.0 / g.R;
    if (std::abs(stats.mean - target) > 1e-9)
        throw ValidationError("main lemma needs E[g] = 1/R; got " + std::to_string(stats.mean));

    Basis basis = build_basis(g.R);
    FourierRep rep = transform(g, basis);

    TableFunction noisy = inverse_transform(apply_noise(rep, rho));
    Accumulator lhs;
    for (double v : noisy.values) lhs.add(std::pow(v, k));
    stats.lhs = lhs.value() / static_cast<double>(noisy.values.size());
    stats.reference = std::pow(1.0 / g.R, k);
    stats.implied_constant = stats.lhs / stats.reference;

    for (int j = 0; j < g.n; ++j)
        stats.max_degree_influence = std::max(stats.max_degree_influence,
                                              degree_influence(rep, j, d));

    stats.high_tail_norm_sq =
        coeff_norm2_sq(apply_noise(truncate(rep, d, TruncatePart::high), rho));

    FourierRep low = truncate(rep, d, TruncatePart::low);
    TableFunction half_low = inverse_transform(apply_noise(low, 0.5));
    Accumulator abs_mean, sq_mean;
    for (double v : half_low.values) {
        abs_mean.add(std::abs(v));
        sq_mean.add(v * v);
    }
    stats.half_noise_abs_mean = abs_mean.value() / static_cast<double>(half_low.values.size());
    stats.half_noise_sq_mean = sq_mean.value() / static_cast<double>(half_low.values.size());
    stats.half_noise_full_sq_mean = coeff_norm2_sq(apply_noise(rep, 0.5));
    return stats;
}

TableFunction random_mean_table(int n, int R, double mean, std::uint64_t seed) {
    if (mean <= 0.0 || mean >= 1.0) throw ValidationError("mean must be in (0, 1)");
    for (int attempt = 0; attempt < 1000; ++attempt) {
        TableFunction f = TableFunction::zeros(n, R);
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
        Accumulator sum;
        for (double& v : f.values) {
            v = rng.uniform_real();
            sum.add(v);
        }
        double factor = mean * static_cast<double>(f.values.size()) / sum.value();
        bool in_range = true;
        for (double& v : f.values) {
            v *= factor;
            if (v > 1.0) in_range = false;
        }
        if (in_range) return f;
    }
    throw ValidationError("could not draw a [0,1] table with the requested mean");
}

InequalityReport main_lemma_inequality_report(const MainLemmaStats& stats, int k, int R,
                                              double rho, int d) {
    InequalityReport report;
    report.check = "main_lemma";
    report.lhs = stats.lhs;
    report.rhs = stats.reference;
    report.margin = report.rhs - report.lhs;
    report.params_json = "{\"k\":" + std::to_string(k) + ",\"R\":" + std::to_string(R) +
                         ",\"rho\":" + json_number(rho) + ",\"d\":" + std::to_string(d) + "}";
    report.aux_json =
        "{\"implied_constant\":" + json_number(stats.implied_constant) +
        ",\"max_degree_influence\":" + json_number(stats.max_degree_influence) +
        ",\"high_tail_norm_sq\":" + json_number(stats.high_tail_norm_sq) +
        ",\"half_noise_abs_mean\":" + json_number(stats.half_noise_abs_mean) +
        ",\"half_noise_sq_mean\":" + json_number(stats.half_noise_sq_mean) +
        ",\"half_noise_full_sq_mean\":" + json_number(stats.half_noise_full_sq_mean) + "}";
    return report;
}

}  // namespace kcsp
