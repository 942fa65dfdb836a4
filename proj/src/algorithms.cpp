#include "kcsp/algorithms.hpp"

#include <algorithm>
#include <cmath>

#include "kcsp/fourier.hpp"

namespace kcsp {

BaseAlgorithm make_naive_base(int arity) {
    return {"naive", arity,
            [](const CspInstance& inst, std::uint64_t seed) { return naive_random(inst, seed); }};
}

BaseAlgorithm make_brute_force_base(int arity, std::uint64_t budget) {
    return {"brute", arity, [budget](const CspInstance& inst, std::uint64_t seed) {
                (void)seed;
                return brute_force_optimum(inst, budget).first;
            }};
}

double ExtensionParams::resolved_alpha() const {
    if (alpha >= 0.0) return alpha;
    return static_cast<double>(k - k_prime) / static_cast<double>(k);
}

void ExtensionParams::validate() const {
    if (k_prime < 1 || k <= k_prime)
        throw ValidationError("extension needs k > k' >= 1");
    double a = resolved_alpha();
    if (a < 0.0 || a > 1.0) throw ValidationError("alpha must be in [0, 1]");
}

Assignment naive_random(const CspInstance& inst, std::uint64_t seed) {
    Rng rng(seed);
    Assignment a(static_cast<std::size_t>(inst.n));
    for (int i = 0; i < inst.n; ++i) a[i] = rng.uniform_int(inst.R);
    return a;
}

CspInstance project_instance(const CspInstance& inst, int k_prime) {
    inst.validate();
    int k = inst.uniform_arity();
    if (k_prime < 1 || k_prime >= k)
        throw ValidationError("projection needs 1 <= k' < k, got k'=" + std::to_string(k_prime) +
                              " for arity " + std::to_string(k));
    const int removed = k - k_prime;
    const std::size_t fixings = checked_pow(inst.R, removed);
    const std::size_t new_rows = checked_pow(inst.R, k_prime);
    const double scale = binomial(k, k_prime) * static_cast<double>(fixings);

    CspInstance out;
    out.n = inst.n;
    out.R = inst.R;
    for (const Constraint& c : inst.constraints) {
        // Subset selector over positions of the scope, lexicographic.
        std::vector<int> pick(static_cast<std::size_t>(k_prime));
        for (int i = 0; i < k_prime; ++i) pick[i] = i;
        while (true) {
            std::vector<int> kept(pick.begin(), pick.end());
            std::vector<int> gone;
            for (int pos = 0; pos < k; ++pos)
                if (std::find(kept.begin(), kept.end(), pos) == kept.end()) gone.push_back(pos);

            std::vector<int> full(static_cast<std::size_t>(k));
            std::vector<int> tau(static_cast<std::size_t>(removed));
            for (std::size_t t = 0; t < fixings; ++t) {
                decode_point(t, removed, inst.R, tau);
                Constraint pc;
                pc.weight = c.weight / scale;
                for (int pos : kept) pc.scope.push_back(c.scope[pos]);
                pc.predicate.resize(new_rows);
                std::vector<int> psi(static_cast<std::size_t>(k_prime));
                for (std::size_t row = 0; row < new_rows; ++row) {
                    decode_point(row, k_prime, inst.R, psi);
                    for (int i = 0; i < k_prime; ++i) full[kept[i]] = psi[i];
                    for (int i = 0; i < removed; ++i) full[gone[i]] = tau[i];
                    pc.predicate[row] = c.predicate[point_index(full, inst.R)];
                }
                out.constraints.push_back(std::move(pc));
            }

            // next k'-subset of {0..k-1}
            int i = k_prime - 1;
            while (i >= 0 && pick[i] == i + k - k_prime) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < k_prime; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return out;
}

Assignment blend_assignment(const Assignment& from, double alpha, int R, std::uint64_t seed) {
    if (alpha < 0.0 || alpha > 1.0) throw ValidationError("alpha must be in [0, 1]");
    Rng rng(seed);
    Assignment out = from;
    for (std::size_t i = 0; i < out.size(); ++i) {
        bool redraw = rng.bernoulli(alpha);
        int value = rng.uniform_int(R);  // drawn unconditionally to keep the stream aligned
        if (redraw) out[i] = value;
    }
    return out;
}

Assignment extend_algorithm(const CspInstance& inst, const BaseAlgorithm& base,
                            const ExtensionParams& params, std::uint64_t seed) {
    params.validate();
    if (base.arity != params.k_prime)
        throw ValidationError("base algorithm arity " + std::to_string(base.arity) +
                              " does not match k'=" + std::to_string(params.k_prime));
    if (inst.uniform_arity() != params.k)
        throw ValidationError("instance arity does not match params.k");
    CspInstance projected = project_instance(inst, params.k_prime);
    Assignment from_base = base.solve(projected, derive_seed(seed, 0));
    return blend_assignment(from_base, params.resolved_alpha(), inst.R, derive_seed(seed, 1));
}

double binomial(int n, int r) {
    if (r < 0 || r > n) return 0.0;
    double out = 1.0;
    for (int i = 0; i < r; ++i) out = out * (n - i) / (i + 1);
    return out;
}

double extension_guarantee_factor(int k, int k_prime, double alpha) {
    return binomial(k, k_prime) * std::pow(alpha, k - k_prime) * std::pow(1.0 - alpha, k_prime);
}

}  // namespace kcsp
