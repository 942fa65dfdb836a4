#include "kcsp/games.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace kcsp {

namespace {

std::vector<int> inverse_map(const std::vector<int>& map) {
    std::vector<int> inv(map.size());
    for (std::size_t s = 0; s < map.size(); ++s)
        inv[static_cast<std::size_t>(map[s])] = static_cast<int>(s);
    return inv;
}

void check_proof_for_game(const Game& game, const PcpParams& params, const Proof& proof) {
    proof.validate();
    if (static_cast<int>(proof.tables.size()) != game.num_right)
        throw ValidationError("proof has " + std::to_string(proof.tables.size()) +
                              " tables, game has " + std::to_string(game.num_right) +
                              " right vertices");
    if (proof.n != game.N)
        throw ValidationError("proof tables are over [R]^" + std::to_string(proof.n) +
                              " but the game alphabet is " + std::to_string(game.N));
    if (proof.R != params.R) throw ValidationError("proof alphabet does not match params.R");
}

// g^i_v tables for all i: g^i_v(x) = E over incident edges of 1{h_w(x o pi_{w,v}) = i}.
std::vector<TableFunction> projection_average_tables(const Game& game, const PcpParams& params,
                                                     const Proof& proof, int v,
                                                     const std::vector<std::vector<int>>& adj,
                                                     std::uint64_t budget) {
    const int N = game.N;
    const int R = params.R;
    const std::size_t points = checked_pow(R, N, budget);
    const auto& edges = adj[static_cast<std::size_t>(v)];
    std::vector<TableFunction> g(static_cast<std::size_t>(R), TableFunction::zeros(N, R));
    const double share = 1.0 / static_cast<double>(edges.size());
    std::vector<int> x(static_cast<std::size_t>(N));
    std::vector<int> y(static_cast<std::size_t>(N));
    for (int ei : edges) {
        const GameEdge& e = game.edges[static_cast<std::size_t>(ei)];
        std::vector<int> pi_wv = inverse_map(e.map);
        for (std::size_t idx = 0; idx < points; ++idx) {
            decode_point(idx, N, R, x);
            y = compose_with_permutation(x, pi_wv);
            int value = fold_eval(proof, e.w, y);
            g[static_cast<std::size_t>(value)].values[idx] += share;
        }
    }
    return g;
}

}  // namespace

void Game::validate() const {
    if (num_left < 1 || num_right < 1) throw ValidationError("game needs vertices on both sides");
    if (N < 1) throw ValidationError("game alphabet must be at least 1");
    if (edges.empty()) throw ValidationError("game has no edges");
    if (kind == GameKind::unique) {
        if (d != 1) throw ValidationError("unique game must have d = 1");
    } else {
        if (d < 2) throw ValidationError("d-to-1 game needs d >= 2");
        if (N % d != 0) throw ValidationError("alphabet size must be divisible by d");
    }
    const int right_size = right_alphabet();
    for (std::size_t ei = 0; ei < edges.size(); ++ei) {
        const GameEdge& e = edges[ei];
        const std::string tag = "edge " + std::to_string(ei);
        if (e.v < 0 || e.v >= num_left || e.w < 0 || e.w >= num_right)
            throw ValidationError(tag + ": endpoint out of range");
        if (static_cast<int>(e.map.size()) != N)
            throw ValidationError(tag + ": map must have " + std::to_string(N) + " entries");
        std::vector<int> preimages(static_cast<std::size_t>(right_size), 0);
        for (int img : e.map) {
            if (img < 0 || img >= right_size)
                throw ValidationError(tag + ": map image " + std::to_string(img) +
                                      " outside [0, " + std::to_string(right_size) + ")");
            ++preimages[static_cast<std::size_t>(img)];
        }
        for (int count : preimages)
            if (count != d)
                throw ValidationError(tag + ": a right label has " + std::to_string(count) +
                                      " preimages, expected " + std::to_string(d));
    }
}

std::vector<std::vector<int>> Game::left_adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(num_left));
    for (std::size_t ei = 0; ei < edges.size(); ++ei)
        adj[static_cast<std::size_t>(edges[ei].v)].push_back(static_cast<int>(ei));
    return adj;
}

int Game::require_left_regular() const {
    auto adj = left_adjacency();
    std::size_t deg = adj.empty() ? 0 : adj.front().size();
    for (const auto& inc : adj)
        if (inc.size() != deg || deg == 0)
            throw ValidationError("game must be regular on the left side");
    return static_cast<int>(deg);
}

void Proof::validate() const {
    std::size_t expected = checked_pow(R, n);
    for (std::size_t w = 0; w < tables.size(); ++w) {
        if (tables[w].size() != expected)
            throw ValidationError("proof table " + std::to_string(w) + " has wrong size");
        for (int v : tables[w])
            if (v < 0 || v >= R)
                throw ValidationError("proof table " + std::to_string(w) +
                                      " has a value outside [0, R)");
    }
}

PcpParams PcpParams::defaults(int k, int R) {
    if (k < 2 || R < 2) throw ValidationError("defaults need k >= 2 and R >= 2");
    double ln_r = std::log(static_cast<double>(R));
    if ((k - 1) * ln_r < 1.0)
        throw ValidationError("default rho exceeds 1 for k=" + std::to_string(k) +
                              ", R=" + std::to_string(R) + "; pass rho explicitly");
    PcpParams p;
    p.k = k;
    p.R = R;
    p.rho = 1.0 / std::sqrt((k - 1) * ln_r);
    p.degree = static_cast<int>(std::ceil(10.0 * k * ln_r));
    p.log_delta = -(10.0 + 100.0 * k * ln_r) * ln_r;
    return p;
}

std::vector<int> compose_with_permutation(std::span<const int> x, std::span<const int> pi) {
    std::vector<int> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = x[static_cast<std::size_t>(pi[i])];
    return y;
}

double game_value(const Game& game, const GameAssignment& a) {
    game.validate();
    if (static_cast<int>(a.left.size()) != game.num_left ||
        static_cast<int>(a.right.size()) != game.num_right)
        throw ValidationError("assignment sizes do not match the game");
    const int right_size = game.right_alphabet();
    for (int lbl : a.left)
        if (lbl < 0 || lbl >= game.N) throw ValidationError("left label out of range");
    for (int lbl : a.right)
        if (lbl < 0 || lbl >= right_size) throw ValidationError("right label out of range");
    std::size_t satisfied = 0;
    for (const GameEdge& e : game.edges)
        if (e.map[static_cast<std::size_t>(a.left[static_cast<std::size_t>(e.v)])] ==
            a.right[static_cast<std::size_t>(e.w)])
            ++satisfied;
    return static_cast<double>(satisfied) / static_cast<double>(game.edges.size());
}

std::pair<GameAssignment, double> brute_force_game_value(const Game& game, std::uint64_t budget) {
    game.validate();
    const int right_size = game.right_alphabet();
    double combos = std::pow(static_cast<double>(game.N), game.num_left) *
                    std::pow(static_cast<double>(right_size), game.num_right);
    if (combos > static_cast<double>(budget))
        throw BudgetError("game too large for exhaustive search");
    GameAssignment a;
    a.left.assign(static_cast<std::size_t>(game.num_left), 0);
    a.right.assign(static_cast<std::size_t>(game.num_right), 0);
    GameAssignment best = a;
    double best_value = game_value(game, a);
    // Mixed-radix odometer, right labels fastest: lexicographic order over the
    // concatenated (left, right) label vector.
    const int total = game.num_left + game.num_right;
    auto radix = [&](int pos) { return pos < game.num_left ? game.N : right_size; };
    auto slot = [&](int pos) -> int& {
        return pos < game.num_left ? a.left[static_cast<std::size_t>(pos)]
                                   : a.right[static_cast<std::size_t>(pos - game.num_left)];
    };
    while (true) {
        int pos = total - 1;
        while (pos >= 0 && slot(pos) == radix(pos) - 1) slot(pos--) = 0;
        if (pos < 0) break;
        ++slot(pos);
        double v = game_value(game, a);
        if (v > best_value) {
            best_value = v;
            best = a;
        }
    }
    return {best, best_value};
}

Game reduce_d21_to_ug(const Game& game) {
    game.validate();
    if (game.kind != GameKind::d_to_1) throw ValidationError("input must be a d-to-1 game");
    Game out;
    out.kind = GameKind::unique;
    out.d = 1;
    out.num_left = game.num_left;
    out.num_right = game.num_right;
    out.N = game.N;
    out.edges.reserve(game.edges.size());
    const int right_size = game.right_alphabet();
    for (const GameEdge& e : game.edges) {
        GameEdge ne;
        ne.v = e.v;
        ne.w = e.w;
        ne.map.assign(static_cast<std::size_t>(game.N), 0);
        std::vector<int> seen(static_cast<std::size_t>(right_size), 0);
        // sigma ascending within each preimage class
        for (int sigma = 0; sigma < game.N; ++sigma) {
            int theta = e.map[static_cast<std::size_t>(sigma)];
            ne.map[static_cast<std::size_t>(sigma)] =
                game.d * theta + seen[static_cast<std::size_t>(theta)];
            ++seen[static_cast<std::size_t>(theta)];
        }
        out.edges.push_back(std::move(ne));
    }
    return out;
}

GameAssignment decode_ug_assignment_to_d21(const Game& d21, const GameAssignment& ug_assignment) {
    GameAssignment out;
    out.left = ug_assignment.left;
    out.right.reserve(ug_assignment.right.size());
    for (int lbl : ug_assignment.right) out.right.push_back(lbl / d21.d);
    return out;
}

int fold_eval(const Proof& proof, int w, std::span<const int> x) {
    const auto& table = proof.tables[static_cast<std::size_t>(w)];
    const int shift = x[0];
    std::size_t idx = 0;
    for (int xi : x)
        idx = idx * static_cast<std::size_t>(proof.R) +
              static_cast<std::size_t>((xi - shift + proof.R) % proof.R);
    return (table[idx] + shift) % proof.R;
}

Proof honest_proof(const Game& game, const GameAssignment& a, int R) {
    game.validate();
    Proof proof;
    proof.n = game.N;
    proof.R = R;
    proof.tables.resize(static_cast<std::size_t>(game.num_right));
    std::size_t points = checked_pow(R, game.N);
    std::vector<int> x(static_cast<std::size_t>(game.N));
    for (int w = 0; w < game.num_right; ++w) {
        int coord = a.right[static_cast<std::size_t>(w)];
        if (coord < 0 || coord >= game.N) throw ValidationError("label out of range for long code");
        auto& table = proof.tables[static_cast<std::size_t>(w)];
        table.resize(points);
        for (std::size_t idx = 0; idx < points; ++idx) {
            decode_point(idx, game.N, R, x);
            table[idx] = x[static_cast<std::size_t>(coord)];
        }
    }
    return proof;
}

Proof random_proof(int num_right, int n, int R, std::uint64_t seed) {
    Proof proof;
    proof.n = n;
    proof.R = R;
    std::size_t points = checked_pow(R, n);
    Rng rng(seed);
    proof.tables.resize(static_cast<std::size_t>(num_right));
    for (auto& table : proof.tables) {
        table.resize(points);
        for (auto& v : table) v = rng.uniform_int(R);
    }
    return proof;
}

Proof constant_proof(int num_right, int n, int R, int value) {
    if (value < 0 || value >= R) throw ValidationError("constant value out of range");
    Proof proof;
    proof.n = n;
    proof.R = R;
    proof.tables.assign(static_cast<std::size_t>(num_right),
                        std::vector<int>(checked_pow(R, n), value));
    return proof;
}

std::size_t csp_variable_count(const Game& game, const PcpParams& params) {
    return static_cast<std::size_t>(game.num_right) * checked_pow(params.R, game.N - 1);
}

Assignment proof_to_csp_assignment(const Game& game, const PcpParams& params, const Proof& proof) {
    check_proof_for_game(game, params, proof);
    const std::size_t reps = checked_pow(params.R, game.N - 1);
    Assignment a;
    a.reserve(static_cast<std::size_t>(game.num_right) * reps);
    std::vector<int> x(static_cast<std::size_t>(game.N));
    for (int w = 0; w < game.num_right; ++w) {
        for (std::size_t ridx = 0; ridx < reps; ++ridx) {
            x[0] = 0;
            decode_point(ridx, game.N - 1, params.R,
                         std::span<int>(x).subspan(1));
            a.push_back(fold_eval(proof, w, x));
        }
    }
    return a;
}

CspInstance reduce_ug_to_csp(const Game& game, const PcpParams& params, std::uint64_t seed,
                             std::uint64_t budget) {
    game.validate();
    if (game.kind != GameKind::unique) throw ValidationError("PCP reduction needs a unique game");
    if (params.rho < 0.0 || params.rho > 1.0) throw ValidationError("rho must be in [0, 1]");
    if (params.k < 1) throw ValidationError("k must be at least 1");
    const int deg = game.require_left_regular();
    const int N = game.N;
    const int R = params.R;
    const int k = params.k;
    const std::size_t reps = checked_pow(R, N - 1, budget);
    const std::size_t num_vars = static_cast<std::size_t>(game.num_right) * reps;
    if (num_vars > budget) throw BudgetError("too many proof variables for the budget");
    auto adj = game.left_adjacency();

    CspInstance out;
    out.n = static_cast<int>(num_vars);
    out.R = R;

    // Builds the constraint for one verifier tuple: query i reads CSP
    // variable vars[i] and accepts iff all (value + shift) agree mod R.
    auto make_constraint = [&](const std::vector<int>& vars, const std::vector<int>& shifts,
                               double weight) {
        Constraint c;
        c.weight = weight;
        std::vector<int> pos(vars.size());  // query -> position in the deduped scope
        for (std::size_t i = 0; i < vars.size(); ++i) {
            auto it = std::find(c.scope.begin(), c.scope.end(), vars[i]);
            if (it == c.scope.end()) {
                pos[i] = static_cast<int>(c.scope.size());
                c.scope.push_back(vars[i]);
            } else {
                pos[i] = static_cast<int>(it - c.scope.begin());
            }
        }
        std::size_t rows = checked_pow(R, static_cast<int>(c.scope.size()));
        c.predicate.resize(rows);
        std::vector<int> u(c.scope.size());
        for (std::size_t row = 0; row < rows; ++row) {
            decode_point(row, static_cast<int>(c.scope.size()), R, u);
            int first = (u[static_cast<std::size_t>(pos[0])] + shifts[0]) % R;
            bool ok = true;
            for (std::size_t i = 1; i < vars.size() && ok; ++i)
                ok = (u[static_cast<std::size_t>(pos[i])] + shifts[i]) % R == first;
            c.predicate[row] = ok ? 1 : 0;
        }
        return c;
    };

    std::vector<std::vector<int>> pts(static_cast<std::size_t>(k),
                                      std::vector<int>(static_cast<std::size_t>(N)));
    std::vector<int> y(static_cast<std::size_t>(N));
    std::vector<int> vars(static_cast<std::size_t>(k));
    std::vector<int> shifts(static_cast<std::size_t>(k));

    auto queries_for = [&](const std::vector<const std::vector<int>*>& inv_maps,
                           const std::vector<int>& ws) {
        for (int i = 0; i < k; ++i) {
            const auto& inv = *inv_maps[static_cast<std::size_t>(i)];
            y = compose_with_permutation(pts[static_cast<std::size_t>(i)], inv);
            int shift = y[0];
            std::size_t ridx = 0;
            for (int j = 1; j < N; ++j)
                ridx = ridx * static_cast<std::size_t>(R) +
                       static_cast<std::size_t>((y[static_cast<std::size_t>(j)] - shift + R) % R);
            vars[static_cast<std::size_t>(i)] =
                static_cast<int>(static_cast<std::size_t>(ws[static_cast<std::size_t>(i)]) * reps +
                                 ridx);
            shifts[static_cast<std::size_t>(i)] = shift;
        }
    };

    if (params.mode == PcpParams::Mode::exact) {
        const std::size_t points = checked_pow(R, N);
        double tuple_count = static_cast<double>(game.num_left) *
                             std::pow(static_cast<double>(deg), k) *
                             std::pow(static_cast<double>(points), k);
        if (tuple_count > static_cast<double>(budget))
            throw BudgetError("exact verifier enumeration exceeds the budget");

        // Joint weight of one column (x^(1)_j .. x^(k)_j) with z marginalized:
        // (1/R) sum_z prod_i [rho 1{x_i = z} + (1-rho)/R].
        const std::size_t column_count = checked_pow(R, k);
        std::vector<double> column_weight(column_count);
        std::vector<int> col(static_cast<std::size_t>(k));
        const double miss = (1.0 - params.rho) / R;
        for (std::size_t ci = 0; ci < column_count; ++ci) {
            decode_point(ci, k, R, col);
            double total = 0.0;
            for (int z = 0; z < R; ++z) {
                double prod = 1.0;
                for (int i = 0; i < k; ++i)
                    prod *= (col[static_cast<std::size_t>(i)] == z) ? params.rho + miss : miss;
                total += prod;
            }
            column_weight[ci] = total / R;
        }

        std::map<std::pair<std::vector<int>, std::vector<std::uint8_t>>, double> merged;
        std::vector<int> ws(static_cast<std::size_t>(k));
        std::vector<const std::vector<int>*> inv_maps(static_cast<std::size_t>(k));
        std::vector<std::vector<int>> inv_cache(game.edges.size());
        for (std::size_t ei = 0; ei < game.edges.size(); ++ei)
            inv_cache[ei] = inverse_map(game.edges[ei].map);

        const double base_weight = 1.0 / (static_cast<double>(game.num_left) *
                                          std::pow(static_cast<double>(deg), k));
        std::vector<int> edge_choice(static_cast<std::size_t>(k), 0);
        std::size_t x_total = 1;  // points^k, within budget by the tuple check
        for (int i = 0; i < k; ++i) x_total *= points;

        for (int v = 0; v < game.num_left; ++v) {
            std::fill(edge_choice.begin(), edge_choice.end(), 0);
            while (true) {
                for (int i = 0; i < k; ++i) {
                    int ei = adj[static_cast<std::size_t>(v)]
                                [static_cast<std::size_t>(edge_choice[static_cast<std::size_t>(i)])];
                    ws[static_cast<std::size_t>(i)] = game.edges[static_cast<std::size_t>(ei)].w;
                    inv_maps[static_cast<std::size_t>(i)] = &inv_cache[static_cast<std::size_t>(ei)];
                }
                for (std::size_t t = 0; t < x_total; ++t) {
                    std::size_t rest = t;
                    for (int i = k - 1; i >= 0; --i) {
                        decode_point(rest % points, N, R, pts[static_cast<std::size_t>(i)]);
                        rest /= points;
                    }
                    double w = base_weight;
                    for (int j = 0; j < N; ++j) {
                        std::size_t ci = 0;
                        for (int i = 0; i < k; ++i)
                            ci = ci * static_cast<std::size_t>(R) +
                                 static_cast<std::size_t>(
                                     pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
                        w *= column_weight[ci];
                    }
                    queries_for(inv_maps, ws);
                    Constraint c = make_constraint(vars, shifts, w);
                    merged[{std::move(c.scope), std::move(c.predicate)}] += w;
                }
                int i = k - 1;
                while (i >= 0 && edge_choice[static_cast<std::size_t>(i)] == deg - 1)
                    edge_choice[static_cast<std::size_t>(i--)] = 0;
                if (i < 0) break;
                ++edge_choice[static_cast<std::size_t>(i)];
            }
        }
        for (auto& [key, weight] : merged) {
            Constraint c;
            c.scope = key.first;
            c.predicate = key.second;
            c.weight = weight;
            out.constraints.push_back(std::move(c));
        }
    } else {
        if (params.samples < 1) throw ValidationError("sampled mode needs at least one sample");
        std::vector<int> z(static_cast<std::size_t>(N));
        for (std::int64_t s = 0; s < params.samples; ++s) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
            int v = rng.uniform_int(game.num_left);
            std::vector<int> ws(static_cast<std::size_t>(k));
            std::vector<const std::vector<int>*> inv_maps(static_cast<std::size_t>(k));
            std::vector<std::vector<int>> local_inv(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) {
                int ei = adj[static_cast<std::size_t>(v)]
                            [static_cast<std::size_t>(rng.uniform_int(deg))];
                ws[static_cast<std::size_t>(i)] = game.edges[static_cast<std::size_t>(ei)].w;
                local_inv[static_cast<std::size_t>(i)] =
                    inverse_map(game.edges[static_cast<std::size_t>(ei)].map);
                inv_maps[static_cast<std::size_t>(i)] = &local_inv[static_cast<std::size_t>(i)];
            }
            for (int j = 0; j < N; ++j) z[static_cast<std::size_t>(j)] = rng.uniform_int(R);
            for (int i = 0; i < k; ++i) pts[static_cast<std::size_t>(i)] = noise_sample(z, R, params.rho, rng);
            queries_for(inv_maps, ws);
            out.constraints.push_back(
                make_constraint(vars, shifts, 1.0 / static_cast<double>(params.samples)));
        }
    }
    out.validate();
    return out;
}

std::vector<double> verifier_vertex_sums(const Game& game, const PcpParams& params,
                                         const Proof& proof, std::uint64_t budget) {
    game.validate();
    if (game.kind != GameKind::unique) throw ValidationError("verifier needs a unique game");
    check_proof_for_game(game, params, proof);
    game.require_left_regular();
    auto adj = game.left_adjacency();
    Basis basis = build_basis(params.R);
    std::vector<double> sums(static_cast<std::size_t>(game.num_left), 0.0);
    for (int v = 0; v < game.num_left; ++v) {
        auto tables = projection_average_tables(game, params, proof, v, adj, budget);
        Accumulator vertex;
        for (const TableFunction& g : tables) {
            TableFunction noisy = inverse_transform(apply_noise(transform(g, basis), params.rho));
            Accumulator acc;
            for (double val : noisy.values)
                acc.add(std::pow(val, params.k));
            vertex.add(acc.value() / static_cast<double>(noisy.values.size()));
        }
        sums[static_cast<std::size_t>(v)] = vertex.value();
    }
    return sums;
}

double verifier_acceptance_exact(const Game& game, const PcpParams& params, const Proof& proof,
                                 std::uint64_t budget) {
    auto sums = verifier_vertex_sums(game, params, proof, budget);
    Accumulator acc;
    for (double s : sums) acc.add(s);
    return acc.value() / static_cast<double>(sums.size());
}

McEstimate verifier_acceptance_mc(const Game& game, const PcpParams& params, const Proof& proof,
                                  std::int64_t trials, std::uint64_t seed, int threads) {
    game.validate();
    if (game.kind != GameKind::unique) throw ValidationError("verifier needs a unique game");
    check_proof_for_game(game, params, proof);
    const int deg = game.require_left_regular();
    if (trials < 1) throw ValidationError("need at least one trial");
    auto adj = game.left_adjacency();
    std::vector<std::vector<int>> inv_cache(game.edges.size());
    for (std::size_t ei = 0; ei < game.edges.size(); ++ei)
        inv_cache[ei] = inverse_map(game.edges[ei].map);

    const int N = game.N;
    std::vector<std::uint8_t> accepted(static_cast<std::size_t>(trials), 0);
    parallel_for_index(trials, threads, [&](std::int64_t t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        int v = rng.uniform_int(game.num_left);
        std::vector<int> z(static_cast<std::size_t>(N));
        std::vector<int> edge_ids(static_cast<std::size_t>(params.k));
        for (int i = 0; i < params.k; ++i)
            edge_ids[static_cast<std::size_t>(i)] =
                adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(rng.uniform_int(deg))];
        for (int j = 0; j < N; ++j) z[static_cast<std::size_t>(j)] = rng.uniform_int(params.R);
        std::vector<int> y(static_cast<std::size_t>(N));
        int first = -1;
        bool ok = true;
        for (int i = 0; i < params.k; ++i) {
            std::vector<int> x = noise_sample(z, params.R, params.rho, rng);
            const GameEdge& e = game.edges[static_cast<std::size_t>(
                edge_ids[static_cast<std::size_t>(i)])];
            const auto& inv = inv_cache[static_cast<std::size_t>(
                edge_ids[static_cast<std::size_t>(i)])];
            y = compose_with_permutation(x, inv);
            int value = fold_eval(proof, e.w, y);
            if (i == 0)
                first = value;
            else
                ok = ok && value == first;
        }
        accepted[static_cast<std::size_t>(t)] = ok ? 1 : 0;
    });
    std::size_t wins = 0;
    for (std::uint8_t b : accepted) wins += b;
    McEstimate est;
    est.trials = trials;
    est.value = static_cast<double>(wins) / static_cast<double>(trials);
    est.stderr_ = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(trials));
    return est;
}

std::vector<int> candidate_labels(const Proof& proof, int w, const PcpParams& params) {
    Basis basis = build_basis(proof.R);
    const std::size_t points = checked_pow(proof.R, proof.n);
    // projections of the folded function
    std::vector<TableFunction> proj(static_cast<std::size_t>(proof.R),
                                    TableFunction::zeros(proof.n, proof.R));
    std::vector<int> x(static_cast<std::size_t>(proof.n));
    for (std::size_t idx = 0; idx < points; ++idx) {
        decode_point(idx, proof.n, proof.R, x);
        proj[static_cast<std::size_t>(fold_eval(proof, w, x))].values[idx] = 1.0;
    }
    std::vector<FourierRep> reps;
    reps.reserve(static_cast<std::size_t>(proof.R));
    for (int i = 0; i < proof.R; ++i)
        reps.push_back(transform(proj[static_cast<std::size_t>(i)], basis));
    const double half_threshold = params.log_delta - std::log(2.0);
    std::vector<int> cand;
    for (int j = 0; j < proof.n; ++j) {
        for (int i = 0; i < proof.R; ++i) {
            if (influence_exceeds(degree_influence(reps[static_cast<std::size_t>(i)], j,
                                                   params.degree),
                                  half_threshold, /*strict=*/false)) {
                cand.push_back(j);
                break;
            }
        }
    }
    return cand;
}

GameAssignment influence_decode(const Game& game, const PcpParams& params, const Proof& proof,
                                std::uint64_t seed, std::uint64_t budget) {
    game.validate();
    if (game.kind != GameKind::unique) throw ValidationError("decoder needs a unique game");
    check_proof_for_game(game, params, proof);
    game.require_left_regular();
    auto adj = game.left_adjacency();
    Basis basis = build_basis(params.R);

    GameAssignment out;
    out.left.resize(static_cast<std::size_t>(game.num_left));
    out.right.resize(static_cast<std::size_t>(game.num_right));

    for (int v = 0; v < game.num_left; ++v) {
        auto tables = projection_average_tables(game, params, proof, v, adj, budget);
        int label = -1;
        // scan order (projection, coordinate), lexicographic
        for (int i = 0; i < params.R && label < 0; ++i) {
            FourierRep rep = transform(tables[static_cast<std::size_t>(i)], basis);
            for (int j = 0; j < game.N && label < 0; ++j)
                if (influence_exceeds(degree_influence(rep, j, params.degree), params.log_delta,
                                      /*strict=*/true))
                    label = j;
        }
        if (label < 0) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(v)));
            label = rng.uniform_int(game.N);
        }
        out.left[static_cast<std::size_t>(v)] = label;
    }
    for (int w = 0; w < game.num_right; ++w) {
        std::vector<int> cand = candidate_labels(proof, w, params);
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(game.num_left + w)));
        if (cand.empty())
            out.right[static_cast<std::size_t>(w)] = rng.uniform_int(game.N);
        else
            out.right[static_cast<std::size_t>(w)] =
                cand[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(cand.size())))];
    }
    return out;
}

namespace {

std::vector<int> random_permutation(int n, Rng& rng) {
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i)
        std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(rng.uniform_int(i + 1))]);
    return p;
}

}  // namespace

Game generate_random_unique_game(int num_left, int num_right, int N, int edges_per_left,
                                 std::uint64_t seed) {
    if (num_left < 1 || num_right < 1 || N < 1 || edges_per_left < 1)
        throw ValidationError("bad unique game parameters");
    Game g;
    g.kind = GameKind::unique;
    g.num_left = num_left;
    g.num_right = num_right;
    g.N = N;
    Rng rng(seed);
    for (int v = 0; v < num_left; ++v) {
        for (int t = 0; t < edges_per_left; ++t) {
            GameEdge e;
            e.v = v;
            e.w = rng.uniform_int(num_right);
            e.map = random_permutation(N, rng);
            g.edges.push_back(std::move(e));
        }
    }
    g.validate();
    return g;
}

Game generate_random_d21_game(int num_left, int num_right, int N, int d, int edges_per_left,
                              std::uint64_t seed) {
    if (d < 2 || N % d != 0) throw ValidationError("need d >= 2 dividing N");
    if (num_left < 1 || num_right < 1 || edges_per_left < 1)
        throw ValidationError("bad d-to-1 game parameters");
    Game g;
    g.kind = GameKind::d_to_1;
    g.d = d;
    g.num_left = num_left;
    g.num_right = num_right;
    g.N = N;
    Rng rng(seed);
    for (int v = 0; v < num_left; ++v) {
        for (int t = 0; t < edges_per_left; ++t) {
            GameEdge e;
            e.v = v;
            e.w = rng.uniform_int(num_right);
            std::vector<int> p = random_permutation(N, rng);
            e.map.resize(static_cast<std::size_t>(N));
            for (int idx = 0; idx < N; ++idx)
                e.map[static_cast<std::size_t>(p[static_cast<std::size_t>(idx)])] = idx / d;
            g.edges.push_back(std::move(e));
        }
    }
    g.validate();
    return g;
}

std::pair<Game, GameAssignment> generate_satisfiable_d21_game(int num_left, int num_right, int N,
                                                              int d, int edges_per_left,
                                                              std::uint64_t seed) {
    Game g = generate_random_d21_game(num_left, num_right, N, d, edges_per_left, seed);
    Rng rng(derive_seed(seed, 0x5a7));
    GameAssignment planted;
    planted.left.resize(static_cast<std::size_t>(num_left));
    planted.right.resize(static_cast<std::size_t>(num_right));
    for (int v = 0; v < num_left; ++v) planted.left[static_cast<std::size_t>(v)] = rng.uniform_int(N);
    for (int w = 0; w < num_right; ++w)
        planted.right[static_cast<std::size_t>(w)] = rng.uniform_int(N / d);
    for (GameEdge& e : g.edges) {
        int sigma = planted.left[static_cast<std::size_t>(e.v)];
        int want = planted.right[static_cast<std::size_t>(e.w)];
        if (e.map[static_cast<std::size_t>(sigma)] == want) continue;
        // swap images with the first preimage of the wanted label
        for (int s2 = 0; s2 < N; ++s2) {
            if (e.map[static_cast<std::size_t>(s2)] == want) {
                std::swap(e.map[static_cast<std::size_t>(sigma)],
                          e.map[static_cast<std::size_t>(s2)]);
                break;
            }
        }
    }
    g.validate();
    return {g, planted};
}

}  // namespace kcsp
