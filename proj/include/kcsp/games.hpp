#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "kcsp/csp.hpp"
#include "kcsp/fourier.hpp"

namespace kcsp {

enum class GameKind { unique, d_to_1 };

// One edge of the bipartite constraint graph. map[sigma] is the image of left
// label sigma; a bijection on [0,N) for unique games, a d-to-1 map onto
// [0,N/d) otherwise.
struct GameEdge {
    int v = 0;
    int w = 0;
    std::vector<int> map;
};

struct Game {
    GameKind kind = GameKind::unique;
    int d = 1;  // preimage size; 1 for unique games
    int num_left = 0;
    int num_right = 0;
    int N = 2;  // left alphabet size
    std::vector<GameEdge> edges;

    int right_alphabet() const { return kind == GameKind::unique ? N : N / d; }
    void validate() const;

    // Edge indices incident to each left vertex.
    std::vector<std::vector<int>> left_adjacency() const;

    // The PCP operations assume every left vertex has the same degree.
    int require_left_regular() const;
};

struct GameAssignment {
    std::vector<int> left;   // values in [0, N)
    std::vector<int> right;  // values in [0, right_alphabet)
};

// Long-code proof: one raw table per right vertex, h~_w: [0,R)^n -> [0,R)
// with n the game alphabet. All verifier access goes through folding.
struct Proof {
    int n = 0;
    int R = 2;
    std::vector<std::vector<int>> tables;

    void validate() const;
};

struct PcpParams {
    int k = 2;
    int R = 3;
    double rho = 0.5;
    int degree = 1;
    double log_delta = 0.0;  // natural log of the influence threshold
    enum class Mode { exact, sampled } mode = Mode::exact;
    std::int64_t samples = 10'000;

    // rho = 1/sqrt((k-1) ln R), degree = ceil(10 k ln R),
    // ln delta = -(10 + 100 k ln R) ln R. delta itself underflows doubles for
    // moderate k and R, so it is carried in log space throughout.
    static PcpParams defaults(int k, int R);
};

// True when a (nonnegative) influence exceeds the log-space threshold. Mass
// below 1e-12 is transform roundoff, not influence; the schedule's delta is
// far smaller than that, so thresholds are effectively floored there.
inline bool influence_exceeds(double inf, double log_threshold, bool strict) {
    if (inf <= 1e-12) return false;
    double li = std::log(inf);
    return strict ? li > log_threshold : li >= log_threshold;
}

// (x o pi)_i = x_{pi(i)}: coordinate permutation used by the verifier.
std::vector<int> compose_with_permutation(std::span<const int> x, std::span<const int> pi);

double game_value(const Game& game, const GameAssignment& a);
std::pair<GameAssignment, double> brute_force_game_value(const Game& game,
                                                         std::uint64_t budget = kDefaultBudget);

// Spreads each d-to-1 constraint into a bijection: the ascending preimages
// sigma_1 < ... < sigma_d of theta map to d*theta, ..., d*theta + d - 1.
Game reduce_d21_to_ug(const Game& game);

// Right-vertex decoding matching reduce_d21_to_ug: theta = floor(label / d).
GameAssignment decode_ug_assignment_to_d21(const Game& d21, const GameAssignment& ug_assignment);

// Folded table access: h_w(x) = h~_w(x - x_0 * 1) + x_0 (mod R). Balanced for
// every raw table, and fixes dictators.
int fold_eval(const Proof& proof, int w, std::span<const int> x);

// The folded long code of an assignment: h~_w(x) = x_{labels[w]}.
Proof honest_proof(const Game& game, const GameAssignment& a, int R);

Proof random_proof(int num_right, int n, int R, std::uint64_t seed);
Proof constant_proof(int num_right, int n, int R, int value);

// CSP variables are the folded proof entries at representatives (x_0 = 0),
// indexed w * R^(n-1) + row(x_1..x_{n-1}).
std::size_t csp_variable_count(const Game& game, const PcpParams& params);
Assignment proof_to_csp_assignment(const Game& game, const PcpParams& params, const Proof& proof);

// The k-query verifier as a weighted CSP. Exact mode enumerates verifier
// tuples (v, w_1..w_k, query points) with the z/noise distribution folded
// analytically into the weights; sampled mode draws params.samples tuples of
// weight 1/m each. Identical (scope, predicate) constraints are merged in
// exact mode.
CspInstance reduce_ug_to_csp(const Game& game, const PcpParams& params, std::uint64_t seed,
                             std::uint64_t budget = kDefaultBudget);

// Per-left-vertex sum_i E_z[(T_rho g^i_v(z))^k] where
// g^i_v(x) = E_{w ~ v}[h^i_w(x o pi_{w,v})]; at most 1 for any proof.
std::vector<double> verifier_vertex_sums(const Game& game, const PcpParams& params,
                                         const Proof& proof,
                                         std::uint64_t budget = kDefaultBudget);

double verifier_acceptance_exact(const Game& game, const PcpParams& params, const Proof& proof,
                                 std::uint64_t budget = kDefaultBudget);

struct McEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::int64_t trials = 0;
};

McEstimate verifier_acceptance_mc(const Game& game, const PcpParams& params, const Proof& proof,
                                  std::int64_t trials, std::uint64_t seed, int threads = 1);

// Labels left vertices by the first (projection, coordinate) with degree-d
// influence of g^i_v above delta, and right vertices uniformly from
// Cand[w] = { j : exists i with Inf_j^{<=d}[h^i_w] >= delta/2 }. Falls back
// to a uniform label when no coordinate qualifies.
GameAssignment influence_decode(const Game& game, const PcpParams& params, const Proof& proof,
                                std::uint64_t seed, std::uint64_t budget = kDefaultBudget);

std::vector<int> candidate_labels(const Proof& proof, int w, const PcpParams& params);

// Generators (left-regular by construction: edges_per_left edges out of each
// left vertex, targets and maps drawn uniformly).
Game generate_random_unique_game(int num_left, int num_right, int N, int edges_per_left,
                                 std::uint64_t seed);
Game generate_random_d21_game(int num_left, int num_right, int N, int d, int edges_per_left,
                              std::uint64_t seed);

// Random d-to-1 game together with a planted perfectly satisfying assignment.
std::pair<Game, GameAssignment> generate_satisfiable_d21_game(int num_left, int num_right, int N,
                                                              int d, int edges_per_left,
                                                              std::uint64_t seed);

}  // namespace kcsp
