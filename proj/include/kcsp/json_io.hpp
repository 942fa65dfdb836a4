#pragma once

#include <string>

#include "kcsp/csp.hpp"
#include "kcsp/dictator_test.hpp"
#include "kcsp/fourier.hpp"
#include "kcsp/games.hpp"

namespace kcsp {

// Instance file: {"n": int, "R": int, "constraints": [{"weight", "scope", "predicate"}]}.
std::string instance_to_json(const CspInstance& inst);
CspInstance instance_from_json(const std::string& text);

// Game file: {"kind": "unique"|"d-to-1", "d"?, "V", "W", "N", "edges":
// [{"v", "w", "map"}]} with map[sigma-1] = pi(sigma) in 1-based label values.
std::string game_to_json(const Game& game);
Game game_from_json(const std::string& text);

// Proof file: {"R": int, "tables": {"<w>": [values]}} with 0-based values.
std::string proof_to_json(const Proof& proof);
Proof proof_from_json(const std::string& text);

// Function file: {"n": int, "R": int, "table": [int]}.
std::string rfunction_to_json(const RFunction& f);
RFunction rfunction_from_json(const std::string& text);

// Debug dump of coefficients above 1e-12, keyed by the multi-index.
std::string fourier_rep_to_json(const FourierRep& rep);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace kcsp
