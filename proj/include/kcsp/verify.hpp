#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kcsp {

struct VerifyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyResult {
    std::vector<VerifyCheck> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

// Cross-module consistency suite: transform round trips, exact-vs-Monte-Carlo
// agreement for the dictator test and the PCP verifier, the CSP-vs-verifier
// measure equality, per-vertex projection-sum bounds, and hypercontractivity
// margins. Fails loudly; used by the CLI `verify` subcommand.
VerifyResult run_verify_suite(std::uint64_t seed, int threads);

std::string verify_report_text(const VerifyResult& result);

}  // namespace kcsp
