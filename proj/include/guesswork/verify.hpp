#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "guesswork/ranks.hpp"

namespace guesswork {

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

struct MismatchCount {
    std::uint64_t checked = 0;
    std::uint64_t mismatches = 0;
};

// Exhaustive rank-versus-oracle comparisons over every observation and every
// consistent x at string length n. The oracle runs at delta = 0.25 (BSC) and
// eps = 0.5 (BEC).
MismatchCount compare_bsc_rank_with_oracle(int n, TieBreak tie = TieBreak::ascending_key);
MismatchCount compare_bec_rank_with_oracle(int n, TieBreak tie = TieBreak::ascending_key);
MismatchCount compare_centralized_bsc2_rank_with_oracle(int n,
                                                        TieBreak tie = TieBreak::ascending_key);

struct VerifyOptions {
    int density = 1;       // grid refinement factor; "fine" is 4
    int max_rank_n = 10;
    TieBreak oracle_tie = TieBreak::ascending_key;  // descending injects a fault
};

/// Runs every cross-check suite; a correct build passes all of them.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

}  // namespace guesswork
