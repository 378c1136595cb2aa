#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "guesswork/channels.hpp"

namespace guesswork {

/// Guesswork position, 1-based.
using Rank = std::uint64_t;

/// C(n, k) for n <= 63; zero when k is outside [0, n].
std::uint64_t binomial(int n, int k);

/// Number of length-n strings with weight below k.
std::uint64_t weight_prefix_count(int n, int k);

/// 0-based position of a word among the words of its weight, in ascending
/// lexicographic order.
std::uint64_t lex_index_in_weight_class(const BitString& word);

/// Bits of `word` at the positions set in `mask`, first position most
/// significant.
std::uint64_t gather_bits(std::uint64_t word, std::uint64_t mask, int length) noexcept;

/// Rank of a noise pattern: weight first, then lexicographic.
Rank bsc_rank(const BitString& z);

/// Rank of x when the positions in `mask` are erased: the erased bits read as
/// a binary number, plus one.
Rank bec_rank(const BitString& x, const ErasureMask& mask);

/// Rank of x under the pooled list of two BSC observations: flips on the
/// agreement positions ordered by weight then lexicographically, with the
/// disagreement positions as the least significant uniform block.
Rank centralized_bsc2_rank(const BitString& x, const BitString& y1, const BitString& y2);

/// Side information seen by the party building the list: one entry per agent
/// whose observation is pooled.
using Observation = std::vector<SideInfo>;

/// Order among candidates of equal posterior. Candidates are compared by a
/// residual key: positions where the observations hold a strict majority
/// contribute (x XOR majority bit), in position order, followed by the raw x
/// bits at positions without a majority.
enum class TieBreak { ascending_key, descending_key };

inline constexpr int kMaxOracleLength = 20;

/// Likelihood p(observation | x), computed from sufficient counts so that
/// equally likely candidates compare exactly equal.
double observation_likelihood(const BitString& x, const Observation& obs,
                              const ChannelSpec& channel);

/// Residual key of a candidate (see TieBreak).
std::uint64_t residual_key(const BitString& x, const Observation& obs);

/// Ranks of all 2^n candidates (indexed by word) under the posterior order.
std::vector<Rank> posterior_ranks(const Observation& obs, const ChannelSpec& channel,
                                  TieBreak tie = TieBreak::ascending_key);

/// Sorts all 2^n candidates by posterior and returns the position of x.
Rank posterior_rank_oracle(const BitString& x, const Observation& obs, const ChannelSpec& channel,
                           TieBreak tie = TieBreak::ascending_key);

}  // namespace guesswork
