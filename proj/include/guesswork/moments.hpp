#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "guesswork/channels.hpp"
#include "guesswork/exponents.hpp"
#include "guesswork/random.hpp"
#include "guesswork/ranks.hpp"

namespace guesswork {

enum class MomentMethod { exact_enum, exact_typesum, monte_carlo };

std::string_view to_string(MomentMethod method) noexcept;

/// One value of E[G^alpha] (or E[min_i G_i^alpha]) at string length n.
struct MomentRecord {
    SchemeSpec scheme;
    ChannelSpec channel;
    double alpha;
    int n;
    double value;
    MomentMethod method;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
};

/// Size caps for the exact routines, chosen so one call stays within seconds
/// on a single core.
struct MomentCaps {
    int single_bec_n = 24;
    int single_bsc_n = 22;
    int decentralized_bsc_n = 22;
    int decentralized_bsc_m = 64;
    int centralized_bsc2_n = 20;
    int decentralized_bec_product = 30;  // n * (m + 1)
    int monte_carlo_n = kMaxBitStringLength;
};

inline constexpr MomentCaps kMomentCaps{};

MomentRecord exact_moment_single_bec(MomentOrder alpha, Prob eps, int n);
MomentRecord exact_moment_single_bsc(MomentOrder alpha, Prob delta, int n);
MomentRecord exact_moment_decentralized_bsc(MomentOrder alpha, Prob delta, AgentCount m, int n);

/// Joint enumeration over every agent's erasure mask and x, each agent using
/// its own canonical list without adapting to the others.
MomentRecord exact_moment_decentralized_bec(MomentOrder alpha, Prob eps, AgentCount m, int n);
MomentRecord exact_moment_centralized_bsc2(MomentOrder alpha, Prob delta, int n);

/// Exact moment for any supported scheme/channel pair. Pooled BEC agents are
/// a single BEC(eps^m); pooled BSC supports m <= 2.
MomentRecord exact_moment(const SchemeSpec& scheme, const ChannelSpec& channel, MomentOrder alpha,
                          int n);

/// Guesswork of one random trial: draws x and every agent's side information
/// from `rng`, then applies the scheme's ranking.
Rank sample_guesswork(const SchemeSpec& scheme, const ChannelSpec& channel, int n, RngStream& rng);

struct MonteCarloOptions {
    std::size_t resamples = 1000;
    double confidence = 0.95;
};

/// Sample mean of G^alpha over seeded trials with a percentile bootstrap
/// interval. Trial t uses stream (seed, "trial", t). The mean is biased low
/// when G^alpha is heavy-tailed relative to the trial count (large n or
/// alpha), since the dominating high ranks are rarely drawn.
MomentRecord mc_estimate_moment(const SchemeSpec& scheme, const ChannelSpec& channel,
                                MomentOrder alpha, int n, std::uint64_t trials, std::uint64_t seed,
                                const MonteCarloOptions& options = {});

struct SlopePoint {
    int n;
    double log2_value;
    std::optional<double> slope;  // log2 E(n+1) - log2 E(n); absent for the last n
    std::optional<double> distance_to_analytic;
};

struct SlopeReport {
    std::vector<SlopePoint> points;
    double analytic_target;
    bool nondecreasing;
    bool nonincreasing;
    [[nodiscard]] bool monotone() const noexcept { return nondecreasing || nonincreasing; }
    [[nodiscard]] std::vector<double> slopes() const;
};

/// Finite-difference growth rates of a run of records at consecutive n.
SlopeReport slope_report(std::span<const MomentRecord> records, const ExponentResult& analytic);

}  // namespace guesswork
