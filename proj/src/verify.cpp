#include "guesswork/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "guesswork/exponents.hpp"
#include "guesswork/moments.hpp"

namespace guesswork {

namespace {

std::vector<double> alpha_grid(int density) {
    std::vector<double> out;
    const int steps = 4 * density;  // 0.25 .. 4 on a log2 scale
    for (int i = 0; i <= steps; ++i) out.push_back(std::exp2(-2.0 + 4.0 * i / steps));
    return out;
}

std::vector<double> delta_grid(int density) {
    std::vector<double> out;
    const int steps = 12 * density;
    for (int i = 0; i <= steps; ++i) out.push_back(0.01 + 0.48 * i / steps);
    return out;
}

std::vector<double> eps_grid(int density) {
    std::vector<double> out;
    const int steps = 20 * density;
    for (int i = 0; i <= steps; ++i) out.push_back(static_cast<double>(i) / steps);
    return out;
}

const std::vector<int> kAgentGrid{1, 2, 3, 5, 10};

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

CheckResult rank_check(const std::string& name, int max_n, TieBreak tie,
                       MismatchCount (*compare)(int, TieBreak)) {
    MismatchCount total;
    for (int n = 1; n <= max_n; ++n) {
        const MismatchCount c = compare(n, tie);
        total.checked += c.checked;
        total.mismatches += c.mismatches;
    }
    return {name, total.mismatches == 0,
            std::to_string(total.mismatches) + " mismatches in " + std::to_string(total.checked) +
                " (x, observation) pairs, n <= " + std::to_string(max_n)};
}

CheckResult max_error_check(const std::string& name, double worst, double tol) {
    return {name, worst <= tol, "max deviation " + format_double(worst) + " (tol " + format_double(tol) + ")"};
}

}  // namespace

MismatchCount compare_bsc_rank_with_oracle(int n, TieBreak tie) {
    const ChannelSpec channel = ChannelSpec::bsc(0.25);
    const std::uint64_t count = std::uint64_t{1} << n;
    MismatchCount result;
    for (std::uint64_t y = 0; y < count; ++y) {
        const BitString observed(n, y);
        const std::vector<Rank> oracle = posterior_ranks({BscObservation{observed}}, channel, tie);
        for (std::uint64_t x = 0; x < count; ++x) {
            ++result.checked;
            if (bsc_rank(BitString(n, x) ^ observed) != oracle[x]) ++result.mismatches;
        }
    }
    return result;
}

MismatchCount compare_bec_rank_with_oracle(int n, TieBreak tie) {
    const ChannelSpec channel = ChannelSpec::bec(0.5);
    const std::uint64_t full = full_mask(n);
    MismatchCount result;
    for (std::uint64_t mask = 0; mask <= full; ++mask) {
        const std::uint64_t shown = full & ~mask;
        // Enumerate revealed values as subsets of the shown positions.
        std::uint64_t revealed = 0;
        do {
            const ErasureMask erasures(n, mask);
            const std::vector<Rank> oracle =
                posterior_ranks({BecObservation{erasures, BitString(n, revealed)}}, channel, tie);
            std::uint64_t hidden = 0;
            do {
                const std::uint64_t x = revealed | hidden;
                ++result.checked;
                if (bec_rank(BitString(n, x), erasures) != oracle[x]) ++result.mismatches;
                hidden = (hidden - mask) & mask;
            } while (hidden != 0);
            revealed = (revealed - shown) & shown;
        } while (revealed != 0);
    }
    return result;
}

MismatchCount compare_centralized_bsc2_rank_with_oracle(int n, TieBreak tie) {
    const ChannelSpec channel = ChannelSpec::bsc(0.25);
    const std::uint64_t count = std::uint64_t{1} << n;
    MismatchCount result;
    for (std::uint64_t y1 = 0; y1 < count; ++y1) {
        const BitString first(n, y1);
        for (std::uint64_t y2 = 0; y2 < count; ++y2) {
            const BitString second(n, y2);
            const std::vector<Rank> oracle =
                posterior_ranks({BscObservation{first}, BscObservation{second}}, channel, tie);
            for (std::uint64_t x = 0; x < count; ++x) {
                ++result.checked;
                if (centralized_bsc2_rank(BitString(n, x), first, second) != oracle[x]) {
                    ++result.mismatches;
                }
            }
        }
    }
    return result;
}

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
    const int density = std::max(1, options.density);
    const auto alphas = alpha_grid(density);
    const auto deltas = delta_grid(density);
    const auto epsilons = eps_grid(density);
    std::vector<CheckResult> results;

    results.push_back(rank_check("rank_oracle_bsc", options.max_rank_n, options.oracle_tie,
                                 compare_bsc_rank_with_oracle));
    results.push_back(rank_check("rank_oracle_bec", options.max_rank_n, options.oracle_tie,
                                 compare_bec_rank_with_oracle));
    results.push_back(rank_check("rank_oracle_centralized_bsc2", options.max_rank_n,
                                 options.oracle_tie, compare_centralized_bsc2_rank_with_oracle));

    {
        double worst = 0.0;
        for (double a : alphas) {
            for (double d : deltas) {
                const MomentOrder alpha(a);
                const double opt = exponent_centralized_bsc2(alpha, Prob(d)).value;
                const double log_sum = centralized_bsc2_log_sum(alpha, Prob(d));
                const double generic =
                    exponent_centralized_generic(alpha, ChannelSpec::bsc(d), AgentCount(2)).value;
                worst = std::max({worst, std::abs(opt - log_sum), std::abs(opt - generic),
                                  std::abs(log_sum - generic)});
            }
        }
        results.push_back(max_error_check("centralized_bsc2_three_way", worst, 1e-8));
    }

    {
        double worst = 0.0;
        bool interior = true;
        for (double a : alphas) {
            for (double d : deltas) {
                for (int m : kAgentGrid) {
                    const MomentOrder alpha(a);
                    const auto closed = exponent_decentralized_bsc(alpha, Prob(d), AgentCount(m));
                    const auto dual =
                        exponent_decentralized_bsc_variational(alpha, Prob(d), AgentCount(m));
                    worst = std::max(worst, std::abs(closed.value - dual.value));
                    interior = interior && dual.lambda_star && *dual.lambda_star > d;
                }
            }
        }
        CheckResult r = max_error_check("decentralized_bsc_dual_form", worst, 1e-8);
        r.passed = r.passed && interior;
        if (!interior) r.detail += "; argmax not above delta";
        results.push_back(r);
    }

    {
        int violations = 0;
        int monotone_violations = 0;
        auto check_channel = [&](const ChannelSpec& channel) {
            for (double a : alphas) {
                const MomentOrder alpha(a);
                const double single = exponent(SchemeSpec::single(), channel, alpha).value;
                double previous_c = single;
                double previous_d = single;
                for (int m : kAgentGrid) {
                    const double c = exponent(SchemeSpec::centralized(m), channel, alpha).value;
                    const double d = exponent(SchemeSpec::decentralized(m), channel, alpha).value;
                    if (c > d + 1e-9 || d > single + 1e-9) ++violations;
                    if (c > previous_c + 1e-9 || d > previous_d + 1e-9) ++monotone_violations;
                    previous_c = c;
                    previous_d = d;
                }
            }
        };
        for (double e : epsilons) check_channel(ChannelSpec::bec(e));
        for (double d : deltas) check_channel(ChannelSpec::bsc(d));
        for (double d : {0.0, 0.5}) check_channel(ChannelSpec::bsc(d));
        results.push_back({"ordering_centralized_decentralized_single", violations == 0,
                           std::to_string(violations) + " violations"});
        results.push_back({"monotone_in_agents", monotone_violations == 0,
                           std::to_string(monotone_violations) + " violations"});
    }

    {
        int violations = 0;
        for (double a : alphas) {
            for (double e : epsilons) {
                for (int m : kAgentGrid) {
                    const double value =
                        exponent_decentralized_bec(MomentOrder(a), Prob(e), AgentCount(m)).value;
                    if (value < a * e - 1e-9) ++violations;
                }
            }
        }
        results.push_back({"decentralized_bec_above_alpha_eps", violations == 0,
                           std::to_string(violations) + " violations"});
    }

    {
        // log2(1 + eps^m): convex, and its natural-log derivative is
        // m eps^(m-1) / (1 + eps^m).
        const double step = 1e-3 / density;
        double worst_curvature = 0.0;
        double worst_derivative = 0.0;
        for (int m : {2, 3, 5}) {
            auto curve = [m](double e) { return std::log2(1.0 + std::pow(e, m)); };
            auto natural = [m](double e) { return std::log1p(std::pow(e, m)); };
            const int points = static_cast<int>(std::lround(1.0 / step));
            for (int i = 1; i < points; ++i) {
                const double e = i * step;
                worst_curvature = std::min(worst_curvature, curve(e + step) - 2.0 * curve(e) + curve(e - step));
                const double central = (natural(e + step) - natural(e - step)) / (2.0 * step);
                const double analytic = m * std::pow(e, m - 1) / (1.0 + std::pow(e, m));
                worst_derivative = std::max(worst_derivative, std::abs(central - analytic));
            }
        }
        results.push_back({"centralized_bec_convexity", worst_curvature >= -1e-12,
                           "min second difference " + format_double(worst_curvature)});
        results.push_back(max_error_check("centralized_bec_derivative", worst_derivative, 1e-5));
    }

    {
        bool ok = true;
        for (double d : deltas) {
            const double bound = std::log2(4.0 * d * (1.0 - d) + 1.0);
            const double h = binary_shannon_entropy(Prob(d));
            ok = ok && bound < h - 1e-9;
        }
        for (double d : {0.0, 0.5}) {
            ok = ok && std::abs(std::log2(4.0 * d * (1.0 - d) + 1.0) - binary_shannon_entropy(Prob(d))) < 1e-12;
        }
        results.push_back({"centralized_bsc2_below_shannon", ok, ok ? "strict inside, equal at 0 and 1/2" : "violated"});
    }

    {
        int mismatches = 0;
        for (int n = 1; n <= 10; ++n) {
            for (double p : {0.1, 0.25, 0.5}) {
                const MomentOrder alpha(1.0);
                const double single_bec = exact_moment_single_bec(alpha, Prob(p), n).value;
                const double single_bsc = exact_moment_single_bsc(alpha, Prob(p), n).value;
                if (exact_moment_decentralized_bec(alpha, Prob(p), AgentCount(1), n).value != single_bec) ++mismatches;
                if (exact_moment_decentralized_bsc(alpha, Prob(p), AgentCount(1), n).value != single_bsc) ++mismatches;
                if (exact_moment(SchemeSpec::centralized(1), ChannelSpec::bec(p), alpha, n).value != single_bec) ++mismatches;
                if (exact_moment(SchemeSpec::centralized(1), ChannelSpec::bsc(p), alpha, n).value != single_bsc) ++mismatches;
                const double closed = (std::pow(1.0 + p, n) + 1.0) / 2.0;
                if (std::abs(single_bec - closed) > 1e-12 * closed) ++mismatches;
            }
        }
        results.push_back({"exact_moment_identities", mismatches == 0,
                           std::to_string(mismatches) + " mismatches"});
    }
    return results;
}

}  // namespace guesswork
