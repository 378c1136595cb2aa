#pragma once

#include <optional>
#include <string_view>

#include "guesswork/channels.hpp"
#include "guesswork/infomath.hpp"

namespace guesswork {

inline constexpr double kMaxMomentOrder = 64.0;

/// Moment order alpha in (0, 64]. Larger orders tilt beyond what doubles resolve.
class MomentOrder {
public:
    explicit MomentOrder(double alpha);
    [[nodiscard]] double value() const noexcept { return alpha_; }

private:
    double alpha_;
};

enum class Scheme { single, centralized, decentralized };

std::string_view to_string(Scheme scheme) noexcept;
Scheme parse_scheme(std::string_view text);

/// Attack scheme. A single agent always has m = 1.
class SchemeSpec {
public:
    SchemeSpec(Scheme mode, AgentCount m);
    static SchemeSpec single() { return {Scheme::single, AgentCount(1)}; }
    static SchemeSpec centralized(int m) { return {Scheme::centralized, AgentCount(m)}; }
    static SchemeSpec decentralized(int m) { return {Scheme::decentralized, AgentCount(m)}; }

    [[nodiscard]] Scheme mode() const noexcept { return mode_; }
    [[nodiscard]] AgentCount agents() const noexcept { return m_; }
    [[nodiscard]] int m() const noexcept { return m_.value(); }

    friend bool operator==(const SchemeSpec&, const SchemeSpec&) = default;

private:
    Scheme mode_;
    AgentCount m_;
};

enum class ExponentMethod { closed_form, optimizer, single_letter };

std::string_view to_string(ExponentMethod method) noexcept;

/// Exponent in bits per symbol. When lambda_star is present the objective of
/// the producing optimization reproduces value at lambda_star.
struct ExponentResult {
    double value;
    std::optional<double> lambda_star;
    ExponentMethod method;
};

// Objectives maximized over the type fraction lambda in [0, 1].

/// alpha*lambda - weight * D(lambda || reference). lambda is the erased fraction.
double bec_objective(MomentOrder alpha, Prob reference, double weight, double lambda);

/// Objective for two pooled BSC observations; lambda is the fraction of
/// positions where the agents disagree (treated as erasures).
double centralized_bsc2_objective(MomentOrder alpha, Prob delta, double lambda);

/// alpha * H(min(lambda, 1/2)) - f(lambda, m), where lambda is the flip
/// fraction of the luckiest agent and f charges m*D(lambda||delta) above delta
/// and D(lambda||delta) at or below it.
double decentralized_bsc_objective(MomentOrder alpha, Prob delta, AgentCount m, double lambda);

/// log2(weight * 2^high + (1 - weight) * 2^low), the value of
/// sup_lambda (lambda*high + (1-lambda)*low - D(lambda||weight)).
double tilted_log_sum(double weight, double high, double low);

/// Flip probability on the positions where two BSC(delta) outputs agree.
double agreement_flip_prob(Prob delta);

// Exponents.

ExponentResult exponent_single_bsc(MomentOrder alpha, Prob delta);
ExponentResult exponent_single_bec(MomentOrder alpha, Prob eps);
ExponentResult exponent_centralized_bec(MomentOrder alpha, Prob eps, AgentCount m);
ExponentResult exponent_decentralized_bec(MomentOrder alpha, Prob eps, AgentCount m);
ExponentResult exponent_centralized_bsc2(MomentOrder alpha, Prob delta);

/// Closed log-sum form of the two-agent centralized BSC exponent.
double centralized_bsc2_log_sum(MomentOrder alpha, Prob delta);

/// alpha * H_{1/(1+alpha)}(X | Y_1..Y_m) of the collapsed BSC channel. BSC only.
ExponentResult exponent_centralized_generic(MomentOrder alpha, const ChannelSpec& channel,
                                            AgentCount m);

/// alpha * H_{m/(alpha+m)}(delta).
ExponentResult exponent_decentralized_bsc(MomentOrder alpha, Prob delta, AgentCount m);

/// The same exponent through its variational form.
ExponentResult exponent_decentralized_bsc_variational(MomentOrder alpha, Prob delta,
                                                      AgentCount m);

/// Exponent of a uniform block of fraction lambda followed by an i.i.d.
/// Bernoulli(p) block.
double concat_exponent(MomentOrder alpha, Prob lambda, Prob p);

/// Dispatches to the analytic exponent for any scheme/channel pair.
ExponentResult exponent(const SchemeSpec& scheme, const ChannelSpec& channel, MomentOrder alpha);

struct LogGuessworkRate {
    double closed_form;  // beta -> 1 limit
    double numeric;      // Richardson extrapolation of E_alpha / alpha at alpha = 1e-6
};

/// lim_{alpha->0} E_alpha / alpha, the growth rate of E[log G].
LogGuessworkRate expected_log_guesswork_rate(const SchemeSpec& scheme, const ChannelSpec& channel);

}  // namespace guesswork
