#include "guesswork/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace guesswork {

namespace {

double require_bsc_range(Prob delta) {
    if (delta.value() > 0.5) throw std::invalid_argument("delta must be at most 1/2");
    return delta.value();
}

ExponentResult from_optimizer(const Maximum& best) {
    return {best.value, best.argmax, ExponentMethod::optimizer};
}

RenyiOrder arikan_order(MomentOrder alpha) { return RenyiOrder(1.0 / (1.0 + alpha.value())); }

}  // namespace

MomentOrder::MomentOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha <= kMaxMomentOrder)) {
        throw std::invalid_argument("moment order alpha must be in (0, 64], got " +
                                    std::to_string(alpha));
    }
}

std::string_view to_string(Scheme scheme) noexcept {
    switch (scheme) {
        case Scheme::single: return "single";
        case Scheme::centralized: return "centralized";
        case Scheme::decentralized: return "decentralized";
    }
    return "?";
}

Scheme parse_scheme(std::string_view text) {
    if (text == "single") return Scheme::single;
    if (text == "centralized") return Scheme::centralized;
    if (text == "decentralized") return Scheme::decentralized;
    throw std::invalid_argument("unknown scheme '" + std::string(text) + "'");
}

SchemeSpec::SchemeSpec(Scheme mode, AgentCount m) : mode_(mode), m_(m) {
    if (mode == Scheme::single && m.value() != 1) {
        throw std::invalid_argument("single-agent scheme requires m = 1");
    }
}

std::string_view to_string(ExponentMethod method) noexcept {
    switch (method) {
        case ExponentMethod::closed_form: return "closed_form";
        case ExponentMethod::optimizer: return "optimizer";
        case ExponentMethod::single_letter: return "single_letter";
    }
    return "?";
}

double bec_objective(MomentOrder alpha, Prob reference, double weight, double lambda) {
    return alpha.value() * lambda - weight * kl_binary(Prob(lambda), reference);
}

double agreement_flip_prob(Prob delta) {
    const double d = delta.value();
    return d * d / (d * d + (1.0 - d) * (1.0 - d));
}

double centralized_bsc2_objective(MomentOrder alpha, Prob delta, double lambda) {
    const double d = require_bsc_range(delta);
    const double a = alpha.value();
    const double agreement_rate =
        binary_renyi_entropy(arikan_order(alpha), Prob(agreement_flip_prob(delta)));
    return a * lambda + a * (1.0 - lambda) * agreement_rate -
           kl_binary(Prob(lambda), Prob(2.0 * d * (1.0 - d)));
}

double decentralized_bsc_objective(MomentOrder alpha, Prob delta, AgentCount m, double lambda) {
    const double d = require_bsc_range(delta);
    const double divergence = kl_binary(Prob(lambda), delta);
    const double penalty = lambda > d ? m.value() * divergence : divergence;
    // A weight-k pattern sits at rank ~2^{n H(k/n)}, saturating at 2^n past k = n/2.
    return alpha.value() * binary_shannon_entropy(Prob(std::min(lambda, 0.5))) - penalty;
}

double tilted_log_sum(double weight, double high, double low) {
    // Factor out the larger exponent to stay finite for large alpha.
    const double top = std::max(high, low);
    return top + std::log2(weight * std::exp2(high - top) + (1.0 - weight) * std::exp2(low - top));
}

ExponentResult exponent_single_bsc(MomentOrder alpha, Prob delta) {
    require_bsc_range(delta);
    return {alpha.value() * binary_renyi_entropy(arikan_order(alpha), delta), std::nullopt,
            ExponentMethod::closed_form};
}

ExponentResult exponent_single_bec(MomentOrder alpha, Prob eps) {
    return exponent_centralized_bec(alpha, eps, AgentCount(1));
}

ExponentResult exponent_centralized_bec(MomentOrder alpha, Prob eps, AgentCount m) {
    // All m agents erase a position with probability eps^m.
    const Prob collapsed(std::pow(eps.value(), m.value()));
    return from_optimizer(maximize_concave_on_unit_interval(
        [&](double lambda) { return bec_objective(alpha, collapsed, 1.0, lambda); }));
}

ExponentResult exponent_decentralized_bec(MomentOrder alpha, Prob eps, AgentCount m) {
    const double weight = m.value();
    return from_optimizer(maximize_concave_on_unit_interval(
        [&](double lambda) { return bec_objective(alpha, eps, weight, lambda); }));
}

ExponentResult exponent_centralized_bsc2(MomentOrder alpha, Prob delta) {
    require_bsc_range(delta);
    return from_optimizer(maximize_concave_on_unit_interval(
        [&](double lambda) { return centralized_bsc2_objective(alpha, delta, lambda); }));
}

double centralized_bsc2_log_sum(MomentOrder alpha, Prob delta) {
    const double d = require_bsc_range(delta);
    const double a = alpha.value();
    const double agreement_rate =
        a * binary_renyi_entropy(arikan_order(alpha), Prob(agreement_flip_prob(delta)));
    return tilted_log_sum(2.0 * d * (1.0 - d), a, agreement_rate);
}

ExponentResult exponent_centralized_generic(MomentOrder alpha, const ChannelSpec& channel,
                                            AgentCount m) {
    if (channel.kind() != ChannelKind::bsc) {
        throw std::invalid_argument("single-letter centralized exponent is implemented for BSC only");
    }
    const JointPmf joint = collapse_bsc(channel.param(), m);
    return {alpha.value() * conditional_renyi_entropy(joint, arikan_order(alpha)), std::nullopt,
            ExponentMethod::single_letter};
}

ExponentResult exponent_decentralized_bsc(MomentOrder alpha, Prob delta, AgentCount m) {
    require_bsc_range(delta);
    const double a = alpha.value();
    const RenyiOrder order(m.value() / (a + m.value()));
    return {a * binary_renyi_entropy(order, delta), std::nullopt, ExponentMethod::closed_form};
}

ExponentResult exponent_decentralized_bsc_variational(MomentOrder alpha, Prob delta,
                                                      AgentCount m) {
    require_bsc_range(delta);
    return from_optimizer(maximize_concave_on_unit_interval(
        [&](double lambda) { return decentralized_bsc_objective(alpha, delta, m, lambda); }));
}

double concat_exponent(MomentOrder alpha, Prob lambda, Prob p) {
    require_bsc_range(p);
    const double a = alpha.value();
    const double l = lambda.value();
    return l * a + (1.0 - l) * a * binary_renyi_entropy(arikan_order(alpha), p);
}

ExponentResult exponent(const SchemeSpec& scheme, const ChannelSpec& channel, MomentOrder alpha) {
    const Prob param = channel.param();
    const bool bec = channel.kind() == ChannelKind::bec;
    switch (scheme.mode()) {
        case Scheme::single:
            return bec ? exponent_single_bec(alpha, param) : exponent_single_bsc(alpha, param);
        case Scheme::centralized:
            if (bec) return exponent_centralized_bec(alpha, param, scheme.agents());
            if (scheme.m() == 1) return exponent_single_bsc(alpha, param);
            if (scheme.m() == 2) return exponent_centralized_bsc2(alpha, param);
            return exponent_centralized_generic(alpha, channel, scheme.agents());
        case Scheme::decentralized:
            return bec ? exponent_decentralized_bec(alpha, param, scheme.agents())
                       : exponent_decentralized_bsc(alpha, param, scheme.agents());
    }
    throw std::logic_error("unreachable scheme");
}

LogGuessworkRate expected_log_guesswork_rate(const SchemeSpec& scheme, const ChannelSpec& channel) {
    const double p = channel.param().value();
    double closed = 0.0;
    if (channel.kind() == ChannelKind::bec) {
        // Every erased bit costs one bit of log-guesswork; the decentralized
        // optimum sits at lambda = eps as alpha -> 0.
        closed = scheme.mode() == Scheme::centralized ? std::pow(p, scheme.m()) : p;
    } else if (scheme.mode() == Scheme::centralized && scheme.m() > 1) {
        closed = conditional_renyi_entropy(collapse_bsc(channel.param(), scheme.agents()),
                                           RenyiOrder::shannon());
    } else {
        closed = binary_shannon_entropy(channel.param());
    }

    constexpr double h = 1e-6;
    const double coarse = exponent(scheme, channel, MomentOrder(2.0 * h)).value / (2.0 * h);
    const double fine = exponent(scheme, channel, MomentOrder(h)).value / h;
    return {closed, 2.0 * fine - coarse};
}

}  // namespace guesswork
