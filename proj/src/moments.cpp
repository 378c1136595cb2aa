#include "guesswork/moments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>

namespace guesswork {

namespace {

void check_length(int n, int cap, const char* what) {
    if (n < 1) throw std::invalid_argument(std::string(what) + ": n must be at least 1");
    if (n > cap) {
        throw CapacityError(std::string(what) + ": n = " + std::to_string(n) +
                            " exceeds the cap n <= " + std::to_string(cap));
    }
}

// sum_{r=first}^{last} r^alpha, accumulated term by term.
double power_range_sum(std::uint64_t first, std::uint64_t last, double alpha) {
    CompensatedSum sum;
    for (std::uint64_t r = first; r <= last; ++r) sum.add(std::pow(static_cast<double>(r), alpha));
    return sum.value();
}

MomentRecord make_record(SchemeSpec scheme, ChannelSpec channel, MomentOrder alpha, int n,
                         double value, MomentMethod method) {
    return {scheme, channel, alpha.value(), n, value, method, std::nullopt, std::nullopt,
            std::nullopt, std::nullopt};
}

// p^k (1-p)^(n-k)
double pattern_prob(double p, int k, int n) { return std::pow(p, k) * std::pow(1.0 - p, n - k); }

// a^m - b^m = (a - b) * sum_{j<m} a^j b^(m-1-j); returns the sum.
double power_difference_factor(double a, double b, int m) {
    double s = 1.0;
    double b_power = 1.0;
    for (int step = 1; step < m; ++step) {
        b_power *= b;
        s = s * a + b_power;
    }
    return s;
}

Rank single_rank(const BitString& x, const SideInfo& info) {
    if (const auto* bec = std::get_if<BecObservation>(&info)) return bec_rank(x, bec->mask);
    return bsc_rank(x ^ std::get<BscObservation>(info).y);
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::string_view to_string(MomentMethod method) noexcept {
    switch (method) {
        case MomentMethod::exact_enum: return "exact_enum";
        case MomentMethod::exact_typesum: return "exact_typesum";
        case MomentMethod::monte_carlo: return "monte_carlo";
    }
    return "?";
}

MomentRecord exact_moment_single_bec(MomentOrder alpha, Prob eps, int n) {
    check_length(n, kMomentCaps.single_bec_n, "exact_moment_single_bec");
    // With k erasures the rank is uniform on [1, 2^k]; collect the prefix
    // power sums at every power of two in one pass.
    std::vector<double> block_mean(static_cast<std::size_t>(n) + 1);
    CompensatedSum prefix;
    std::uint64_t next_power = 1;
    int k = 0;
    for (std::uint64_t r = 1; k <= n; ++r) {
        prefix.add(std::pow(static_cast<double>(r), alpha.value()));
        if (r == next_power) {
            block_mean[static_cast<std::size_t>(k)] = prefix.value() / static_cast<double>(r);
            next_power <<= 1;
            ++k;
        }
    }
    CompensatedSum total;
    for (int e = 0; e <= n; ++e) {
        total.add(static_cast<double>(binomial(n, e)) * pattern_prob(eps.value(), e, n) *
                  block_mean[static_cast<std::size_t>(e)]);
    }
    return make_record(SchemeSpec::single(), ChannelSpec::bec(eps.value()), alpha, n, total.value(),
                       MomentMethod::exact_typesum);
}

MomentRecord exact_moment_single_bsc(MomentOrder alpha, Prob delta, int n) {
    check_length(n, kMomentCaps.single_bsc_n, "exact_moment_single_bsc");
    const ChannelSpec channel = ChannelSpec::bsc(delta.value());
    CompensatedSum total;
    std::uint64_t before = 0;
    for (int w = 0; w <= n; ++w) {
        const std::uint64_t size = binomial(n, w);
        const double block = power_range_sum(before + 1, before + size, alpha.value());
        total.add(pattern_prob(delta.value(), w, n) * block);
        before += size;
    }
    return make_record(SchemeSpec::single(), channel, alpha, n, total.value(),
                       MomentMethod::exact_typesum);
}

MomentRecord exact_moment_decentralized_bsc(MomentOrder alpha, Prob delta, AgentCount m, int n) {
    if (m.value() == 1) {
        MomentRecord single = exact_moment_single_bsc(alpha, delta, n);
        single.scheme = SchemeSpec::decentralized(1);
        return single;
    }
    check_length(n, kMomentCaps.decentralized_bsc_n, "exact_moment_decentralized_bsc");
    if (m.value() > kMomentCaps.decentralized_bsc_m) {
        throw CapacityError("exact_moment_decentralized_bsc: m = " + std::to_string(m.value()) +
                            " exceeds the cap m <= " + std::to_string(kMomentCaps.decentralized_bsc_m));
    }
    const ChannelSpec channel = ChannelSpec::bsc(delta.value());
    const double d = delta.value();

    // tail[w] = Pr[weight > w], summed from the light end of the tail upward.
    std::vector<double> class_prob(static_cast<std::size_t>(n) + 1);
    std::vector<double> tail(static_cast<std::size_t>(n) + 1);
    for (int w = 0; w <= n; ++w) class_prob[static_cast<std::size_t>(w)] = pattern_prob(d, w, n);
    CompensatedSum running;
    for (int w = n; w >= 0; --w) {
        tail[static_cast<std::size_t>(w)] = running.value();
        running.add(static_cast<double>(binomial(n, w)) * class_prob[static_cast<std::size_t>(w)]);
    }

    // E[min^alpha] = sum_r r^alpha (S(r-1)^m - S(r)^m), with S(r) = Pr[G > r].
    CompensatedSum total;
    std::uint64_t before = 0;
    for (int w = 0; w <= n; ++w) {
        const std::uint64_t size = binomial(n, w);
        const double p = class_prob[static_cast<std::size_t>(w)];
        const double t = tail[static_cast<std::size_t>(w)];
        if (p > 0.0) {
            for (std::uint64_t j = 0; j < size; ++j) {
                const double survive_before = t + static_cast<double>(size - j) * p;
                const double survive_after = t + static_cast<double>(size - j - 1) * p;
                const double r = static_cast<double>(before + j + 1);
                total.add(std::pow(r, alpha.value()) * p *
                          power_difference_factor(survive_before, survive_after, m.value()));
            }
        }
        before += size;
    }
    return make_record(SchemeSpec::decentralized(m.value()), channel, alpha, n, total.value(),
                       MomentMethod::exact_typesum);
}

MomentRecord exact_moment_decentralized_bec(MomentOrder alpha, Prob eps, AgentCount m, int n) {
    if (m.value() == 1) {
        MomentRecord single = exact_moment_single_bec(alpha, eps, n);
        single.scheme = SchemeSpec::decentralized(1);
        return single;
    }
    if (n < 1) throw std::invalid_argument("exact_moment_decentralized_bec: n must be at least 1");
    if (n * (m.value() + 1) > kMomentCaps.decentralized_bec_product) {
        throw CapacityError("exact_moment_decentralized_bec: n*(m+1) = " +
                            std::to_string(n * (m.value() + 1)) + " exceeds the cap n*(m+1) <= " +
                            std::to_string(kMomentCaps.decentralized_bec_product));
    }
    const int agents = m.value();
    const std::size_t strings = std::size_t{1} << n;

    // erased_value[mask * strings + x] = bec_rank(x, mask) - 1
    std::vector<std::uint16_t> erased_value(strings * strings);
    std::vector<double> mask_weight(strings);
    for (std::size_t mask = 0; mask < strings; ++mask) {
        mask_weight[mask] = pattern_prob(eps.value(), std::popcount(mask), n);
        for (std::size_t x = 0; x < strings; ++x) {
            erased_value[mask * strings + x] = static_cast<std::uint16_t>(gather_bits(x, mask, n));
        }
    }
    std::vector<double> power(strings);
    for (std::size_t v = 0; v < strings; ++v) {
        power[v] = std::pow(static_cast<double>(v + 1), alpha.value());
    }

    std::vector<std::vector<std::uint16_t>> level(static_cast<std::size_t>(agents),
                                                  std::vector<std::uint16_t>(strings));
    CompensatedSum total;
    // Depth-first over agents' masks in a fixed order, keeping the running
    // minimum of erased values per x.
    auto visit = [&](auto&& self, int agent, double weight) -> void {
        for (std::size_t mask = 0; mask < strings; ++mask) {
            const double w = weight * mask_weight[mask];
            if (w == 0.0) continue;
            const std::uint16_t* row = erased_value.data() + mask * strings;
            std::uint16_t* current = level[static_cast<std::size_t>(agent)].data();
            if (agent == 0) {
                std::copy(row, row + strings, current);
            } else {
                const std::uint16_t* previous = level[static_cast<std::size_t>(agent - 1)].data();
                for (std::size_t x = 0; x < strings; ++x) current[x] = std::min(previous[x], row[x]);
            }
            if (agent + 1 == agents) {
                double inner = 0.0;
                for (std::size_t x = 0; x < strings; ++x) inner += power[current[x]];
                total.add(w * inner);
            } else {
                self(self, agent + 1, w);
            }
        }
    };
    visit(visit, 0, 1.0);

    return make_record(SchemeSpec::decentralized(agents), ChannelSpec::bec(eps.value()), alpha, n,
                       total.value() / static_cast<double>(strings), MomentMethod::exact_enum);
}

MomentRecord exact_moment_centralized_bsc2(MomentOrder alpha, Prob delta, int n) {
    check_length(n, kMomentCaps.centralized_bsc2_n, "exact_moment_centralized_bsc2");
    const ChannelSpec channel = ChannelSpec::bsc(delta.value());
    const double d = delta.value();
    const double agree_right = (1.0 - d) * (1.0 - d);
    const double agree_wrong = d * d;
    const double disagree_one_value = d * (1.0 - d);  // per position, per value of x there

    CompensatedSum total;
    for (int agree = 0; agree <= n; ++agree) {
        const int disagree = n - agree;
        const double sets = static_cast<double>(binomial(n, agree));
        const double disagree_prob = std::pow(disagree_one_value, disagree);
        std::uint64_t patterns_before = 0;
        for (int k = 0; k <= agree; ++k) {
            const std::uint64_t patterns = binomial(agree, k);
            const double prob =
                std::pow(agree_right, agree - k) * std::pow(agree_wrong, k) * disagree_prob;
            if (prob > 0.0) {
                const std::uint64_t first = (patterns_before << disagree) + 1;
                const std::uint64_t last = (patterns_before + patterns) << disagree;
                total.add(sets * prob * power_range_sum(first, last, alpha.value()));
            }
            patterns_before += patterns;
        }
    }
    return make_record(SchemeSpec::centralized(2), channel, alpha, n, total.value(),
                       MomentMethod::exact_typesum);
}

MomentRecord exact_moment(const SchemeSpec& scheme, const ChannelSpec& channel, MomentOrder alpha,
                          int n) {
    const Prob p = channel.param();
    const bool bec = channel.kind() == ChannelKind::bec;
    switch (scheme.mode()) {
        case Scheme::single:
            return bec ? exact_moment_single_bec(alpha, p, n) : exact_moment_single_bsc(alpha, p, n);
        case Scheme::decentralized:
            return bec ? exact_moment_decentralized_bec(alpha, p, scheme.agents(), n)
                       : exact_moment_decentralized_bsc(alpha, p, scheme.agents(), n);
        case Scheme::centralized: {
            MomentRecord record = [&] {
                if (bec) return exact_moment_single_bec(alpha, Prob(std::pow(p.value(), scheme.m())), n);
                if (scheme.m() == 1) return exact_moment_single_bsc(alpha, p, n);
                if (scheme.m() == 2) return exact_moment_centralized_bsc2(alpha, p, n);
                throw std::invalid_argument("exact pooled BSC moments support m <= 2");
            }();
            record.scheme = scheme;
            record.channel = channel;
            return record;
        }
    }
    throw std::logic_error("unreachable scheme");
}

Rank sample_guesswork(const SchemeSpec& scheme, const ChannelSpec& channel, int n, RngStream& rng) {
    const BitString x = sample_uniform_string(n, rng);
    const int agents = scheme.m();

    if (scheme.mode() == Scheme::centralized && agents > 1) {
        if (channel.kind() == ChannelKind::bec) {
            std::uint64_t common = full_mask(n);
            for (int i = 0; i < agents; ++i) {
                common &= std::get<BecObservation>(sample_side_info(x, channel, rng)).mask.word();
            }
            return bec_rank(x, ErasureMask(n, common));
        }
        if (agents != 2) throw std::invalid_argument("pooled BSC ranking supports m <= 2");
        const BitString y1 = std::get<BscObservation>(sample_side_info(x, channel, rng)).y;
        const BitString y2 = std::get<BscObservation>(sample_side_info(x, channel, rng)).y;
        return centralized_bsc2_rank(x, y1, y2);
    }

    Rank best = single_rank(x, sample_side_info(x, channel, rng));
    for (int i = 1; i < agents; ++i) best = std::min(best, single_rank(x, sample_side_info(x, channel, rng)));
    return best;
}

MomentRecord mc_estimate_moment(const SchemeSpec& scheme, const ChannelSpec& channel,
                                MomentOrder alpha, int n, std::uint64_t trials, std::uint64_t seed,
                                const MonteCarloOptions& options) {
    check_length(n, kMomentCaps.monte_carlo_n, "mc_estimate_moment");
    if (trials == 0) throw std::invalid_argument("mc_estimate_moment: trials must be at least 1");
    if (options.resamples == 0 || !(options.confidence > 0.0 && options.confidence < 1.0)) {
        throw std::invalid_argument("mc_estimate_moment: bad bootstrap options");
    }
    if (scheme.mode() == Scheme::centralized && scheme.m() > 2 && channel.kind() == ChannelKind::bsc) {
        throw std::invalid_argument("pooled BSC ranking supports m <= 2");
    }

    std::vector<double> values(trials);
    CompensatedSum sum;
    for (std::uint64_t t = 0; t < trials; ++t) {
        RngStream rng(seed, "trial", t);
        values[t] = std::pow(static_cast<double>(sample_guesswork(scheme, channel, n, rng)), alpha.value());
        sum.add(values[t]);
    }
    const double mean = sum.value() / static_cast<double>(trials);

    // Bootstrap resampling draws multinomial counts over the distinct values,
    // which has the same law as resampling trial indices.
    std::sort(values.begin(), values.end());
    std::vector<double> distinct;
    std::vector<std::uint64_t> counts;
    for (double v : values) {
        if (distinct.empty() || distinct.back() != v) {
            distinct.push_back(v);
            counts.push_back(0);
        }
        ++counts.back();
    }
    values.clear();
    values.shrink_to_fit();

    std::vector<double> means(options.resamples);
    for (std::size_t b = 0; b < options.resamples; ++b) {
        RngStream rng(seed, "bootstrap", b);
        std::uint64_t remaining_draws = trials;
        std::uint64_t remaining_count = trials;
        CompensatedSum resampled;
        for (std::size_t i = 0; i < distinct.size() && remaining_draws > 0; ++i) {
            std::uint64_t drawn = remaining_draws;
            if (i + 1 < distinct.size()) {
                std::binomial_distribution<std::uint64_t> pick(
                    remaining_draws,
                    static_cast<double>(counts[i]) / static_cast<double>(remaining_count));
                drawn = pick(rng);
            }
            resampled.add(static_cast<double>(drawn) * distinct[i]);
            remaining_draws -= drawn;
            remaining_count -= counts[i];
        }
        means[b] = resampled.value() / static_cast<double>(trials);
    }
    std::sort(means.begin(), means.end());
    const double tail = (1.0 - options.confidence) / 2.0;

    MomentRecord record = make_record(scheme, channel, alpha, n, mean, MomentMethod::monte_carlo);
    record.ci_low = std::min(quantile_sorted(means, tail), mean);
    record.ci_high = std::max(quantile_sorted(means, 1.0 - tail), mean);
    record.trials = trials;
    record.seed = seed;
    return record;
}

std::vector<double> SlopeReport::slopes() const {
    std::vector<double> out;
    for (const SlopePoint& p : points) {
        if (p.slope) out.push_back(*p.slope);
    }
    return out;
}

SlopeReport slope_report(std::span<const MomentRecord> records, const ExponentResult& analytic) {
    if (records.empty()) throw std::invalid_argument("slope_report: no records");
    const MomentRecord& first = records.front();
    for (std::size_t i = 0; i < records.size(); ++i) {
        const MomentRecord& r = records[i];
        if (!(r.scheme == first.scheme) || !(r.channel == first.channel) || r.alpha != first.alpha) {
            throw std::invalid_argument("slope_report: records disagree on scheme, channel or alpha");
        }
        if (r.n != first.n + static_cast<int>(i)) {
            throw std::invalid_argument("slope_report: records must cover consecutive n");
        }
    }

    SlopeReport report{{}, analytic.value, true, true};
    for (std::size_t i = 0; i < records.size(); ++i) {
        SlopePoint point{records[i].n, std::log2(records[i].value), std::nullopt, std::nullopt};
        if (i + 1 < records.size()) {
            point.slope = std::log2(records[i + 1].value) - point.log2_value;
            point.distance_to_analytic = analytic.value - *point.slope;
        }
        report.points.push_back(point);
    }
    const std::vector<double> s = report.slopes();
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i] < s[i - 1]) report.nondecreasing = false;
        if (s[i] > s[i - 1]) report.nonincreasing = false;
    }
    return report;
}

}  // namespace guesswork
