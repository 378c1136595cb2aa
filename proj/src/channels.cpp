#include "guesswork/channels.hpp"

#include <bit>
#include <cmath>
#include <vector>

namespace guesswork {

std::string_view to_string(ChannelKind kind) noexcept {
    return kind == ChannelKind::bec ? "bec" : "bsc";
}

ChannelKind parse_channel_kind(std::string_view text) {
    if (text == "bec") return ChannelKind::bec;
    if (text == "bsc") return ChannelKind::bsc;
    throw std::invalid_argument("unknown channel '" + std::string(text) + "' (expected bec or bsc)");
}

ChannelSpec::ChannelSpec(ChannelKind kind, double param) : kind_(kind), param_(param) {
    if (kind == ChannelKind::bsc && param > 0.5) {
        throw std::invalid_argument("BSC flip probability must be at most 1/2");
    }
}

AgentCount::AgentCount(int m) : m_(m) {
    if (m < 1) throw std::invalid_argument("agent count must be at least 1");
}

std::uint64_t full_mask(int length) noexcept {
    return length >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << length) - 1;
}

BitString::BitString(int length, std::uint64_t word) : length_(length), word_(word) {
    if (length < 1 || length > kMaxBitStringLength) {
        throw std::invalid_argument("bit string length must be in [1, 63], got " +
                                    std::to_string(length));
    }
    if ((word & ~full_mask(length)) != 0) {
        throw std::invalid_argument("bit string has bits beyond its length");
    }
}

BitString BitString::ones(int length) { return {length, full_mask(length)}; }

BitString BitString::from_string(std::string_view text) {
    std::uint64_t word = 0;
    for (char c : text) {
        if (c != '0' && c != '1') throw std::invalid_argument("bit string must contain 0/1 only");
        word = (word << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return {static_cast<int>(text.size()), word};
}

int BitString::weight() const noexcept { return std::popcount(word_); }

std::string BitString::to_string() const {
    std::string out(static_cast<std::size_t>(length_), '0');
    for (int i = 0; i < length_; ++i) {
        if (bit(i)) out[static_cast<std::size_t>(i)] = '1';
    }
    return out;
}

BitString operator^(const BitString& a, const BitString& b) {
    if (a.length_ != b.length_) throw std::invalid_argument("bit string length mismatch");
    return {a.length_, a.word_ ^ b.word_};
}

BitString sample_uniform_string(int length, RngStream& rng) {
    return {length, rng() & full_mask(length)};
}

SideInfo sample_side_info(const BitString& x, const ChannelSpec& channel, RngStream& rng) {
    const int n = x.size();
    const double p = channel.param().value();
    std::uint64_t pattern = 0;
    for (int i = 0; i < n; ++i) {
        pattern = (pattern << 1) | static_cast<std::uint64_t>(rng.bernoulli(p));
    }
    if (channel.kind() == ChannelKind::bsc) {
        return BscObservation{BitString(n, x.word() ^ pattern)};
    }
    return BecObservation{ErasureMask(n, pattern), BitString(n, x.word() & ~pattern)};
}

JointPmf collapse_bsc(Prob delta, AgentCount m) {
    const int agents = m.value();
    if (agents > kMaxCollapsedAgents) {
        throw CapacityError("collapse_bsc: m = " + std::to_string(agents) +
                            " exceeds the cap m <= " + std::to_string(kMaxCollapsedAgents));
    }
    const double d = delta.value();
    const std::size_t columns = std::size_t{1} << agents;
    // Only the number of disagreeing outputs matters.
    std::vector<double> by_flips(static_cast<std::size_t>(agents) + 1);
    for (int k = 0; k <= agents; ++k) {
        by_flips[static_cast<std::size_t>(k)] = 0.5 * std::pow(d, k) * std::pow(1.0 - d, agents - k);
    }
    std::vector<double> entries(2 * columns);
    for (std::size_t y = 0; y < columns; ++y) {
        const int ones = std::popcount(y);
        entries[y] = by_flips[static_cast<std::size_t>(ones)];
        entries[columns + y] = by_flips[static_cast<std::size_t>(agents - ones)];
    }
    return JointPmf(2, columns, std::move(entries));
}

MajorityFlip majority_flip_prob(Prob delta, AgentCount m, TieRule tie_rule) {
    const int agents = m.value();
    const double d = delta.value();
    if (d > 0.5) throw std::invalid_argument("majority vote needs delta <= 1/2");

    // pmf of B ~ Binomial(m, delta), the number of flipped votes.
    std::vector<double> pmf(static_cast<std::size_t>(agents) + 1);
    double choose = 1.0;
    for (int k = 0; k <= agents; ++k) {
        pmf[static_cast<std::size_t>(k)] = choose * std::pow(d, k) * std::pow(1.0 - d, agents - k);
        choose = choose * (agents - k) / (k + 1);
    }
    CompensatedSum above;
    for (int k = agents / 2 + 1; k <= agents; ++k) above.add(pmf[static_cast<std::size_t>(k)]);
    const double strict_majority = above.value();
    if (agents % 2 == 1) return {strict_majority, strict_majority};

    const double tie = pmf[static_cast<std::size_t>(agents / 2)];
    if (tie_rule == TieRule::randomized) {
        const double p = strict_majority + 0.5 * tie;
        return {p, p};
    }
    // Ties resolve to 0: wrong for X = 1 whenever half the votes flipped.
    return {strict_majority, strict_majority + tie};
}

}  // namespace guesswork
