#include "guesswork/ranks.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <functional>
#include <string>

#if defined(__BMI2__)
#include <immintrin.h>
#endif

namespace guesswork {

namespace {

using BinomialTable = std::array<std::array<std::uint64_t, 65>, 64>;

struct BinomialTables {
    BinomialTable choose{};
    BinomialTable below{};  // below[n][k] = sum_{w<k} C(n, w)
};

const BinomialTables& tables() {
    static const BinomialTables t = [] {
        BinomialTables out;
        for (int n = 0; n < 64; ++n) {
            out.choose[n][0] = 1;
            for (int k = 1; k <= n; ++k) {
                out.choose[n][k] = out.choose[n - 1][k - 1] + (k < n ? out.choose[n - 1][k] : 0);
            }
            for (int k = 1; k <= 64; ++k) {
                out.below[n][k] = out.below[n][k - 1] + (k - 1 <= n ? out.choose[n][k - 1] : 0);
            }
        }
        return out;
    }();
    return t;
}

// Lexicographic index of a packed word among words of the same weight; the
// length only matters through leading zeros, which contribute nothing.
std::uint64_t lex_index_of_word(std::uint64_t rest) {
    const auto& choose = tables().choose;
    int ones_left = std::popcount(rest);
    std::uint64_t index = 0;
    while (rest != 0) {
        // A one at bit b (b positions follow it): words sharing the prefix but
        // holding 0 here come first.
        const int b = 63 - std::countl_zero(rest);
        if (ones_left <= b) index += choose[b][ones_left];
        --ones_left;
        rest ^= std::uint64_t{1} << b;
    }
    return index;
}

int observation_length(const SideInfo& info) {
    return std::visit(
        [](const auto& o) {
            if constexpr (std::is_same_v<std::decay_t<decltype(o)>, BecObservation>) {
                return o.mask.size();
            } else {
                return o.y.size();
            }
        },
        info);
}

struct Votes {
    std::uint64_t referenced = 0;  // positions with a strict majority
    std::uint64_t reference = 0;   // majority bit at those positions
};

Votes majority_votes(const Observation& obs, int n) {
    Votes v;
    for (int i = 0; i < n; ++i) {
        int zeros = 0;
        int ones = 0;
        for (const SideInfo& info : obs) {
            if (const auto* bec = std::get_if<BecObservation>(&info)) {
                if (bec->mask.erased(i)) continue;
                (bec->revealed.bit(i) ? ones : zeros) += 1;
            } else {
                (std::get<BscObservation>(info).y.bit(i) ? ones : zeros) += 1;
            }
        }
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - i);
        if (zeros != ones) {
            v.referenced |= bit;
            if (ones > zeros) v.reference |= bit;
        }
    }
    return v;
}

std::uint64_t key_from_votes(std::uint64_t x, const Votes& v, int n) {
    const std::uint64_t free_positions = full_mask(n) & ~v.referenced;
    const int free_count = std::popcount(free_positions);
    return (gather_bits(x ^ v.reference, v.referenced, n) << free_count) |
           gather_bits(x, free_positions, n);
}

int checked_length(const Observation& obs) {
    if (obs.empty()) throw std::invalid_argument("observation needs at least one agent");
    const int n = observation_length(obs.front());
    for (const SideInfo& info : obs) {
        if (observation_length(info) != n) {
            throw std::invalid_argument("agents observe strings of different lengths");
        }
    }
    return n;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
    if (n < 0 || n > 63) throw std::out_of_range("binomial: n must be in [0, 63]");
    if (k < 0 || k > n) return 0;
    return tables().choose[n][k];
}

std::uint64_t weight_prefix_count(int n, int k) {
    if (n < 0 || n > 63) throw std::out_of_range("weight_prefix_count: n must be in [0, 63]");
    return tables().below[n][std::clamp(k, 0, 64)];
}

std::uint64_t lex_index_in_weight_class(const BitString& word) {
    return lex_index_of_word(word.word());
}

std::uint64_t gather_bits(std::uint64_t word, std::uint64_t mask, int length) noexcept {
    mask &= full_mask(length);
#if defined(__BMI2__)
    return _pext_u64(word, mask);
#endif
    std::uint64_t out = 0;
    while (mask != 0) {
        const int shift = 63 - std::countl_zero(mask);
        out = (out << 1) | ((word >> shift) & 1U);
        mask ^= std::uint64_t{1} << shift;
    }
    return out;
}

Rank bsc_rank(const BitString& z) {
    return weight_prefix_count(z.size(), z.weight()) + lex_index_in_weight_class(z) + 1;
}

Rank bec_rank(const BitString& x, const ErasureMask& mask) {
    if (x.size() != mask.size()) throw std::invalid_argument("mask length mismatch");
    return gather_bits(x.word(), mask.word(), x.size()) + 1;
}

Rank centralized_bsc2_rank(const BitString& x, const BitString& y1, const BitString& y2) {
    const int n = x.size();
    if (y1.size() != n || y2.size() != n) throw std::invalid_argument("length mismatch");
    const std::uint64_t disagree = y1.word() ^ y2.word();
    const std::uint64_t agree = full_mask(n) & ~disagree;
    const int agree_count = std::popcount(agree);
    const int disagree_count = n - agree_count;

    const std::uint64_t uniform_block = gather_bits(x.word(), disagree, n);
    if (agree_count == 0) return uniform_block + 1;

    const std::uint64_t flips = gather_bits(x.word() ^ y1.word(), agree, n);
    const std::uint64_t pattern_position =
        tables().below[agree_count][std::popcount(flips)] + lex_index_of_word(flips);
    return (pattern_position << disagree_count) + uniform_block + 1;
}

namespace {

// Observation flattened to packed words, with the likelihood of every
// possible flip/erasure total precomputed so that equal totals give
// bit-identical likelihoods.
class PreparedObservation {
public:
    PreparedObservation(const Observation& obs, const ChannelSpec& channel, int n)
        : n_(n), agents_(static_cast<int>(obs.size())) {
        for (const SideInfo& info : obs) {
            if (const auto* bec = std::get_if<BecObservation>(&info)) {
                if (channel.kind() != ChannelKind::bec) {
                    throw std::invalid_argument("BEC observation under a BSC model");
                }
                shown_.push_back(full_mask(n) & ~bec->mask.word());
                values_.push_back(bec->revealed.word());
                erasures_ += bec->mask.count();
            } else {
                if (channel.kind() != ChannelKind::bsc) {
                    throw std::invalid_argument("BSC observation under a BEC model");
                }
                values_.push_back(std::get<BscObservation>(info).y.word());
            }
        }
        bec_ = channel.kind() == ChannelKind::bec;
        const double p = channel.param().value();
        const int total = agents_ * n_;
        by_noisy_.resize(static_cast<std::size_t>(total) + 1);
        for (int k = 0; k <= total; ++k) {
            by_noisy_[static_cast<std::size_t>(k)] = std::pow(p, k) * std::pow(1.0 - p, total - k);
        }
    }

    // Flip count (BSC) or erasure count (BEC); -1 when x contradicts a
    // revealed bit.
    [[nodiscard]] int noisy(std::uint64_t x) const noexcept {
        if (bec_) {
            for (std::size_t j = 0; j < values_.size(); ++j) {
                if (((x ^ values_[j]) & shown_[j]) != 0) return -1;
            }
            return erasures_;
        }
        int flips = 0;
        for (std::uint64_t y : values_) flips += std::popcount(x ^ y);
        return flips;
    }

    [[nodiscard]] double likelihood_of_noisy(int k) const noexcept {
        return k < 0 ? 0.0 : by_noisy_[static_cast<std::size_t>(k)];
    }

    [[nodiscard]] int max_noisy() const noexcept { return agents_ * n_; }

private:
    int n_;
    int agents_;
    bool bec_ = false;
    int erasures_ = 0;
    std::vector<std::uint64_t> values_;
    std::vector<std::uint64_t> shown_;
    std::vector<double> by_noisy_;
};

}  // namespace

double observation_likelihood(const BitString& x, const Observation& obs,
                              const ChannelSpec& channel) {
    const int n = checked_length(obs);
    if (x.size() != n) throw std::invalid_argument("length mismatch");
    const PreparedObservation prepared(obs, channel, n);
    return prepared.likelihood_of_noisy(prepared.noisy(x.word()));
}

std::uint64_t residual_key(const BitString& x, const Observation& obs) {
    const int n = checked_length(obs);
    return key_from_votes(x.word(), majority_votes(obs, n), n);
}

std::vector<Rank> posterior_ranks(const Observation& obs, const ChannelSpec& channel, TieBreak tie) {
    const int n = checked_length(obs);
    if (n > kMaxOracleLength) {
        throw CapacityError("posterior oracle: n = " + std::to_string(n) + " exceeds the cap n <= " +
                            std::to_string(kMaxOracleLength));
    }
    const std::size_t count = std::size_t{1} << n;
    const PreparedObservation prepared(obs, channel, n);

    // Distinct posterior levels, most likely first. Candidates sharing a level
    // are tied.
    std::vector<double> levels{0.0};
    for (int k = 0; k <= prepared.max_noisy(); ++k) levels.push_back(prepared.likelihood_of_noisy(k));
    std::sort(levels.begin(), levels.end(), std::greater<>());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    auto level_index = [&](double likelihood) {
        return static_cast<std::size_t>(
            std::lower_bound(levels.begin(), levels.end(), likelihood, std::greater<>()) -
            levels.begin());
    };
    std::vector<std::size_t> level_of_noisy(static_cast<std::size_t>(prepared.max_noisy()) + 2);
    for (int k = -1; k <= prepared.max_noisy(); ++k) {
        level_of_noisy[static_cast<std::size_t>(k + 1)] = level_index(prepared.likelihood_of_noisy(k));
    }

    std::vector<std::size_t> level(count);
    std::vector<std::uint64_t> level_start(levels.size() + 1, 0);
    for (std::size_t x = 0; x < count; ++x) {
        level[x] = level_of_noisy[static_cast<std::size_t>(prepared.noisy(x) + 1)];
        ++level_start[level[x] + 1];
    }
    for (std::size_t i = 1; i < level_start.size(); ++i) level_start[i] += level_start[i - 1];

    // The residual key is a bijection of x; walk candidates in key order and
    // hand out positions within each level.
    // The key is affine in x over GF(2): key(x) = key(0) ^ XOR of key(e_i) ^ key(0)
    // over the set bits e_i of x.
    const Votes votes = majority_votes(obs, n);
    const std::uint64_t offset = key_from_votes(0, votes, n);
    std::vector<std::uint64_t> key(count);
    key[0] = offset;
    std::vector<std::uint64_t> by_key(count);
    by_key[offset] = 0;
    for (std::size_t x = 1; x < count; ++x) {
        const std::size_t low = x & (~x + 1);
        const std::uint64_t unit = low == x ? key_from_votes(x, votes, n) ^ offset : key[low] ^ offset;
        key[x] = key[x ^ low] ^ unit;
        by_key[key[x]] = x;
    }

    std::vector<Rank> ranks(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t key = tie == TieBreak::ascending_key ? i : count - 1 - i;
        const std::uint64_t x = by_key[key];
        ranks[x] = ++level_start[level[x]];
    }
    return ranks;
}

Rank posterior_rank_oracle(const BitString& x, const Observation& obs, const ChannelSpec& channel,
                           TieBreak tie) {
    if (checked_length(obs) != x.size()) throw std::invalid_argument("length mismatch");
    return posterior_ranks(obs, channel, tie)[x.word()];
}

}  // namespace guesswork
