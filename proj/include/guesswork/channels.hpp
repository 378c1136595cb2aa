#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "guesswork/infomath.hpp"
#include "guesswork/random.hpp"

namespace guesswork {

/// Raised when a request exceeds a configured size cap. The message names the
/// cap.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ChannelKind { bec, bsc };

std::string_view to_string(ChannelKind kind) noexcept;
ChannelKind parse_channel_kind(std::string_view text);

/// BEC with erasure probability eps, or BSC with flip probability delta <= 1/2.
class ChannelSpec {
public:
    ChannelSpec(ChannelKind kind, double param);
    static ChannelSpec bec(double eps) { return {ChannelKind::bec, eps}; }
    static ChannelSpec bsc(double delta) { return {ChannelKind::bsc, delta}; }

    [[nodiscard]] ChannelKind kind() const noexcept { return kind_; }
    [[nodiscard]] Prob param() const noexcept { return param_; }

    friend bool operator==(const ChannelSpec& a, const ChannelSpec& b) noexcept {
        return a.kind_ == b.kind_ && a.param_.value() == b.param_.value();
    }

private:
    ChannelKind kind_;
    Prob param_;
};

/// Number of agents; fixed, independent of the string length.
class AgentCount {
public:
    explicit AgentCount(int m);
    [[nodiscard]] int value() const noexcept { return m_; }
    friend bool operator==(AgentCount, AgentCount) = default;

private:
    int m_;
};

inline constexpr int kMaxBitStringLength = 63;

/// Binary word of length n <= 63. Position 0 is the most significant bit of
/// the packed word, so integer order equals lexicographic order.
class BitString {
public:
    BitString(int length, std::uint64_t word);
    static BitString zeros(int length) { return {length, 0}; }
    static BitString ones(int length);
    static BitString from_string(std::string_view text);

    [[nodiscard]] int size() const noexcept { return length_; }
    [[nodiscard]] std::uint64_t word() const noexcept { return word_; }
    [[nodiscard]] bool bit(int position) const noexcept {
        return ((word_ >> (length_ - 1 - position)) & 1U) != 0;
    }
    [[nodiscard]] int weight() const noexcept;
    [[nodiscard]] std::string to_string() const;

    friend BitString operator^(const BitString& a, const BitString& b);
    friend bool operator==(const BitString&, const BitString&) = default;

private:
    int length_;
    std::uint64_t word_;
};

std::uint64_t full_mask(int length) noexcept;

/// Set of erased positions, packed with the same layout as BitString.
class ErasureMask {
public:
    ErasureMask(int length, std::uint64_t word) : bits_(length, word) {}
    explicit ErasureMask(BitString bits) : bits_(bits) {}
    static ErasureMask none(int length) { return ErasureMask(BitString::zeros(length)); }
    static ErasureMask all(int length) { return ErasureMask(BitString::ones(length)); }

    [[nodiscard]] int size() const noexcept { return bits_.size(); }
    [[nodiscard]] std::uint64_t word() const noexcept { return bits_.word(); }
    [[nodiscard]] bool erased(int position) const noexcept { return bits_.bit(position); }
    [[nodiscard]] int count() const noexcept { return bits_.weight(); }

    friend bool operator==(const ErasureMask&, const ErasureMask&) = default;

private:
    BitString bits_;
};

struct BecObservation {
    ErasureMask mask;
    BitString revealed;  // source bits off-mask, zero on erased positions
};

struct BscObservation {
    BitString y;
};

using SideInfo = std::variant<BecObservation, BscObservation>;

/// Uniform random string of the given length.
BitString sample_uniform_string(int length, RngStream& rng);

/// One agent's observation of x through the channel.
SideInfo sample_side_info(const BitString& x, const ChannelSpec& channel, RngStream& rng);

inline constexpr int kMaxCollapsedAgents = 24;

/// Joint pmf of uniform X and Y' = (Y_1..Y_m), m i.i.d. BSC(delta) outputs.
/// Column index of y' packs y_1 as its most significant bit.
JointPmf collapse_bsc(Prob delta, AgentCount m);

enum class TieRule { toward_zero, randomized };

/// Effective channel after a per-position majority vote over m BSC outputs.
struct MajorityFlip {
    double given_zero;  // Pr[vote != X | X = 0]
    double given_one;   // Pr[vote != X | X = 1]
    [[nodiscard]] bool symmetric() const noexcept { return given_zero == given_one; }
};

MajorityFlip majority_flip_prob(Prob delta, AgentCount m, TieRule tie_rule = TieRule::randomized);

}  // namespace guesswork
