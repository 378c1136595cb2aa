#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace guesswork {

/// Counter-based random stream keyed by (seed, purpose, index). Streams with
/// distinct keys are independent, so trial i draws the same numbers no matter
/// which worker runs it or in which order. Satisfies
/// UniformRandomBitGenerator.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::string_view purpose, std::uint64_t index) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    bool bernoulli(double p) noexcept { return uniform() < p; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace guesswork
