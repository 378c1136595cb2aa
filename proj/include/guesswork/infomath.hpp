#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace guesswork {

/// Probability-valued scalar in [0, 1].
class Prob {
public:
    explicit Prob(double value);
    [[nodiscard]] double value() const noexcept { return value_; }
    [[nodiscard]] Prob complement() const noexcept { return Prob(1.0 - value_); }

private:
    double value_;
};

/// Order of a Renyi entropy. The Shannon case is an explicit marker rather
/// than beta == 1 approached numerically.
class RenyiOrder {
public:
    explicit RenyiOrder(double beta);
    static RenyiOrder shannon() noexcept;

    [[nodiscard]] bool is_shannon() const noexcept { return shannon_; }
    [[nodiscard]] double beta() const noexcept { return beta_; }

private:
    RenyiOrder() = default;
    double beta_ = 1.0;
    bool shannon_ = true;
};

/// Joint distribution of (X, Y) over finite alphabets, stored row-major with
/// one row per x.
class JointPmf {
public:
    JointPmf(std::size_t x_size, std::size_t y_size, std::vector<double> entries);

    [[nodiscard]] std::size_t x_size() const noexcept { return x_size_; }
    [[nodiscard]] std::size_t y_size() const noexcept { return y_size_; }
    [[nodiscard]] double operator()(std::size_t x, std::size_t y) const noexcept {
        return entries_[x * y_size_ + y];
    }
    [[nodiscard]] std::span<const double> row(std::size_t x) const noexcept {
        return {entries_.data() + x * y_size_, y_size_};
    }

private:
    std::size_t x_size_;
    std::size_t y_size_;
    std::vector<double> entries_;
};

// All information measures are in bits.

double binary_shannon_entropy(Prob p);
double binary_renyi_entropy(RenyiOrder beta, Prob p);

/// D(p||q) between Bernoulli(p) and Bernoulli(q). Returns +infinity when p puts
/// mass where q has none.
double kl_binary(Prob p, Prob q);

double conditional_renyi_entropy(const JointPmf& joint, RenyiOrder beta);

struct Maximum {
    double argmax;
    double value;
};

inline constexpr double kDefaultLambdaTolerance = 1e-10;

/// Golden-section search for the maximum of a concave f on [0, 1]. Both
/// endpoints are evaluated explicitly and compete with the interior optimum.
/// The bracket shrinks until its width is below tol times the distance of its
/// midpoint to the nearer endpoint (floored at 1e-30), so optima hugging 0 or 1
/// are still resolved to relative precision tol.
/// -infinity is a legal value (outside the effective domain); NaN or +infinity
/// throws std::domain_error.
Maximum maximize_concave_on_unit_interval(const std::function<double(double)>& f,
                                          double tol = kDefaultLambdaTolerance);

/// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) noexcept;
    [[nodiscard]] double value() const noexcept { return sum_ + correction_; }

private:
    double sum_ = 0.0;
    double correction_ = 0.0;
};

}  // namespace guesswork
