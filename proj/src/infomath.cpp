#include "guesswork/infomath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace guesswork {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x * log2(x / y) with 0 log 0 = 0 and the +inf convention for y = 0.
double relative_term(double x, double y) {
    if (x == 0.0) return 0.0;
    if (y == 0.0) return kInf;
    return x * std::log2(x / y);
}

double neg_x_log_x(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }

void check_probe(double value, double lambda) {
    if (std::isnan(value) || value == kInf) {
        throw std::domain_error("objective is " + std::to_string(value) + " at lambda = " +
                                std::to_string(lambda));
    }
}

}  // namespace

Prob::Prob(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::invalid_argument("probability out of [0, 1]: " + std::to_string(value));
    }
}

RenyiOrder::RenyiOrder(double beta) : beta_(beta), shannon_(beta == 1.0) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("Renyi order must be positive and finite");
    }
}

RenyiOrder RenyiOrder::shannon() noexcept { return RenyiOrder(); }

JointPmf::JointPmf(std::size_t x_size, std::size_t y_size, std::vector<double> entries)
    : x_size_(x_size), y_size_(y_size), entries_(std::move(entries)) {
    if (x_size_ == 0 || y_size_ == 0 || entries_.size() != x_size_ * y_size_) {
        throw std::invalid_argument("joint pmf shape mismatch");
    }
    CompensatedSum total;
    for (double p : entries_) {
        if (!(p >= 0.0)) throw std::invalid_argument("joint pmf has a negative entry");
        total.add(p);
    }
    if (std::abs(total.value() - 1.0) > 1e-12) {
        throw std::invalid_argument("joint pmf does not sum to 1");
    }
}

double binary_shannon_entropy(Prob p) {
    return neg_x_log_x(p.value()) + neg_x_log_x(1.0 - p.value());
}

double binary_renyi_entropy(RenyiOrder beta, Prob p) {
    if (beta.is_shannon()) return binary_shannon_entropy(p);
    const double b = beta.beta();
    const double q = p.value();
    // 0^beta = 0 for beta > 0, so the deterministic case yields log2(1) = 0.
    return std::log2(std::pow(q, b) + std::pow(1.0 - q, b)) / (1.0 - b);
}

double kl_binary(Prob p, Prob q) {
    return relative_term(p.value(), q.value()) + relative_term(1.0 - p.value(), 1.0 - q.value());
}

double conditional_renyi_entropy(const JointPmf& joint, RenyiOrder beta) {
    if (beta.is_shannon()) {
        // H(X|Y) = H(X,Y) - H(Y)
        CompensatedSum h;
        for (std::size_t y = 0; y < joint.y_size(); ++y) {
            double py = 0.0;
            for (std::size_t x = 0; x < joint.x_size(); ++x) {
                const double pxy = joint(x, y);
                py += pxy;
                h.add(neg_x_log_x(pxy));
            }
            h.add(-neg_x_log_x(py));
        }
        return h.value();
    }
    const double b = beta.beta();
    CompensatedSum outer;
    for (std::size_t y = 0; y < joint.y_size(); ++y) {
        double inner = 0.0;
        for (std::size_t x = 0; x < joint.x_size(); ++x) inner += std::pow(joint(x, y), b);
        outer.add(std::pow(inner, 1.0 / b));
    }
    return b / (1.0 - b) * std::log2(outer.value());
}

Maximum maximize_concave_on_unit_interval(const std::function<double(double)>& f, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0;
    double hi = 1.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    check_probe(f1, x1);
    check_probe(f2, x2);

    const auto scale = [](double a, double b) {
        const double mid = 0.5 * (a + b);
        return std::max(std::min(mid, 1.0 - mid), 1e-30);
    };
    // The cap only matters when 1 - mid falls below the spacing of doubles near 1.
    for (int iter = 0; iter < 400 && hi - lo > tol * scale(lo, hi); ++iter) {
        // Ties (including both -inf) keep the left part; boundaries are
        // compared separately below.
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
            check_probe(f2, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
            check_probe(f1, x1);
        }
    }

    Maximum best{x1, f1};
    if (f2 > best.value) best = {x2, f2};
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    check_probe(f_mid, mid);
    if (f_mid > best.value) best = {mid, f_mid};

    for (double edge : {0.0, 1.0}) {
        const double value = f(edge);
        if (std::isnan(value) || value == kInf) check_probe(value, edge);
        if (value >= best.value) best = {edge, value};
    }
    return best;
}

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        correction_ += (sum_ - t) + x;
    } else {
        correction_ += (x - t) + sum_;
    }
    sum_ = t;
}

}  // namespace guesswork
