#include <cmath>
#include <limits>
#include <stdexcept>

#include <gtest/gtest.h>

#include "guesswork/infomath.hpp"

using namespace guesswork;

namespace {

double grid_max(const std::function<double(double)>& f, double step, double* arg = nullptr) {
    double best = -std::numeric_limits<double>::infinity();
    for (double x = 0.0; x <= 1.0; x += step) {
        const double v = f(x);
        if (v > best) {
            best = v;
            if (arg) *arg = x;
        }
    }
    return best;
}

}  // namespace

TEST(Prob, RejectsOutOfRange) {
    EXPECT_THROW(Prob(-0.1), std::invalid_argument);
    EXPECT_THROW(Prob(1.0000001), std::invalid_argument);
    EXPECT_THROW(Prob(std::nan("")), std::invalid_argument);
    EXPECT_DOUBLE_EQ(Prob(0.3).complement().value(), 0.7);
}

TEST(RenyiOrder, ValidatesAndMarksShannon) {
    EXPECT_THROW(RenyiOrder(0.0), std::invalid_argument);
    EXPECT_THROW(RenyiOrder(-1.0), std::invalid_argument);
    EXPECT_TRUE(RenyiOrder::shannon().is_shannon());
    EXPECT_FALSE(RenyiOrder(0.5).is_shannon());
}

TEST(BinaryShannonEntropy, KnownValues) {
    EXPECT_DOUBLE_EQ(binary_shannon_entropy(Prob(0.5)), 1.0);
    EXPECT_EQ(binary_shannon_entropy(Prob(0.0)), 0.0);
    EXPECT_EQ(binary_shannon_entropy(Prob(1.0)), 0.0);
    EXPECT_NEAR(binary_shannon_entropy(Prob(0.25)), 2.0 - 0.75 * std::log2(3.0), 1e-12);
}

TEST(BinaryRenyiEntropy, KnownValues) {
    EXPECT_NEAR(binary_renyi_entropy(RenyiOrder(0.5), Prob(0.5)), 1.0, 1e-15);
    for (double beta : {0.2, 0.5, 2.0, 7.0}) {
        EXPECT_EQ(binary_renyi_entropy(RenyiOrder(beta), Prob(0.0)), 0.0);
    }
    EXPECT_NEAR(binary_renyi_entropy(RenyiOrder(0.5), Prob(0.1)), 0.6780719051126377, 1e-12);
    EXPECT_NEAR(binary_renyi_entropy(RenyiOrder(0.5), Prob(0.1)),
                2.0 * std::log2(std::sqrt(0.1) + std::sqrt(0.9)), 1e-14);
}

TEST(BinaryRenyiEntropy, OrderedInBetaAndTendsToShannon) {
    for (double p : {0.05, 0.2, 0.35}) {
        double previous = std::numeric_limits<double>::infinity();
        for (double beta : {0.1, 0.3, 0.6, 0.9, 1.5, 3.0, 10.0}) {
            const double h = binary_renyi_entropy(RenyiOrder(beta), Prob(p));
            EXPECT_LE(h, previous + 1e-15);
            previous = h;
        }
        EXPECT_NEAR(binary_renyi_entropy(RenyiOrder(1.0 + 1e-7), Prob(p)), binary_shannon_entropy(Prob(p)),
                    1e-6);
    }
}

TEST(KlBinary, KnownValues) {
    EXPECT_EQ(kl_binary(Prob(0.3), Prob(0.3)), 0.0);
    EXPECT_NEAR(kl_binary(Prob(0.0), Prob(0.4)), std::log2(1.0 / 0.6), 1e-14);
    EXPECT_NEAR(kl_binary(Prob(0.5), Prob(0.25)), 1.0 - 0.5 * std::log2(3.0), 1e-12);
    EXPECT_NEAR(kl_binary(Prob(0.5), Prob(0.25)), 0.20751874963942196, 1e-14);
}

TEST(KlBinary, InfiniteOutsideSupportAndNonNegative) {
    EXPECT_EQ(kl_binary(Prob(0.2), Prob(0.0)), std::numeric_limits<double>::infinity());
    EXPECT_EQ(kl_binary(Prob(0.2), Prob(1.0)), std::numeric_limits<double>::infinity());
    EXPECT_EQ(kl_binary(Prob(0.0), Prob(0.0)), 0.0);
    for (double p = 0.0; p <= 1.0; p += 0.05) {
        for (double q = 0.05; q < 1.0; q += 0.05) EXPECT_GE(kl_binary(Prob(p), Prob(q)), 0.0);
    }
}

TEST(JointPmf, ValidatesShapeAndMass) {
    EXPECT_THROW(JointPmf(2, 2, {0.5, 0.5, 0.5}), std::invalid_argument);
    EXPECT_THROW(JointPmf(2, 1, {0.5, 0.6}), std::invalid_argument);
    EXPECT_THROW(JointPmf(2, 1, {1.5, -0.5}), std::invalid_argument);
    const JointPmf j(2, 2, {0.1, 0.2, 0.3, 0.4});
    EXPECT_DOUBLE_EQ(j(1, 0), 0.3);
    EXPECT_EQ(j.row(1).size(), 2U);
}

TEST(ConditionalRenyiEntropy, IndependentUniformBit) {
    const JointPmf j(2, 3, {0.1, 0.15, 0.25, 0.1, 0.15, 0.25});
    for (double beta : {0.25, 0.5, 0.9, 2.0}) {
        EXPECT_NEAR(conditional_renyi_entropy(j, RenyiOrder(beta)), 1.0, 1e-14);
    }
    EXPECT_NEAR(conditional_renyi_entropy(j, RenyiOrder::shannon()), 1.0, 1e-14);
}

TEST(ConditionalRenyiEntropy, SingleBscReducesToBinaryRenyi) {
    for (double delta : {0.01, 0.1, 0.25, 0.4}) {
        const JointPmf j(2, 2, {(1 - delta) / 2, delta / 2, delta / 2, (1 - delta) / 2});
        for (double alpha : {0.25, 1.0, 4.0}) {
            const RenyiOrder beta(1.0 / (1.0 + alpha));
            EXPECT_NEAR(conditional_renyi_entropy(j, beta), binary_renyi_entropy(beta, Prob(delta)), 1e-13);
        }
        EXPECT_NEAR(conditional_renyi_entropy(j, RenyiOrder::shannon()), binary_shannon_entropy(Prob(delta)),
                    1e-13);
    }
}

TEST(ConditionalRenyiEntropy, TwoBscOutputsHalfOrder) {
    const double d = 0.25;
    const double a = (1 - d) * (1 - d) / 2;
    const double b = d * (1 - d) / 2;
    const double c = d * d / 2;
    // rows: x = 0, 1; columns: (y1, y2) = 00, 01, 10, 11
    const JointPmf j(2, 4, {a, b, b, c, c, b, b, a});
    EXPECT_NEAR(conditional_renyi_entropy(j, RenyiOrder(0.5)), std::log2(1.75), 1e-12);
}

TEST(Maximizer, Quadratic) {
    const Maximum m = maximize_concave_on_unit_interval([](double l) { return -(l - 0.3) * (l - 0.3); });
    EXPECT_NEAR(m.argmax, 0.3, 1e-8);
    EXPECT_NEAR(m.value, 0.0, 1e-15);
}

TEST(Maximizer, SingleAgentErasureObjective) {
    const auto f = [](double l) { return l - kl_binary(Prob(l), Prob(0.5)); };
    const Maximum m = maximize_concave_on_unit_interval(f);
    EXPECT_NEAR(m.argmax, 2.0 / 3.0, 1e-8);
    EXPECT_NEAR(m.value, std::log2(1.5), 1e-12);
}

TEST(Maximizer, TwoAgentErasureObjectiveAgainstGridSearch) {
    const auto f = [](double l) { return l - 2.0 * kl_binary(Prob(l), Prob(0.5)); };
    const Maximum m = maximize_concave_on_unit_interval(f);
    double grid_arg = 0.0;
    const double grid_value = grid_max(f, 1e-6, &grid_arg);
    EXPECT_NEAR(m.argmax, std::sqrt(2.0) / (1.0 + std::sqrt(2.0)), 1e-8);
    EXPECT_NEAR(m.argmax, grid_arg, 2e-6);
    EXPECT_NEAR(m.value, 2.0 * std::log2((std::sqrt(2.0) + 1.0) / 2.0), 1e-12);
    EXPECT_GE(m.value, grid_value - 1e-15);
    EXPECT_NEAR(m.value, grid_value, 1e-11);
}

TEST(Maximizer, EndpointOptimum) {
    const Maximum up = maximize_concave_on_unit_interval([](double l) { return 2.0 * l; });
    EXPECT_EQ(up.argmax, 1.0);
    EXPECT_EQ(up.value, 2.0);
    const Maximum down = maximize_concave_on_unit_interval([](double l) { return -l; });
    EXPECT_EQ(down.argmax, 0.0);
    EXPECT_EQ(down.value, 0.0);
}

TEST(Maximizer, MinusInfinityIsOutsideDomain) {
    // concave on [0, 0.5], -inf beyond
    const auto f = [](double l) {
        return l > 0.5 ? -std::numeric_limits<double>::infinity() : l - 2.0 * l * l;
    };
    const Maximum m = maximize_concave_on_unit_interval(f);
    EXPECT_NEAR(m.argmax, 0.25, 1e-8);
    EXPECT_NEAR(m.value, 0.125, 1e-14);
}

TEST(Maximizer, RejectsNanAndPlusInfinity) {
    EXPECT_THROW(maximize_concave_on_unit_interval([](double) { return std::nan(""); }), std::domain_error);
    EXPECT_THROW(
        maximize_concave_on_unit_interval([](double) { return std::numeric_limits<double>::infinity(); }),
        std::domain_error);
}

TEST(CompensatedSum, RecoversCancelledTerms) {
    CompensatedSum s;
    s.add(1e16);
    s.add(1.0);
    s.add(-1e16);
    EXPECT_EQ(s.value(), 1.0);

    CompensatedSum many;
    for (int i = 0; i < 1000000; ++i) many.add(0.1);
    EXPECT_NEAR(many.value(), 100000.0, 1e-9);
}
