#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "popcheck/means.hpp"
#include "popcheck/random.hpp"

using namespace popcheck;

namespace {

// Neuman's three-term formula in long double; only used on well-separated points.
long double oracle_log_mean3(long double a, long double b, long double c) {
    const auto l = [](long double u, long double v) { return std::log(u / v); };
    return 2 * a / (l(a, b) * l(a, c)) + 2 * b / (l(b, a) * l(b, c)) + 2 * c / (l(c, a) * l(c, b));
}

} // namespace

TEST(Generator, ParseAndInvert) {
    for (const char* spec : {"identity", "A", "log", "G", "exp", "H", "power:2", "power:-0.5", "power:3"}) {
        const auto g = Generator::parse(spec);
        for (double x : {0.3, 1.0, 2.5, 7.0}) {
            EXPECT_NEAR(g.invert(g.apply(x)), x, 1e-12 * x) << spec << " x=" << x;
        }
    }
    EXPECT_THROW(Generator::parse("power:0"), DomainError);
    EXPECT_THROW(Generator::parse("power"), RegistryError);
    EXPECT_THROW(Generator::parse("sqrt"), RegistryError);
}

TEST(Generator, Monotonicity) {
    EXPECT_TRUE(Generator::parse("log").increasing());
    EXPECT_TRUE(Generator::parse("power:2").increasing());
    EXPECT_FALSE(Generator::parse("H").increasing());
    EXPECT_FALSE(Generator::parse("power:-2").increasing());
}

TEST(QaMean, Classical) {
    const PointSet pts{1.0, 4.0};
    EXPECT_DOUBLE_EQ(means::qa_mean(Generator::identity(), pts), 2.5);
    EXPECT_NEAR(means::qa_mean(Generator::log(), pts), 2.0, 1e-15);
    EXPECT_NEAR(means::qa_mean(Generator::power(-1), pts), 1.6, 1e-15);
    EXPECT_NEAR(means::qa_mean(Generator::exp(), pts), std::log((std::exp(1.0) + std::exp(4.0)) / 2), 1e-14);
}

TEST(QaMean, Weighted) {
    const PointSet pts({1.0, 9.0}, {0.75, 0.25});
    EXPECT_DOUBLE_EQ(means::qa_mean(Generator::identity(), pts), 3.0);
    EXPECT_NEAR(means::qa_mean(Generator::log(), pts), std::pow(9.0, 0.25), 1e-14);
    EXPECT_THROW(means::qa_mean(Generator::identity(), PointSet({1.0, 2.0}, {0.5, 0.6})), DomainError);
    EXPECT_THROW(means::qa_mean(Generator::identity(), PointSet({1.0, 2.0}, {1.0})), DomainError);
    EXPECT_THROW(means::qa_mean(Generator::identity(), PointSet{}), DomainError);
}

TEST(QaMean, StaysBetweenMinAndMax) {
    SeededSampler rng(21);
    for (int i = 0; i < 5000; ++i) {
        const PointSet pts{rng.uniform(0.01, 100), rng.uniform(0.01, 100), rng.uniform(0.01, 100)};
        const double lo = *std::min_element(pts.values.begin(), pts.values.end());
        const double hi = *std::max_element(pts.values.begin(), pts.values.end());
        for (const auto& g : {Generator::log(), Generator::power(-3), Generator::power(5), Generator::exp()}) {
            const double m = means::qa_mean(g, pts);
            EXPECT_GE(m, lo);
            EXPECT_LE(m, hi);
        }
    }
}

TEST(PowerMean, LimitsAndSpecialOrders) {
    const PointSet pts{2.0, 8.0};
    EXPECT_EQ(means::power_mean(-kInf, pts), 2.0);
    EXPECT_EQ(means::power_mean(kInf, pts), 8.0);
    EXPECT_NEAR(means::power_mean(0.0, pts), 4.0, 1e-14);
    EXPECT_NEAR(means::power_mean(1.0, pts), 5.0, 1e-14);
    EXPECT_NEAR(means::power_mean(-1.0, pts), 3.2, 1e-14);
    EXPECT_NEAR(means::power_mean(2.0, pts), std::sqrt(34.0), 1e-13);
}

TEST(PowerMean, LargeOrdersApproachExtremes) {
    const PointSet pts{1e-200, 3.0, 1e200};
    EXPECT_TRUE(std::isfinite(means::power_mean(400.0, pts)));
    EXPECT_NEAR(means::power_mean(1e6, PointSet{2.0, 8.0}), 8.0, 1e-5);
    EXPECT_NEAR(means::power_mean(-1e6, PointSet{2.0, 8.0}), 2.0, 1e-5);
}

TEST(PowerMean, Domain) {
    EXPECT_THROW(means::power_mean(-1.0, PointSet{0.0, 1.0}), DomainError);
    EXPECT_THROW(means::power_mean(0.0, PointSet{0.0, 1.0}), DomainError);
    EXPECT_NEAR(means::power_mean(2.0, PointSet{0.0, 2.0}), std::sqrt(2.0), 1e-15);
    EXPECT_THROW(means::power_mean(1.0, PointSet{-1.0, 1.0}), DomainError);
}

TEST(PowerMean, MonotoneInOrder) {
    SeededSampler rng(22);
    const double orders[] = {-kInf, -20, -3, -1, -0.5, 0, 0.5, 1, 2, 3, 20, kInf};
    for (int i = 0; i < 3000; ++i) {
        const PointSet pts{rng.uniform(0.01, 50), rng.uniform(0.01, 50), rng.uniform(0.01, 50)};
        double prev = -kInf;
        for (double p : orders) {
            const double m = means::power_mean(p, pts);
            EXPECT_GE(m, prev - 1e-12 * std::max(1.0, prev));
            prev = m;
        }
    }
}

TEST(LogMean2, ValuesAndCoincidence) {
    EXPECT_NEAR(means::log_mean2(1.0, 4.0), 2.164042561333445111, 1e-15);
    EXPECT_NEAR(means::log_mean2(1.0, std::numbers::e), 1.7182818284590452354, 1e-15);
    EXPECT_EQ(means::log_mean2(3.0, 3.0), 3.0);
    EXPECT_NEAR(means::log_mean2(3.0, 3.0 * (1 + 1e-10)), 3.0 * (1 + 0.5e-10), 1e-14);
    EXPECT_DOUBLE_EQ(means::log_mean2(2.0, 7.0), means::log_mean2(7.0, 2.0));
    EXPECT_THROW(means::log_mean2(0.0, 1.0), DomainError);
}

TEST(LogMean3, ValuesAndSymmetry) {
    const double e = std::numbers::e;
    EXPECT_NEAR(means::log_mean3(1.0, e, e * e), 2.9524924420125597565, 1e-14);
    const double v = means::log_mean3(2.0, 5.0, 11.0);
    EXPECT_DOUBLE_EQ(v, means::log_mean3(11.0, 2.0, 5.0));
    EXPECT_DOUBLE_EQ(v, means::log_mean3(5.0, 11.0, 2.0));
    EXPECT_THROW(means::log_mean3(1.0, -2.0, 3.0), DomainError);
}

TEST(LogMean3, MatchesThreeTermOracle) {
    SeededSampler rng(23);
    for (int i = 0; i < 3000; ++i) {
        const double a = rng.uniform(0.1, 1.0);
        const double b = a * rng.uniform(1.5, 4.0);
        const double c = b * rng.uniform(1.5, 4.0);
        const double want = static_cast<double>(oracle_log_mean3(a, b, c));
        EXPECT_NEAR(means::log_mean3(a, b, c), want, 1e-12 * want);
    }
}

TEST(LogMean3, ContinuousThroughCoincidences) {
    // All equal, two equal (low pair, high pair), and near misses of each.
    EXPECT_DOUBLE_EQ(means::log_mean3(2.0, 2.0, 2.0), 2.0);
    for (double eps : {1e-4, 1e-8, 1e-12, 0.0}) {
        const double lo_pair = means::log_mean3(1.0, 1.0 + eps, 3.0);
        const double hi_pair = means::log_mean3(1.0, 3.0, 3.0 + eps);
        // Confluent limits: 2 [x0, x0, x1] exp with logs 0 and ln 3.
        const double d = std::log(3.0);
        EXPECT_NEAR(lo_pair, 2.0 * (3.0 - 1.0 - d) / (d * d), 2.0 * eps + 1e-13);
        EXPECT_NEAR(hi_pair, 2.0 * (3.0 * d - 3.0 + 1.0) / (d * d), 2.0 * eps + 1e-13);
        const double triple = means::log_mean3(5.0, 5.0 * (1 + eps), 5.0 * (1 + 2 * eps));
        EXPECT_NEAR(triple, 5.0 * (1 + eps), 5.0 * eps * eps + 1e-13);
    }
}

TEST(LogMean3, ReducesToIdentityOnEqualPoints) {
    SeededSampler rng(24);
    for (int i = 0; i < 1000; ++i) {
        const double a = rng.uniform(1e-3, 1e3);
        EXPECT_NEAR(means::log_mean3(a, a, a), a, 1e-14 * a);
    }
}

TEST(IdentricMean, Values) {
    EXPECT_NEAR(means::identric_mean(1.0, std::numbers::e), 1.7895723968418334511, 1e-15);
    EXPECT_NEAR(means::identric_mean(1.0, 2.0), 1.4715177646857692864, 1e-15);
    EXPECT_EQ(means::identric_mean(4.0, 4.0), 4.0);
    EXPECT_DOUBLE_EQ(means::identric_mean(2.0, 9.0), means::identric_mean(9.0, 2.0));
}

TEST(MeanChain, GeometricLogIdentricArithmetic) {
    SeededSampler rng(25);
    for (int i = 0; i < 5000; ++i) {
        const double a = rng.uniform(1e-3, 1e3);
        const double b = rng.uniform(1e-3, 1e3);
        const double g = std::sqrt(a * b);
        const double l = means::log_mean2(a, b);
        const double id = means::identric_mean(a, b);
        const double ar = 0.5 * (a + b);
        const double slack = 1e-12 * std::max(a, b);
        EXPECT_LE(g, l + slack);
        EXPECT_LE(l, id + slack);
        EXPECT_LE(id, ar + slack);
    }
}
