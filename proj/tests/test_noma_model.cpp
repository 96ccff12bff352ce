#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fblnoma/noma_model.hpp"

using namespace fblnoma;

namespace {

const ChannelGains kGains(0.64, 0.04);
const SystemParams kParams(Blocklength(100), 1e4, 1.0);

NomaDecision dec(double p1, double p2, double r1, double r2) { return NomaDecision{p1, p2, r1, r2}; }

}  // namespace

TEST(ChannelGains, RequiresOrdering) {
    EXPECT_THROW(ChannelGains(0.04, 0.64), ConstraintError);
    EXPECT_THROW(ChannelGains(0.5, 0.5), ConstraintError);
    EXPECT_THROW(ChannelGains(0.5, 0.0), ConstraintError);
}

TEST(SystemParams, Validation) {
    EXPECT_THROW(SystemParams(Blocklength(10), 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(SystemParams(Blocklength(10), 1.0, -1.0), std::invalid_argument);
}

TEST(Sinr, X2AtU1) {
    EXPECT_EQ(sinr_x2_at_u1(kGains, dec(400, 0, 0, 0)).value(), 0.0);
    EXPECT_DOUBLE_EQ(sinr_x2_at_u1(kGains, dec(0, 1e4, 0, 0)).value(), 1e4 * 0.64);
    EXPECT_NEAR(sinr_x2_at_u1(kGains, dec(400, 600, 0, 0)).value(), 384.0 / 257.0, 1e-14);
}

TEST(Sinr, X1AfterSic) {
    EXPECT_EQ(snr_x1_sic(kGains, dec(0, 600, 0, 0)).value(), 0.0);
    EXPECT_DOUBLE_EQ(snr_x1_sic(kGains, dec(400, 600, 0, 0)).value(), 256.0);
    EXPECT_DOUBLE_EQ(snr_x1_sic(kGains, dec(800, 600, 0, 0)).value(),
                     2.0 * snr_x1_sic(kGains, dec(400, 600, 0, 0)).value());
}

TEST(Sinr, X1WithoutSic) {
    EXPECT_DOUBLE_EQ(sinr_x1_nosic(kGains, dec(400, 0, 0, 0)).value(),
                     snr_x1_sic(kGains, dec(400, 0, 0, 0)).value());
    EXPECT_NEAR(sinr_x1_nosic(kGains, dec(400, 600, 0, 0)).value(), 256.0 / 385.0, 1e-14);
    EXPECT_EQ(sinr_x1_nosic(kGains, dec(0, 600, 0, 0)).value(), 0.0);
}

TEST(Sinr, X2AtU2) {
    EXPECT_EQ(sinr_x2_at_u2(kGains, dec(400, 0, 0, 0)).value(), 0.0);
    EXPECT_NEAR(sinr_x2_at_u2(kGains, dec(400, 600, 0, 0)).value(), 24.0 / 17.0, 1e-14);
    EXPECT_GT(sinr_x2_at_u1(kGains, dec(400, 600, 0, 0)).value(),
              sinr_x2_at_u2(kGains, dec(400, 600, 0, 0)).value());
}

TEST(Eps1Prime, Branches) {
    const auto d = dec(400, 600, 0.0, 0.0);
    const double cap = capacity(sinr_x1_nosic(kGains, d).value());
    EXPECT_EQ(eps1_prime(kGains, dec(400, 600, cap + 1e-6, 0), Blocklength(100)).value(), 1.0);
    EXPECT_NEAR(eps1_prime(kGains, dec(400, 600, cap, 0), Blocklength(100)).value(), 0.5, 1e-12);
    const auto d0 = dec(400, 0, 7.0, 0);
    EXPECT_DOUBLE_EQ(eps1_prime(kGains, d0, Blocklength(100)).value(),
                     decode_error_prob(SnrValue(256.0), Blocklength(100), Rate(7.0)).value());
}

TEST(EvaluateNoma, ZeroRates) {
    const auto e = evaluate_noma(kGains, dec(4000, 6000, 0, 0), kParams);
    EXPECT_EQ(e.t1_bar, 0.0);
    EXPECT_EQ(e.t2_bar, 0.0);
}

TEST(EvaluateNoma, SingleUserReduction) {
    const double r1 = 10.0;
    const auto e = evaluate_noma(kGains, dec(1e4, 0, r1, 0), kParams);
    EXPECT_EQ(e.eps21, 0.0);
    EXPECT_EQ(e.t2_bar, 0.0);
    const double ref =
        r1 * (1.0 - decode_error_prob(SnrValue(1e4 * 0.64), Blocklength(100), Rate(r1)).value());
    EXPECT_DOUBLE_EQ(e.t1_bar, ref);
}

TEST(EvaluateNoma, BudgetViolation) {
    EXPECT_THROW(evaluate_noma(kGains, dec(6000, 6000, 1, 1), kParams), ConstraintError);
    EXPECT_THROW(evaluate_noma(kGains, dec(-1, 6000, 1, 1), kParams), ConstraintError);
    EXPECT_NO_THROW(evaluate_noma(kGains, dec(4000, 6000 * (1 + 1e-12), 1, 1), kParams));
}

// Values from an extended-precision straight-line evaluation of the model.
TEST(EvaluateNoma, StraightLineRecomputation) {
    const ChannelGains g(0.64, 0.01);
    const auto e = evaluate_noma(g, dec(9000, 1000, 10, 1), SystemParams(Blocklength(100), 1e4, 0));
    EXPECT_NEAR(e.gamma21, 0.11109182433605276862, 1e-15);
    EXPECT_DOUBLE_EQ(e.gamma1, 5760.0);
    EXPECT_NEAR(e.gamma1_prime, 8.9859594383775351014, 1e-13);
    EXPECT_NEAR(e.gamma2, 0.10989010989010989011, 1e-15);
    EXPECT_NEAR(e.eps21, 1.0, 1e-15);
    EXPECT_NEAR(e.eps1, 3.6955877458973535065e-67, 1e-78);
    EXPECT_EQ(e.eps1_prime, 1.0);
    EXPECT_NEAR(e.eps2, 1.0, 1e-15);
    EXPECT_NEAR(e.eps_bar1, 1.0, 1e-15);
    EXPECT_NEAR(e.t1_bar, 0.0, 1e-12);
    EXPECT_NEAR(e.t2_bar, 0.0, 1e-12);
}

TEST(EvaluateNoma, ModerateInstanceInvariants) {
    const auto d = dec(4000, 6000, 11.0, 1.2);
    const auto e = evaluate_noma(kGains, d, kParams);
    EXPECT_GT(e.gamma1, e.gamma1_prime);
    EXPECT_GE(e.eps1_prime, e.eps1);
    EXPECT_NEAR(e.eps_bar1, e.eps1 * (1 - e.eps21) + e.eps1_prime * e.eps21, 1e-15);
    EXPECT_GE(e.t1_bar, 0.0);
    EXPECT_LE(e.t1_bar, d.r1);
    EXPECT_GE(e.t2_bar, 0.0);
    EXPECT_LE(e.t2_bar, d.r2);
}

TEST(EvaluateNoma, EffectiveErrorGrowsWithSicOutage) {
    // R2 moves eps21 only; eps_bar1 must follow with slope eps1' - eps1 >= 0.
    const SystemParams params(Blocklength(100), 100.0, 0.0);
    const auto base = dec(40, 60, 0.7, 1.2);
    const auto a = evaluate_noma(kGains, base, params);
    auto moved = base;
    moved.r2 += 1e-4;
    const auto b = evaluate_noma(kGains, moved, params);
    ASSERT_GT(b.eps21, a.eps21);
    const double slope = (b.eps_bar1 - a.eps_bar1) / (b.eps21 - a.eps21);
    EXPECT_NEAR(slope, a.eps1_prime - a.eps1, 1e-9);
    EXPECT_GE(slope, 0.0);
}

TEST(EvaluateNoma, PowerScalingImprovesEveryLink) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::uniform_real_distribution<double> lp(0.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double p = std::pow(10.0, lp(rng));
        const double share = u(rng);
        const SystemParams params(Blocklength(100), 4.0 * p, 0.0);
        auto d = dec(share * p, (1 - share) * p, 0.0, 0.0);
        const auto e0 = evaluate_noma(kGains, d, params);
        d.r1 = 0.5 * capacity(e0.gamma1_prime);
        d.r2 = 0.5 * capacity(e0.gamma2);
        const auto a = evaluate_noma(kGains, d, params);
        auto s = d;
        s.p1 *= 1.5;
        s.p2 *= 1.5;
        const auto b = evaluate_noma(kGains, s, params);
        EXPECT_GT(b.gamma2, a.gamma2);
        EXPECT_GT(b.gamma21, a.gamma21);
        EXPECT_GT(b.gamma1, a.gamma1);
        EXPECT_GT(b.gamma1_prime, a.gamma1_prime);
        // Strict where the probabilities are representable.
        auto less = [](double x, double y) { return x < y || (y == x && x < 1e-300); };
        EXPECT_TRUE(less(b.eps2, a.eps2));
        EXPECT_TRUE(less(b.eps21, a.eps21));
        EXPECT_TRUE(less(b.eps1, a.eps1));
        EXPECT_TRUE(less(b.eps1_prime, a.eps1_prime));
    }
}

TEST(EvaluateNoma, BernoulliSimulationMatchesEffectiveError) {
    const SystemParams params(Blocklength(100), 100.0, 0.0);
    const auto d = dec(40, 60, 0.7, 1.2);
    const auto e = evaluate_noma(kGains, d, params);
    ASSERT_GT(e.eps21, 0.01);
    ASSERT_GT(e.eps1_prime, 0.01);

    std::mt19937_64 rng(12345);
    std::bernoulli_distribution sic_fail(e.eps21);
    std::bernoulli_distribution x1_fail_sic(e.eps1);
    std::bernoulli_distribution x1_fail_nosic(e.eps1_prime);
    const int trials = 1000000;
    long errors = 0;
    for (int t = 0; t < trials; ++t) {
        const bool err = sic_fail(rng) ? x1_fail_nosic(rng) : x1_fail_sic(rng);
        errors += err ? 1 : 0;
    }
    const double est = static_cast<double>(errors) / trials;
    const double se = std::sqrt(e.eps_bar1 * (1 - e.eps_bar1) / trials);
    EXPECT_LE(std::abs(est - e.eps_bar1), 3.0 * se) << est << " vs " << e.eps_bar1;
}
