#include "rosenblatt/errors.hpp"
#include "rosenblatt/rng.hpp"
#include "rosenblatt/stats.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace rosen;

namespace {

SamplePath linear_path(int N, double slope, double offset = 0.0) {
    SamplePath p;
    p.grid = TimeGrid(1.0, N);
    for (int k = 0; k <= N; ++k) p.values.push_back(offset + slope * p.grid.node(k));
    return p;
}

SamplePath brownian(int N, std::uint64_t seed) {
    SamplePath p;
    p.grid = TimeGrid(1.0, N);
    auto dB = sample_increments(p.grid, seed);
    p.values.push_back(0.0);
    for (int i = 0; i < N; ++i) p.values.push_back(p.values.back() + dB.values(i));
    return p;
}

}  // namespace

TEST(Hurst, LinearPathIsDegenerateWithSlopeOne) {
    HurstFit f = hurst_fit(linear_path(1024, 2.0));
    EXPECT_NEAR(f.H, 1.0, 1e-12);
    EXPECT_TRUE(f.degenerate);
    EXPECT_FALSE(hurst_fit(brownian(1024, 1)).degenerate);
}

TEST(Hurst, RequiresEnoughPoints) {
    EXPECT_THROW(hurst_estimate(linear_path(128, 1.0)), SampleSizeError);
    EXPECT_THROW(holder_estimate(linear_path(512, 1.0)), SampleSizeError);
}

TEST(Hurst, InvariantUnderShiftAndScale) {
    SamplePath b = brownian(1024, 3), c = b;
    for (double& v : c.values) v = 5.0 + 3.0 * v;
    EXPECT_NEAR(hurst_estimate(b), hurst_estimate(c), 1e-12);
    EXPECT_NEAR(holder_estimate(b), holder_estimate(c), 1e-12);
}

TEST(Hurst, BrownianMotionAverage) {
    double s = 0;
    for (int m = 0; m < 100; ++m) s += hurst_estimate(brownian(1024, 100 + m));
    EXPECT_NEAR(s / 100, 0.5, 0.05);
}

TEST(Hurst, RosenblattAverage) {
    RosenblattSimulator sim(constants(0.7), TimeGrid(1.0, 512));
    Eigen::MatrixXd Z = sim.ensemble(1, 50);
    double s = 0;
    for (Eigen::Index c = 0; c < Z.cols(); ++c) {
        SamplePath p{sim.grid(), std::vector<double>(Z.col(c).data(), Z.col(c).data() + Z.rows())};
        s += hurst_estimate(p);
    }
    EXPECT_NEAR(s / Z.cols(), 0.7, 0.07);
}

TEST(Holder, LinearAndBrownian) {
    EXPECT_NEAR(holder_estimate(linear_path(1024, 1.0)), 1.0, 1e-12);
    double s = 0;
    for (int m = 0; m < 50; ++m) s += holder_estimate(brownian(2048, 300 + m));
    EXPECT_NEAR(s / 50, 0.5, 0.07);
}

TEST(Ks, IdenticalSamples) {
    std::vector<double> a(500);
    CounterRng rng(1, 1);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = rng.normal(i);
    KsResult r = ks_two_sample(a, a);
    EXPECT_EQ(r.statistic, 0.0);
    EXPECT_EQ(r.p_value, 1.0);
}

TEST(Ks, DetectsShiftAndAcceptsSameLaw) {
    std::vector<double> a(2000), b(2000), c(2000);
    CounterRng ra(1, 1), rb(2, 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = ra.normal(i);
        b[i] = rb.normal(i);
        c[i] = rb.normal(i) + 0.5;
    }
    EXPECT_LT(ks_two_sample(a, c).p_value, 1e-6);
    EXPECT_GT(ks_two_sample(a, b).p_value, 0.01);
    EXPECT_THROW(ks_two_sample(std::vector<double>(50, 0.0), a), SampleSizeError);
}

TEST(Ks, KolmogorovDistributionValues) {
    // Q(1) and Q(1.36) from the standard tables.
    EXPECT_NEAR(kolmogorov_q(1.0), 0.26999967, 1e-7);
    EXPECT_NEAR(kolmogorov_q(1.36), 0.0494859, 1e-6);
    EXPECT_EQ(kolmogorov_q(0.0), 1.0);
}
