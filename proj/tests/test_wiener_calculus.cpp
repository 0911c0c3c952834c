#include "rosenblatt/errors.hpp"
#include "rosenblatt/spde.hpp"
#include "rosenblatt/wiener_calculus.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rosen;

namespace {

StepFunction test_function() {
    return StepFunction({0.0, 0.5, 1.0}, {1.0, -2.0});
}

}  // namespace

TEST(StepFunctions, EvaluationAndArithmetic) {
    StepFunction f = test_function();
    EXPECT_EQ(f(0.0), 0.0);
    EXPECT_EQ(f(0.25), 1.0);
    EXPECT_EQ(f(0.5), 1.0);
    EXPECT_EQ(f(0.75), -2.0);
    EXPECT_EQ(f(1.5), 0.0);
    StepFunction g = f + StepFunction::indicator(0.25, 0.75, 3.0);
    EXPECT_EQ(g(0.3), 4.0);
    EXPECT_EQ(g(0.7), 1.0);
    EXPECT_EQ(g(0.9), -2.0);
    EXPECT_EQ((f - f)(0.3), 0.0);
    EXPECT_EQ(f.abs()(0.8), 2.0);
    EXPECT_EQ((f * 0.5)(0.8), -1.0);
    EXPECT_THROW(StepFunction({0.0, 0.5}, {1.0, 2.0}), ShapeError);
    EXPECT_THROW(StepFunction({0.5, 0.5}, {1.0}), DomainError);
}

TEST(StepFunctions, GridLevelsRequireNodes) {
    TimeGrid grid(1.0, 4);
    auto lv = test_function().grid_levels(grid);
    EXPECT_EQ(lv, (std::vector<double>{1.0, 1.0, -2.0, -2.0}));
    EXPECT_THROW(StepFunction::indicator(0.0, 0.3).grid_levels(grid), DomainError);
}

TEST(NormH, IndicatorGivesPowerOfLength) {
    for (double H : {0.6, 0.7, 0.9}) {
        HurstParams p = constants(H);
        for (double t : {0.3, 1.0, 2.5}) EXPECT_NEAR(norm_H(p, StepFunction::indicator(0.0, t)), std::pow(t, 2 * H), 1e-13);
        EXPECT_NEAR(norm_H(p, StepFunction::indicator(0.4, 0.9)), std::pow(0.5, 2 * H), 1e-13);
    }
    EXPECT_EQ(norm_H(constants(0.7), StepFunction::indicator(0.0, 1.0, 0.0)), 0.0);
}

TEST(NormH, ParallelogramLaw) {
    HurstParams p = constants(0.7);
    StepFunction f = test_function(), g = StepFunction({0.0, 0.2, 0.6, 1.0}, {0.5, 2.0, -1.0});
    double lhs = norm_H(p, f + g) + norm_H(p, f - g);
    double rhs = 2 * norm_H(p, f) + 2 * norm_H(p, g);
    EXPECT_NEAR(lhs, rhs, 1e-10);
}

TEST(NormH, GridLevelsOverloadAgreesAndAbsIsLarger) {
    HurstParams p = constants(0.7);
    TimeGrid grid(1.0, 4);
    StepFunction f = test_function();
    EXPECT_NEAR(norm_H(p, grid, f.grid_levels(grid)), norm_H(p, f), 1e-13);
    EXPECT_GT(norm_abs_H(p, f), norm_H(p, f));
}

TEST(NormH, GridKernelVersionAgreesAtN256) {
    // The grid value converges from below at rate dt^(2H-1); at H = 0.8 the
    // gap at N = 256 is well under 2%.
    HurstParams p = constants(0.8);
    TimeGrid grid(1.0, 256);
    RosenblattSimulator sim(p, grid);
    StepFunction f = test_function();
    double exact = norm_H(p, f), grid_value = norm_H_grid(sim.factor(), f);
    EXPECT_NEAR(grid_value, exact, 0.02 * exact);
}

TEST(WienerIntegral, IndicatorGivesProcessValue) {
    HurstParams p = constants(0.7);
    TimeGrid grid(1.0, 32);
    SamplePath Z = simulate_kernel_method(p, grid, 4);
    EXPECT_NEAR(wiener_integral(Z, StepFunction::indicator(0.0, 0.5)), Z.values[16], 1e-14);
    EXPECT_NEAR(wiener_integral(Z, StepFunction::indicator(0.25, 1.0)), Z.values[32] - Z.values[8], 1e-14);
    EXPECT_EQ(wiener_integral(Z, StepFunction::indicator(0.0, 1.0, 0.0)), 0.0);
}

TEST(WienerIntegral, IncrementAndChaosFormsAgree) {
    HurstParams p = constants(0.7);
    TimeGrid grid(1.0, 32);
    for (bool comp : {false, true}) {
        SimulationOptions opt;
        opt.compensate = comp;
        RosenblattSimulator sim(p, grid, opt);
        StepFunction f = test_function() + StepFunction::indicator(0.125, 0.375, 0.7);
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            double a = wiener_integral(sim.path(seed), f);
            double b = wiener_integral(sim, f, sample_increments(sim.partition(), seed));
            EXPECT_NEAR(a, b, 1e-10) << comp << " " << seed;
        }
    }
}

TEST(WienerIntegral, LinearInTheIntegrand) {
    TimeGrid grid(1.0, 16);
    SamplePath Z = simulate_kernel_method(constants(0.7), grid, 9);
    StepFunction f = test_function(), g = StepFunction::indicator(0.25, 0.5, 2.0);
    EXPECT_NEAR(wiener_integral(Z, f * 2.0 + g), 2 * wiener_integral(Z, f) + wiener_integral(Z, g), 1e-13);
}

TEST(WienerIntegral, IsometryWithinThreeStandardErrors) {
    HurstParams p = constants(0.7);
    TimeGrid grid(1.0, 64);
    RosenblattSimulator sim(p, grid);
    Eigen::MatrixXd Z = sim.ensemble(1, 10000);
    StepFunction f = test_function();
    std::vector<double> lv = f.grid_levels(grid);
    Eigen::ArrayXd I = Eigen::ArrayXd::Zero(Z.cols());
    for (int i = 0; i < 64; ++i) I += lv[i] * (Z.row(i + 1) - Z.row(i)).transpose().array();
    Eigen::ArrayXd sq = I.square();
    double se = std::sqrt((sq - sq.mean()).square().sum() / (sq.size() - 1) / sq.size());
    EXPECT_NEAR(sq.mean(), norm_H(p, f), 3 * se);
}

TEST(Contraction, ZeroIntegrandGivesZero) {
    RosenblattSimulator sim(constants(0.7), TimeGrid(1.0, 16));
    ContractionNorm c = independence_contraction(sim.factor(), test_function(), StepFunction::indicator(0.0, 1.0, 0.0));
    EXPECT_EQ(c.sup, 0.0);
    EXPECT_EQ(c.l2, 0.0);
}

TEST(Contraction, DisjointSupportsStillInteract) {
    // Increments of Z over disjoint intervals are correlated, and the
    // contraction of their kernels does not vanish.
    RosenblattSimulator sim(constants(0.7), TimeGrid(1.0, 16));
    StepFunction f = StepFunction::indicator(0.0, 0.5), g = StepFunction::indicator(0.5, 1.0);
    ContractionNorm c = independence_contraction(sim.factor(), f, g);
    EXPECT_GT(c.l2, 1e-2);
    EXPECT_GT(c.sup, 0.0);
    EXPECT_GT(covariance_R(0.7, 0.5, 1.0) - covariance_R(0.7, 0.5, 0.5), 0.1);
}

TEST(Ou, NoNoiseGivesExponentialDecay) {
    TimeGrid grid(2.0, 64);
    SamplePath X = ou_path(constants(0.7), 1.5, 0.0, 3.0, grid, 1);
    for (int k = 0; k <= 64; ++k) EXPECT_NEAR(X.values[k], 3.0 * std::exp(-1.5 * grid.node(k)), 1e-12);
    EXPECT_EQ(X.label, PathLabel::OU);
}

TEST(Ou, SatisfiesLangevinEquation) {
    HurstParams p = constants(0.7);
    TimeGrid grid(1.0, 512);
    SamplePath Z = simulate_kernel_method(p, grid, 21);
    for (auto [lambda, sigma] : {std::pair{1.0, 1.0}, {5.0, 0.5}}) {
        SamplePath X = ou_path(Z, lambda, sigma, 0.3);
        EXPECT_LT(ou_residual(X, Z, lambda, sigma), 1e-2) << lambda;
    }
}

TEST(Ou, SmallDecayRateApproachesScaledNoise) {
    TimeGrid grid(1.0, 64);
    SamplePath Z = simulate_kernel_method(constants(0.7), grid, 2);
    SamplePath X = ou_path(Z, 1e-9, 2.0, 0.5);
    for (int k = 0; k <= 64; ++k) EXPECT_NEAR(X.values[k], 0.5 + 2.0 * Z.values[k], 1e-7);
    EXPECT_THROW(ou_path(Z, 0.0, 1.0, 0.0), DomainError);
}

TEST(Ou, StationaryStartHasStationaryVariance) {
    const double H = 0.7, lambda = 4.0;
    HurstParams p = constants(H);
    TimeGrid grid(1.0, 64);
    OuOptions opt;
    opt.stationary = true;
    opt.burn_in_factor = 5.0;
    SamplePath one = ou_path(p, lambda, 1.0, 0.0, grid, 3, opt);
    ASSERT_EQ(one.values.size(), 65u);
    EXPECT_NE(one.values[0], 0.0);

    // Same construction over many seeds: burn-in of 80 cells before t = 0.
    const int burn = 80;
    TimeGrid ext(grid.dt() * (64 + burn), 64 + burn);
    RosenblattSimulator sim(p, ext);
    Eigen::MatrixXd Z = sim.ensemble(1, 4000);
    Eigen::ArrayXd x0(Z.cols());
    for (Eigen::Index c = 0; c < Z.cols(); ++c) {
        SamplePath z{ext, std::vector<double>(Z.col(c).data(), Z.col(c).data() + Z.rows())};
        x0(c) = ou_path(z, lambda, 1.0, 0.0).values[burn];
    }
    SamplePath check = ou_path(SamplePath{ext, std::vector<double>(Z.col(2).data(), Z.col(2).data() + Z.rows())},
                               lambda, 1.0, 0.0);
    EXPECT_NEAR(check.values[burn], one.values[0], 1e-12);
    Eigen::ArrayXd sq = x0.square();
    double se = std::sqrt((sq - sq.mean()).square().sum() / (sq.size() - 1) / sq.size());
    double target = mode_energy(H, lambda, ext.T - grid.T);
    EXPECT_NEAR(sq.mean(), target, 3 * se + 0.02 * target);
}
