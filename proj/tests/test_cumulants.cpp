#include "rosenblatt/cumulants.hpp"
#include "rosenblatt/errors.hpp"
#include "rosenblatt/rosenblatt.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <vector>

using namespace rosen;

TEST(Theoretical, SecondCumulantIsUnitVariance) {
    for (double H : {0.55, 0.6, 0.7, 0.8, 0.9}) EXPECT_NEAR(cumulant_theoretical(constants(H), 2, 1.0), 1.0, 1e-8) << H;
}

TEST(Theoretical, CyclicIntegralOfOrderThreeHasClosedForm) {
    // Tabulated values of 6 B(H, H) / ((3H - 1) 3H).
    const std::pair<double, double> cases[] = {{0.6, 10.063934200010303}, {0.7, 4.932566061490962},
                                               {0.8, 2.7088647014159313}};
    for (auto [H, J] : cases) EXPECT_NEAR(cyclic_integral(H, 3, 1.0).value, J, 1e-8 * J) << H;
}

TEST(Theoretical, SelfSimilarScaling) {
    HurstParams p = constants(0.7);
    for (int m : {2, 3, 4}) {
        double r = cumulant_theoretical(p, m, 0.5) / cumulant_theoretical(p, m, 1.0);
        EXPECT_NEAR(r, std::pow(0.5, m * 0.7), 1e-4 * r) << m;
    }
}

TEST(Theoretical, ThirdCumulantAgreesWithPlainMonteCarlo) {
    const double H = 0.7;
    IntegralEstimate mc = cyclic_integral_plain_mc(H, 3, 10'000'000, 77);
    double J = cyclic_integral(H, 3, 1.0).value;
    EXPECT_NEAR(mc.value, J, 0.01 * J);
    EXPECT_NEAR(mc.value, J, 4 * mc.error);
}

TEST(Theoretical, FourthOrderQmcAgreesWithPlainMonteCarlo) {
    const double H = 0.8;
    IntegralEstimate qmc = cyclic_integral(H, 4, 1.0);
    IntegralEstimate mc = cyclic_integral_plain_mc(H, 4, 4'000'000, 78);
    EXPECT_GT(qmc.error, 0.0);
    EXPECT_LT(qmc.error, 1e-3 * qmc.value);
    EXPECT_NEAR(mc.value, qmc.value, 4 * std::hypot(mc.error, qmc.error));
}

TEST(Theoretical, CovarianceThroughMixedCumulantIsR) {
    HurstParams p = constants(0.65);
    for (auto [t, s] : {std::pair{1.0, 0.5}, {0.3, 0.9}, {2.0, 2.0}}) {
        EXPECT_NEAR(covariance_by_cumulant(p, t, s), covariance_R(0.65, t, s), 1e-9) << t << " " << s;
    }
    EXPECT_EQ(covariance_by_cumulant(p, 0.0, 1.0), 0.0);
}

TEST(Theoretical, RejectsUnsupportedOrders) {
    EXPECT_THROW(cyclic_integral(0.7, 5, 1.0), DomainError);
    EXPECT_THROW(cumulant_theoretical(constants(0.7), 1, 1.0), DomainError);
    EXPECT_THROW(cyclic_integral(0.7, 3, 0.0), DomainError);
}

TEST(KStatistic, MatchesReferenceValues) {
    const std::vector<double> d = {1, 2, 3, 4, 10, -2.5, 0.3};
    EXPECT_NEAR(k_statistic(d, 1), 2.542857142857143, 1e-12);
    EXPECT_NEAR(k_statistic(d, 2), 15.17952380952381, 1e-11);
    EXPECT_NEAR(k_statistic(d, 3), 64.05385714285717, 1e-10);
    EXPECT_NEAR(k_statistic(d, 4), 517.2578238095228, 1e-9);
}

TEST(KStatistic, ConstantDataHasZeroHigherCumulants) {
    std::vector<double> c(50, 3.25);
    for (int m : {2, 3, 4}) EXPECT_NEAR(k_statistic(c, m), 0.0, 1e-12);
}

TEST(Empirical, RequiresEnoughSamples) {
    std::vector<double> x(999, 1.0);
    EXPECT_THROW(cumulant_empirical(x, 2), SampleSizeError);
}

TEST(Empirical, RosenblattEnsembleMatchesTheory) {
    HurstParams p = constants(0.7);
    RosenblattSimulator sim(p, TimeGrid(1.0, 64));
    Eigen::VectorXd z = sim.ensemble(1, 5000).row(64).transpose();
    std::span<const double> s(z.data(), static_cast<std::size_t>(z.size()));
    CumulantReport r = make_cumulant_report(p, 1.0, s, {2, 3});
    ASSERT_EQ(r.orders.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(r.empirical[i], r.theoretical[i], 3 * r.std_err[i]) << r.orders[i];
    }
    auto j = nlohmann::json::parse(r.to_json());
    EXPECT_EQ(j.size(), 2u);
    EXPECT_TRUE(j[0].contains("theoretical"));
    EXPECT_TRUE(j[0].contains("se"));
}
