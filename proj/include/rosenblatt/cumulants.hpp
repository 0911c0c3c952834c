#pragma once

#include "rosenblatt/frac_kernels.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rosen {

struct CumulantOptions {
    double rel_tol = 1e-9;       // graded quadrature (orders 2 and 3)
    int qmc_log2_points = 14;    // Sobol points per replicate (order 4)
    int qmc_replicates = 16;     // independent random digital shifts
    std::uint64_t seed = 12345;
};

struct IntegralEstimate {
    double value = 0.0;
    double error = 0.0;  // quadrature difference or QMC standard error
};

// J_m(t) = integral over [0,t]^m of prod_cyclic |u_i - u_{i+1}|^{H-1}.
IntegralEstimate cyclic_integral(double H, int m, double t, const CumulantOptions& options = {});

// ((m-1)!/2) 2^m (d(H) H'(2H'-1))^m, the factor in front of J_m.
double cumulant_constant(const HurstParams& params, int m);

// m-th cumulant of Z(t).
double cumulant_theoretical(const HurstParams& params, int m, double t, const CumulantOptions& options = {},
                            double* integration_error = nullptr);

// Cov(Z(t), Z(s)) through the mixed second cumulant, evaluated by quadrature.
double covariance_by_cumulant(const HurstParams& params, double t, double s);

// Plain Monte Carlo estimate of J_m(1) with uniform points in [0,1]^m.
IntegralEstimate cyclic_integral_plain_mc(double H, int m, std::uint64_t samples, std::uint64_t seed);

// Unbiased k-statistic of order m in {1,2,3,4}.
double k_statistic(std::span<const double> x, int m);

struct EmpiricalCumulant {
    double value = 0.0;
    double se = 0.0;
};

// k-statistic with bootstrap standard error. Requires at least min_size samples.
EmpiricalCumulant cumulant_empirical(std::span<const double> samples, int m, int resamples = 1000,
                                     std::uint64_t seed = 2024, std::size_t min_size = 1000);

struct CumulantReport {
    double t = 1.0;
    std::vector<int> orders;
    std::vector<double> theoretical;
    std::vector<double> empirical;
    std::vector<double> std_err;
    std::vector<double> integration_error;

    std::string to_json() const;
};

CumulantReport make_cumulant_report(const HurstParams& params, double t, std::span<const double> samples,
                                    const std::vector<int>& orders, const CumulantOptions& options = {});

}  // namespace rosen
