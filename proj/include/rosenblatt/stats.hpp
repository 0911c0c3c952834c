#pragma once

#include "rosenblatt/rosenblatt.hpp"

#include <span>

namespace rosen {

struct HurstFit {
    double H = 0.0;
    // Set when the increments are constant (a deterministic linear path),
    // where the regression is exact and carries no statistical meaning.
    bool degenerate = false;
};

// Aggregated-variance estimator: block sums of the increments over dyadic
// block sizes 1 .. N/32; the log mean square of the block sums is regressed
// on log block size and the slope is 2H. Needs N >= 256.
HurstFit hurst_fit(const SamplePath& path);
double hurst_estimate(const SamplePath& path);

// Regression of the mean log block maximum of |X(t + l) - X(t)| (blocks of 16
// non-overlapping increments at lag l) on log l, over dyadic lags up to N/64.
// Needs N >= 1024.
double holder_estimate(const SamplePath& path);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value. Sizes >= 100.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// Kolmogorov survival function Q(lambda) = 2 sum_k (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

}  // namespace rosen
