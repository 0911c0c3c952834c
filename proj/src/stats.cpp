#include "rosenblatt/stats.hpp"

#include "rosenblatt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rosen {

namespace {

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> increments(const SamplePath& p) {
    std::vector<double> d(p.values.size() - 1);
    for (std::size_t i = 0; i + 1 < p.values.size(); ++i) d[i] = p.values[i + 1] - p.values[i];
    return d;
}

}  // namespace

HurstFit hurst_fit(const SamplePath& path) {
    const int N = path.grid.N;
    if (N < 256) throw SampleSizeError("hurst_estimate: need N >= 256");
    std::vector<double> d = increments(path);

    HurstFit fit;
    double mean = 0.0, var = 0.0;
    for (double v : d) mean += v;
    mean /= N;
    for (double v : d) var += (v - mean) * (v - mean);
    var /= N;
    fit.degenerate = var <= 1e-24 * std::max(mean * mean, 1e-300);

    std::vector<double> lx, ly;
    for (int m = 1; m <= N / 32; m *= 2) {
        const int blocks = N / m;
        double s2 = 0.0;
        for (int b = 0; b < blocks; ++b) {
            double s = 0.0;
            for (int i = b * m; i < (b + 1) * m; ++i) s += d[i];
            s2 += s * s;
        }
        lx.push_back(std::log(static_cast<double>(m)));
        ly.push_back(std::log(s2 / blocks));
    }
    fit.H = 0.5 * slope(lx, ly);
    return fit;
}

double hurst_estimate(const SamplePath& path) { return hurst_fit(path).H; }

double holder_estimate(const SamplePath& path) {
    const int N = path.grid.N;
    if (N < 1024) throw SampleSizeError("holder_estimate: need N >= 1024");
    constexpr int kBlock = 16;
    const auto& x = path.values;
    std::vector<double> lx, ly;
    for (int lag = 1; lag <= N / 64; lag *= 2) {
        const int count = N / lag;
        const int blocks = count / kBlock;
        double acc = 0.0;
        for (int b = 0; b < blocks; ++b) {
            double mx = 0.0;
            for (int i = b * kBlock; i < (b + 1) * kBlock; ++i) {
                mx = std::max(mx, std::abs(x[(i + 1) * lag] - x[i * lag]));
            }
            acc += std::log(std::max(mx, 1e-300));
        }
        lx.push_back(std::log(static_cast<double>(lag) / N));
        ly.push_back(acc / blocks);
    }
    return slope(lx, ly);
}

double kolmogorov_q(double lambda) {
    if (lambda < 1e-3) return 1.0;
    double s = 0.0;
    for (int k = 1; k <= 200; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 ? 1.0 : -1.0) * term;
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 100 || b.size() < 100) throw SampleSizeError("ks_two_sample: need at least 100 values each");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(i / n - j / m));
    }
    const double ne = std::sqrt(n * m / (n + m));
    return {d, kolmogorov_q((ne + 0.12 + 0.11 / ne) * d)};
}

}  // namespace rosen
