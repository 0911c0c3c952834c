#include "rosenblatt/cumulants.hpp"

#include "rosenblatt/errors.hpp"
#include "rosenblatt/quadrature.hpp"
#include "rosenblatt/rng.hpp"

#include <boost/random/sobol.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rosen {

namespace {

constexpr double kRegular = std::numeric_limits<double>::quiet_NaN();

// Integral over [0,1] of f(x, 1 - x), where f behaves like x^left_exp at 0
// and (1-x)^right_exp at 1 (exponents > -1; NaN marks a regular end). The
// mesh is graded geometrically towards singular ends, deep enough that the
// innermost piece is below tolerance; both arguments are passed so that
// distances to either end keep full relative precision. The error estimate
// compares two refinement levels.
IntegralEstimate graded_01(const std::function<double(double, double)>& f, double left_exp,
                           double right_exp, double rel_tol) {
    const bool left = !std::isnan(left_exp), right = !std::isnan(right_exp);
    auto depth_for = [&](double e) {
        return std::min(900, static_cast<int>(std::ceil(std::log2(1.0 / rel_tol) / (e + 1.0))) + 8);
    };
    auto eval = [&](int n, int extra) {
        double s = 0.0;
        if (!right) {
            quad::Rule r = left ? quad::geometric_graded(n, depth_for(left_exp) + extra, 0.0, 1.0, true, false)
                                : quad::gauss_legendre(n, 0.0, 1.0);
            for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * f(r.x[i], 1.0 - r.x[i]);
            return s;
        }
        // Left half in x, right half in the distance y = 1 - x.
        quad::Rule a = left ? quad::geometric_graded(n, depth_for(left_exp) + extra, 0.0, 0.5, true, false)
                            : quad::gauss_legendre(n, 0.0, 0.5);
        for (std::size_t i = 0; i < a.size(); ++i) s += a.w[i] * f(a.x[i], 1.0 - a.x[i]);
        quad::Rule b = quad::geometric_graded(n, depth_for(right_exp) + extra, 0.0, 0.5, true, false);
        for (std::size_t i = 0; i < b.size(); ++i) s += b.w[i] * f(1.0 - b.x[i], b.x[i]);
        return s;
    };
    double coarse = eval(10, 0);
    double fine = eval(16, 20);
    IntegralEstimate e{fine, std::abs(fine - coarse)};
    if (e.error > rel_tol * std::abs(fine) && e.error > 1e-300) {
        throw QuadratureError("cyclic_integral: graded quadrature did not reach the tolerance");
    }
    return e;
}

// Both-end grading map on (0,1): returns x, sets 1 - x and dx/ds.
inline double grade(double s, int p, double& one_minus, double& jac) {
    double a = std::pow(s, p), b = std::pow(1.0 - s, p);
    double den = a + b;
    jac = p * std::pow(s, p - 1) * std::pow(1.0 - s, p - 1) / (den * den);
    one_minus = b / den;
    return a / den;
}

// Sum of the three distinct 4-cycles of the sorted gaps (g1, g2, g3).
inline double four_cycles(double g1, double g2, double g3, double alpha) {
    double s = g1 + g2 + g3;
    double c1 = g1 * g2 * g3 * s;
    double c2 = g1 * (g2 + g3) * g3 * (g1 + g2);
    double c3 = (g1 + g2) * g2 * (g2 + g3) * s;
    return std::pow(c1, alpha) + std::pow(c2, alpha) + std::pow(c3, alpha);
}

IntegralEstimate order4_qmc(double H, const CumulantOptions& opt) {
    // J_4(1) = 8 / ((4a+3)(4a+4)) * K, with K the integral of the cycle sum
    // over the 2-simplex of gap directions (radial part done exactly).
    const double alpha = H - 1.0;
    const int p = 3;
    const std::uint64_t n = std::uint64_t{1} << opt.qmc_log2_points;
    std::vector<double> reps;
    for (int r = 0; r < opt.qmc_replicates; ++r) {
        CounterRng rng(opt.seed, stream::qmc_shift);
        std::uint64_t shift0 = rng.bits(2 * r), shift1 = rng.bits(2 * r + 1);
        boost::random::sobol gen(2);
        double sum = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            std::uint64_t x0 = gen(), x1 = gen();
            // Random digital shift of the 32-bit Sobol integers.
            double s0 = ((static_cast<std::uint32_t>(x0 >> 32) ^ static_cast<std::uint32_t>(shift0)) + 0.5) * 0x1.0p-32;
            double s1 = ((static_cast<std::uint32_t>(x1 >> 32) ^ static_cast<std::uint32_t>(shift1)) + 0.5) * 0x1.0p-32;
            double ja, jb, ca, cb;
            double a = grade(s0, p, ca, ja), b = grade(s1, p, cb, jb);
            double w1 = a, w2 = ca * b, w3 = ca * cb;
            sum += four_cycles(w1, w2, w3, alpha) * ca * ja * jb;
        }
        reps.push_back(sum / static_cast<double>(n));
    }
    double mean = std::accumulate(reps.begin(), reps.end(), 0.0) / reps.size();
    double var = 0.0;
    for (double v : reps) var += (v - mean) * (v - mean);
    var /= (reps.size() - 1);
    double radial = 8.0 / ((4 * alpha + 3) * (4 * alpha + 4));
    return {radial * mean, radial * std::sqrt(var / reps.size())};
}

}  // namespace

IntegralEstimate cyclic_integral(double H, int m, double t, const CumulantOptions& options) {
    if (!(H > 0.5 && H < 1.0)) throw DomainError("cyclic_integral: H must lie in (1/2, 1)");
    if (!(t > 0.0)) throw DomainError("cyclic_integral: t must be positive");
    const double alpha = H - 1.0;
    IntegralEstimate unit;
    switch (m) {
    case 2: {
        // Gap x = |u1 - u2| with weight 2(1 - x).
        unit = graded_01([&](double x, double cx) { return 2.0 * cx * std::pow(x, 2 * alpha); }, 2 * alpha, kRegular,
                         options.rel_tol);
        break;
    }
    case 3: {
        // Sorted gaps (x, y), r = x + y, w = x / r: the cycle factorizes into
        // r^{3 alpha + 1}(1 - r) times (w (1 - w))^alpha; 3! orderings.
        IntegralEstimate radial = graded_01(
            [&](double r, double cr) { return cr * std::pow(r, 3 * alpha + 1); }, 3 * alpha + 1,
            kRegular, options.rel_tol);
        IntegralEstimate angular = graded_01([&](double w, double cw) { return std::pow(w * cw, alpha); },
                                             alpha, alpha, options.rel_tol);
        unit.value = 6.0 * radial.value * angular.value;
        unit.error = 6.0 * (radial.error * angular.value + angular.error * radial.value);
        break;
    }
    case 4:
        unit = order4_qmc(H, options);
        break;
    default:
        throw DomainError("cyclic_integral: supported orders are 2, 3 and 4");
    }
    double scale = std::pow(t, m * H);
    return {unit.value * scale, unit.error * scale};
}

double cumulant_constant(const HurstParams& params, int m) {
    if (m < 2 || m > 4) throw DomainError("cumulant_constant: supported orders are 2, 3 and 4");
    double A = params.d_H * params.hprime_factor();
    return std::tgamma(m) / 2.0 * std::pow(2.0 * A, m);
}

double cumulant_theoretical(const HurstParams& params, int m, double t, const CumulantOptions& options,
                            double* integration_error) {
    IntegralEstimate J = cyclic_integral(params.H, m, t, options);
    double c = cumulant_constant(params, m);
    if (integration_error) *integration_error = c * J.error;
    return c * J.value;
}

double covariance_by_cumulant(const HurstParams& params, double t, double s) {
    if (t < 0.0 || s < 0.0) throw DomainError("covariance_by_cumulant: times must be nonnegative");
    if (t == 0.0 || s == 0.0) return 0.0;
    // Inner integral over v in [0, s] of |u - v|^{2H-2} in closed form.
    const double b = 2.0 * params.H - 1.0;
    auto inner = [&](double u) {
        if (u <= s) return (std::pow(u, b) + std::pow(s - u, b)) / b;
        return (std::pow(u, b) - std::pow(u - s, b)) / b;
    };
    double total = 0.0;
    double a = std::min(s, t);
    quad::Rule r = quad::geometric_graded(16, 40, 0.0, a, true, true);
    for (std::size_t i = 0; i < r.size(); ++i) total += r.w[i] * inner(r.x[i]);
    if (t > s) {
        quad::Rule r2 = quad::geometric_graded(16, 40, s, t, true, false);
        for (std::size_t i = 0; i < r2.size(); ++i) total += r2.w[i] * inner(r2.x[i]);
    }
    // 2 d^2 (H'(2H'-1))^2 = H(2H-1).
    return 2.0 * std::pow(params.d_H * params.hprime_factor(), 2) * total;
}

IntegralEstimate cyclic_integral_plain_mc(double H, int m, std::uint64_t samples, std::uint64_t seed) {
    if (m < 2 || m > 4) throw DomainError("cyclic_integral_plain_mc: supported orders are 2, 3 and 4");
    if (samples < 2) throw SampleSizeError("cyclic_integral_plain_mc: need at least two samples");
    const double alpha = H - 1.0;
    CounterRng rng(seed, stream::plain_mc);
    double sum = 0.0, sum2 = 0.0;
    double u[4];
    for (std::uint64_t i = 0; i < samples; ++i) {
        for (int k = 0; k < m; ++k) u[k] = rng.uniform(i * m + k);
        double prod = 1.0;
        for (int k = 0; k < m; ++k) prod *= std::abs(u[k] - u[(k + 1) % m]);
        double v = std::pow(prod, alpha);
        sum += v;
        sum2 += v * v;
    }
    double n = static_cast<double>(samples);
    double mean = sum / n;
    return {mean, std::sqrt(std::max(sum2 / n - mean * mean, 0.0) / (n - 1.0))};
}

double k_statistic(std::span<const double> x, int m) {
    const double n = static_cast<double>(x.size());
    if (m < 1 || m > 4) throw DomainError("k_statistic: order must be in 1..4");
    if (x.size() < static_cast<std::size_t>(m) + 1) throw SampleSizeError("k_statistic: too few samples");
    double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    if (m == 1) return mean;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        double d = v - mean, d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    switch (m) {
    case 2: return n / (n - 1.0) * m2;
    case 3: return n * n / ((n - 1.0) * (n - 2.0)) * m3;
    default:
        return n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2) / ((n - 1.0) * (n - 2.0) * (n - 3.0));
    }
}

EmpiricalCumulant cumulant_empirical(std::span<const double> samples, int m, int resamples, std::uint64_t seed,
                                     std::size_t min_size) {
    if (samples.size() < min_size) throw SampleSizeError("cumulant_empirical: ensemble too small");
    EmpiricalCumulant out;
    out.value = k_statistic(samples, m);
    const std::size_t n = samples.size();
    CounterRng rng(seed, stream::bootstrap);
    std::vector<double> boot(n);
    double s = 0.0, s2 = 0.0;
    for (int b = 0; b < resamples; ++b) {
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t r = rng.bits(static_cast<std::uint64_t>(b) * n + i);
            boot[i] = samples[static_cast<std::size_t>((static_cast<unsigned __int128>(r) * n) >> 64)];
        }
        double k = k_statistic(boot, m);
        s += k;
        s2 += k * k;
    }
    double mean = s / resamples;
    out.se = std::sqrt(std::max(s2 / resamples - mean * mean, 0.0) * resamples / (resamples - 1.0));
    return out;
}

std::string CumulantReport::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t i = 0; i < orders.size(); ++i) {
        j.push_back({{"order", orders[i]},
                     {"t", t},
                     {"theoretical", theoretical[i]},
                     {"empirical", empirical[i]},
                     {"se", std_err[i]},
                     {"integration_error", integration_error[i]}});
    }
    return j.dump(2);
}

CumulantReport make_cumulant_report(const HurstParams& params, double t, std::span<const double> samples,
                                    const std::vector<int>& orders, const CumulantOptions& options) {
    CumulantReport r;
    r.t = t;
    for (int m : orders) {
        double err = 0.0;
        r.orders.push_back(m);
        r.theoretical.push_back(cumulant_theoretical(params, m, t, options, &err));
        r.integration_error.push_back(err);
        EmpiricalCumulant e = cumulant_empirical(samples, m);
        r.empirical.push_back(e.value);
        r.std_err.push_back(e.se);
    }
    return r;
}

}  // namespace rosen
