#include "rosenblatt/spde.hpp"

#include "rosenblatt/errors.hpp"
#include "rosenblatt/quadrature.hpp"
#include "rosenblatt/rng.hpp"
#include "rosenblatt/wiener_calculus.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>

namespace rosen {

void SpectralNoiseConfig::validate() const {
    if (!(H > 0.5 && H < 1.0)) throw DomainError("SpectralNoiseConfig: H must lie in (1/2, 1)");
    if (q.size() != eigenvalues.size()) throw ShapeError("SpectralNoiseConfig: q and eigenvalues differ in length");
    for (std::size_t j = 0; j < q.size(); ++j) {
        if (q[j] < 0.0) throw DomainError("SpectralNoiseConfig: q must be nonnegative");
        if (eigenvalues[j] < 0.0) throw DomainError("SpectralNoiseConfig: eigenvalues must be nonnegative");
        if (j > 0 && eigenvalues[j] < eigenvalues[j - 1]) {
            throw DomainError("SpectralNoiseConfig: eigenvalues must be nondecreasing");
        }
    }
}

SpectralNoiseConfig circle_laplacian(double H, int pairs, const std::function<double(int)>& q) {
    SpectralNoiseConfig c;
    c.H = H;
    for (int n = 1; n <= pairs; ++n) {
        for (int k = 0; k < 2; ++k) {
            c.q.push_back(q(n));
            c.eigenvalues.push_back(static_cast<double>(n) * n);
        }
    }
    c.validate();
    return c;
}

double g_H(double H, double lambda) {
    if (lambda < 0.0) throw DomainError("g_H: lambda must be nonnegative");
    return std::pow(std::max(lambda, 1.0), -2.0 * H);
}

double g_H(const HurstParams& params, double lambda) { return g_H(params.H, lambda); }

TraceVerdict trace_condition(double H, const PowerLawTail& tail, int diagnostic_terms) {
    if (!(tail.c > 0.0)) throw DomainError("trace_condition: the power-law constant must be positive");
    TraceVerdict v;
    v.exponent = tail.alpha - 4.0 * H;
    v.converges = v.exponent < -1.0;
    double s = 0.0;
    for (int n = 1; n <= diagnostic_terms; ++n) {
        s += tail.c * std::pow(n, tail.alpha) * g_H(H, static_cast<double>(n) * n);
        v.partial_sums.push_back(s);
    }
    // Integral bound of the remainder c * sum_{n > K} n^e.
    const double K = diagnostic_terms;
    v.tail_bound = v.converges ? tail.c * std::pow(K, v.exponent + 1.0) / (-v.exponent - 1.0)
                               : std::numeric_limits<double>::infinity();
    return v;
}

TraceVerdict trace_condition(double H, const std::vector<double>& q) {
    if (q.size() < 8) throw DomainError("trace_condition: need at least 8 terms for a tail fit");
    TraceVerdict v;
    std::vector<double> terms(q.size());
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] < 0.0) throw DomainError("trace_condition: q must be nonnegative");
        const double n = static_cast<double>(i + 1);
        terms[i] = q[i] * g_H(H, n * n);
        s += terms[i];
        v.partial_sums.push_back(s);
    }
    // Least-squares slope of log term against log n over the second half.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t i = q.size() / 2; i < q.size(); ++i) {
        if (!(terms[i] > 0.0)) continue;
        double x = std::log(static_cast<double>(i + 1)), y = std::log(terms[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
        ++cnt;
    }
    if (cnt < 2) {
        // The tail is identically zero.
        v.converges = true;
        v.exponent = -std::numeric_limits<double>::infinity();
        v.tail_bound = 0.0;
        return v;
    }
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / cnt;
    v.exponent = slope;
    // A fitted slope of exactly -1 (harmonic tail) must not pass on rounding.
    v.converges = slope < -1.0 - 1e-6;
    const double K = static_cast<double>(q.size());
    v.tail_bound = v.converges ? std::exp(icpt) * std::pow(K, slope + 1.0) / (-slope - 1.0)
                               : std::numeric_limits<double>::infinity();
    return v;
}

namespace {

std::vector<std::uint64_t> mode_seeds(std::uint64_t first_seed, std::size_t count, int mode) {
    std::vector<std::uint64_t> s(count);
    for (std::size_t i = 0; i < count; ++i) s[i] = derive_seed(first_seed + i, static_cast<std::uint64_t>(mode));
    return s;
}

}  // namespace

FieldPath mild_solution_heat(const SpectralNoiseConfig& config, const TimeGrid& grid, std::uint64_t seed,
                             const SimulationOptions& options) {
    config.validate();
    FieldPath out;
    out.grid = grid;
    out.coefficients = Eigen::MatrixXd::Zero(config.modes(), grid.N + 1);
    bool any = false;
    for (double qj : config.q) any = any || qj > 0.0;
    if (!any) return out;
    RosenblattSimulator sim(constants(config.H), grid, options);
    for (int j = 0; j < config.modes(); ++j) {
        if (config.q[j] == 0.0) continue;
        SamplePath z = sim.path(derive_seed(seed, static_cast<std::uint64_t>(j)));
        SamplePath x = ou_path(z, std::max(config.eigenvalues[j], 1e-300), std::sqrt(config.q[j]), 0.0);
        for (int k = 0; k <= grid.N; ++k) out.coefficients(j, k) = x.values[k];
    }
    return out;
}

FieldEnsemble field_ensemble(const SpectralNoiseConfig& config, const TimeGrid& grid, std::uint64_t first_seed,
                             std::size_t count, const SimulationOptions& options, unsigned threads) {
    config.validate();
    FieldEnsemble out;
    out.final_values = Eigen::MatrixXd::Zero(config.modes(), static_cast<Eigen::Index>(count));
    RosenblattSimulator sim(constants(config.H), grid, options);
    const double dt = grid.dt();
    for (int j = 0; j < config.modes(); ++j) {
        if (config.q[j] == 0.0) continue;
        Eigen::MatrixXd Z = sim.ensemble(mode_seeds(first_seed, count, j), threads);
        // Same recursion as ou_path with xi = 0, applied column-wise.
        const double lambda = std::max(config.eigenvalues[j], 1e-300);
        const double decay = std::exp(-lambda * dt), mid = std::exp(-0.5 * lambda * dt);
        const double sigma = std::sqrt(config.q[j]);
        Eigen::RowVectorXd x = Eigen::RowVectorXd::Zero(Z.cols());
        for (int k = 1; k <= grid.N; ++k) x = decay * x + sigma * mid * (Z.row(k) - Z.row(k - 1));
        out.final_values.row(j) = x;
    }
    out.energy = out.final_values.colwise().squaredNorm().transpose();
    return out;
}

double mode_energy(double H, double lambda, double t, double rel_tol) {
    if (t <= 0.0) return 0.0;
    // H(2H-1) * 2 int_0^t x^{2H-2} w(x) dx with
    // w(x) = (e^{-lambda x} - e^{-lambda(2t - x)}) / (2 lambda) = e^{-lambda t} sinh(lambda(t - x)) / lambda,
    // after the substitution x = z^{1/(2H-1)} that removes the endpoint singularity.
    auto w = [lambda, t](double x) {
        if (lambda == 0.0) return t - x;
        return -std::exp(-lambda * x) * std::expm1(-2.0 * lambda * (t - x)) / (2.0 * lambda);
    };
    const double a = 2.0 * H - 1.0;
    auto f = [&](double z) { return w(std::pow(z, 1.0 / a)); };
    double I = quad::adaptive(f, 0.0, std::pow(t, a), rel_tol) / a;
    return H * a * 2.0 * I;
}

double energy_theoretical(const SpectralNoiseConfig& config, double t, double rel_tol) {
    config.validate();
    double s = 0.0;
    for (int j = 0; j < config.modes(); ++j) {
        if (config.q[j] == 0.0) continue;
        s += config.q[j] * mode_energy(config.H, config.eigenvalues[j], t, rel_tol);
    }
    return s;
}

std::string energy_report_json(const SpectralNoiseConfig& config, double t, const FieldEnsemble& ensemble) {
    const auto n = static_cast<double>(ensemble.energy.size());
    const double mean = ensemble.energy.mean();
    const double var = (ensemble.energy.array() - mean).square().sum() / std::max(n - 1.0, 1.0);
    nlohmann::json modes = nlohmann::json::array();
    for (int j = 0; j < config.modes(); ++j) {
        double m2 = ensemble.final_values.row(j).squaredNorm() / std::max(n, 1.0);
        modes.push_back({{"mode", j},
                         {"eigenvalue", config.eigenvalues[j]},
                         {"q", config.q[j]},
                         {"empirical_second_moment", m2},
                         {"theoretical", config.q[j] * mode_energy(config.H, config.eigenvalues[j], t)}});
    }
    const double theory = energy_theoretical(config, t);
    const double se = std::sqrt(var / std::max(n, 1.0));
    nlohmann::json j = {{"t", t},
                        {"samples", ensemble.energy.size()},
                        {"energy_empirical", mean},
                        {"energy_se", se},
                        {"energy_theoretical", theory},
                        {"within_3se", std::abs(mean - theory) <= 3.0 * se},
                        {"modes", modes}};
    return j.dump(2);
}

}  // namespace rosen
