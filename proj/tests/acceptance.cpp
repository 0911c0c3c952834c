// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// All seeds are fixed in advance; nothing is retried.

#include "rosenblatt/cumulants.hpp"
#include "rosenblatt/regularization.hpp"
#include "rosenblatt/rng.hpp"
#include "rosenblatt/rosenblatt.hpp"
#include "rosenblatt/skorohod_ito.hpp"
#include "rosenblatt/spde.hpp"
#include "rosenblatt/stats.hpp"
#include "rosenblatt/wiener_calculus.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace rosen;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::vector<double> row_values(const Eigen::MatrixXd& m, Eigen::Index k) {
    std::vector<double> v(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) v[static_cast<std::size_t>(c)] = m(k, c);
    return v;
}

SamplePath column_path(const TimeGrid& grid, const Eigen::MatrixXd& m, Eigen::Index c) {
    SamplePath p;
    p.grid = grid;
    p.values.assign(m.col(c).data(), m.col(c).data() + m.rows());
    return p;
}

double sample_cov(const std::vector<double>& a, const std::vector<double>& b, const std::vector<std::size_t>* idx) {
    const std::size_t n = idx ? idx->size() : a.size();
    double ma = 0, mb = 0, s = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = idx ? (*idx)[i] : i;
        ma += a[j];
        mb += b[j];
    }
    ma /= n;
    mb /= n;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = idx ? (*idx)[i] : i;
        s += (a[j] - ma) * (b[j] - mb);
    }
    return s / (n - 1);
}

// Kernel-method ensemble shared by criteria 1 and 2.
const Eigen::MatrixXd& base_ensemble() {
    static const Eigen::MatrixXd Z = RosenblattSimulator(constants(0.7), TimeGrid(1.0, 256)).ensemble(1, 20000);
    return Z;
}

Outcome covariance_reproduction() {
    const Eigen::MatrixXd& Z = base_ensemble();
    const int nodes[3] = {64, 128, 256};
    std::vector<std::vector<double>> v;
    for (int k : nodes) v.push_back(row_values(Z, k));
    const std::size_t n = v[0].size();
    const int B = 200;
    CounterRng rng(2024, stream::bootstrap);
    std::vector<std::vector<std::size_t>> resamples(B, std::vector<std::size_t>(n));
    for (int b = 0; b < B; ++b)
        for (std::size_t i = 0; i < n; ++i) resamples[b][i] = static_cast<std::size_t>(rng.uniform(b * n + i) * n);

    bool pass = true;
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            double est = sample_cov(v[i], v[j], nullptr);
            double s = 0, s2 = 0;
            for (const auto& idx : resamples) {
                double c = sample_cov(v[i], v[j], &idx);
                s += c;
                s2 += c * c;
            }
            double se = std::sqrt((s2 / B - (s / B) * (s / B)) * B / (B - 1));
            double z = std::abs(est - covariance_R(0.7, nodes[i] / 256.0, nodes[j] / 256.0)) / se;
            worst = std::max(worst, z);
            pass = pass && z <= 3.0;
        }
    return {pass, "max |empirical - R| / bootstrap se over the 3x3 set = " + fmt(worst) + " (limit 3)"};
}

Outcome normalization() {
    std::vector<double> z = row_values(base_ensemble(), 256);
    double var = sample_cov(z, z, nullptr);
    return {var >= 0.97 && var <= 1.03, "Var Z(1) = " + fmt(var) + " (band [0.97, 1.03])"};
}

Outcome cumulant_triangle() {
    bool pass = true;
    std::string d;
    for (double H : {0.6, 0.8}) {
        HurstParams p = constants(H);
        IntegralEstimate quad = cyclic_integral(H, 3, 1.0);
        IntegralEstimate mc = cyclic_integral_plain_mc(H, 3, 10'000'000, 31);
        double rel = std::abs(mc.value - quad.value) / quad.value;
        double c3 = cumulant_theoretical(p, 3, 1.0);
        Eigen::MatrixXd Z = RosenblattSimulator(p, TimeGrid(1.0, 256)).ensemble(100001, 20000);
        std::vector<double> z = row_values(Z, 256);
        EmpiricalCumulant e = cumulant_empirical(z, 3, 500);
        double zs = std::abs(e.value - c3) / e.se;
        pass = pass && rel < 0.01 && zs <= 3.0;
        d += "H=" + fmt(H) + ": quad/MC rel diff " + fmt(rel) + ", c3 " + fmt(c3) + " vs k3 " + fmt(e.value) +
             " (" + fmt(zs) + " se); ";
    }
    return {pass, d};
}

Outcome simulator_cross_validation() {
    const int n = 5000;
    Eigen::MatrixXd K = RosenblattSimulator(constants(0.7), TimeGrid(1.0, 256)).ensemble(200001, n);
    NcltConfig cfg;
    cfg.H = 0.7;
    cfg.inner_n = 1 << 14;
    Eigen::MatrixXd C = NcltSimulator(cfg, TimeGrid(1.0, 16)).ensemble(300001, n / 2);
    std::vector<double> a = row_values(K, 256), b = row_values(C, 16);
    KsResult r = ks_two_sample(a, b);
    return {r.p_value > 0.01, "KS statistic " + fmt(r.statistic) + ", p = " + fmt(r.p_value) + " (need > 0.01)"};
}

Outcome qv_scaling() {
    const double H = 0.7;
    TimeGrid grid(1.125, 288);
    Eigen::MatrixXd Z = RosenblattSimulator(constants(H), grid).ensemble(400001, 2000);
    std::vector<double> lx, ly;
    for (int e = 3; e <= 7; ++e) {
        double eps = std::ldexp(1.0, -e), s = 0;
        for (Eigen::Index c = 0; c < Z.cols(); ++c) s += quadratic_variation(column_path(grid, Z, c), eps, 1.0);
        lx.push_back(std::log(eps));
        ly.push_back(std::log(s / Z.cols()));
    }
    double n = lx.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {std::abs(slope - (2 * H - 1)) <= 0.1, "slope " + fmt(slope) + " vs 2H-1 = " + fmt(2 * H - 1)};
}

Outcome wiener_isometry() {
    HurstParams p = constants(0.7);
    TimeGrid grid(1.0, 256);
    Eigen::MatrixXd Z = RosenblattSimulator(p, grid).ensemble(500001, 10000);
    std::vector<double> wave(256);
    for (int i = 0; i < 256; ++i) wave[i] = std::cos(6.0 * (i + 0.5) / 256.0);
    const StepFunction fs[3] = {StepFunction({0.0, 0.5, 1.0}, {1.0, -2.0}), StepFunction::indicator(0.25, 0.75),
                                StepFunction::on_grid(grid, wave)};
    bool pass = true;
    std::string d = "ratios";
    for (const StepFunction& f : fs) {
        std::vector<double> lv = f.grid_levels(grid);
        double s = 0;
        for (Eigen::Index c = 0; c < Z.cols(); ++c) {
            double I = 0;
            for (int i = 0; i < 256; ++i) I += lv[i] * (Z(i + 1, c) - Z(i, c));
            s += I * I;
        }
        double ratio = s / Z.cols() / norm_H(p, f);
        pass = pass && ratio >= 0.95 && ratio <= 1.05;
        d += " " + fmt(ratio);
    }
    return {pass, d + " (band [0.95, 1.05])"};
}

Outcome pathwise_ito() {
    HurstParams p = constants(0.7);
    SimulationOptions opt;
    opt.compensate = false;
    std::vector<double> rel;
    std::string d = "relative residual";
    for (int N : {256, 512, 1024, 2048}) {
        TimeGrid grid(1.0, N);
        Eigen::MatrixXd Z = RosenblattSimulator(p, grid, opt).ensemble(1, 8);
        double res = 0, scale = 0;
        for (Eigen::Index c = 0; c < Z.cols(); ++c) {
            SamplePath z = column_path(grid, Z, c);
            res += pathwise_ito_residual(ItoFunction::square, z, 4 * grid.dt());
            scale += z.final() * z.final();
        }
        rel.push_back(res / scale);
        d += " " + fmt(rel.back());
    }
    bool pass = rel.back() < 5e-2;
    for (std::size_t i = 1; i < rel.size(); ++i) pass = pass && rel[i] < rel[i - 1];
    return {pass, d + " over N = 256..2048"};
}

Outcome skorohod_ito_x2() {
    HurstParams p = constants(0.7);
    std::vector<double> r;
    double ablated = 0;
    std::string d = "residual_l2";
    for (int N : {16, 32, 64, 128}) {
        ItoX2Report rep = ito_x2_residual(p, TimeGrid(1.0, N), 500, 1);
        r.push_back(rep.residual_l2);
        ablated = rep.residual_l2_ablated;
        d += " " + fmt(rep.residual_l2);
    }
    bool pass = ablated > 10 * r.back();
    for (std::size_t i = 1; i < r.size(); ++i) pass = pass && r[i] < r[i - 1];
    return {pass, d + "; ablated at N=128 " + fmt(ablated) + " (ratio " + fmt(ablated / r.back()) + ")"};
}

Outcome relation() {
    HurstParams p = constants(0.7);
    RelationOptions no_traces;
    no_traces.include_traces = false;
    std::vector<double> r, a;
    std::string d = "mean residual";
    for (int N : {32, 64, 128}) {
        TimeGrid grid(1.0, N);
        double s = 0, sa = 0;
        const int seeds = 20;
        for (int k = 0; k < seeds; ++k) {
            s += relation_residual(p, grid, grid.dt(), 600001 + k).residual / seeds;
            sa += relation_residual(p, grid, grid.dt(), 600001 + k, no_traces).residual / seeds;
        }
        r.push_back(s);
        a.push_back(sa);
        d += " " + fmt(s);
    }
    bool pass = true;
    for (std::size_t i = 1; i < r.size(); ++i) pass = pass && r[i] < r[i - 1];
    double floor = *std::min_element(a.begin(), a.end());
    // Bounded away: the ablated residual never drops below twice the finest corrected one.
    pass = pass && floor > 2 * r.back();
    return {pass, d + "; ablated " + fmt(a[0]) + " " + fmt(a[1]) + " " + fmt(a[2])};
}

Outcome semimartingale_approximation() {
    HurstParams p = constants(0.7);
    TimeGrid grid(1.0, 128);
    SimulationOptions base;
    base.compensate = false;
    Eigen::MatrixXd Z = RosenblattSimulator(p, grid, base).ensemble(700001, 2000);
    std::vector<double> err;
    std::string d = "E|Z_eps(1) - Z(1)|^2";
    for (double eps : {0.1, 0.05, 0.01}) {
        SimulationOptions o = base;
        o.factor.shift = eps;
        Eigen::MatrixXd Ze = RosenblattSimulator(p, grid, o).ensemble(700001, 2000);
        double s = (Ze.row(128) - Z.row(128)).squaredNorm() / Z.cols();
        err.push_back(s);
        d += " " + fmt(s);
    }
    bool pass = err[1] < err[0] && err[2] < err[1];
    return {pass, d + " at eps = 0.1, 0.05, 0.01"};
}

Outcome ou_residual_check() {
    HurstParams p = constants(0.7);
    TimeGrid grid(1.0, 512);
    RosenblattSimulator sim(p, grid);
    bool pass = true;
    double worst = 0;
    for (auto [lambda, sigma] : {std::pair{1.0, 1.0}, {5.0, 0.5}}) {
        for (std::uint64_t seed = 800001; seed < 800011; ++seed) {
            SamplePath Z = sim.path(seed);
            SamplePath X = ou_path(Z, lambda, sigma, 1.0);
            double sup = 0;
            for (double v : X.values) sup = std::max(sup, std::abs(v));
            double rel = ou_residual(X, Z, lambda, sigma) / sup;
            worst = std::max(worst, rel);
            pass = pass && rel < 1e-2;
        }
    }
    return {pass, "max residual / sup|X| over 10 seeds and both parameter sets = " + fmt(worst) + " (limit 1e-2)"};
}

Outcome spde() {
    const double H = 0.7;
    bool flat = trace_condition(H, PowerLawTail{1.0, 0.0}).converges;
    bool harmonic = trace_condition(H, PowerLawTail{1.0, 4 * H - 1}).converges;
    SpectralNoiseConfig cfg = circle_laplacian(H, 8, [](int) { return 1.0; });
    TimeGrid grid(1.0, 256);
    FieldEnsemble e = field_ensemble(cfg, grid, 900001, 5000);
    double mean = e.energy.mean();
    double se = std::sqrt((e.energy.array() - mean).square().sum() / (e.energy.size() - 1) / e.energy.size());
    double theory = energy_theoretical(cfg, 1.0);
    double z = std::abs(mean - theory) / se;
    bool pass = flat && !harmonic && z <= 3.0;
    return {pass, std::string("q=1 ") + (flat ? "convergent" : "divergent") + ", q=n^(4H-1) " +
                      (harmonic ? "convergent" : "divergent") + "; energy " + fmt(mean) + " vs " + fmt(theory) +
                      " (" + fmt(z) + " se)"};
}

Outcome estimators() {
    bool pass = true;
    std::string d = "mean Hurst estimate";
    for (double H : {0.6, 0.7, 0.8}) {
        TimeGrid grid(1.0, 1024);
        Eigen::MatrixXd Z = RosenblattSimulator(constants(H), grid).ensemble(1000001, 100);
        double s = 0;
        for (Eigen::Index c = 0; c < Z.cols(); ++c) s += hurst_estimate(column_path(grid, Z, c));
        double m = s / Z.cols();
        pass = pass && std::abs(m - H) <= 0.05;
        d += " " + fmt(m) + " (H=" + fmt(H) + ")";
    }
    return {pass, d};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"covariance reproduction", covariance_reproduction},
        {"normalization", normalization},
        {"cumulant triangle", cumulant_triangle},
        {"simulator cross-validation", simulator_cross_validation},
        {"quadratic variation scaling", qv_scaling},
        {"Wiener isometry", wiener_isometry},
        {"pathwise Ito formula", pathwise_ito},
        {"Skorohod Ito formula for x^2", skorohod_ito_x2},
        {"forward/Skorohod relation", relation},
        {"semimartingale approximation", semimartingale_approximation},
        {"OU residual", ou_residual_check},
        {"SPDE trace condition and energy", spde},
        {"Hurst estimator", estimators},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
