#include "rosenblatt/wiener_calculus.hpp"

#include "rosenblatt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace rosen {

StepFunction::StepFunction(std::vector<double> b, std::vector<double> l)
    : breakpoints(std::move(b)), levels(std::move(l)) {
    if (breakpoints.empty() ? !levels.empty() : levels.size() + 1 != breakpoints.size()) {
        throw ShapeError("StepFunction: need one level per interval");
    }
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (!(breakpoints[i] > breakpoints[i - 1])) throw DomainError("StepFunction: breakpoints must increase");
    }
}

StepFunction StepFunction::indicator(double a, double b, double level) { return StepFunction({a, b}, {level}); }

StepFunction StepFunction::on_grid(const TimeGrid& grid, std::vector<double> levels) {
    if (static_cast<int>(levels.size()) != grid.N) throw ShapeError("StepFunction::on_grid: need N levels");
    std::vector<double> b(grid.N + 1);
    for (int i = 0; i <= grid.N; ++i) b[i] = grid.node(i);
    return StepFunction(std::move(b), std::move(levels));
}

double StepFunction::operator()(double t) const {
    if (breakpoints.empty() || t <= breakpoints.front() || t > breakpoints.back()) return 0.0;
    auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), t);
    return levels[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

StepFunction StepFunction::abs() const {
    StepFunction out = *this;
    for (double& v : out.levels) v = std::abs(v);
    return out;
}

namespace {

StepFunction combine(const StepFunction& a, const StepFunction& b, double sb) {
    std::set<double> pts(a.breakpoints.begin(), a.breakpoints.end());
    pts.insert(b.breakpoints.begin(), b.breakpoints.end());
    std::vector<double> bp(pts.begin(), pts.end());
    if (bp.size() < 2) return {};
    std::vector<double> lv(bp.size() - 1);
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        double mid = 0.5 * (bp[i] + bp[i + 1]);
        lv[i] = a(mid) + sb * b(mid);
    }
    return StepFunction(std::move(bp), std::move(lv));
}

}  // namespace

StepFunction StepFunction::operator+(const StepFunction& o) const { return combine(*this, o, 1.0); }
StepFunction StepFunction::operator-(const StepFunction& o) const { return combine(*this, o, -1.0); }

StepFunction StepFunction::operator*(double c) const {
    StepFunction out = *this;
    for (double& v : out.levels) v *= c;
    return out;
}

std::vector<double> StepFunction::grid_levels(const TimeGrid& grid) const {
    for (double b : breakpoints) {
        if (grid.index_of(b) < 0) throw DomainError("StepFunction: breakpoint is not a grid node");
    }
    std::vector<double> out(grid.N);
    for (int i = 0; i < grid.N; ++i) out[i] = (*this)(grid.node(i) + 0.5 * grid.dt());
    return out;
}

double norm_H(const HurstParams& params, const StepFunction& f) {
    const double h2 = 2.0 * params.H;
    auto p = [h2](double x) { return std::pow(std::abs(x), h2); };
    const auto& b = f.breakpoints;
    const auto& a = f.levels;
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (a[j] == 0.0) continue;
            // H(2H-1) times the integral of |u - v|^{2H-2} over (b_i, b_i+1] x (b_j, b_j+1].
            double rect = 0.5 * (p(b[i + 1] - b[j]) + p(b[i] - b[j + 1]) - p(b[i] - b[j]) - p(b[i + 1] - b[j + 1]));
            s += a[i] * a[j] * rect;
        }
    }
    return s;
}

double norm_H(const HurstParams& params, const TimeGrid& grid, const std::vector<double>& cell_levels) {
    return norm_H(params, StepFunction::on_grid(grid, cell_levels));
}

double norm_abs_H(const HurstParams& params, const StepFunction& f) { return norm_H(params, f.abs()); }

namespace {

// sum_m w_m D_m in xi coordinates.
Eigen::MatrixXd weighted_kernel(const KernelFactor& factor, const std::vector<double>& grid_levels) {
    const Partition& part = factor.partition();
    const int M = part.cells();
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(M, M);
    for (int m = 0; m < M; ++m) {
        double w = grid_levels[part.grid_cell(m)];
        const auto& V = factor.factor(m);
        if (w == 0.0 || V.cols() == 0) continue;
        K.topLeftCorner(m + 1, m + 1).noalias() += w * V * V.transpose();
    }
    return K;
}

GridKernel to_increment_coordinates(const Eigen::MatrixXd& K, std::shared_ptr<const Partition> part) {
    Eigen::VectorXd s(K.rows());
    for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = 1.0 / std::sqrt(part->width(static_cast<int>(i)));
    return GridKernel::from_matrix(s.asDiagonal() * K * s.asDiagonal(), std::move(part));
}

}  // namespace

double norm_H_grid(const KernelFactor& factor, const StepFunction& f) {
    Eigen::MatrixXd K = weighted_kernel(factor, f.grid_levels(factor.partition().grid()));
    return 2.0 * K.squaredNorm();
}

double wiener_integral(const SamplePath& Z, const StepFunction& f) {
    std::vector<double> a = f.grid_levels(Z.grid);
    double s = 0.0;
    for (int i = 0; i < Z.grid.N; ++i) {
        if (a[i] != 0.0) s += a[i] * (Z.values[i + 1] - Z.values[i]);
    }
    return s;
}

GridKernel wiener_kernel(const KernelFactor& factor, const StepFunction& f) {
    Eigen::MatrixXd K = weighted_kernel(factor, f.grid_levels(factor.partition().grid()));
    return to_increment_coordinates(K, factor.partition_ptr());
}

double wiener_integral(const RosenblattSimulator& sim, const StepFunction& f, const GaussianIncrements& dB) {
    const KernelFactor& factor = sim.factor();
    if (!(factor.partition() == *dB.partition)) throw ShapeError("wiener_integral: partition mismatch");
    double chaos = multiple_integral(wiener_kernel(factor, f), dB, DiagonalRule::wick);
    if (!sim.compensated()) return chaos;
    std::vector<double> a = f.grid_levels(sim.grid());
    Eigen::VectorXd c = sim.compensation_path(dB.seed);
    double g = 0.0;
    for (int i = 0; i < sim.grid().N; ++i) g += a[i] * (c[i + 1] - c[i]);
    return chaos + g;
}

ContractionNorm independence_contraction(const KernelFactor& factor, const StepFunction& f,
                                         const StepFunction& g) {
    const TimeGrid& grid = factor.partition().grid();
    Eigen::MatrixXd F = weighted_kernel(factor, f.grid_levels(grid));
    Eigen::MatrixXd G = weighted_kernel(factor, g.grid_levels(grid));
    GridKernel c = contraction_1(to_increment_coordinates(F, factor.partition_ptr()),
                                 to_increment_coordinates(G, factor.partition_ptr()));
    return {c.max_abs(), std::sqrt(c.l2_norm_squared())};
}

SamplePath ou_path(const SamplePath& Z, double lambda, double sigma, double xi) {
    if (!(lambda > 0.0) || sigma < 0.0) throw DomainError("ou_path: need lambda > 0 and sigma >= 0");
    SamplePath X = Z;
    X.label = PathLabel::OU;
    X.eps = 0.0;
    const double dt = Z.grid.dt();
    const double decay = std::exp(-lambda * dt);
    const double mid = std::exp(-0.5 * lambda * dt);
    X.values[0] = xi;
    for (int k = 1; k <= Z.grid.N; ++k) {
        X.values[k] = decay * X.values[k - 1] + sigma * mid * (Z.values[k] - Z.values[k - 1]);
    }
    return X;
}

SamplePath ou_path(const HurstParams& params, double lambda, double sigma, double xi, const TimeGrid& grid,
                   std::uint64_t seed, const OuOptions& options) {
    if (!(lambda > 0.0)) throw DomainError("ou_path: lambda must be positive");
    if (!options.stationary) {
        return ou_path(RosenblattSimulator(params, grid, options.simulation).path(seed), lambda, sigma, xi);
    }
    const double dt = grid.dt();
    const int burn = static_cast<int>(std::ceil(options.burn_in_factor / lambda / dt - 1e-9));
    TimeGrid ext(dt * (grid.N + burn), grid.N + burn);
    SamplePath full = ou_path(RosenblattSimulator(params, ext, options.simulation).path(seed), lambda, sigma, xi);
    SamplePath X;
    X.grid = grid;
    X.label = PathLabel::OU;
    X.values.assign(full.values.begin() + burn, full.values.end());
    return X;
}

double ou_residual(const SamplePath& X, const SamplePath& Z, double lambda, double sigma) {
    if (X.grid.N != Z.grid.N) throw ShapeError("ou_residual: grid mismatch");
    const double dt = X.grid.dt();
    double integral = 0.0, worst = 0.0;
    for (int k = 1; k <= X.grid.N; ++k) {
        integral += 0.5 * dt * (X.values[k - 1] + X.values[k]);
        double r = X.values[k] - X.values[0] + lambda * integral - sigma * (Z.values[k] - Z.values[0]);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

}  // namespace rosen
