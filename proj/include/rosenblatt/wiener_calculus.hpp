#pragma once

#include "rosenblatt/chaos.hpp"
#include "rosenblatt/rosenblatt.hpp"

#include <vector>

namespace rosen {

// f = sum_i levels[i] * 1_(breakpoints[i], breakpoints[i+1]].
struct StepFunction {
    std::vector<double> breakpoints;
    std::vector<double> levels;

    StepFunction() = default;
    StepFunction(std::vector<double> breakpoints, std::vector<double> levels);

    static StepFunction indicator(double a, double b, double level = 1.0);
    // One level per grid cell.
    static StepFunction on_grid(const TimeGrid& grid, std::vector<double> levels);

    // Value on the open-closed cell containing t (0 outside the support).
    double operator()(double t) const;
    StepFunction abs() const;
    StepFunction operator+(const StepFunction& o) const;
    StepFunction operator-(const StepFunction& o) const;
    StepFunction operator*(double c) const;

    // Levels per grid cell; throws when a breakpoint is off the grid.
    std::vector<double> grid_levels(const TimeGrid& grid) const;
};

// H(2H-1) * double integral of f(u) f(v) |u - v|^{2H-2}, exact for step functions.
double norm_H(const HurstParams& params, const StepFunction& f);
double norm_H(const HurstParams& params, const TimeGrid& grid, const std::vector<double>& cell_levels);
// norm_H applied to |f|.
double norm_abs_H(const HurstParams& params, const StepFunction& f);

// The same norm from the grid kernel of f: 2 * ||I(f)||^2 in the discrete
// L2 of the partition. Converges to norm_H under refinement.
double norm_H_grid(const KernelFactor& factor, const StepFunction& f);

// Increment form: sum_i a_i (Z(t_{i+1}) - Z(t_i)).
double wiener_integral(const SamplePath& Z, const StepFunction& f);

// Chaos form: the Wick second-chaos integral of the grid kernel of f against
// dB, plus the simulator's compensation increments for the same seed.
// Matches wiener_integral(sim.path(dB.seed), f).
double wiener_integral(const RosenblattSimulator& sim, const StepFunction& f, const GaussianIncrements& dB);

// Grid version of I(f) as an order-2 kernel in the increment coordinates.
GridKernel wiener_kernel(const KernelFactor& factor, const StepFunction& f);

struct ContractionNorm {
    double sup = 0.0;  // max |(F (x)_1 G)[i][j]|
    double l2 = 0.0;   // discrete L2 norm of the contraction
};

// Contraction of the grid kernels of f and g. Zero iff I_2(F) and I_2(G)
// are independent.
ContractionNorm independence_contraction(const KernelFactor& factor, const StepFunction& f,
                                         const StepFunction& g);

struct OuOptions {
    SimulationOptions simulation;
    // Stationary version: simulate over [-T_b, T] with T_b = factor / lambda
    // and start from 0 at -T_b.
    bool stationary = false;
    double burn_in_factor = 10.0;
};

// X(t) = e^{-lambda t}(xi + sigma * integral_0^t e^{lambda u} dZ(u)), with the
// exponential discretized by cell-midpoint levels.
SamplePath ou_path(const HurstParams& params, double lambda, double sigma, double xi, const TimeGrid& grid,
                   std::uint64_t seed, const OuOptions& options = {});
// Same, on a given Z path (coupled construction).
SamplePath ou_path(const SamplePath& Z, double lambda, double sigma, double xi);

// sup_k |X(t_k) - X(0) + lambda * trapezoid(X, 0, t_k) - sigma Z(t_k)|.
double ou_residual(const SamplePath& X, const SamplePath& Z, double lambda, double sigma);

}  // namespace rosen
