#pragma once

#include "rosenblatt/rosenblatt.hpp"

#include <functional>

namespace rosen {

enum class RegMode { forward, backward, symmetric };

// Integrals via regularization on the grid, with eps = k * dt for an integer
// k >= 1. The time integral is a left-endpoint Riemann sum over [0, t]; X is
// extended by its last value beyond the horizon, and (s - eps)_+ clamps at 0.
double regularized_integral(const SamplePath& Y, const SamplePath& X, double eps, RegMode mode, double t);

// Same, for an integrand given as a function of X (Y = g(X)).
double regularized_integral(const std::function<double(double)>& g, const SamplePath& X, double eps,
                            RegMode mode, double t);

// (1/eps) * integral over [0, t] of (X(s + eps) - X(s))^2 ds.
double quadratic_variation(const SamplePath& X, double eps, double t);

enum class ItoFunction { identity, square, cube, custom };

struct C2Function {
    std::function<double(double)> f;
    std::function<double(double)> df;
};

// |f(X_T) - f(X_0) - symmetric integral of f'(X) dX over [0, T]| with T the
// grid horizon. `custom` uses the supplied function pair.
double pathwise_ito_residual(ItoFunction id, const SamplePath& X, double eps, const C2Function& custom = {});

// eps / dt as an integer, validating that eps is a positive grid multiple.
int eps_cells(const TimeGrid& grid, double eps);

}  // namespace rosen
