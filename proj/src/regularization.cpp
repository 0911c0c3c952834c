#include "rosenblatt/regularization.hpp"

#include "rosenblatt/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rosen {

int eps_cells(const TimeGrid& grid, double eps) {
    const double dt = grid.dt();
    if (!(eps >= dt * (1.0 - 1e-9))) throw DomainError("regularization: eps is smaller than the grid step");
    const double r = eps / dt;
    const long k = std::lround(r);
    if (std::abs(r - static_cast<double>(k)) > 1e-6 * r) {
        throw DomainError("regularization: eps must be a multiple of the grid step");
    }
    return static_cast<int>(k);
}

namespace {

int end_index(const TimeGrid& grid, double t) {
    int n = grid.index_of(t);
    if (n < 0) throw DomainError("regularization: t must be a grid node");
    return n;
}

double integral_impl(const std::vector<double>& y, const SamplePath& X, double eps, RegMode mode, double t) {
    const TimeGrid& g = X.grid;
    const int k = eps_cells(g, eps);
    const int n = end_index(g, t);
    const int N = g.N;
    const auto& x = X.values;
    double fwd = 0.0, bwd = 0.0;
    for (int i = 0; i < n; ++i) {
        if (mode != RegMode::backward) fwd += y[i] * (x[std::min(i + k, N)] - x[i]);
        if (mode != RegMode::forward) bwd += y[i] * (x[i] - x[std::max(i - k, 0)]);
    }
    const double scale = g.dt() / eps;
    switch (mode) {
    case RegMode::forward: return scale * fwd;
    case RegMode::backward: return scale * bwd;
    case RegMode::symmetric: return 0.5 * scale * (fwd + bwd);
    }
    return 0.0;
}

}  // namespace

double regularized_integral(const SamplePath& Y, const SamplePath& X, double eps, RegMode mode, double t) {
    if (Y.grid.N != X.grid.N || Y.grid.T != X.grid.T) throw ShapeError("regularized_integral: grid mismatch");
    return integral_impl(Y.values, X, eps, mode, t);
}

double regularized_integral(const std::function<double(double)>& g, const SamplePath& X, double eps,
                            RegMode mode, double t) {
    std::vector<double> y(X.values.size());
    std::transform(X.values.begin(), X.values.end(), y.begin(), g);
    return integral_impl(y, X, eps, mode, t);
}

double quadratic_variation(const SamplePath& X, double eps, double t) {
    const TimeGrid& g = X.grid;
    const int k = eps_cells(g, eps);
    const int n = end_index(g, t);
    const auto& x = X.values;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double d = x[std::min(i + k, g.N)] - x[i];
        s += d * d;
    }
    return s * g.dt() / eps;
}

double pathwise_ito_residual(ItoFunction id, const SamplePath& X, double eps, const C2Function& custom) {
    C2Function fn;
    switch (id) {
    case ItoFunction::identity:
        fn = {[](double x) { return x; }, [](double) { return 1.0; }};
        break;
    case ItoFunction::square:
        fn = {[](double x) { return x * x; }, [](double x) { return 2.0 * x; }};
        break;
    case ItoFunction::cube:
        fn = {[](double x) { return x * x * x; }, [](double x) { return 3.0 * x * x; }};
        break;
    case ItoFunction::custom:
        if (!custom.f || !custom.df) throw DomainError("pathwise_ito_residual: custom function missing");
        fn = custom;
        break;
    }
    const double T = X.grid.T;
    double integral = regularized_integral(fn.df, X, eps, RegMode::symmetric, T);
    return std::abs(fn.f(X.values.back()) - fn.f(X.values.front()) - integral);
}

}  // namespace rosen
