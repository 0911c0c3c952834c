#pragma once

#include <functional>
#include <vector>

namespace rosen::quad {

struct Rule {
    std::vector<double> x;
    std::vector<double> w;

    std::size_t size() const { return x.size(); }
    void append(const Rule& other);
};

// Gauss-Legendre rule with n points on [a, b].
Rule gauss_legendre(int n, double a = 0.0, double b = 1.0);

// Gauss-Legendre on [a, b] after the substitution u = a + (b - a) s^p.
// Clusters nodes at a; for integrands behaving like (u - a)^beta it
// turns the endpoint behaviour into s^(p(beta + 1) - 1).
Rule power_graded(int n, int p, double a, double b);

// Composite rule on [a, b]: geometric subintervals with ratio 1/2 towards
// the flagged endpoints (depth levels each), n Gauss points per piece.
Rule geometric_graded(int n, int depth, double a, double b, bool grade_left, bool grade_right);

// Adaptive Gauss-Kronrod integration with relative tolerance; throws
// QuadratureError when the error estimate stays above the tolerance.
double adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                double* error_estimate = nullptr);

}  // namespace rosen::quad
