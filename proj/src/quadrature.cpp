#include "rosenblatt/quadrature.hpp"

#include "rosenblatt/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace rosen::quad {

void Rule::append(const Rule& other) {
    x.insert(x.end(), other.x.begin(), other.x.end());
    w.insert(w.end(), other.w.begin(), other.w.end());
}

namespace {

// Nodes and weights on [-1, 1] by Newton iteration on P_n.
const Rule& reference_rule(int n) {
    static std::mutex mutex;
    static std::map<int, Rule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return cache.emplace(n, std::move(r)).first->second;
}

}  // namespace

Rule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw DomainError("gauss_legendre: need at least one node");
    const Rule& ref = reference_rule(n);
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    double half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        r.x[i] = a + half * (ref.x[i] + 1.0);
        r.w[i] = half * ref.w[i];
    }
    return r;
}

Rule power_graded(int n, int p, double a, double b) {
    Rule s = gauss_legendre(n, 0.0, 1.0);
    double len = b - a;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double sp1 = std::pow(s.x[i], p - 1);
        s.w[i] *= len * p * sp1;
        s.x[i] = a + len * sp1 * s.x[i];
    }
    return s;
}

Rule geometric_graded(int n, int depth, double a, double b, bool grade_left, bool grade_right) {
    if (grade_left && grade_right) {
        double mid = 0.5 * (a + b);
        Rule r = geometric_graded(n, depth, a, mid, true, false);
        r.append(geometric_graded(n, depth, mid, b, false, true));
        return r;
    }
    Rule r;
    if (!grade_left && !grade_right) return gauss_legendre(n, a, b);
    // Breakpoints a + (b-a) 2^-k (left grading) or mirrored (right grading).
    std::vector<double> cuts{0.0};
    for (int k = depth; k >= 1; --k) cuts.push_back(std::ldexp(1.0, -k));
    cuts.push_back(1.0);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        double lo = cuts[k], hi = cuts[k + 1];
        if (grade_right) {
            lo = 1.0 - cuts[cuts.size() - 1 - k];
            hi = 1.0 - cuts[cuts.size() - 2 - k];
        }
        r.append(gauss_legendre(n, a + (b - a) * lo, a + (b - a) * hi));
    }
    return r;
}

double adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                double* error_estimate) {
    double err = 0.0, l1 = 0.0;
    double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, 15, rel_tol, &err, &l1);
    if (error_estimate) *error_estimate = err;
    if (err > rel_tol * std::max(l1, 1e-300) && err > 1e-300) {
        throw QuadratureError("adaptive quadrature did not reach the requested tolerance");
    }
    return value;
}

}  // namespace rosen::quad
