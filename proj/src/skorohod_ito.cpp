#include "rosenblatt/skorohod_ito.hpp"

#include "rosenblatt/errors.hpp"
#include "rosenblatt/parallel.hpp"
#include "rosenblatt/regularization.hpp"
#include "rosenblatt/rng.hpp"

#include <json.hpp>

#include <cmath>

namespace rosen {

namespace {

std::shared_ptr<const KernelFactor> uncompensated_factor(const HurstParams& params, const TimeGrid& grid,
                                                         int grading_levels) {
    int levels = grading_levels < 0 ? default_grading_levels(params.H) : grading_levels;
    return shared_factor(params, make_partition(grid, levels));
}

// int_{a}^{b} u^{2H-1} du.
double power_cell(double H, double a, double b) {
    return (std::pow(b, 2.0 * H) - std::pow(a, 2.0 * H)) / (2.0 * H);
}

double squared_A(const HurstParams& p) {
    double A = p.d_H * p.hprime_factor();
    return A * A;
}

}  // namespace

SkorohodEngine::SkorohodEngine(const HurstParams& params, const TimeGrid& grid, int t_index, int grading_levels)
    : params_(params), t_index_(t_index < 0 ? grid.N : t_index) {
    if (t_index_ > grid.N) throw DomainError("SkorohodEngine: t_index beyond the grid");
    factor_ = uncompensated_factor(params, grid, grading_levels);
    const Partition& part = factor_->partition();
    const int M = part.cells();
    cells_ = part.cells_before(t_index_);

    F_ = Eigen::MatrixXd::Zero(M, M);
    W_ = Eigen::MatrixXd::Zero(M, M);
    diag_.resize(M);
    for (int m = 0; m < M; ++m) diag_[m] = factor_->factor(m).rowwise().squaredNorm();
    Eigen::MatrixXd prefix = Eigen::MatrixXd::Zero(M, M);  // sum_{n < m} offdiag(D_n)
    for (int m = 0; m < cells_; ++m) {
        const auto& V = factor_->factor(m);
        const int n = m + 1;
        Eigen::MatrixXd D = V.cols() ? Eigen::MatrixXd(V * V.transpose()) : Eigen::MatrixXd::Zero(n, n);
        F_.topLeftCorner(n, n) += D;
        D.diagonal().setZero();
        Eigen::MatrixXd Zhat = prefix.topLeftCorner(n, n) + 0.5 * D;
        W_.topLeftCorner(n, n) += D.cwiseProduct(Zhat);
        prefix.topLeftCorner(n, n) += D;
    }
    FF_ = F_ * F_;
}

SkorohodEngine::Terms SkorohodEngine::evaluate(const Eigen::VectorXd& xi) const {
    const int M = cells_;
    if (xi.size() < M) throw ShapeError("SkorohodEngine::evaluate: too few variates");
    Terms out;
    Eigen::VectorXd x = xi.head(M);
    Eigen::VectorXd y = x.cwiseProduct(x);

    double z = 0.0;
    double quad_prefix = 0.0;  // sum_{n < m} x^T offdiag(D_n) x
    double t1 = 0.0, t2 = 0.0;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(M);  // sum_{n < m} offdiag(D_n) x
    for (int m = 0; m < M; ++m) {
        const auto& V = factor_->factor(m);
        const int n = m + 1;
        if (V.cols() == 0) continue;
        Eigen::VectorXd v = V.transpose() * x.head(n);
        const double q = v.squaredNorm();
        Eigen::VectorXd d0x = V * v - diag_[m].cwiseProduct(x.head(n));
        const double qd0 = q - diag_[m].dot(y.head(n));
        z += qd0;
        t1 += qd0 * (quad_prefix + 0.5 * qd0);
        Eigen::VectorXd zhat_x = b.head(n) + 0.5 * d0x;
        t2 += (y.head(n).array() * d0x.array() * zhat_x.array()).sum();
        quad_prefix += qd0;
        b.head(n) += d0x;
    }
    const double t3 = y.dot(W_.topLeftCorner(M, M) * y);
    out.Z_T = z;
    out.skorohod = t1 - 4.0 * t2 + 2.0 * t3;
    auto FF = FF_.topLeftCorner(M, M);
    out.contraction = x.dot(FF * x) - FF.diagonal().dot(y);
    return out;
}

SkorohodEngine::Terms SkorohodEngine::evaluate(std::uint64_t seed) const {
    Eigen::VectorXd xi(factor_->cells());
    CounterRng(seed, stream::brownian).fill_normal({xi.data(), static_cast<std::size_t>(xi.size())});
    return evaluate(xi);
}

SamplePath SkorohodEngine::path(std::uint64_t seed) const {
    const Partition& part = factor_->partition();
    const TimeGrid& grid = part.grid();
    Eigen::VectorXd x(part.cells());
    CounterRng(seed, stream::brownian).fill_normal({x.data(), static_cast<std::size_t>(x.size())});
    SamplePath p;
    p.grid = grid;
    p.values.assign(grid.N + 1, 0.0);
    double z = 0.0;
    int k = 1;
    for (int m = 0; m < part.cells(); ++m) {
        const auto& V = factor_->factor(m);
        if (V.cols()) {
            auto xm = x.head(m + 1);
            z += (V.transpose() * xm).squaredNorm() - diag_[m].dot(xm.cwiseProduct(xm));
        }
        while (k <= grid.N && part.cells_before(k) == m + 1) p.values[k++] = z;
    }
    return p;
}

GridKernel SkorohodEngine::kernel_h() const {
    const Partition& part = factor_->partition();
    const int M = part.cells();
    GridKernel h(4, factor_->partition_ptr());
    Eigen::MatrixXd prefix = Eigen::MatrixXd::Zero(M, M);
    auto& data = h.data();
    const std::size_t n = static_cast<std::size_t>(M);
    for (int m = 0; m < cells_; ++m) {
        const auto& V = factor_->factor(m);
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(M, M);
        if (V.cols()) D.topLeftCorner(m + 1, m + 1) = V * V.transpose();
        Eigen::MatrixXd Zhat = prefix + 0.5 * D;
        for (int k = 0; k <= m; ++k)
            for (int l = 0; l <= m; ++l) {
                if (D(k, l) == 0.0) continue;
                for (int i = 0; i < M; ++i)
                    for (int j = 0; j < M; ++j) data[((k * n + l) * n + i) * n + j] += D(k, l) * Zhat(i, j);
            }
        prefix += D;
    }
    std::vector<double> s(M);
    for (int i = 0; i < M; ++i) s[i] = 1.0 / std::sqrt(part.width(i));
    for (int k = 0; k < M; ++k)
        for (int l = 0; l < M; ++l)
            for (int i = 0; i < M; ++i)
                for (int j = 0; j < M; ++j) data[((k * n + l) * n + i) * n + j] *= s[k] * s[l] * s[i] * s[j];
    return h;
}

GridKernel SkorohodEngine::contraction_kernel() const {
    const Partition& part = factor_->partition();
    Eigen::VectorXd s(part.cells());
    for (int i = 0; i < part.cells(); ++i) s[i] = 1.0 / std::sqrt(part.width(i));
    return GridKernel::from_matrix(s.asDiagonal() * FF_ * s.asDiagonal(), factor_->partition_ptr());
}

double skorohod_linear(const HurstParams& params, const TimeGrid& grid, const GaussianIncrements& dB, double T) {
    const int k = grid.index_of(T);
    if (k < 0) throw DomainError("skorohod_linear: T must be a grid node");
    SkorohodEngine engine(params, grid, k, dB.partition->grading_levels());
    if (!(engine.factor().partition() == *dB.partition)) throw ShapeError("skorohod_linear: grid mismatch");
    return engine.evaluate(dB.standardized()).skorohod;
}

std::string ItoX2Report::to_json() const {
    nlohmann::json j = {{"H", H},
                        {"N", N},
                        {"samples", samples},
                        {"T", T},
                        {"lhs_var", lhs_var},
                        {"residual_l2", residual_l2},
                        {"residual_se", residual_se},
                        {"residual_l2_ablated", residual_l2_ablated},
                        {"skorohod_mean", skorohod_mean},
                        {"skorohod_se", skorohod_se},
                        {"components",
                         {{"var_skorohod", var_skorohod},
                          {"var_correction", var_correction},
                          {"trace_term", trace_term}}},
                        {"grid_isometry", grid_isometry}};
    return j.dump(2);
}

ItoX2Report ito_x2_residual(const HurstParams& params, const TimeGrid& grid, int samples, std::uint64_t seed0,
                            const ItoX2Options& options) {
    if (samples < 2) throw SampleSizeError("ito_x2_residual: need at least two samples");
    const double n4 = std::pow(static_cast<double>(grid.N), 4.0);
    if (n4 * samples > options.cost_budget) throw DomainError("ito_x2_residual: N^4 * M exceeds the cost budget");

    SkorohodEngine engine(params, grid, grid.N, options.grading_levels);
    const double T = grid.T;
    const double trace = std::pow(T, 2.0 * params.H);
    std::vector<SkorohodEngine::Terms> terms(static_cast<std::size_t>(samples));
    parallel_chunks(
        terms.size(), 16,
        [&](std::size_t b, std::size_t e) {
            for (std::size_t s = b; s < e; ++s) terms[s] = engine.evaluate(seed0 + s);
        },
        options.threads);

    auto mean_var = [](const std::vector<double>& v) {
        double m = 0.0, q = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        for (double x : v) q += (x - m) * (x - m);
        return std::pair{m, q / static_cast<double>(v.size() - 1)};
    };
    std::vector<double> lhs, res, abl, sk, corr;
    for (const auto& t : terms) {
        const double l = t.Z_T * t.Z_T;
        const double rhs_no = 2.0 * t.skorohod + trace;
        const double rhs = rhs_no + 4.0 * t.contraction;
        lhs.push_back(l);
        res.push_back((l - rhs) * (l - rhs));
        abl.push_back((l - rhs_no) * (l - rhs_no));
        sk.push_back(t.skorohod);
        corr.push_back(4.0 * t.contraction);
    }
    ItoX2Report r;
    r.H = params.H;
    r.N = grid.N;
    r.samples = samples;
    r.T = T;
    r.lhs_var = mean_var(lhs).second;
    auto [rm, rv] = mean_var(res);
    r.residual_l2 = rm;
    r.residual_se = std::sqrt(rv / samples);
    r.residual_l2_ablated = mean_var(abl).first;
    auto [sm, sv] = mean_var(sk);
    r.skorohod_mean = sm;
    r.skorohod_se = std::sqrt(sv / samples);
    r.var_skorohod = 4.0 * sv;
    r.var_correction = mean_var(corr).second;
    r.trace_term = trace;
    r.grid_isometry = engine.isometry();
    return r;
}

double trace_limit(const HurstParams& params, const SamplePath& Z, const std::function<double(double)>& f2) {
    const double c = 2.0 * squared_A(params) / (2.0 * params.H - 1.0);
    double s = 0.0;
    for (int i = 0; i < Z.grid.N; ++i) {
        double w = power_cell(params.H, Z.grid.node(i), Z.grid.node(i + 1));
        s += 0.5 * (f2(Z.values[i]) + f2(Z.values[i + 1])) * w;
    }
    return c * s;
}

std::string RelationReport::to_json() const {
    nlohmann::json j = {{"eps", eps},           {"forward", forward},   {"skorohod", skorohod},
                        {"trace_b2", trace_b2}, {"trace_b1", trace_b1}, {"trace_c1", trace_c1},
                        {"rhs", rhs},           {"residual", residual}};
    return j.dump(2);
}

RelationReport relation_residual(const HurstParams& params, const TimeGrid& grid, double eps, std::uint64_t seed,
                                 const RelationOptions& options) {
    SkorohodEngine engine(params, grid, grid.N, options.grading_levels);
    SamplePath Z = engine.path(seed);
    SkorohodEngine::Terms t = engine.evaluate(seed);

    RelationReport r;
    r.eps = eps;
    r.forward = regularized_integral([](double x) { return 2.0 * x; }, Z, eps, RegMode::forward, grid.T);
    r.skorohod = 2.0 * t.skorohod;
    if (options.include_traces) {
        auto two = [](double) { return 2.0; };
        r.trace_b2 = trace_limit(params, Z, two);
        r.trace_c1 = trace_limit(params, Z, two);
        r.trace_b1 = 2.0 * t.contraction;
    }
    r.rhs = r.skorohod + 2.0 * (r.trace_b2 + r.trace_b1) - r.trace_c1;
    r.residual = std::abs(r.forward - r.rhs);
    return r;
}

double x3_triple_closed_form(double H, double T) {
    return std::pow(T, 3.0 * H) * 2.0 * beta_fn(H, H) / ((3.0 * H - 1.0) * 3.0 * H);
}

ItoX3Scalars ito_x3_scalar_terms(const HurstParams& params, double T, const SamplePath& Z,
                                 const CumulantOptions& options) {
    ItoX3Scalars out;
    if (T <= 0.0) return out;
    const int k = Z.grid.index_of(T);
    if (k < 0) throw DomainError("ito_x3_scalar_terms: T must be a grid node");
    double s = 0.0;
    for (int i = 0; i < k; ++i) {
        s += 0.5 * (Z.values[i] + Z.values[i + 1]) * power_cell(params.H, Z.grid.node(i), Z.grid.node(i + 1));
    }
    const double A2 = squared_A(params);
    out.drift = 24.0 * A2 / (2.0 * params.H - 1.0) * s;
    IntegralEstimate j3 = cyclic_integral(params.H, 3, T, options);
    out.triple_integral = j3.value / 3.0;
    out.triple_error = j3.error / 3.0;
    out.triple_term = 24.0 * A2 * std::sqrt(A2) * out.triple_integral;
    return out;
}

}  // namespace rosen
