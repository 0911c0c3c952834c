#include "rosenblatt/rosenblatt.hpp"

#include "rosenblatt/errors.hpp"
#include "rosenblatt/parallel.hpp"
#include "rosenblatt/rng.hpp"

#include <fftw3.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <mutex>

namespace rosen {

namespace {

constexpr std::size_t kChunk = 32;

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// L with L L^T = C, from the eigen-decomposition with negative eigenvalues
// (rounding noise of a positive semidefinite matrix) clamped to zero.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& C) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
    Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * lam.asDiagonal();
}

Eigen::MatrixXd target_covariance(double H, const TimeGrid& grid) {
    Eigen::MatrixXd R(grid.N, grid.N);
    for (int k = 1; k <= grid.N; ++k)
        for (int l = 1; l <= grid.N; ++l) R(k - 1, l - 1) = covariance_R(H, grid.node(k), grid.node(l));
    return R;
}

void fill_standard_normals(Eigen::MatrixXd& out, std::uint64_t first_seed, std::uint32_t stream_id) {
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        CounterRng rng(first_seed + static_cast<std::uint64_t>(c), stream_id);
        rng.fill_normal({out.col(c).data(), static_cast<std::size_t>(out.rows())});
    }
}

void fill_standard_normals(Eigen::MatrixXd& out, const std::uint64_t* seeds, std::uint32_t stream_id) {
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        CounterRng rng(seeds[c], stream_id);
        rng.fill_normal({out.col(c).data(), static_cast<std::size_t>(out.rows())});
    }
}

SamplePath column_path(const TimeGrid& grid, const Eigen::VectorXd& col, PathLabel label, double eps = 0.0) {
    SamplePath p;
    p.grid = grid;
    p.values.assign(col.data(), col.data() + col.size());
    p.label = label;
    p.eps = eps;
    return p;
}

}  // namespace

std::string to_string(PathLabel label) {
    switch (label) {
    case PathLabel::Rosenblatt: return "rosenblatt";
    case PathLabel::RosenblattNCLT: return "rosenblatt_nclt";
    case PathLabel::RosenblattEps: return "rosenblatt_eps";
    case PathLabel::FBM: return "fbm";
    case PathLabel::OU: return "ou";
    case PathLabel::Field: return "field";
    }
    return "unknown";
}

void write_csv(std::ostream& os, const SamplePath& path) {
    os << "t,value\n" << std::setprecision(17);
    for (int k = 0; k <= path.grid.N; ++k) os << path.grid.node(k) << ',' << path.values[k] << '\n';
}

Eigen::MatrixXd chaos_grid_covariance(const KernelFactor& factor) {
    const Partition& part = factor.partition();
    const int M = part.cells();
    const int N = part.grid().N;

    std::vector<Eigen::Index> col_start(M + 1, 0);
    for (int m = 0; m < M; ++m) col_start[m + 1] = col_start[m] + factor.factor(m).cols();
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(M, col_start[M]);
    for (int m = 0; m < M; ++m) {
        const auto& V = factor.factor(m);
        W.block(0, col_start[m], V.rows(), V.cols()) = V;
    }

    // S(a, b): covariance between the increments over grid cells a and b.
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(N, N);
    for (int m = 0; m < M; ++m) {
        const auto& V = factor.factor(m);
        if (V.cols() == 0) continue;
        Eigen::MatrixXd P = V.transpose() * W.topLeftCorner(m + 1, col_start[m + 1]);
        const int a = part.grid_cell(m);
        for (int n = 0; n <= m; ++n) {
            double s = 2.0 * P.middleCols(col_start[n], col_start[n + 1] - col_start[n]).squaredNorm();
            const int b = part.grid_cell(n);
            S(a, b) += s;
            if (n != m) S(b, a) += s;
        }
    }
    // Two-dimensional prefix sums give Cov(Z(t_k), Z(t_l)).
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(N, N);
    for (int k = 0; k < N; ++k) {
        for (int l = 0; l < N; ++l) {
            double v = S(k, l);
            if (k > 0) v += C(k - 1, l);
            if (l > 0) v += C(k, l - 1);
            if (k > 0 && l > 0) v -= C(k - 1, l - 1);
            C(k, l) = v;
        }
    }
    return C;
}

RosenblattSimulator::RosenblattSimulator(const HurstParams& params, const TimeGrid& grid,
                                         const SimulationOptions& options)
    : params_(params), grid_(grid), options_(options) {
    int levels = options.grading_levels < 0 ? default_grading_levels(params.H) : options.grading_levels;
    factor_ = shared_factor(params, make_partition(grid, levels), options.factor);
    if (options_.compensate) {
        grid_cov_ = chaos_grid_covariance(*factor_);
        comp_factor_ = psd_factor(missing_covariance());
    }
}

Eigen::MatrixXd RosenblattSimulator::grid_covariance() const {
    return grid_cov_.size() ? grid_cov_ : chaos_grid_covariance(*factor_);
}

Eigen::MatrixXd RosenblattSimulator::missing_covariance() const {
    return target_covariance(params_.H, grid_) - grid_covariance();
}

void RosenblattSimulator::chaos_block(const Eigen::MatrixXd& xi, Eigen::MatrixXd& out) const {
    const Partition& part = factor_->partition();
    const int M = part.cells();
    const Eigen::Index P = xi.cols();
    Eigen::RowVectorXd running = Eigen::RowVectorXd::Zero(P);
    out.row(0).setZero();
    int k = 1;
    for (int m = 0; m < M; ++m) {
        const auto& V = factor_->factor(m);
        if (V.cols() > 0) {
            Eigen::MatrixXd Y = V.transpose() * xi.topRows(m + 1);
            running += Y.colwise().squaredNorm();
            running.array() -= factor_->trace(m);
        }
        while (k <= grid_.N && part.cells_before(k) == m + 1) out.row(k++) = running;
    }
}

void RosenblattSimulator::compensation_block(const std::uint64_t* seeds, std::size_t count,
                                             Eigen::MatrixXd& out) const {
    if (!options_.compensate) return;
    Eigen::MatrixXd eta(grid_.N, static_cast<Eigen::Index>(count));
    fill_standard_normals(eta, seeds, stream::compensation);
    out.bottomRows(grid_.N) += comp_factor_ * eta;
}

Eigen::VectorXd RosenblattSimulator::compensation_path(std::uint64_t seed) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(grid_.N + 1, 1);
    compensation_block(&seed, 1, out);
    return out.col(0);
}

Eigen::MatrixXd RosenblattSimulator::ensemble(std::uint64_t first_seed, std::size_t count,
                                              unsigned threads) const {
    std::vector<std::uint64_t> seeds(count);
    for (std::size_t i = 0; i < count; ++i) seeds[i] = first_seed + i;
    return ensemble(seeds, threads);
}

Eigen::MatrixXd RosenblattSimulator::ensemble(const std::vector<std::uint64_t>& seeds, unsigned threads) const {
    const int M = factor_->cells();
    const std::size_t count = seeds.size();
    Eigen::MatrixXd out(grid_.N + 1, static_cast<Eigen::Index>(count));
    parallel_chunks(
        count, kChunk,
        [&](std::size_t b, std::size_t e) {
            const auto P = static_cast<Eigen::Index>(e - b);
            Eigen::MatrixXd xi(M, P);
            fill_standard_normals(xi, seeds.data() + b, stream::brownian);
            Eigen::MatrixXd block(grid_.N + 1, P);
            chaos_block(xi, block);
            compensation_block(seeds.data() + b, e - b, block);
            out.middleCols(static_cast<Eigen::Index>(b), P) = block;
        },
        threads);
    return out;
}

SamplePath RosenblattSimulator::path(std::uint64_t seed) const {
    Eigen::MatrixXd one = ensemble(seed, 1, 1);
    PathLabel label = factor_->shift() > 0.0 ? PathLabel::RosenblattEps : PathLabel::Rosenblatt;
    return column_path(grid_, one.col(0), label, factor_->shift());
}

SamplePath simulate_kernel_method(const HurstParams& params, const TimeGrid& grid, std::uint64_t seed,
                                  const SimulationOptions& options) {
    return RosenblattSimulator(params, grid, options).path(seed);
}

SamplePath simulate_eps(const HurstParams& params, const TimeGrid& grid, double eps, std::uint64_t seed,
                        SimulationOptions options) {
    if (!(eps > 0.0)) throw DomainError("simulate_eps: eps must be positive");
    options.compensate = false;
    options.factor.shift = eps;
    return RosenblattSimulator(params, grid, options).path(seed);
}

FbmSimulator::FbmSimulator(double h, const TimeGrid& grid, const SimulationOptions& options)
    : h_(h), grid_(grid) {
    FracKernel k = FracKernel::for_hurst(h);
    int levels = options.grading_levels < 0 ? default_grading_levels(h) : options.grading_levels;
    partition_ = make_partition(grid, levels);
    A_ = fbm_cell_kernel(k, *partition_, options.factor);
    for (int i = 0; i < partition_->cells(); ++i) A_.col(i) *= std::sqrt(partition_->width(i));
    if (options.compensate) {
        Eigen::MatrixXd Ab = A_.bottomRows(grid.N);
        comp_ = psd_factor(target_covariance(h, grid) - Ab * Ab.transpose());
    }
}

Eigen::MatrixXd FbmSimulator::ensemble(std::uint64_t first_seed, std::size_t count, unsigned threads) const {
    const Eigen::Index M = A_.cols();
    Eigen::MatrixXd out(grid_.N + 1, static_cast<Eigen::Index>(count));
    parallel_chunks(
        count, kChunk,
        [&](std::size_t b, std::size_t e) {
            const auto P = static_cast<Eigen::Index>(e - b);
            Eigen::MatrixXd xi(M, P);
            fill_standard_normals(xi, first_seed + b, stream::brownian);
            Eigen::MatrixXd block = A_ * xi;
            if (comp_.size()) {
                Eigen::MatrixXd eta(grid_.N, P);
                fill_standard_normals(eta, first_seed + b, stream::compensation);
                block.bottomRows(grid_.N) += comp_ * eta;
            }
            out.middleCols(static_cast<Eigen::Index>(b), P) = block;
        },
        threads);
    return out;
}

SamplePath FbmSimulator::path(std::uint64_t seed) const {
    return column_path(grid_, ensemble(seed, 1, 1).col(0), PathLabel::FBM);
}

SamplePath simulate_fbm(double h, const TimeGrid& grid, std::uint64_t seed, const SimulationOptions& options) {
    return FbmSimulator(h, grid, options).path(seed);
}

double nclt_sum_variance(double h, std::size_t n) {
    auto r = [h](double k) {
        return 0.5 * (std::pow(k + 1.0, 2 * h) - 2.0 * std::pow(k, 2 * h) + std::pow(std::abs(k - 1.0), 2 * h));
    };
    // Var H_2(xi) = 2 and Cov(H_2(xi_i), H_2(xi_j)) = 2 r(i - j)^2.
    double s = static_cast<double>(n);
    for (std::size_t k = 1; k < n; ++k) {
        double rk = r(static_cast<double>(k));
        s += 2.0 * static_cast<double>(n - k) * rk * rk;
    }
    return 2.0 * s;
}

NcltSimulator::NcltSimulator(const NcltConfig& config, const TimeGrid& grid) : config_(config), grid_(grid) {
    if (config.inner_n < (1 << 10)) throw DomainError("NcltSimulator: inner_n must be at least 2^10");
    const double h = (config.H + 1.0) / 2.0;
    if (!(config.H > 0.5 && config.H < 1.0)) throw DomainError("NcltSimulator: H must lie in (1/2, 1)");
    n_ = static_cast<std::size_t>(std::ceil(config.inner_n * grid.T));
    m_ = 2 * n_;

    std::vector<std::complex<double>> c(m_), lam(m_);
    auto r = [h](double k) {
        return 0.5 * (std::pow(k + 1.0, 2 * h) - 2.0 * std::pow(k, 2 * h) + std::pow(std::abs(k - 1.0), 2 * h));
    };
    for (std::size_t j = 0; j < m_; ++j) c[j] = r(static_cast<double>(j <= n_ ? j : m_ - j));
    {
        std::lock_guard lock(fftw_mutex());
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(m_), reinterpret_cast<fftw_complex*>(c.data()),
                                          reinterpret_cast<fftw_complex*>(lam.data()), FFTW_FORWARD,
                                          FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }
    sqrt_eig_.resize(m_);
    double max_lam = 0.0;
    for (auto& v : lam) max_lam = std::max(max_lam, v.real());
    for (std::size_t j = 0; j < m_; ++j) {
        double v = lam[j].real();
        if (v < -1e-8 * max_lam) throw std::runtime_error("NcltSimulator: circulant embedding is not positive definite");
        sqrt_eig_[j] = std::sqrt(std::max(v, 0.0) / static_cast<double>(m_));
    }
    norm_ = std::sqrt(nclt_sum_variance(h, static_cast<std::size_t>(config.inner_n)));
}

NcltSimulator::~NcltSimulator() = default;

std::pair<SamplePath, SamplePath> NcltSimulator::path_pair(std::uint64_t seed) const {
    Eigen::MatrixXd two = ensemble(seed, 1, 1);
    return {column_path(grid_, two.col(0), PathLabel::RosenblattNCLT),
            column_path(grid_, two.col(1), PathLabel::RosenblattNCLT)};
}

Eigen::MatrixXd NcltSimulator::ensemble(std::uint64_t first_seed, std::size_t count, unsigned threads) const {
    Eigen::MatrixXd out(grid_.N + 1, static_cast<Eigen::Index>(2 * count));
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_mutex());
        auto* a = fftw_alloc_complex(m_);
        auto* b = fftw_alloc_complex(m_);
        plan = fftw_plan_dft_1d(static_cast<int>(m_), a, b, FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_free(a);
        fftw_free(b);
    }
    std::vector<std::size_t> index(grid_.N + 1);
    for (int k = 0; k <= grid_.N; ++k) {
        index[k] = std::min(n_, static_cast<std::size_t>(std::floor(config_.inner_n * grid_.node(k) + 1e-9)));
    }

    parallel_chunks(
        count, 1,
        [&](std::size_t b, std::size_t e) {
            auto* in = fftw_alloc_complex(m_);
            auto* res = fftw_alloc_complex(m_);
            std::vector<double> z(2 * m_);
            for (std::size_t s = b; s < e; ++s) {
                CounterRng(first_seed + s, stream::nclt).fill_normal(z);
                for (std::size_t j = 0; j < m_; ++j) {
                    in[j][0] = sqrt_eig_[j] * z[2 * j];
                    in[j][1] = sqrt_eig_[j] * z[2 * j + 1];
                }
                fftw_execute_dft(plan, in, res);
                for (int part = 0; part < 2; ++part) {
                    auto col = out.col(static_cast<Eigen::Index>(2 * s + part));
                    double sum = 0.0;
                    std::size_t j = 0;
                    for (int k = 0; k <= grid_.N; ++k) {
                        for (; j < index[k]; ++j) {
                            double x = res[j][part];
                            sum += x * x - 1.0;
                        }
                        col[k] = sum / norm_;
                    }
                }
            }
            fftw_free(in);
            fftw_free(res);
        },
        threads);
    {
        std::lock_guard lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

SamplePath simulate_nclt(const NcltConfig& config, const TimeGrid& grid, std::uint64_t seed) {
    return NcltSimulator(config, grid).path(seed);
}

std::string ensemble_summary_json(const TimeGrid& grid, const Eigen::MatrixXd& paths) {
    nlohmann::json j;
    j["T"] = grid.T;
    j["N"] = grid.N;
    j["paths"] = paths.cols();
    nlohmann::json rows = nlohmann::json::array();
    std::vector<double> v(static_cast<std::size_t>(paths.cols()));
    for (int k = 0; k <= grid.N; ++k) {
        for (Eigen::Index c = 0; c < paths.cols(); ++c) v[c] = paths(k, c);
        double mean = 0.0, var = 0.0;
        for (double x : v) mean += x;
        mean /= std::max<std::size_t>(v.size(), 1);
        for (double x : v) var += (x - mean) * (x - mean);
        var /= std::max<std::size_t>(v.size(), 2) - 1;
        std::sort(v.begin(), v.end());
        auto q = [&](double p) {
            if (v.empty()) return 0.0;
            double pos = p * (v.size() - 1);
            std::size_t lo = static_cast<std::size_t>(pos);
            std::size_t hi = std::min(lo + 1, v.size() - 1);
            return v[lo] + (pos - lo) * (v[hi] - v[lo]);
        };
        rows.push_back({{"t", grid.node(k)}, {"mean", mean}, {"var", var},
                        {"q05", q(0.05)}, {"q50", q(0.5)}, {"q95", q(0.95)}});
    }
    j["summary"] = rows;
    return j.dump(2);
}

}  // namespace rosen
