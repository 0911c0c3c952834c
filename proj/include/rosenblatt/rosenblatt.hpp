#pragma once

#include "rosenblatt/chaos.hpp"
#include "rosenblatt/frac_kernels.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

namespace rosen {

enum class PathLabel { Rosenblatt, RosenblattNCLT, RosenblattEps, FBM, OU, Field };

std::string to_string(PathLabel label);

struct SamplePath {
    TimeGrid grid;
    std::vector<double> values;  // N + 1 values at the grid nodes
    PathLabel label = PathLabel::Rosenblatt;
    double eps = 0.0;

    double at(int k) const { return values[k]; }
    double final() const { return values.back(); }
};

void write_csv(std::ostream& os, const SamplePath& path);

struct SimulationOptions {
    // Geometric refinement of the first Brownian cell; negative selects
    // default_grading_levels(H).
    int grading_levels = -1;
    // Add an independent Gaussian path carrying the covariance the grid
    // kernel misses, so that the simulated covariance equals R exactly.
    bool compensate = true;
    FactorOptions factor;
};

// Kernel-method simulator. Z(t_k) is the second-chaos integral of the cell
// kernel at t_k against one shared vector of Brownian increments, plus the
// optional Gaussian compensation.
class RosenblattSimulator {
public:
    RosenblattSimulator(const HurstParams& params, const TimeGrid& grid,
                        const SimulationOptions& options = {});

    const HurstParams& params() const { return params_; }
    const TimeGrid& grid() const { return grid_; }
    const KernelFactor& factor() const { return *factor_; }
    std::shared_ptr<const Partition> partition() const { return factor_->partition_ptr(); }
    bool compensated() const { return options_.compensate; }

    SamplePath path(std::uint64_t seed) const;
    // Paths for seeds first_seed .. first_seed + count - 1 as columns of an
    // (N + 1) x count matrix. Independent of the thread count.
    Eigen::MatrixXd ensemble(std::uint64_t first_seed, std::size_t count, unsigned threads = 0) const;
    // Paths for an explicit list of seeds.
    Eigen::MatrixXd ensemble(const std::vector<std::uint64_t>& seeds, unsigned threads = 0) const;

    // Covariance of the chaos part on the grid nodes 1..N (cached only when
    // compensating), and the part of R it misses.
    Eigen::MatrixXd grid_covariance() const;
    Eigen::MatrixXd missing_covariance() const;

    // The Gaussian compensation component of path(seed) at the N + 1 nodes
    // (all zeros when compensation is off).
    Eigen::VectorXd compensation_path(std::uint64_t seed) const;

private:
    void chaos_block(const Eigen::MatrixXd& xi, Eigen::MatrixXd& out) const;
    void compensation_block(const std::uint64_t* seeds, std::size_t count, Eigen::MatrixXd& out) const;

    HurstParams params_;
    TimeGrid grid_;
    SimulationOptions options_;
    std::shared_ptr<const KernelFactor> factor_;
    Eigen::MatrixXd grid_cov_;
    Eigen::MatrixXd comp_factor_;  // N x N, L L^T = missing covariance
};

// Covariance between chaos parts at all pairs of grid nodes:
// Cov(Z(t_k), Z(t_l)) = 2 tr(M_k M_l), computed block-wise from the factor.
Eigen::MatrixXd chaos_grid_covariance(const KernelFactor& factor);

SamplePath simulate_kernel_method(const HurstParams& params, const TimeGrid& grid, std::uint64_t seed,
                                  const SimulationOptions& options = {});

// Semimartingale approximation: dK evaluated at u + eps. The compensation is
// not applied so that the path is coupled, through the same increments, to
// the uncompensated kernel-method path of the same seed.
SamplePath simulate_eps(const HurstParams& params, const TimeGrid& grid, double eps, std::uint64_t seed,
                        SimulationOptions options = {});

// Fractional Brownian motion with index h as a first-order integral of the
// cell-averaged kernel K^h.
class FbmSimulator {
public:
    FbmSimulator(double h, const TimeGrid& grid, const SimulationOptions& options = {});
    SamplePath path(std::uint64_t seed) const;
    Eigen::MatrixXd ensemble(std::uint64_t first_seed, std::size_t count, unsigned threads = 0) const;

private:
    double h_;
    TimeGrid grid_;
    std::shared_ptr<const Partition> partition_;
    Eigen::MatrixXd A_;     // (N + 1) x cells, scaled to standard normals
    Eigen::MatrixXd comp_;  // N x N or empty
};

SamplePath simulate_fbm(double h, const TimeGrid& grid, std::uint64_t seed,
                        const SimulationOptions& options = {});

struct NcltConfig {
    double H = 0.7;
    int inner_n = 1 << 14;  // stationary sequence points per unit time
    static constexpr int hermite_rank = 2;
};

// Non-central limit construction: partial sums of H_2(xi_j) over fractional
// Gaussian noise with Hurst H', normalized by the exact finite-n standard
// deviation of the sum at t = 1.
class NcltSimulator {
public:
    NcltSimulator(const NcltConfig& config, const TimeGrid& grid);
    ~NcltSimulator();
    NcltSimulator(const NcltSimulator&) = delete;
    NcltSimulator& operator=(const NcltSimulator&) = delete;

    // One circulant-embedding draw yields two independent paths.
    std::pair<SamplePath, SamplePath> path_pair(std::uint64_t seed) const;
    SamplePath path(std::uint64_t seed) const { return path_pair(seed).first; }
    // Z(t_k) for paths built from seeds first_seed.. (two per seed), as the
    // columns of an (N + 1) x (2 count) matrix.
    Eigen::MatrixXd ensemble(std::uint64_t first_seed, std::size_t count, unsigned threads = 0) const;

    double normalization() const { return norm_; }

private:
    NcltConfig config_;
    TimeGrid grid_;
    std::size_t n_;        // sequence length on [0, T]
    std::size_t m_;        // circulant size 2n
    std::vector<double> sqrt_eig_;
    double norm_;
};

// Exact finite-n variance of sum_{j<n} H_2(xi_j) for fGn with Hurst h.
double nclt_sum_variance(double h, std::size_t n);

SamplePath simulate_nclt(const NcltConfig& config, const TimeGrid& grid, std::uint64_t seed);

// Ensemble summary (mean, variance, quantiles per grid node) as JSON text.
std::string ensemble_summary_json(const TimeGrid& grid, const Eigen::MatrixXd& paths);

}  // namespace rosen
