#pragma once

#include <Eigen/Dense>

#include <memory>
#include <ostream>
#include <vector>

namespace rosen {

// Beta function through log-Gamma differences (positive arguments).
double beta_fn(double a, double b);

// The Volterra kernel K^h of fractional Brownian motion with index h,
// together with its normalizing constant c_h.
struct FracKernel {
    double h = 0.0;
    double c = 0.0;

    static FracKernel for_hurst(double h);
};

struct HurstParams {
    double H = 0.0;
    double H_prime = 0.0;
    double c_H_prime = 0.0;
    double d_H = 0.0;
    double a_H = 0.0;

    // Kernel K^{H'} that drives the Rosenblatt process.
    FracKernel kernel() const { return {H_prime, c_H_prime}; }
    // H'(2H'-1), the constant in the fBm-increment covariance density.
    double hprime_factor() const { return H_prime * (2.0 * H_prime - 1.0); }
};

HurstParams constants(double H);

// K^h(t, s) by adaptive quadrature of its defining integral.
double kernel_K(const FracKernel& k, double t, double s, double rel_tol = 1e-9);
double kernel_K(const HurstParams& p, double t, double s, double rel_tol = 1e-9);

// Partial derivative of K^h in its first argument, in closed form.
double kernel_dK(const FracKernel& k, double u, double s);
double kernel_dK(const HurstParams& p, double u, double s);

double covariance_R(double H, double t, double s);
double covariance_R(const HurstParams& p, double t, double s);

struct TimeGrid {
    double T = 1.0;
    int N = 1;

    TimeGrid() = default;
    TimeGrid(double T, int N);

    double dt() const { return T / N; }
    double node(int i) const { return T * i / N; }
    // Index of the node equal to t (within rounding), or -1 when t is off grid.
    int index_of(double t) const;
};

// Cells on which the Brownian increments live. Every grid node is an edge;
// the first grid cell may additionally be split geometrically towards 0,
// where the kernel has its y^(1/2 - H') singularity.
class Partition {
public:
    Partition(TimeGrid grid, int grading_levels);

    const TimeGrid& grid() const { return grid_; }
    int grading_levels() const { return levels_; }
    int cells() const { return static_cast<int>(edges_.size()) - 1; }
    double lo(int i) const { return edges_[i]; }
    double hi(int i) const { return edges_[i + 1]; }
    double width(int i) const { return edges_[i + 1] - edges_[i]; }
    const std::vector<double>& edges() const { return edges_; }
    // Number of cells lying in [0, t_k].
    int cells_before(int k) const { return before_[k]; }
    // Grid cell (0..N-1) that contains partition cell i.
    int grid_cell(int i) const;

    bool operator==(const Partition& o) const { return edges_ == o.edges_; }

private:
    TimeGrid grid_;
    int levels_;
    std::vector<double> edges_;
    std::vector<int> before_;
};

// Grading depth giving a relative boundary-cell contribution near 2^-10.
int default_grading_levels(double H);

struct FactorOptions {
    double rel_tol = 1e-9;   // tolerance on the per-cell u-quadrature
    int points = 8;          // initial Gauss points per u-cell
    int max_points = 64;
    double rank_tol = 1e-14; // relative eigenvalue cutoff for compression
    double shift = 0.0;      // evaluate dK at u + shift (semimartingale approximation)
};

// Low-rank representation of the Rosenblatt cell kernel.
//
// With G_i(u) the integral of dK(u, .) over cell i and xi_i = dB_i / sqrt|c_i|,
// the kernel integrated over u-cell m is D_m = d * sum_q w_q g_q g_q^T where
// g_q = G(u_q) / sqrt|c|. Each D_m is stored compressed as V_m V_m^T with
// V_m of size (m + 1) x r_m. The kernel for times up to t_k is the sum of D_m
// over cells before t_k.
class KernelFactor {
public:
    KernelFactor(const HurstParams& params, std::shared_ptr<const Partition> partition,
                 const FactorOptions& options = {});

    const HurstParams& params() const { return params_; }
    const Partition& partition() const { return *partition_; }
    std::shared_ptr<const Partition> partition_ptr() const { return partition_; }
    double shift() const { return shift_; }
    int points() const { return points_; }
    double estimated_error() const { return error_; }

    int cells() const { return partition_->cells(); }
    const Eigen::MatrixXd& factor(int m) const { return V_[m]; }
    // Trace of D_m; the Wick constant subtracted from the cell's increment.
    double trace(int m) const { return traces_[m]; }
    int total_rank() const;

    // Normalized kernel sum_{m < cells} D_m (cells x cells), in xi coordinates.
    Eigen::MatrixXd normalized_kernel(int cells) const;

private:
    HurstParams params_;
    std::shared_ptr<const Partition> partition_;
    double shift_;
    int points_ = 0;
    double error_ = 0.0;
    std::vector<Eigen::MatrixXd> V_;
    std::vector<double> traces_;
};

// Shared, cached factor for a parameter set (tables are reused by many paths).
std::shared_ptr<const KernelFactor> shared_factor(const HurstParams& params,
                                                  std::shared_ptr<const Partition> partition,
                                                  const FactorOptions& options = {});

std::shared_ptr<const Partition> make_partition(const TimeGrid& grid, int grading_levels);

// Cell-averaged first-order kernel of fBm with index h: row k holds
// (1/|c_i|) * integral over cell i of K^h(t_k, s) ds, for k = 0..N.
Eigen::MatrixXd fbm_cell_kernel(const FracKernel& kernel, const Partition& partition,
                                const FactorOptions& options = {});

struct CellKernel {
    std::shared_ptr<const Partition> partition;
    int t_index = 0;
    // Cell-averaged kernel A[i][j] over the partition cells.
    Eigen::MatrixXd values;

    // 2 * sum_ij A_ij^2 |c_i||c_j|, the grid version of E Z(t)^2.
    double isometry() const;
};

CellKernel build_cell_kernel(const HurstParams& params, std::shared_ptr<const Partition> partition,
                             int t_index, const FactorOptions& options = {});
// Convenience overload on the default graded partition of `grid`.
CellKernel build_cell_kernel(const HurstParams& params, const TimeGrid& grid, int t_index,
                             const FactorOptions& options = {});

void write_csv(std::ostream& os, const CellKernel& kernel);

}  // namespace rosen
