#pragma once

#include "rosenblatt/frac_kernels.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <vector>

namespace rosen {

// One realization of the Brownian increments over the cells of a partition.
// Increment i is sqrt|c_i| times standard normal number i of the seed's
// Brownian stream, so regenerating from (partition, seed) is bit-identical.
struct GaussianIncrements {
    std::shared_ptr<const Partition> partition;
    std::uint64_t seed = 0;
    Eigen::VectorXd values;

    // values / sqrt|c|: the underlying standard normals.
    Eigen::VectorXd standardized() const;
};

GaussianIncrements sample_increments(std::shared_ptr<const Partition> partition, std::uint64_t seed);
// Increments on the plain uniform grid (no grading).
GaussianIncrements sample_increments(const TimeGrid& grid, std::uint64_t seed);

// Dense kernel of order 1..4 over the cells of a partition, row-major with
// the last index fastest.
class GridKernel {
public:
    GridKernel(int order, std::shared_ptr<const Partition> partition);

    int order() const { return order_; }
    int cells() const { return cells_; }
    const Partition& partition() const { return *partition_; }
    std::shared_ptr<const Partition> partition_ptr() const { return partition_; }

    double& at(std::initializer_list<int> idx);
    double at(std::initializer_list<int> idx) const;
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    // Replaces the table by the average over all index permutations.
    void symmetrize();
    bool is_symmetric(double tol = 0.0) const;
    double max_abs() const;

    // sum f^2 prod |c_i|, the grid L2 norm squared.
    double l2_norm_squared() const;

    static GridKernel from_matrix(const Eigen::MatrixXd& values,
                                  std::shared_ptr<const Partition> partition);
    Eigen::MatrixXd as_matrix() const;

private:
    std::size_t flat(const int* idx) const;

    int order_;
    int cells_;
    std::shared_ptr<const Partition> partition_;
    std::vector<double> data_;
};

enum class DiagonalRule {
    // Sum over tuples with all indices distinct.
    exclude,
    // Order 2 only: keep the diagonal with dB_i^2 replaced by dB_i^2 - |c_i|
    // (the exact second-chaos integral of a cell-wise constant kernel).
    wick,
};

// Discrete multiple Wiener-Ito integral: sum over ordered index tuples.
double multiple_integral(const GridKernel& f, const GaussianIncrements& dB,
                         DiagonalRule rule = DiagonalRule::exclude);

// (f (x)_1 g)[i][j] = sum_k f[i][k] g[j][k] |c_k|.
GridKernel contraction_1(const GridKernel& f, const GridKernel& g);

// Tensor product of two order-2 kernels (not symmetrized).
GridKernel tensor_product(const GridKernel& f, const GridKernel& g);

// Sum over ordered distinct 4-tuples (k, l, i, j) of a_k a_l B_ij x_k x_l x_i x_j,
// evaluated in O(n^2) for symmetric B (its diagonal is ignored).
double distinct_sum_rank_one_pair(const Eigen::VectorXd& a, const Eigen::MatrixXd& B,
                                  const Eigen::VectorXd& x);

}  // namespace rosen
