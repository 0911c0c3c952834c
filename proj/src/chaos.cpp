#include "rosenblatt/chaos.hpp"

#include "rosenblatt/errors.hpp"
#include "rosenblatt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rosen {

Eigen::VectorXd GaussianIncrements::standardized() const {
    Eigen::VectorXd x = values;
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] /= std::sqrt(partition->width(static_cast<int>(i)));
    return x;
}

GaussianIncrements sample_increments(std::shared_ptr<const Partition> partition, std::uint64_t seed) {
    GaussianIncrements g;
    g.partition = std::move(partition);
    g.seed = seed;
    const int M = g.partition->cells();
    g.values.resize(M);
    CounterRng(seed, stream::brownian).fill_normal({g.values.data(), static_cast<std::size_t>(M)});
    for (int i = 0; i < M; ++i) g.values[i] *= std::sqrt(g.partition->width(i));
    return g;
}

GaussianIncrements sample_increments(const TimeGrid& grid, std::uint64_t seed) {
    return sample_increments(make_partition(grid, 0), seed);
}

GridKernel::GridKernel(int order, std::shared_ptr<const Partition> partition)
    : order_(order), partition_(std::move(partition)) {
    if (order < 1 || order > 4) throw DomainError("GridKernel: order must be in 1..4");
    cells_ = partition_->cells();
    std::size_t size = 1;
    for (int k = 0; k < order; ++k) size *= static_cast<std::size_t>(cells_);
    data_.assign(size, 0.0);
}

std::size_t GridKernel::flat(const int* idx) const {
    std::size_t f = 0;
    for (int k = 0; k < order_; ++k) f = f * cells_ + static_cast<std::size_t>(idx[k]);
    return f;
}

double& GridKernel::at(std::initializer_list<int> idx) {
    if (static_cast<int>(idx.size()) != order_) throw ShapeError("GridKernel: index arity");
    return data_[flat(idx.begin())];
}

double GridKernel::at(std::initializer_list<int> idx) const {
    if (static_cast<int>(idx.size()) != order_) throw ShapeError("GridKernel: index arity");
    return data_[flat(idx.begin())];
}

void GridKernel::symmetrize() {
    if (order_ == 1) return;
    std::vector<double> out(data_.size(), 0.0);
    std::vector<int> idx(order_, 0), perm(order_), pidx(order_);
    double n_perm = std::tgamma(order_ + 1.0);
    for (std::size_t f = 0; f < data_.size(); ++f) {
        std::size_t r = f;
        for (int k = order_ - 1; k >= 0; --k) {
            idx[k] = static_cast<int>(r % cells_);
            r /= cells_;
        }
        std::iota(perm.begin(), perm.end(), 0);
        double s = 0.0;
        do {
            for (int k = 0; k < order_; ++k) pidx[k] = idx[perm[k]];
            s += data_[flat(pidx.data())];
        } while (std::next_permutation(perm.begin(), perm.end()));
        out[f] = s / n_perm;
    }
    data_ = std::move(out);
}

bool GridKernel::is_symmetric(double tol) const {
    GridKernel copy = *this;
    copy.symmetrize();
    for (std::size_t f = 0; f < data_.size(); ++f) {
        if (std::abs(copy.data_[f] - data_[f]) > tol) return false;
    }
    return true;
}

double GridKernel::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double GridKernel::l2_norm_squared() const {
    std::vector<int> idx(order_);
    double s = 0.0;
    for (std::size_t f = 0; f < data_.size(); ++f) {
        std::size_t r = f;
        double w = 1.0;
        for (int k = order_ - 1; k >= 0; --k) {
            w *= partition_->width(static_cast<int>(r % cells_));
            r /= cells_;
        }
        s += data_[f] * data_[f] * w;
    }
    return s;
}

GridKernel GridKernel::from_matrix(const Eigen::MatrixXd& values,
                                   std::shared_ptr<const Partition> partition) {
    GridKernel k(2, std::move(partition));
    if (values.rows() != k.cells_ || values.cols() != k.cells_) {
        throw ShapeError("GridKernel::from_matrix: size does not match the partition");
    }
    for (int i = 0; i < k.cells_; ++i)
        for (int j = 0; j < k.cells_; ++j) k.data_[static_cast<std::size_t>(i) * k.cells_ + j] = values(i, j);
    return k;
}

Eigen::MatrixXd GridKernel::as_matrix() const {
    if (order_ != 2) throw ShapeError("GridKernel::as_matrix: order 2 only");
    Eigen::MatrixXd m(cells_, cells_);
    for (int i = 0; i < cells_; ++i)
        for (int j = 0; j < cells_; ++j) m(i, j) = data_[static_cast<std::size_t>(i) * cells_ + j];
    return m;
}

double multiple_integral(const GridKernel& f, const GaussianIncrements& dB, DiagonalRule rule) {
    if (!(f.partition() == *dB.partition)) throw ShapeError("multiple_integral: grid mismatch");
    if (rule == DiagonalRule::wick && f.order() != 2) {
        throw ShapeError("multiple_integral: the Wick diagonal rule applies to order 2");
    }
    const int M = f.cells();
    const auto& x = dB.values;
    const auto& d = f.data();
    const std::size_t n = static_cast<std::size_t>(M);

    switch (f.order()) {
    case 1: {
        double s = 0.0;
        for (int i = 0; i < M; ++i) s += d[i] * x[i];
        return s;
    }
    case 2: {
        double s = 0.0;
        for (int i = 0; i < M; ++i) {
            for (int j = 0; j < M; ++j) {
                if (i != j) s += d[i * n + j] * x[i] * x[j];
            }
            if (rule == DiagonalRule::wick) {
                s += d[i * n + i] * (x[i] * x[i] - f.partition().width(i));
            }
        }
        return s;
    }
    case 3: {
        // Ordered distinct triples, grouped by their sorted representative.
        double s = 0.0;
        for (int i = 0; i < M; ++i)
            for (int j = i + 1; j < M; ++j)
                for (int k = j + 1; k < M; ++k) {
                    double sym = d[(i * n + j) * n + k] + d[(i * n + k) * n + j] + d[(j * n + i) * n + k] +
                                 d[(j * n + k) * n + i] + d[(k * n + i) * n + j] + d[(k * n + j) * n + i];
                    s += sym * x[i] * x[j] * x[k];
                }
        return s;
    }
    case 4: {
        GridKernel sym = f;
        sym.symmetrize();
        const auto& e = sym.data();
        double s = 0.0;
        for (int i = 0; i < M; ++i)
            for (int j = i + 1; j < M; ++j)
                for (int k = j + 1; k < M; ++k) {
                    double xijk = x[i] * x[j] * x[k];
                    std::size_t base = ((i * n + j) * n + k) * n;
                    for (int l = k + 1; l < M; ++l) s += e[base + l] * xijk * x[l];
                }
        return 24.0 * s;
    }
    default:
        throw ShapeError("multiple_integral: unsupported order");
    }
}

GridKernel contraction_1(const GridKernel& f, const GridKernel& g) {
    if (f.order() != 2 || g.order() != 2) throw ShapeError("contraction_1: order-2 kernels required");
    if (!(f.partition() == g.partition())) throw ShapeError("contraction_1: grid mismatch");
    const int M = f.cells();
    Eigen::VectorXd w(M);
    for (int k = 0; k < M; ++k) w[k] = f.partition().width(k);
    Eigen::MatrixXd F = f.as_matrix(), G = g.as_matrix();
    Eigen::MatrixXd C = F * w.asDiagonal() * G.transpose();
    return GridKernel::from_matrix(C, f.partition_ptr());
}

GridKernel tensor_product(const GridKernel& f, const GridKernel& g) {
    if (f.order() != 2 || g.order() != 2) throw ShapeError("tensor_product: order-2 kernels required");
    if (!(f.partition() == g.partition())) throw ShapeError("tensor_product: grid mismatch");
    GridKernel out(4, f.partition_ptr());
    const std::size_t n2 = static_cast<std::size_t>(f.cells()) * f.cells();
    for (std::size_t a = 0; a < n2; ++a)
        for (std::size_t b = 0; b < n2; ++b) out.data()[a * n2 + b] = f.data()[a] * g.data()[b];
    return out;
}

double distinct_sum_rank_one_pair(const Eigen::VectorXd& a, const Eigen::MatrixXd& B,
                                  const Eigen::VectorXd& x) {
    // Inclusion-exclusion over index coincidences between {k, l} and {i, j}.
    Eigen::VectorXd ax = a.cwiseProduct(x);
    Eigen::VectorXd ax2 = ax.cwiseProduct(x);
    Eigen::VectorXd a2x3 = ax.cwiseProduct(ax2);
    double alpha = ax.sum();
    double beta = ax.squaredNorm();
    Eigen::VectorXd Bx = B * x - B.diagonal().cwiseProduct(x);
    double S = x.dot(Bx);
    Eigen::VectorXd Bax2 = B * ax2 - B.diagonal().cwiseProduct(ax2);
    double V = ax2.dot(Bax2);
    return (alpha * alpha - beta) * S - 4.0 * alpha * ax2.dot(Bx) + 4.0 * a2x3.dot(Bx) + 2.0 * V;
}

}  // namespace rosen
