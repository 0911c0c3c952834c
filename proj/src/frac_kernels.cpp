#include "rosenblatt/frac_kernels.hpp"

#include "rosenblatt/errors.hpp"
#include "rosenblatt/quadrature.hpp"

#include <boost/math/policies/policy.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace rosen {

namespace {

using FastPolicy = boost::math::policies::policy<boost::math::policies::promote_double<false>>;

// Power used for the per-cell substitution u = a + L s^p.
constexpr int kGradingPower = 4;

void check_hurst(double H, const char* who) {
    if (!(H > 0.5 && H < 1.0)) {
        std::ostringstream os;
        os << who << ": Hurst index must lie in (1/2, 1), got " << H;
        throw DomainError(os.str());
    }
}

// Values of the cell integrals G_i(u_q) = int_{cell i, y < u_q} dK(u_q + shift, y) dy
// for the Gauss nodes u_q of u-cell m. Column q of `G` holds cells 0..m.
struct CellNodes {
    std::vector<double> u;
    std::vector<double> w;
    Eigen::MatrixXd G;
};

CellNodes cell_nodes(const FracKernel& k, const Partition& part, int m, int points, double shift) {
    const double a = 1.5 - k.h;
    const double b = k.h - 0.5;
    const double beta_ab = beta_fn(a, b);
    quad::Rule rule = quad::power_graded(points, kGradingPower, part.lo(m), part.hi(m));

    CellNodes out;
    out.u = rule.x;
    out.w = rule.w;
    out.G = Eigen::MatrixXd::Zero(m + 1, points);
    std::vector<double> lower(m + 2);
    std::vector<char> upper_tail(m + 2);
    for (int q = 0; q < points; ++q) {
        const double u = rule.x[q];
        const double U = u + shift;
        const double pref = k.c * std::pow(U, k.h - 0.5) * beta_ab;
        // Regularized incomplete beta at every edge below u, and at u itself;
        // the complement is used above 1/2 to keep relative accuracy.
        auto eval = [&](double y, int slot) {
            double x = y / U;
            if (x < 0.5) {
                upper_tail[slot] = 0;
                lower[slot] = x <= 0.0 ? 0.0 : boost::math::ibeta(a, b, x, FastPolicy());
            } else {
                upper_tail[slot] = 1;
                lower[slot] = x >= 1.0 ? 0.0 : boost::math::ibetac(a, b, x, FastPolicy());
            }
        };
        for (int e = 0; e <= m; ++e) eval(part.lo(e), e);
        eval(u, m + 1);
        for (int i = 0; i <= m; ++i) {
            const int s0 = i, s1 = i + 1;
            double diff;
            if (!upper_tail[s0] && !upper_tail[s1]) {
                diff = lower[s1] - lower[s0];
            } else if (upper_tail[s0] && upper_tail[s1]) {
                diff = lower[s0] - lower[s1];
            } else {
                diff = 1.0 - lower[s0] - lower[s1];
            }
            out.G(i, q) = pref * std::max(diff, 0.0);
        }
    }
    return out;
}

// Scaled node columns y_q = sqrt(d w_q) G_q / sqrt|c| for u-cell m.
Eigen::MatrixXd normalized_columns(const HurstParams& p, const Partition& part, int m, int points,
                                   double shift) {
    CellNodes cn = cell_nodes(p.kernel(), part, m, points, shift);
    Eigen::MatrixXd Y = cn.G;
    for (int i = 0; i <= m; ++i) Y.row(i) /= std::sqrt(part.width(i));
    for (int q = 0; q < points; ++q) Y.col(q) *= std::sqrt(p.d_H * cn.w[q]);
    return Y;
}

// Relative Frobenius distance between Y1 Y1^T and Y2 Y2^T.
double gram_distance(const Eigen::MatrixXd& Y1, const Eigen::MatrixXd& Y2) {
    Eigen::MatrixXd D2 = Y2 * Y2.transpose();
    return (Y1 * Y1.transpose() - D2).norm() / D2.norm();
}

std::vector<int> probe_cells(const Partition& part) {
    int M = part.cells();
    int L = part.grading_levels();
    std::vector<int> probes{0, L, L + 1, L + 2, L + (M - L) / 2, M - 1};
    std::vector<int> out;
    for (int c : probes) {
        if (c >= 0 && c < M && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    return out;
}

}  // namespace

double beta_fn(double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw DomainError("beta_fn: arguments must be positive");
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

FracKernel FracKernel::for_hurst(double h) {
    check_hurst(h, "FracKernel");
    return {h, std::sqrt(h * (2.0 * h - 1.0) / beta_fn(2.0 - 2.0 * h, h - 0.5))};
}

HurstParams constants(double H) {
    check_hurst(H, "constants");
    HurstParams p;
    p.H = H;
    p.H_prime = (H + 1.0) / 2.0;
    p.c_H_prime = FracKernel::for_hurst(p.H_prime).c;
    p.d_H = (1.0 / (H + 1.0)) / std::sqrt(H / (2.0 * (2.0 * H - 1.0)));
    // Normalization of the moving-average kernel (s - y)^{-(2-H)/2} so that
    // E Z(1)^2 = 1; equivalently a(H) B(H/2, 1-H) = d(H) H'(2H'-1).
    double b = beta_fn(H / 2.0, 1.0 - H);
    p.a_H = std::sqrt(H * (2.0 * H - 1.0) / 2.0) / b;
    return p;
}

double kernel_K(const FracKernel& k, double t, double s, double rel_tol) {
    if (!(s > 0.0) || !(t > s)) throw DomainError("kernel_K: need 0 < s < t");
    // With u = s + (t - s) z^{1/(h - 1/2)} the endpoint singularity disappears.
    const double e = k.h - 0.5;
    auto f = [&](double z) { return std::pow(s + (t - s) * std::pow(z, 1.0 / e), e); };
    double integral = quad::adaptive(f, 0.0, 1.0, rel_tol) / e;
    return k.c * std::pow(s, 0.5 - k.h) * std::pow(t - s, e) * integral;
}

double kernel_K(const HurstParams& p, double t, double s, double rel_tol) {
    return kernel_K(p.kernel(), t, s, rel_tol);
}

double kernel_dK(const FracKernel& k, double u, double s) {
    if (!(s > 0.0) || !(u > s)) throw DomainError("kernel_dK: need 0 < s < u");
    return k.c * std::pow(s, 0.5 - k.h) * std::pow(u - s, k.h - 1.5) * std::pow(u, k.h - 0.5);
}

double kernel_dK(const HurstParams& p, double u, double s) { return kernel_dK(p.kernel(), u, s); }

double covariance_R(double H, double t, double s) {
    if (t < 0.0 || s < 0.0) throw DomainError("covariance_R: times must be nonnegative");
    return 0.5 * (std::pow(t, 2 * H) + std::pow(s, 2 * H) - std::pow(std::abs(t - s), 2 * H));
}

double covariance_R(const HurstParams& p, double t, double s) { return covariance_R(p.H, t, s); }

TimeGrid::TimeGrid(double T_, int N_) : T(T_), N(N_) {
    if (!(T_ > 0.0)) throw DomainError("TimeGrid: horizon must be positive");
    if (N_ < 1) throw DomainError("TimeGrid: need at least one cell");
}

int TimeGrid::index_of(double t) const {
    double x = t / T * N;
    double r = std::round(x);
    if (r < 0 || r > N || std::abs(x - r) > 1e-9 * std::max(1.0, std::abs(x))) return -1;
    return static_cast<int>(r);
}

Partition::Partition(TimeGrid grid, int grading_levels) : grid_(grid), levels_(grading_levels) {
    if (grading_levels < 0) throw DomainError("Partition: grading levels must be nonnegative");
    const double dt = grid.dt();
    edges_.push_back(0.0);
    for (int l = grading_levels; l >= 1; --l) edges_.push_back(std::ldexp(dt, -l));
    for (int i = 1; i <= grid.N; ++i) edges_.push_back(grid.node(i));
    before_.resize(grid.N + 1);
    before_[0] = 0;
    for (int k = 1; k <= grid.N; ++k) before_[k] = grading_levels + k;
}

int Partition::grid_cell(int i) const { return std::max(0, i - levels_); }

int default_grading_levels(double H) {
    check_hurst(H, "default_grading_levels");
    return std::min(200, static_cast<int>(std::ceil(10.0 / (1.0 - H))));
}

std::shared_ptr<const Partition> make_partition(const TimeGrid& grid, int grading_levels) {
    return std::make_shared<const Partition>(grid, grading_levels);
}

KernelFactor::KernelFactor(const HurstParams& params, std::shared_ptr<const Partition> partition,
                           const FactorOptions& options)
    : params_(params), partition_(std::move(partition)), shift_(options.shift) {
    if (!partition_) throw DomainError("KernelFactor: missing partition");
    if (shift_ < 0.0) throw DomainError("KernelFactor: shift must be nonnegative");
    const Partition& part = *partition_;
    const int M = part.cells();

    // Select the number of Gauss points by comparing n and 2n point rules on
    // representative cells (the graded boundary cells and the grid cells).
    int n = std::max(2, options.points);
    for (;;) {
        double worst = 0.0;
        for (int m : probe_cells(part)) {
            worst = std::max(worst, gram_distance(normalized_columns(params_, part, m, n, shift_),
                                                  normalized_columns(params_, part, m, 2 * n, shift_)));
        }
        error_ = worst;
        if (worst <= options.rel_tol) break;
        if (2 * n > options.max_points) {
            std::ostringstream os;
            os << "KernelFactor: u-quadrature error estimate " << worst << " exceeds tolerance "
               << options.rel_tol << " with " << 2 * n << " points per cell";
            throw QuadratureError(os.str());
        }
        n *= 2;
    }
    points_ = 2 * n;

    V_.resize(M);
    traces_.resize(M);
    for (int m = 0; m < M; ++m) {
        Eigen::MatrixXd Y = normalized_columns(params_, part, m, points_, shift_);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Y.transpose() * Y);
        const Eigen::VectorXd& lam = eig.eigenvalues();
        double total = std::max(lam.sum(), 0.0);
        std::vector<int> keep;
        for (int j = static_cast<int>(lam.size()) - 1; j >= 0; --j) {
            if (lam[j] > options.rank_tol * total) keep.push_back(j);
        }
        Eigen::MatrixXd V(m + 1, static_cast<Eigen::Index>(keep.size()));
        for (std::size_t c = 0; c < keep.size(); ++c) V.col(c) = Y * eig.eigenvectors().col(keep[c]);
        traces_[m] = V.squaredNorm();
        V_[m] = std::move(V);
    }
}

int KernelFactor::total_rank() const {
    int r = 0;
    for (const auto& V : V_) r += static_cast<int>(V.cols());
    return r;
}

Eigen::MatrixXd KernelFactor::normalized_kernel(int cells) const {
    const int M = this->cells();
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(M, M);
    for (int m = 0; m < std::min(cells, M); ++m) {
        const auto& V = V_[m];
        K.topLeftCorner(m + 1, m + 1).selfadjointView<Eigen::Lower>().rankUpdate(V);
    }
    return K.selfadjointView<Eigen::Lower>();
}

std::shared_ptr<const KernelFactor> shared_factor(const HurstParams& params,
                                                  std::shared_ptr<const Partition> partition,
                                                  const FactorOptions& options) {
    using Key = std::tuple<double, double, int, int, double, double, int, double>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const KernelFactor>> cache;
    const TimeGrid& g = partition->grid();
    Key key{params.H, g.T, g.N, partition->grading_levels(), options.shift, options.rel_tol,
            options.points, options.rank_tol};
    {
        std::lock_guard lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto f = std::make_shared<const KernelFactor>(params, std::move(partition), options);
    std::lock_guard lock(mutex);
    // Small bounded cache: factors are large for fine grids.
    if (cache.size() >= 8) cache.clear();
    cache.emplace(key, f);
    return f;
}

Eigen::MatrixXd fbm_cell_kernel(const FracKernel& kernel, const Partition& part,
                                const FactorOptions& options) {
    const int M = part.cells();
    auto cell_sum = [&](int m, int n) {
        CellNodes cn = cell_nodes(kernel, part, m, n, 0.0);
        Eigen::VectorXd s = cn.G * Eigen::Map<const Eigen::VectorXd>(cn.w.data(), n);
        return s;
    };
    int n = std::max(2, options.points);
    for (;;) {
        double worst = 0.0;
        for (int m : probe_cells(part)) {
            Eigen::VectorXd a = cell_sum(m, n), b = cell_sum(m, 2 * n);
            worst = std::max(worst, (a - b).norm() / b.norm());
        }
        if (worst <= options.rel_tol) break;
        if (2 * n > options.max_points) {
            throw QuadratureError("fbm_cell_kernel: u-quadrature did not reach tolerance");
        }
        n *= 2;
    }
    n *= 2;

    // Row k accumulates the u-cells lying below t_k.
    const TimeGrid& g = part.grid();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(g.N + 1, M);
    Eigen::VectorXd running = Eigen::VectorXd::Zero(M);
    int k = 1;
    for (int m = 0; m < M; ++m) {
        running.head(m + 1) += cell_sum(m, n);
        while (k <= g.N && part.cells_before(k) == m + 1) A.row(k++) = running.transpose();
    }
    for (int i = 0; i < M; ++i) A.col(i) /= part.width(i);
    return A;
}

double CellKernel::isometry() const {
    const int M = partition->cells();
    Eigen::VectorXd w(M);
    for (int i = 0; i < M; ++i) w[i] = partition->width(i);
    return 2.0 * (w.asDiagonal() * values.cwiseAbs2() * w.asDiagonal()).sum();
}

CellKernel build_cell_kernel(const HurstParams& params, std::shared_ptr<const Partition> partition,
                             int t_index, const FactorOptions& options) {
    const TimeGrid& g = partition->grid();
    if (t_index < 0 || t_index > g.N) throw DomainError("build_cell_kernel: t_index out of range");
    auto factor = shared_factor(params, partition, options);
    CellKernel ck;
    ck.partition = partition;
    ck.t_index = t_index;
    ck.values = factor->normalized_kernel(partition->cells_before(t_index));
    const int M = partition->cells();
    Eigen::VectorXd inv_sqrt(M);
    for (int i = 0; i < M; ++i) inv_sqrt[i] = 1.0 / std::sqrt(partition->width(i));
    ck.values = inv_sqrt.asDiagonal() * ck.values * inv_sqrt.asDiagonal();
    return ck;
}

CellKernel build_cell_kernel(const HurstParams& params, const TimeGrid& grid, int t_index,
                             const FactorOptions& options) {
    return build_cell_kernel(params, make_partition(grid, default_grading_levels(params.H)), t_index,
                             options);
}

void write_csv(std::ostream& os, const CellKernel& kernel) {
    os << "i,j,value\n";
    os << std::setprecision(17);
    const auto& A = kernel.values;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        for (Eigen::Index j = 0; j < A.cols(); ++j) os << i << ',' << j << ',' << A(i, j) << '\n';
    }
}

}  // namespace rosen
