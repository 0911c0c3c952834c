#pragma once

#include "rosenblatt/chaos.hpp"
#include "rosenblatt/cumulants.hpp"
#include "rosenblatt/rosenblatt.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

namespace rosen {

// Chaos-expansion machinery for the Skorohod integral of Z against itself.
//
// In the standardized coordinates xi of the partition, Z(t_k) is the
// second-chaos integral of F_k = sum_{m < cells_before(k)} D_m, where D_m is
// the kernel contributed by u-cell m. The Skorohod integral of Z over [0, T]
// is the fourth-chaos integral of
//     h = sum_m D_m (x) Zhat_m,   Zhat_m = sum_{n < m} D_n + D_m / 2,
// i.e. the kernel of Z at the middle of u-cell m attached to the
// dK(u, y1) dK(u, y2) pair of the same cell. With this choice sym(2h) = F (x) F.
//
// The order-4 integral (all indices distinct) is evaluated in O(cells^2)
// per sample by inclusion-exclusion over index coincidences; the
// path-independent coincidence term is precomputed.
class SkorohodEngine {
public:
    // Uncompensated kernel-method setup on `grid`, integrating up to node t_index
    // (default: the horizon).
    SkorohodEngine(const HurstParams& params, const TimeGrid& grid, int t_index = -1, int grading_levels = -1);

    const HurstParams& params() const { return params_; }
    const KernelFactor& factor() const { return *factor_; }
    std::shared_ptr<const Partition> partition() const { return factor_->partition_ptr(); }
    double horizon() const { return factor_->partition().grid().node(t_index_); }

    // All multiple integrals here exclude the diagonals (distinct indices),
    // Z(T) included, so that the product formula for Z(T)^2 holds up to
    // terms that vanish with the mesh.
    struct Terms {
        double Z_T = 0.0;          // I_2(F)
        double skorohod = 0.0;     // I_4(h), the integral of Z dZ
        double contraction = 0.0;  // I_2(F (x)_1 F)
    };

    Terms evaluate(const Eigen::VectorXd& xi) const;
    Terms evaluate(std::uint64_t seed) const;

    // The path t_k -> I_2(F_k) (diagonal excluded) for the same seed.
    SamplePath path(std::uint64_t seed) const;

    // Order-4 kernel h in increment coordinates (for brute-force checks on
    // small partitions).
    GridKernel kernel_h() const;
    // F (x)_1 F in increment coordinates.
    GridKernel contraction_kernel() const;
    // 2 ||F||^2, the grid value of E Z(T)^2.
    double isometry() const { return 2.0 * F_.squaredNorm(); }

private:
    HurstParams params_;
    int t_index_;
    int cells_;
    std::shared_ptr<const KernelFactor> factor_;
    Eigen::MatrixXd F_;
    Eigen::MatrixXd FF_;
    Eigen::MatrixXd W_;  // sum_m offdiag(D_m) o offdiag(Zhat_m)
    std::vector<Eigen::VectorXd> diag_;  // diagonal of D_m
};

// Integral of Z dZ (Skorohod) over [0, T] as I_4(h) against the increments dB.
double skorohod_linear(const HurstParams& params, const TimeGrid& grid, const GaussianIncrements& dB, double T);

struct ItoX2Options {
    int grading_levels = -1;
    // Upper bound on N^4 * M, the size of the equivalent brute-force sum.
    double cost_budget = 2e12;
    unsigned threads = 0;
};

struct ItoX2Report {
    double H = 0.0;
    int N = 0;
    int samples = 0;
    double T = 1.0;
    double lhs_var = 0.0;
    // E[(LHS - RHS)^2] with LHS = Z(T)^2 and
    // RHS = 2 int Z dZ + T^{2H} + 4 I_2(F (x)_1 F).
    double residual_l2 = 0.0;
    double residual_se = 0.0;
    // The same with the correction term 4 I_2(F (x)_1 F) dropped.
    double residual_l2_ablated = 0.0;
    double skorohod_mean = 0.0;
    double skorohod_se = 0.0;
    double var_skorohod = 0.0;   // Var(2 int Z dZ)
    double var_correction = 0.0; // Var(4 I_2(F (x)_1 F))
    double trace_term = 0.0;     // T^{2H}
    double grid_isometry = 0.0;

    std::string to_json() const;
};

ItoX2Report ito_x2_residual(const HurstParams& params, const TimeGrid& grid, int samples, std::uint64_t seed0,
                            const ItoX2Options& options = {});

// Limits of the trace functionals for integrand g = f'(Z): both equal
// (2 A^2 / (2H - 1)) * int_0^T f''(Z(u)) u^{2H-1} du with A = d(H) H'(2H'-1).
// The integral uses product trapezoid weights (exact for constant f'').
double trace_limit(const HurstParams& params, const SamplePath& Z, const std::function<double(double)>& f2);

struct RelationOptions {
    bool include_traces = true;
    int grading_levels = -1;
};

struct RelationReport {
    double eps = 0.0;
    double forward = 0.0;    // forward integral of 2Z against Z over [0, T]
    double skorohod = 0.0;   // 2 int Z dZ
    double trace_b2 = 0.0;
    double trace_b1 = 0.0;   // 2 I_2(F (x)_1 F)
    double trace_c1 = 0.0;
    double rhs = 0.0;
    double residual = 0.0;

    std::string to_json() const;
};

// |forward integral - (2 int Z dZ + 2 (B2 + B1) - C1)| for f = x^2 on one seed.
RelationReport relation_residual(const HurstParams& params, const TimeGrid& grid, double eps, std::uint64_t seed,
                                 const RelationOptions& options = {});

struct ItoX3Scalars {
    double drift = 0.0;            // 24 A^2/(2H-1) * int_0^T Z(s) s^{2H-1} ds
    double triple_integral = 0.0;  // J_3(T) / 3
    double triple_error = 0.0;
    double triple_term = 0.0;      // 24 A^3 * triple_integral
};

ItoX3Scalars ito_x3_scalar_terms(const HurstParams& params, double T, const SamplePath& Z,
                                 const CumulantOptions& options = {});

// Closed form of the triple integral: T^{3H} * 2 B(H, H) / ((3H - 1) 3H).
double x3_triple_closed_form(double H, double T);

}  // namespace rosen
