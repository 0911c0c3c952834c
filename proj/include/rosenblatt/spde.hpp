#pragma once

#include "rosenblatt/rosenblatt.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rosen {

// Diagonal noise on an orthonormal eigenbasis of -A: mode j carries
// sqrt(q[j]) times its own Rosenblatt process and decays at rate eigenvalues[j].
struct SpectralNoiseConfig {
    double H = 0.7;
    std::vector<double> q;
    std::vector<double> eigenvalues;

    int modes() const { return static_cast<int>(q.size()); }
    void validate() const;
};

// Circle Laplacian: for n = 1..pairs, the two eigenfunctions cos(n x) and
// sin(n x) share the eigenvalue n^2 and the weight q(n).
SpectralNoiseConfig circle_laplacian(double H, int pairs, const std::function<double(int)>& q);

double g_H(double H, double lambda);
double g_H(const HurstParams& params, double lambda);

// Tail of q_n for the trace condition on the circle (eigenvalues n^2).
struct PowerLawTail {
    double c = 1.0;
    double alpha = 0.0;  // q_n = c n^alpha
};

struct TraceVerdict {
    bool converges = false;
    // Power law: alpha - 4H. Finite list: fitted log-log slope of the terms
    // q_n g_H(n^2) over the second half of the list.
    double exponent = 0.0;
    std::vector<double> partial_sums;
    // Extrapolated remainder beyond the last term (infinite when divergent).
    double tail_bound = 0.0;
};

// Summability of sum_n q_n g_H(n^2), i.e. sum_n q_n n^{-4H}.
TraceVerdict trace_condition(double H, const PowerLawTail& tail, int diagnostic_terms = 64);
// Explicit list q_1, q_2, ... (needs at least 8 terms).
TraceVerdict trace_condition(double H, const std::vector<double>& q);

struct FieldPath {
    TimeGrid grid;
    Eigen::MatrixXd coefficients;  // modes x (N + 1)
};

// Mode j is the OU-type Wiener integral of e^{-lambda_j (t - s)} against an
// independent Rosenblatt path with seed derive_seed(seed, j), times sqrt(q_j).
FieldPath mild_solution_heat(const SpectralNoiseConfig& config, const TimeGrid& grid, std::uint64_t seed,
                             const SimulationOptions& options = {});

// Final-time squared norms sum_j X_j(T)^2 for fields with seeds
// first_seed .. first_seed + count - 1, plus the per-mode final values.
struct FieldEnsemble {
    Eigen::MatrixXd final_values;  // modes x count
    Eigen::VectorXd energy;        // count
};

FieldEnsemble field_ensemble(const SpectralNoiseConfig& config, const TimeGrid& grid, std::uint64_t first_seed,
                             std::size_t count, const SimulationOptions& options = {}, unsigned threads = 0);

// H(2H-1) sum_j q_j double integral over [0,t]^2 of e^{-lambda_j(2t-u-v)} |u-v|^{2H-2}.
double energy_theoretical(const SpectralNoiseConfig& config, double t, double rel_tol = 1e-10);
double mode_energy(double H, double lambda, double t, double rel_tol = 1e-10);

std::string energy_report_json(const SpectralNoiseConfig& config, double t, const FieldEnsemble& ensemble);

}  // namespace rosen
