#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snp/matrix.hpp"

namespace snp {

struct VanishingOrder {
    enum class Status { Ok, IdenticallyZero };

    Status status = Status::Ok;
    int m = 0;          // order of the zero at t = 0
    double mu0 = 0.0;   // leading coefficient estimate
    double raw_slope = 0.0;
    bool confident = true;  // raw slope within 0.15 of the reported integer
};

// Analytic eigenvalue branches of A + tB over a symmetric uniform grid.
struct BranchFamily {
    std::vector<double> t_grid;
    // branches[i][k] = lambda_i(t_k); branches follow analytic continuations
    // through crossings, not the sorted order.
    std::vector<std::vector<double>> branches;
    // Per-step worst |predicted - matched| distance (0 for the first two steps).
    std::vector<double> match_distance;
    std::vector<bool> ambiguous_step;
    std::vector<VanishingOrder> vanishing_orders;

    int n() const { return static_cast<int>(branches.size()); }
    std::string to_csv() const;

    // Smoothness certificate: the largest |order|-th divided difference over
    // all branches and grid windows. Analytic branches keep this bounded by
    // the corresponding derivative; sorted selections blow up at crossings.
    double max_divided_difference(int order) const;
};

// Tracks eigenvalue branches by minimal-cost assignment against linearly
// extrapolated predictions. steps must be even and >= 64; the grid is
// uniform on [-t_max, t_max] with steps+1 points including 0.
BranchFamily track_branches(const HermitianMatrix& a, const HermitianMatrix& b,
                            double t_max, int steps);

// Order of the zero of a sampled branch at t = 0 from the log-log slope over
// the decade of t nearest 0.
VanishingOrder vanishing_order(const std::vector<double>& branch,
                               const std::vector<double>& t_grid,
                               std::optional<double> scale = std::nullopt);

struct KernelTestResult {
    std::vector<double> bx_norms;    // ||B x|| per extremal unit eigenvector x
    double max_bx = 0.0;
    double pb_max = 0.0;             // ||P B||_max
    double residual_norm = 0.0;      // ||(I-P) A (I-P)||_inf
    bool obstruction_met = false;    // every ||B x|| <= 1e-7
    bool locally_constant = false;   // obstruction met and residual norm < 1
    std::string verdict;
};

// For ||A||_inf = 1: checks whether B annihilates the eigenvectors of the
// extremal eigenvalues +-1. If it does and the rest of the spectrum stays
// below 1, the sup norm of A + tB is locally constant.
KernelTestResult sup_norm_kernel_test(const HermitianMatrix& a, const HermitianMatrix& b);

struct AnalyticityScore {
    enum class Verdict {
        AnalyticExtensionImpossible,
        ConsistentWithAnalyticity,
        IntegerQInconclusive,
        Inconclusive
    };

    int difference_order = 0;
    std::vector<double> window_centers;
    std::vector<double> difference_values;
    double fitted_exponent = 0.0;   // NaN when no usable windows
    double target_exponent = 0.0;   // q - floor(q) - 1
    Verdict verdict = Verdict::Inconclusive;
};

// Finite-difference estimates of the derivative of order floor(q)+1 on
// shrinking one-sided windows of the sampled curve. Blow-up with log-log
// exponent q - floor(q) - 1 certifies the curve cannot extend analytically
// through 0.
AnalyticityScore analyticity_probe(const std::vector<double>& norm_samples,
                                   const std::vector<double>& t_grid, double q);

// Min-cost assignment (rows to columns) for a square cost matrix.
std::vector<int> hungarian_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace snp
