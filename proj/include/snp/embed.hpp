#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snp/matrix.hpp"
#include "snp/perturb.hpp"
#include "snp/schatten.hpp"

namespace snp {

// Doubles the space and replaces (A, B) by the off-diagonal block pair scaled
// by 2^{-1/p}, preserving ||zA + wB||_p for all complex (z, w).
std::pair<HermitianMatrix, HermitianMatrix> reduce_to_selfadjoint(const ComplexMatrix& a,
                                                                  const ComplexMatrix& b,
                                                                  const PNorm& p);

// A normalized self-adjoint pencil claimed to satisfy
// ||A + tB||_p = (1 + |t|^q)^{1/q} for all real t. Stored in the eigenbasis
// of A (A diagonal, eigenvalues descending) with ||A||_p = ||B||_p = 1.
class EmbeddingClaim {
public:
    // q = infinity() is allowed; q must differ from p.
    static EmbeddingClaim make(const ComplexMatrix& a, const ComplexMatrix& b, double q,
                               const PNorm& p, bool already_reduced);

    const HermitianMatrix& a() const { return a_; }
    const HermitianMatrix& b() const { return b_; }
    double q() const { return q_; }
    const PNorm& p() const { return p_; }
    double scale_a() const { return scale_a_; }
    double scale_b() const { return scale_b_; }

private:
    EmbeddingClaim(HermitianMatrix a, HermitianMatrix b, double q, PNorm p, double sa,
                   double sb)
        : a_(std::move(a)), b_(std::move(b)), q_(q), p_(p), scale_a_(sa), scale_b_(sb) {}

    HermitianMatrix a_;
    HermitianMatrix b_;
    double q_;
    PNorm p_;
    double scale_a_;
    double scale_b_;
};

// The q = 2 row embedding (z, w) -> [[z, w], [0, 0]], reduced and normalized;
// passes the grid check for every p.
EmbeddingClaim construct_rank_one_control(const PNorm& p);

struct IqpResidual {
    double max_residual = 0.0;
    double argmax_t = 0.0;
    double tolerance = 1e-7;
    bool pass = false;
    std::vector<double> ts;
    std::vector<double> residuals;
};

// Residuals |  ||A+tB||_p - ||(1,t)||_q  | over a symmetric grid (default
// [-4, 4], 513 points). early_stop > 0 aborts the scan at the first residual
// above it.
IqpResidual verify_iqp(const EmbeddingClaim& claim, int grid_points = 513,
                       double t_span = 4.0, double early_stop = 0.0);

struct AbProduct {
    bool nonzero = false;
    double max_entry = 0.0;
    int witness_row = 0;
    int witness_col = 0;
};

// ||A B||_max > 1e-10 with the maximizing entry as witness.
AbProduct check_ab_nonzero(const EmbeddingClaim& claim);

struct RegularizedSecond {
    std::vector<double> ladder_x;
    std::vector<double> ladder_value;
    double value = 0.0;   // extrapolated limit, meaningful when !diverged
    bool diverged = false;
};

// d^2/dt^2 ||(A + xI) + tB||_p^p at t = 0 down a decreasing x-ladder with
// extrapolation in powers of x^{p-1}; divergence of the ladder signals a
// perturbation touching the kernel block of A (for 1 < p < 2).
RegularizedSecond second_derivative_regularized(
    const HermitianMatrix& a, const HermitianMatrix& b, double p,
    std::vector<double> x_ladder = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5});

struct PlConvexityResult {
    double circular_mean_sq = 0.0;  // (1/2pi) integral of ||x + e^{i theta} y||_1^2
    double norm_x = 0.0;
    double norm_y = 0.0;
    bool inequality_holds = false;  // mean >= ||x||^2 + 0.5 ||y||^2
    double claimed_q = 0.0;
    double growth = 0.0;            // 1.5^q, to compare against 4
    bool refuted = false;           // fires for q >= 4
};

// Uniform 2-convexity of the trace norm over the circle; under the pencil
// normalization the circular mean forces 1.5^q <= 4, impossible for q >= 4.
PlConvexityResult pl_convexity_check(const ComplexMatrix& x, const ComplexMatrix& y,
                                     double q_claimed, int angles = 256);

struct ExponentStage {
    double q_hat = 0.0;
    double width = 0.0;
    double a2_data = 0.0;    // t^2 coefficient fitted from the curve
    bool q2_consistent = false;
    bool fired = false;      // refutes the claim as stated
};

// Fits the growth exponent of F(t) = ||A+tB||_p^p - 1 on [1e-3, 1e-1],
// separating the analytic t^2 (+ t^4) part from a singular t^q term.
// a2_trace is the trace-formula coefficient when available (NaN otherwise).
ExponentStage run_exponent_stage(const std::vector<double>& ts,
                                 const std::vector<double>& fs, double p,
                                 double claimed_q, double a2_trace);

struct RefutationReport {
    enum class Conclusion {
        VerifiedNumerically,
        RefutedAt,
        OutOfTheoremScope,
        ConsistentOnlyIfQEq2
    };

    double claimed_q = 0.0;
    std::string p_str;

    IqpResidual iqp;

    bool bj_checked = false;
    double bj_trace = 0.0;
    double bj_tolerance = 0.0;
    bool bj_ok = false;

    bool ab_checked = false;
    AbProduct ab;

    bool d2_checked = false;
    double second_deriv = 0.0;
    bool used_regularized = false;
    bool ladder_diverged = false;

    bool exponent_checked = false;
    double fitted_q = 0.0;
    double fitted_q_width = 0.0;
    double fitted_a2 = 0.0;

    std::optional<KernelTestResult> endpoint;
    std::optional<AnalyticityScore> probe;
    std::optional<PlConvexityResult> pl;

    Conclusion conclusion = Conclusion::OutOfTheoremScope;
    std::string refuted_stage;
    std::string summary;

    bool verified() const { return conclusion == Conclusion::VerifiedNumerically; }
};

// Runs the full obstruction pipeline for the claimed (q, p).
RefutationReport refute(const EmbeddingClaim& claim);

}  // namespace snp
