#pragma once

#include <string>
#include <vector>

#include "snp/eig.hpp"
#include "snp/matrix.hpp"

namespace snp {

struct PNorm {
    enum class Tag { One, Finite, Infinity };

    Tag tag = Tag::Finite;
    double p = 2.0;

    static PNorm one() { return PNorm{Tag::One, 1.0}; }
    static PNorm infinity() { return PNorm{Tag::Infinity, 0.0}; }
    static PNorm finite(double p);

    bool is_finite() const { return tag == Tag::Finite; }
    // Numeric exponent for the power sum; throws for the infinity tag.
    double exponent() const;
    std::string str() const;
};

double schatten_norm(const ComplexMatrix& m, const PNorm& p);
double schatten_norm(const HermitianMatrix& m, const PNorm& p);

// Sum of |eigenvalue|^p; the value whose t-derivatives the trace formulas
// compute.
double schatten_pow(const HermitianMatrix& m, double p);

struct DerivativeReport {
    int order = 1;
    double value = 0.0;
    enum class Method { TraceFormula, Moi, FiniteDifference } method = Method::TraceFormula;
    double fd_value = 0.0;
    // |value - fd| / (1 + |value|)
    double residual_vs_fd = 0.0;
};

// d/dt at 0 of ||A+tB||_p^p = p Tr(B |A|^{p-1} sgn(A)); central difference
// cross-check recorded.
DerivativeReport first_derivative(const HermitianMatrix& a, const HermitianMatrix& b,
                                  double p, double kernel_tol = 1e-10);

// d^2/dt^2 at 0 via the second-order trace contraction; inputs are rescaled
// into spectral radius <= 2 and the value restored by homogeneity. For p < 2
// the spectrum of A must stay away from zero.
DerivativeReport second_derivative(const HermitianMatrix& a, const HermitianMatrix& b,
                                   double p, double kernel_tol = 1e-10);

// r-th derivative (r in {2, 3}, r < p) via the discrete operator integral of
// the order-r divided difference.
DerivativeReport rth_derivative(const HermitianMatrix& a, const HermitianMatrix& b,
                                double p, int r, double kernel_tol = 1e-10);

struct BjProbe {
    double grid_min = 0.0;          // min over the polar grid of ||A+zB||_p
    Complex argmin_z{0.0, 0.0};
    double slope_min = 0.0;         // extrapolated directional derivative, worst angle
    double tolerance = 0.0;
    bool attained_at_zero = false;
};

struct BjResult {
    double trace_value = 0.0;
    double tolerance = 0.0;
    bool verdict = false;
    BjProbe probe;
};

// Orthogonality criterion Tr(|A|^{p-1} sgn(A) B) = 0 with a polar-grid probe
// of min_z ||A+zB||_p (64 angles, radii 1e-3/1e-2/1e-1).
BjResult bj_orthogonal(const HermitianMatrix& a, const HermitianMatrix& b, double p,
                       double kernel_tol = 1e-10);

struct TaylorCheck {
    int terms = 0;                     // highest derivative order used
    std::vector<double> ts;            // dyadic ladder
    std::vector<double> residuals;     // |curve - partial sum|
    double fitted_exponent = 0.0;      // +inf when residuals sit at the noise floor
    std::vector<double> coefficients;  // c_1..c_m of the partial sum
};

// Expands ||A+tB||_p^p through order m = ceil(p)-1 (p in (2,4]; requires
// ||A||_p <= 1) and fits the decay exponent of the remainder on a dyadic
// t-ladder.
TaylorCheck taylor_check(const HermitianMatrix& a, const HermitianMatrix& b, double p);

}  // namespace snp
