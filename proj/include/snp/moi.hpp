#pragma once

#include <span>
#include <vector>

#include "snp/divdiff.hpp"
#include "snp/eig.hpp"
#include "snp/matrix.hpp"

namespace snp {

// Symbols are drawn from a closed registry so the admissible node domains
// stay analyzable.
struct MoiSymbol {
    enum class Kind { DdAbsPow, DdAbsPowSign, ConstantOne, ProjectorIndicator };

    Kind kind;
    int arity;  // number of node slots = number of perturbation slots + 1
    FunctionSpec function{FunctionSpec::Kind::AbsPow, 2.0};
    double indicator_lo = 0.0;
    double indicator_hi = 0.0;

    // Divided difference of |x|^p of order `order` (arity = order + 1).
    static MoiSymbol dd_abs_pow(double p, int order);
    // Divided difference of |x|^{p-1} sgn(x).
    static MoiSymbol dd_abs_pow_sign(double p, int order);
    static MoiSymbol constant_one(int arity);
    // Indicator of the first node lying in [lo, hi]; with arity 1 this is the
    // spectral projector onto that window, with arity 2 the left multiplication
    // by it.
    static MoiSymbol projector_indicator(int arity, double lo, double hi);

    double evaluate(std::span<const double> nodes) const;
};

struct MoiResult {
    ComplexMatrix matrix;
    Complex trace;
};

// Discrete multiple operator integral: the weighted sum of
// P_{i0} B_1 P_{i1} ... B_r P_{ir} over eigenprojections of A with weights
// symbol(lambda_{i0}, ..., lambda_{ir}). Eigenvalues within 1e-9 of the
// spectral radius of each other are treated as one spectral point.
MoiResult moi_apply(const SpectralDecomposition& spec_a, const MoiSymbol& symbol,
                    std::span<const HermitianMatrix> bs);

// Tr T^{A,A,A}_{f_p^{[2]}}(B, B) by the O(n^2) contraction over |b_lk|^2.
// Equals half of d^2/dt^2 |A+tB|_p^p at t = 0 where that derivative exists.
double moi_trace_order2(const SpectralDecomposition& spec_a, double p,
                        const HermitianMatrix& b, double kernel_tol = 1e-10);

// Same trace compressed to the `rank` eigendirections of A of largest
// modulus; nondecreasing in rank for p >= 2.
double moi_trace_truncated(const SpectralDecomposition& spec_a, double p,
                           const HermitianMatrix& b, int rank);

}  // namespace snp
