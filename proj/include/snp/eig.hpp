#pragma once

#include <functional>
#include <vector>

#include "snp/matrix.hpp"

namespace snp {

// Eigenvalues sorted descending; eigenvector i is column i of `eigenvectors`.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;

    int dim() const { return static_cast<int>(eigenvalues.size()); }
    ComplexMatrix reconstruct() const;
};

// Cyclic complex Jacobi rotations; off-diagonal Frobenius threshold
// 1e-13 * ||M||_F, capped at 100 sweeps.
SpectralDecomposition hermitian_eig(const HermitianMatrix& m);

struct SvdResult {
    std::vector<double> singular_values;  // descending, nonnegative
    ComplexMatrix u;                      // rows x rows unitary
    ComplexMatrix v;                      // cols x cols unitary
};

// One-sided Jacobi on the columns.
SvdResult svd(const ComplexMatrix& m);

// U diag(f(d_i)) U*.
HermitianMatrix spectral_map(const SpectralDecomposition& s,
                             const std::function<double(double)>& f);

// Spectral sign with eigenvalues of magnitude <= kernel_tol mapped to zero.
HermitianMatrix polar_sign(const HermitianMatrix& m, double kernel_tol = 1e-10);

// max |eigenvalue|.
double operator_norm_inf(const HermitianMatrix& m);

}  // namespace snp
