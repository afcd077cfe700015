#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace snp {

using Complex = std::complex<double>;

// Dense complex matrix, row-major storage.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(check_dims(rows, cols)) {}

    static ComplexMatrix identity(int n);
    static ComplexMatrix zero(int rows, int cols) { return ComplexMatrix(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const Complex& operator()(int i, int j) const {
        return data_[static_cast<size_t>(i) * cols_ + j];
    }

    std::vector<Complex>& data() { return data_; }
    const std::vector<Complex>& data() const { return data_; }

    bool all_finite() const;

private:
    static size_t check_dims(int rows, int cols) {
        if (rows <= 0 || cols <= 0)
            throw std::invalid_argument("matrix dimensions must be positive");
        return static_cast<size_t>(rows) * static_cast<size_t>(cols);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, const ComplexMatrix& a);
ComplexMatrix operator*(double s, const ComplexMatrix& a);

ComplexMatrix adjoint(const ComplexMatrix& a);
Complex trace(const ComplexMatrix& a);
double max_abs(const ComplexMatrix& a);
double frobenius_norm(const ComplexMatrix& a);

// Hermitian matrix; the constructor rejects inputs that are not Hermitian to
// working precision and stores the symmetrized part (M + M*)/2.
class HermitianMatrix {
public:
    explicit HermitianMatrix(const ComplexMatrix& m);

    static HermitianMatrix from_diagonal(const std::vector<double>& d);
    // For matrices that are Hermitian by construction; symmetrizes without the
    // deviation check.
    static HermitianMatrix symmetrize(const ComplexMatrix& m);

    int dim() const { return mat_.rows(); }
    const ComplexMatrix& mat() const { return mat_; }
    const Complex& operator()(int i, int j) const { return mat_(i, j); }

private:
    HermitianMatrix() = default;
    ComplexMatrix mat_;
};

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
HermitianMatrix operator*(double s, const HermitianMatrix& a);

// A + tB for real t.
HermitianMatrix pencil_at(const HermitianMatrix& a, const HermitianMatrix& b, double t);

}  // namespace snp
