#include "snp/matrix.hpp"

#include <algorithm>

namespace snp {

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool ComplexMatrix::all_finite() const {
    for (const Complex& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

static void check_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix shape mismatch");
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b);
    ComplexMatrix r(a.rows(), a.cols());
    for (size_t i = 0; i < a.data().size(); ++i) r.data()[i] = a.data()[i] + b.data()[i];
    return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b);
    ComplexMatrix r(a.rows(), a.cols());
    for (size_t i = 0; i < a.data().size(); ++i) r.data()[i] = a.data()[i] - b.data()[i];
    return r;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
    ComplexMatrix r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0.0, 0.0)) continue;
            for (int j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    }
    return r;
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
    ComplexMatrix r(a.rows(), a.cols());
    for (size_t i = 0; i < a.data().size(); ++i) r.data()[i] = s * a.data()[i];
    return r;
}

ComplexMatrix operator*(double s, const ComplexMatrix& a) { return Complex(s, 0.0) * a; }

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix r(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r(j, i) = std::conj(a(i, j));
    return r;
}

Complex trace(const ComplexMatrix& a) {
    if (!a.is_square()) throw std::invalid_argument("trace requires a square matrix");
    Complex t = 0.0;
    for (int i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (const Complex& z : a.data()) m = std::max(m, std::abs(z));
    return m;
}

double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const Complex& z : a.data()) s += std::norm(z);
    return std::sqrt(s);
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("Hermitian matrix must be square");
    if (!m.all_finite()) throw std::invalid_argument("Hermitian matrix entries must be finite");
    const double dev = max_abs(m - adjoint(m));
    if (dev > 1e-12 * (1.0 + max_abs(m)))
        throw std::invalid_argument("matrix is not Hermitian within tolerance");
    mat_ = 0.5 * (m + adjoint(m));
}

HermitianMatrix HermitianMatrix::from_diagonal(const std::vector<double>& d) {
    HermitianMatrix h;
    h.mat_ = ComplexMatrix(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) h.mat_(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return h;
}

HermitianMatrix HermitianMatrix::symmetrize(const ComplexMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("Hermitian matrix must be square");
    HermitianMatrix h;
    h.mat_ = 0.5 * (m + adjoint(m));
    return h;
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix::symmetrize(a.mat() + b.mat());
}

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
    return HermitianMatrix::symmetrize(s * a.mat());
}

HermitianMatrix pencil_at(const HermitianMatrix& a, const HermitianMatrix& b, double t) {
    return HermitianMatrix::symmetrize(a.mat() + t * b.mat());
}

}  // namespace snp
